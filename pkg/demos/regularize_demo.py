"""Regularize a random character of IA_n and show the resulting values on Z."""
import random

from effgen.abelianized import M_of, act_character, random_character, regularize

rng = random.Random(7)
chi = random_character(8, rng, bound=10)
reg = regularize(chi)
gchi = act_character(reg.g, chi)
print(f"M(chi) = {M_of(chi)}")
print(f"regularizing element uses {len(reg.certificate)} recorded steps")
for z in reg.Z:
    print(f"  (g chi)(K{z}) = {gchi.on_letter(z)}")
print("all values on Z at least M/3:", all(abs(gchi.on_letter(z)) * 3 >= M_of(chi) for z in reg.Z))
