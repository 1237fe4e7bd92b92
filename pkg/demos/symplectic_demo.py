"""Regularize a character of wedge^3 H and check the Dehn twist lifts."""
import random

from effgen.symplectic import random_sp_character, sp_regularize, verify_lifts, wedge_name

rng = random.Random(11)
chi = random_sp_character(8, rng, bound=5)
reg = sp_regularize(chi)
print(f"M = {reg.M}, factor counts {reg.g.counts()}")
for z, v in zip(reg.Z, reg.values()):
    print(f"  value on {wedge_name(z)}: {v}")
print("lift checks at n = 8:", verify_lifts(8)["summary"])
