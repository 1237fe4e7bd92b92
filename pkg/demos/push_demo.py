"""Build non-negative forms and push an excursion back inside a ball."""
import random

from effgen.connect import HeisenbergOracle, IAOracle, path_stats, push_path
from effgen.constants import ConstantsProfile, radius_R
from effgen.nonneg import bounded_nonneg_form
from effgen.samples import heisenberg_excursion, ia_excursion, nonneg_case

rng = random.Random(3)
chi, word = nonneg_case(8, rng, toy=True)
form = bounded_nonneg_form(word, chi, ConstantsProfile.toy())
print(f"word of length {len(word)} -> non-negative form of length {len(form.word)}")
print(f"  smallest prefix value {form.prefix_chi_min}, largest prefix l1 {form.prefix_l1_max} <= {form.bound}")

R = 20
path = heisenberg_excursion(R, rng, height=4)
oracle = HeisenbergOracle()
out = push_path(path, R, oracle)
print(f"Heisenberg: max l_inf {max(path_stats(oracle, path).linf)} -> {max(path_stats(oracle, out).linf)} (R = {R})")

R = radius_R(ConstantsProfile.toy())
oracle = IAOracle(8)
path = ia_excursion(8, R, rng)
out = push_path(path, R, oracle)
print(f"IA_8: max l_inf {max(path_stats(oracle, path).linf)} -> {max(path_stats(oracle, out).linf)} (R = {R})")
