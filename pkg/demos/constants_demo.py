"""Certify the shipped Nielsen witnesses and recompute the radius R."""
from fractions import Fraction

from effgen import constants as cs

base = cs.load_base_witnesses()
res = cs.certify_nielsen_witnesses(base, 8)
glob = cs.certified_global_A(res["bounds"], 8)
print("certified base bounds:", {k: cs.certify_A(w) for k, w in base.items()})
print(f"B of the worst-case g: {glob['B']}")
print(f"global A: {glob['A_global']} (exact chain {glob['A_worst_case_exact_chain']})")
p = cs.ConstantsProfile(glob["A_global"], glob["B"], Fraction(3), "certified")
rep = cs.constants_report(p)
print(f"R = {rep['R']}, final inequality negative: {rep['final_inequality_negative']}")
