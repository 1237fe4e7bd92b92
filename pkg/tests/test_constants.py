from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from effgen.abelianized import GLnElement, exact_inverse
from effgen.constants import (AWitness, ConstantsProfile, WitnessError, B_argmax, certify_A,
                              chain_A_bound, compose_A_bound, compute_B, constants_report,
                              final_inequality, load_base_witnesses, prefix_bound, r_of,
                              radius_R, search_witness_set, witness_search, word_prefix_bound,
                              worst_case_g)
from effgen.endomorphisms import FreeAutomorphism, alphabet, equals, magnus, nielsen_R

S = alphabet(8)


def vec(d):
    v = [0] * 8
    for i, c in d.items():
        v[i - 1] = c
    return v


# oracle examples

def test_B_identity():
    assert compute_B(GLnElement.identity(8)) == 1


def test_worst_case_B():
    g = worst_case_g(8)
    assert compute_B(g) == 150
    assert B_argmax(g) == [(3, 1, 4), (3, 1, 6), (3, 1, 8)]
    assert compute_B(g.inverse()) <= 150


def test_worst_case_basis_table():
    g = worst_case_g(8).matrix
    col = lambda j: [g[i][j - 1] for i in range(8)]
    assert col(1) == vec({1: 8, 7: 4, 5: 2, 3: 1})
    assert col(2) == vec({2: 1})
    assert col(3) == vec({1: 4, 7: 2, 5: 1, 3: 1})
    assert col(4) == vec({4: 1, 2: 1})
    assert col(5) == vec({1: 2, 7: 1, 5: 1})
    assert col(6) == vec({6: 1, 2: 1})
    assert col(7) == vec({1: 1, 7: 1})
    assert col(8) == vec({8: 1, 2: 1})
    # dual basis: g e_i* = sum_k (g^-1)_{ik} e_k*
    gi = exact_inverse(g)
    assert gi[0] == vec({1: 1, 3: -1, 5: -1, 7: -1})
    assert gi[1] == vec({2: 1, 4: -1, 6: -1, 8: -1})
    assert gi[2] == vec({3: 2, 1: -1, 5: 1, 7: 1})
    assert gi[4] == vec({5: 2, 1: -1, 7: 1})
    assert gi[6] == vec({7: 2, 1: -1})
    for i in (3, 5, 7):
        assert gi[i] == vec({i + 1: 1})


def test_prefixes_dominated():
    g = worst_case_g(8)
    full = compute_B(g)
    for seq in (g.factors, g.inverse().factors):
        for k in range(len(seq) + 1):
            assert compute_B(GLnElement.from_factors(8, seq[:k])) <= full


def test_bound_arithmetic():
    assert compose_A_bound(6, 4, 6) == 30
    assert compose_A_bound(7, 1, 0) == 7
    assert chain_A_bound([(6, 150)] * 9) == 6 * 9 * 150 == 8100


def test_radius_examples():
    assert radius_R(ConstantsProfile.toy()) == 320
    R = radius_R(ConstantsProfile.paper())
    assert R == 16 * 451 ** 2 * (8100 * 153 + 1) == 4033201003216
    assert R < 5 * 10 ** 12
    assert r_of(ConstantsProfile.toy()) == 2
    assert final_inequality(ConstantsProfile.toy()) == (3 * 9 + 2) ** 2 - 4 * 320 == -439
    assert final_inequality(ConstantsProfile.paper()) < 0


def test_fractional_C_rounds_up():
    p = ConstantsProfile(2, 1, Fraction(1, 3))
    exact = 16 * (Fraction(1, 3) + 1) ** 2 * (2 + 6 + 1)
    assert radius_R(p) == -(-exact.numerator // exact.denominator)


def test_profile_invariants():
    with pytest.raises(ValueError):
        ConstantsProfile(1, 2, Fraction(1))
    with pytest.raises(ValueError):
        ConstantsProfile(2, 1, Fraction(0))
    rep = constants_report(ConstantsProfile.paper())
    assert rep["final_inequality_negative"] and rep["R"] == 4033201003216


def test_identity_witness():
    idf = FreeAutomorphism.identity(8)
    w = AWitness(idf, {m + 1: (m + 1,) for m in range(S.N)}, 1)
    assert certify_A(w) == 1


def test_wrong_witness_named():
    idf = FreeAutomorphism.identity(8)
    words = {m + 1: (m + 1,) for m in range(S.N)}
    k13 = S.letter((1, 3))
    words[k13] = (S.letter((1, 4)),)
    with pytest.raises(WitnessError) as e:
        certify_A(AWitness(idf, words, 1))
    assert e.value.letter == "K[1,3]"
    words[k13] = (k13, S.letter((1, 4)), -S.letter((1, 4)))
    with pytest.raises(WitnessError) as e:
        certify_A(AWitness(idf, words, 1))
    assert "exceeds" in e.value.reason


def test_witness_search_examples():
    k12 = S.letter((1, 2))
    assert witness_search(FreeAutomorphism.identity(8), k12) == (k12,)
    assert witness_search(magnus((3, 4), 8), k12) == (k12,)
    w = witness_search(nielsen_R(2, 1, 8), S.letter((1, 3)))
    assert w is not None and len(w) <= 4 and word_prefix_bound(w, 8) <= 6


def test_live_witness_set_small_rank():
    w = search_witness_set(nielsen_R(2, 1, 4), {1, 2})
    assert w is not None and certify_A(w) == w.bound <= 6


def test_shipped_witnesses_certify():
    base = load_base_witnesses()
    bounds = {k: certify_A(w) for k, w in base.items()}
    assert bounds["R21"] <= 6 and bounds["R21^-1"] <= 6
    assert max(bounds.values()) <= 7


def test_prefix_bound_formula():
    p = ConstantsProfile.toy()
    assert prefix_bound(p, 3) == 3 * 5 + 2


# properties

@given(st.integers(1, 50), st.integers(1, 50), st.integers(0, 50))
def test_compose_is_chain(a_psi, b_phi, a_phi):
    assert compose_A_bound(a_psi, b_phi, a_phi) == chain_A_bound([(a_phi, 1), (a_psi, b_phi)])


@given(st.lists(st.integers(1, S.N).flatmap(lambda m: st.sampled_from((m, -m))), max_size=8))
def test_certify_rejects_fuzzed(word):
    # replacing one witness by a random word is accepted only when it is right
    idf = FreeAutomorphism.identity(8)
    words = {m + 1: (m + 1,) for m in range(S.N)}
    target = S.letter((2, 5))
    words[target] = tuple(word)
    w = AWitness(idf, words, 10)
    right = equals(S.apply_word(word), S.automorphism(target)) and word_prefix_bound(word, 8) <= 10
    if right:
        assert certify_A(w) == 10
    else:
        with pytest.raises(WitnessError):
            certify_A(w)
