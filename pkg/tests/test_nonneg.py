import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from effgen.abelianized import Character
from effgen.constants import ConstantsProfile
from effgen.endomorphisms import alphabet
from effgen.nonneg import (ChainSelection, NotRegular, bound_formula, bounded_nonneg_form,
                           chain_select, default_Z, first_maximal_letter, is_minimal,
                           minimal_exponents, nonneg_form_cc, prefix_l1_values, prefix_values,
                           same_automorphism, verify_cc_schema)
from effgen.samples import nonneg_case, toy_regular_character

S = alphabet(8)
Z = default_Z(8)
K12, K34, K56, K78 = Z


def always(a, b):
    return True


# oracle examples

def test_chain_select_examples():
    assert chain_select(S.parse("K[5,6,7]"), Z, S.commutes) == [K12]
    assert chain_select(S.parse("K[1,2]"), Z, S.commutes) == [K12]
    z = chain_select(S.parse("K[1,3,4] K[5,6]"), Z, S.commutes)
    assert z[0] not in (K12, K34) and S.commutes(z[0], S.letter((1, 3, 4)))
    assert S.commutes(z[1], S.letter((5, 6))) and S.commutes(z[1], z[0])


def test_single_nonneg_letter():
    chi = Character.from_dict(8, {(1, 1, 2): 1, (3, 3, 4): 1, (5, 5, 6): 1, (7, 7, 8): 1, (2, 3, 4): 2})
    s = S.letter((2, 3, 4))
    out, sel = nonneg_form_cc((s,), chi, Z)
    assert out == (s,) and sel.exponents == [0]


def test_two_letter_example():
    chi = {10: Fraction(-1), 11: Fraction(1), 1: Fraction(1)}
    f = lambda a: chi[abs(a)] * (1 if a > 0 else -1)
    out, sel = nonneg_form_cc((10, 11), f, (1,), always)
    assert sel.exponents == [1, 1]
    assert out == (1, 10, 1, -1, 11, -1)
    assert prefix_values(out, f)[1:] == [1, 0, 1, 0, 1, 0]


def test_empty_word():
    chi = toy_regular_character(8, random.Random(0))
    assert nonneg_form_cc((), chi, Z)[0] == ()


def test_errors():
    chi = toy_regular_character(8, random.Random(1))
    neg = next(a for a in (1, -1) if chi.on_letter(a) < 0)
    with pytest.raises(ValueError):
        nonneg_form_cc((neg,), chi, Z)
    flat = Character.from_dict(8, {(2, 3, 4): 1})
    with pytest.raises(NotRegular):
        nonneg_form_cc((), flat, Z)
    with pytest.raises(ValueError):
        bounded_nonneg_form((neg,), chi, ConstantsProfile.toy())


def test_sign_follows_chi_z():
    f = {1: Fraction(-2), 5: Fraction(-3)}
    g = lambda a: f[abs(a)] * (1 if a > 0 else -1)
    assert minimal_exponents((5,), (1,), g) == [-2]


def test_toy_bound_r2():
    assert bound_formula(1, 1, 1, 2) == 14
    rng = random.Random(4)
    done = 0
    while done < 20:
        chi = toy_regular_character(8, rng)
        word = tuple(rng.choice((1, -1)) * rng.randint(1, S.N) for _ in range(2))
        if chi.on_word(word) < 0:
            continue
        res = bounded_nonneg_form(word, chi, ConstantsProfile.toy())
        assert res.bound == 14 and res.prefix_l1_max <= 14
        assert same_automorphism(word, res.word, 8)
        done += 1


def test_first_maximal_letter():
    chi = Character.from_dict(8, {(1, 1, 2): -3, (1, 1, 3): 3})
    # K_12 carries -3 so its inverse reaches M first
    assert first_maximal_letter(chi) == -K12


def test_cc_schema_symbolic():
    rng = random.Random(9)
    for _ in range(20):
        chi, word = nonneg_case(8, rng, max_len=30)
        out, sel = nonneg_form_cc(word, chi, Z)
        assert verify_cc_schema(word, sel, S.commutes)
        assert min(prefix_values(out, chi)) >= 0
    bad = ChainSelection([K12], [1])
    assert not verify_cc_schema((S.letter((2, 1)),), bad, S.commutes)


# properties

seeds = st.integers(0, 10 ** 9)


@given(seeds)
def test_nonneg_form_properties(seed):
    chi, word = nonneg_case(8, random.Random(seed))
    out, sel = nonneg_form_cc(word, chi, Z)
    assert min(prefix_values(out, chi)) >= 0
    assert same_automorphism(word, out, 8)
    assert is_minimal(word, sel, chi)


@given(seeds)
def test_bounded_form_properties(seed):
    chi, word = nonneg_case(8, random.Random(seed), toy=True)
    res = bounded_nonneg_form(word, chi, ConstantsProfile.toy())
    assert res.prefix_chi_min >= 0
    assert max(prefix_l1_values(res.word, 8)) <= bound_formula(1, 1, 1, len(word))
    assert same_automorphism(word, res.word, 8)
