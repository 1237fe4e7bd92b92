import random

import pytest
from hypothesis import given, strategies as st

from effgen.endomorphisms import (FreeAutomorphism, WordLengthExceeded, alphabet, apply_word,
                                  commutator, compose, equals, is_IA, magnus, nielsen_L,
                                  nielsen_R, permutation_lift, relation_clause, transposition,
                                  verify_relations)
from effgen.free_words import Word

N8 = alphabet(8)


def img(f, i):
    return str(f.image(i))


# oracle examples

def test_magnus_images():
    assert img(magnus((1, 2), 8), 1) == "x2^-1 x1 x2"
    assert img(magnus((1, 2, 3), 8), 1) == "x1 x2^-1 x3^-1 x2 x3"
    assert img(magnus((1, 2), 8), 3) == "x3"
    assert img(magnus((1, 2), 8).inverse(), 1) == "x2 x1 x2^-1"


def test_k_ikj_is_inverse():
    assert equals(magnus((1, 3, 2), 4), magnus((1, 2, 3), 4).inverse())
    S = alphabet(4)
    assert S.letter((1, 3, 2)) == -S.letter((1, 2, 3))


def test_nielsen_and_transposition():
    assert img(nielsen_R(2, 1, 8), 2) == "x2 x1"
    assert img(nielsen_L(2, 1, 8), 2) == "x1 x2"
    t = transposition(1, 2, 8)
    assert img(t, 1) == "x2" and img(t, 2) == "x1" and img(t, 3) == "x3"
    E12 = [[1 if r == c else 0 for c in range(8)] for r in range(8)]
    E12[0][1] = 1     # e_2 -> e_2 + e_1
    assert nielsen_R(2, 1, 8).abelianization() == E12
    assert nielsen_L(2, 1, 8).abelianization() == E12


def test_compose_examples():
    k12, k34 = magnus((1, 2), 8), magnus((3, 4), 8)
    assert equals(compose(k12, k12.inverse()), FreeAutomorphism.identity(8))
    assert equals(compose(k12, k34), compose(k34, k12))
    a, b = magnus((1, 2, 3), 3), magnus((1, 2), 3)
    assert not equals(compose(a, b), compose(b, a))


def test_compose_order():
    f, g = nielsen_R(2, 1, 3), transposition(1, 2, 3)
    h = compose(f, g)
    # (f o g)(x1) = f(x2) = x2 x1
    assert img(h, 1) == "x2 x1"


def test_equals_and_is_IA():
    idf = FreeAutomorphism.identity(8)
    assert equals(idf, idf)
    assert not equals(magnus((1, 2), 8), magnus((1, 3), 8))
    assert equals(commutator(magnus((1, 2), 8), magnus((3, 4), 8)), idf)
    assert is_IA(magnus((1, 2), 8)) and is_IA(magnus((1, 2, 3), 8))
    assert not is_IA(nielsen_R(2, 1, 8))


def test_apply_word_examples():
    idf = FreeAutomorphism.identity(8)
    assert equals(apply_word("", 8), idf)
    assert equals(apply_word("K[1,2] K[1,2]^-1", 8), idf)
    assert equals(apply_word("K[1,2] K[3,4]", 8), apply_word("K[3,4] K[1,2]", 8))


def test_errors():
    with pytest.raises(ValueError):
        magnus((1, 1), 8)
    with pytest.raises(ValueError):
        magnus((1, 2, 9), 8)
    with pytest.raises(ValueError):
        nielsen_R(2, 2, 8)
    with pytest.raises(ValueError):
        N8.parse("K[1,9]")
    with pytest.raises(ValueError):
        compose(magnus((1, 2), 3), magnus((1, 2), 4))


def test_word_length_budget():
    w = N8.parse(" ".join(["K[1,2,3]"] * 4 + ["K[2,1,3]"] * 4))
    with pytest.raises(WordLengthExceeded):
        N8.apply_word(w, budget=10)


def test_alphabet_order():
    assert N8.N == 224
    assert N8.indices[:3] == [(1, 2), (1, 3), (1, 4)]
    assert N8.indices[56] == (1, 2, 3)
    assert N8.name(-N8.letter((2, 1, 3))) == "K[2,1,3]^-1"


def test_json_round_trip():
    f = compose(nielsen_R(2, 1, 4), magnus((3, 1, 2), 4))
    g = FreeAutomorphism.from_json(f.to_json())
    assert equals(f, g) and g.check_inverse()


def test_relation_clauses():
    assert relation_clause((1, 2), (3, 4)) == "a"
    assert relation_clause((1, 2), (1, 3)) is None
    assert relation_clause((3, 4, 5), (1, 2)) == "b"
    assert relation_clause((1, 2, 3), (4, 5, 6)) is None


def test_relations_exhaustive_n8():
    rep = verify_relations(8)
    assert rep["ok"] and not rep["failures"]
    assert rep["pairs"]["a"] > 0 and rep["pairs"]["b"] > 0


def test_lemma_criterion_is_sufficient():
    S = alphabet(6)
    for a in range(1, S.N + 1):
        for b in range(a, S.N + 1):
            if S.lemma_commutes(a, b):
                assert S.commutes(a, b)


def test_generators_certified():
    for m in range(1, N8.N + 1):
        f = N8.automorphism(m)
        assert f.check_inverse() and is_IA(f)
    for i in range(1, 9):
        for j in range(1, 9):
            if i != j:
                for f in (nielsen_R(j, i, 8), nielsen_L(j, i, 8), transposition(i, j, 8)):
                    assert f.check_inverse() and not is_IA(f)


# properties

sword = st.lists(st.integers(1, N8.N).flatmap(lambda m: st.sampled_from((m, -m))), max_size=5)


@given(sword, sword)
def test_apply_word_is_homomorphism(u, v):
    lhs = N8.apply_word(u + v)
    rhs = compose(N8.apply_word(u), N8.apply_word(v))
    assert equals(lhs, rhs)
    inv = N8.apply_word(tuple(-a for a in reversed(u)))
    assert equals(compose(N8.apply_word(u), inv), FreeAutomorphism.identity(8))


@given(st.permutations(list(range(1, 6))))
def test_permutation_lift(sigma):
    f = permutation_lift(sigma, 5)
    assert f.check_inverse()
    assert [f.image(k).letters for k in range(1, 6)] == [(s,) for s in sigma]


@given(sword)
def test_composed_inverse_certified(u):
    f = N8.apply_word(u)
    assert f.check_inverse() and is_IA(f)
    assert equals(FreeAutomorphism.from_words([f.image(i) for i in range(1, 9)]), f)


def test_random_words_parse_round_trip():
    rng = random.Random(3)
    for _ in range(50):
        w = tuple(rng.choice((1, -1)) * rng.randint(1, N8.N) for _ in range(6))
        assert N8.parse(N8.format(w)) == w
    assert isinstance(Word.parse(8, "x1"), Word)
