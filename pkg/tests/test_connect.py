import random

import pytest
from hypothesis import given, settings, strategies as st

from effgen.connect import (BoxSchreierSet, BudgetExhausted, CayleyPath, FiniteSchreierSet,
                            HeisenbergOracle, IAOracle, KGenerator, NoAdmissibleLetter,
                            admissible_letter, case1_expansion, count_K_generators,
                            enumerate_K_generators, generators_word, nielsen_normalize,
                            oracle_split, path_stats, push_path, replay_push, rewrite_in_SK,
                            support_refine)
from effgen.constants import ConstantsProfile, radius_R
from effgen.endomorphisms import alphabet, equals
from effgen.samples import commuting_path, heisenberg_excursion, ia_excursion

H = HeisenbergOracle()
HSPLIT = oracle_split(H)
IA8 = IAOracle(8)


def reduced_words(alpha, max_len):
    def rec(w):
        yield w
        if len(w) < max_len:
            for a in alpha:
                if not w or w[-1] != -a:
                    yield from rec(w + (a,))
    return rec(())


# ---------------------------------------------------------------- pushing

def test_push_inside_ball_unchanged():
    p = CayleyPath((1, 2, -1, -2, 1))
    assert push_path(p, 5, H).steps == p.steps
    assert support_refine(p, 5, 2, H).steps == p.steps


def test_push_rejects_outside_endpoints():
    with pytest.raises(ValueError):
        push_path(CayleyPath((1,) * 6), 5, H)


@pytest.mark.parametrize("seed", range(10))
def test_heisenberg_push(seed):
    R = 20
    rng = random.Random(seed)
    path = heisenberg_excursion(R, rng, height=rng.randint(1, 8))
    tr = []
    out = push_path(path, R, H, transcript=tr)
    assert max(path_stats(H, out).linf) <= R
    assert H.evaluate(out.word()) == H.evaluate(path.word())
    assert tr and all(rec["metric_after"] < rec["metric_before"] or rec["metric_after"][1] == 0
                      for rec in tr)
    assert replay_push(path, R, H, tr).steps == out.steps


def test_heisenberg_push_toy_radius():
    R = radius_R(ConstantsProfile.toy())
    path = heisenberg_excursion(R, random.Random(1), height=10)
    out = push_path(path, R, H)
    assert max(path_stats(H, out).linf) <= R
    assert H.evaluate(out.word()) == H.evaluate(path.word())


def test_push_budget():
    path = heisenberg_excursion(20, random.Random(3), height=20)
    with pytest.raises(BudgetExhausted):
        push_path(path, 20, H, max_steps=1)


@pytest.mark.parametrize("seed", range(5))
def test_ia_push(seed):
    R = radius_R(ConstantsProfile.toy())
    path = ia_excursion(8, R, random.Random(seed))
    tr = []
    out = push_path(path, R, IA8, transcript=tr)
    st = path_stats(IA8, out)
    assert max(st.linf) <= R and len(tr) > 0
    assert out.word()[:R] == path.word()[:R]
    assert IA8.theta(out.word()) == IA8.theta(path.word())
    for rec in tr:
        assert rec["metric_after"][1] == 0 or rec["metric_after"] < rec["metric_before"]


def test_ia_push_short_path_exact():
    # a short path whose push can be checked by composing automorphisms
    R = 2
    S = alphabet(8)
    z12, z34, z56, z78 = (S.letter(p) for p in ((1, 2), (3, 4), (5, 6), (7, 8)))
    out_ = (z34, z34, z56, z56, z78, z78)
    path = CayleyPath(out_ + (z12,) * 3 + (-z12,) * 3 + tuple(-a for a in reversed(out_)))
    ia = IAOracle(8, budget=None)
    out = push_path(path, R, ia, r=1)
    assert max(path_stats(ia, out).linf) <= R
    assert equals(S.apply_word(out.word()), S.apply_word(path.word()))


# -------------------------------------------------------- support refinement

@pytest.mark.parametrize("seed", range(5))
def test_support_refine_commuting(seed):
    rng = random.Random(seed)
    path = commuting_path(8, rng)
    assert max(path_stats(IA8, path).supp) == 7
    tr = []
    out = support_refine(path, 5, 3, IA8, transcript=tr)
    st = path_stats(IA8, out)
    assert max(st.supp) <= 3 and max(st.linf) <= 5
    assert equals(IA8.evaluate(out.word()), IA8.evaluate(path.word()))


def test_support_refine_below_threshold_reports():
    rng = random.Random(0)
    S = alphabet(8)
    letters = rng.sample(range(1, S.N + 1), 20)
    path = CayleyPath(tuple(letters) + tuple(-a for a in reversed(letters)))
    with pytest.raises(NoAdmissibleLetter):
        support_refine(path, 5, 10, IA8)


def test_admissible_counting_n18():
    # every letter fails the index criterion with at most 1148 letters, and
    # 2 * 1148 + 2 < 8 n^2 + 1, so a vertex of support > 8 n^2 always has one
    n = 18
    S = alphabet(n)
    assert S.N == 2754 and 8 * n * n == 2592
    worst = 0
    for idx in ((1, 2), (1, 2, 3)):
        y = S.letter(idx)
        bad = sum(1 for m in range(1, S.N + 1) if not S.lemma_commutes(m, y))
        worst = max(worst, bad)
    assert worst == 1148 and 2 * worst + 2 < 8 * n * n + 1


def test_admissible_letter_exists_at_threshold():
    n = 18
    S = alphabet(n)
    oracle = IAOracle(n)
    rng = random.Random(5)
    for _ in range(20):
        g = [0] * S.N
        for m in rng.sample(range(S.N), 8 * n * n + 1):
            g[m] = rng.choice((1, -1)) * rng.randint(1, 3)
        y1, y2 = (rng.choice((1, -1)) * rng.randint(1, S.N) for _ in range(2))
        u = admissible_letter(oracle, g, y1, y2, commutes=S.lemma_commutes)
        assert u is not None and abs(u) not in (abs(y1), abs(y2))
        assert S.lemma_commutes(u, y1) and S.lemma_commutes(u, y2)
        assert g[abs(u) - 1] * (1 if u > 0 else -1) < 0


def test_n8_support_example_is_vacuous():
    assert alphabet(8).N < 8 * 8 * 8 + 1


# ------------------------------------------------------------ Schreier

def test_count_at_zero():
    split = oracle_split(IA8)
    F = BoxSchreierSet(224, 0)
    assert count_K_generators(F, split) == 224 * 223 // 2 == 24976
    gens = list(enumerate_K_generators(F, split))
    assert len(gens) == 24976 and len(set(gens)) == 24976
    assert all(g.kind == "a" for g in gens)


def test_S_is_S1_for_IA():
    split = oracle_split(IA8)
    assert split.S1 == list(range(1, 225)) and not split.S2 and not split.S3


def test_nielsen_normalize_split():
    sp = nielsen_normalize([[1, 0], [0, 1], [1, 0], [0, 0]])
    assert sp.S1 == [1, 2] and sp.S2 == {3: 1} and sp.S3 == [4] and not sp.log
    sp = nielsen_normalize([[2, 1], [1, 1]])
    assert sp.log and len(sp.S1) == 2
    with pytest.raises(ValueError):
        nielsen_normalize([[2, 0], [0, 1]])


def test_box_count_matches_enumeration():
    S3 = IAOracle(3)
    split = oracle_split(S3)
    for radius, supp in ((1, None), (1, 2), (2, 1)):
        F = BoxSchreierSet(S3.N, radius, supp)
        gens = list(enumerate_K_generators(F, split))
        assert len(gens) == count_K_generators(F, split) == len(set(gens))
        for g in gens:
            assert not any(S3.theta(g.word(split)))
            assert F.contains(g.exps)
            if g.kind == "a":
                i = split.S1.index(g.core[0])
                assert not any(g.exps[:i])


def test_schreier_property():
    assert BoxSchreierSet(3, 2, 2).is_schreier()
    assert not FiniteSchreierSet(2, [(0, 0), (2, 0)]).is_schreier()


def test_worked_expansion():
    # [s1^2 s2^-1, s3]^v = [s1,s3]^{s1 s2^-1 v} [s1,s3]^{s2^-1 v} ([s2,s3]^{s2^-1 v})^-1
    oracle = IAOracle(3)
    split = oracle_split(oracle)
    N = oracle.N
    v = (0, 0, 0, 1) + (0,) * (N - 4)
    exps = (2, -1) + v[2:]
    out = case1_expansion(exps, 2, split)
    s1, s2, s3 = 1, 2, 3
    tail = lambda a, b: (a, b) + v[2:]
    assert out == [(KGenerator("a", (s1, s3), tail(1, -1)), 1),
                   (KGenerator("a", (s1, s3), tail(0, -1)), 1),
                   (KGenerator("a", (s2, s3), tail(0, -1)), -1)]
    u = (s1, s1, -s2)
    u_inv = tuple(-a for a in reversed(u))
    lhs = (-4,) + u_inv + (-s3,) + u + (s3,) + (4,)
    S = alphabet(3)
    assert equals(S.apply_word(generators_word(out, split)), S.apply_word(lhs))


def test_rewrite_commutator():
    split = oracle_split(IA8)
    w = (-1, -2, 1, 2)
    gens = rewrite_in_SK(w, BoxSchreierSet(224, 1), IA8, split)
    assert gens == [(KGenerator("a", (1, 2), (0,) * 224), 1)]


def test_rewrite_rejects_theta_nonzero():
    with pytest.raises(ValueError):
        rewrite_in_SK((1,), BoxSchreierSet(224, 1), IA8)


def test_heisenberg_central_exhaustive():
    F = BoxSchreierSet(2, 5)
    count = 0
    for w in reduced_words((1, -1, 2, -2), 10):
        if any(H.theta(w)):
            continue
        gens = rewrite_in_SK(w, F, H, HSPLIT)
        assert H.evaluate(generators_word(gens, HSPLIT)) == H.evaluate(w)
        count += 1
    assert count == 2601


def test_heisenberg_c_squared():
    c2 = (-1, -2, 1, 2) * 2
    gens = rewrite_in_SK(c2, BoxSchreierSet(2, 2), H, HSPLIT)
    assert H.evaluate(generators_word(gens, HSPLIT)) == (0, 0, 2)


# properties

sword = st.lists(st.integers(1, 224).flatmap(lambda m: st.sampled_from((m, -m))), min_size=1, max_size=2)
letter = st.integers(1, 224).flatmap(lambda m: st.sampled_from((m, -m)))


@settings(max_examples=40)
@given(sword, letter)
def test_rewrite_IA_exact(u, b):
    # k = u b u^-1 b^-1 of length <= 6, theta(k) = 0
    S = alphabet(8)
    k = tuple(u) + (b,) + tuple(-a for a in reversed(u)) + (-b,)
    gens = rewrite_in_SK(k, BoxSchreierSet(224, 3), IA8)
    assert equals(S.apply_word(generators_word(gens, oracle_split(IA8))), S.apply_word(k))


@settings(max_examples=30)
@given(st.lists(st.sampled_from((1, -1, 2, -2)), max_size=14))
def test_rewrite_heisenberg_random(w):
    w = tuple(w)
    a, b = H.theta(w)
    w = w + (-1,) * a if a > 0 else w + (1,) * -a
    w = w + (-2,) * b if b > 0 else w + (2,) * -b
    gens = rewrite_in_SK(w, BoxSchreierSet(2, 30), H, HSPLIT)
    assert H.evaluate(generators_word(gens, HSPLIT)) == H.evaluate(w)
