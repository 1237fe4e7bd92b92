"""Seeded sample generators shared by the tests, the CLI and the demos."""
from __future__ import annotations

import random
from .abelianized import Character, M_of, random_character
from .endomorphisms import alphabet
from .connect import CayleyPath
from .nonneg import default_Z


def regular_character(n: int, rng: random.Random, bound: int = 5) -> Character:
    """Random character with chi(z) != 0 on the default Z."""
    Z = default_Z(n)
    while True:
        chi = random_character(n, rng, bound)
        if all(chi.on_letter(z) for z in Z):
            return chi


def toy_regular_character(n: int, rng: random.Random, bound: int = 5) -> Character:
    """Random character with |chi(z)| = M on Z, i.e. regular with C = 1 for phi = id."""
    chi = random_character(n, rng, bound)
    M = M_of(chi)
    for z in default_Z(n):
        chi.coeffs[abs(z) - 1] = M * rng.choice((1, -1))
    return chi


def random_sword(n: int, rng: random.Random, length: int) -> tuple[int, ...]:
    N = alphabet(n).N
    return tuple(rng.choice((1, -1)) * rng.randint(1, N) for _ in range(length))


def nonneg_case(n: int, rng: random.Random, max_len: int = 6, toy: bool = False):
    """(chi, word) with chi regular for Z and chi(word) >= 0."""
    chi = toy_regular_character(n, rng) if toy else regular_character(n, rng)
    word = random_sword(n, rng, rng.randint(0, max_len))
    if chi.on_word(word) < 0:
        word = tuple(-a for a in reversed(word))
    return chi, word


def ia_excursion(n: int, R: int, rng: random.Random, height: int = 3, noise: int = 4) -> CayleyPath:
    """A path leaving B_inf(R) along K_12 after walking K_34, K_56, K_78 out to R.

    Noise letters (outside Z, commuting with K_12) are sprinkled over the K_12
    climb and descent; both endpoints stay inside the ball.  Noise that does
    not commute with K_12 drives the chain form through some z with
    |chi(z)| much smaller than M, outside what C = 1 covers.
    """
    S = alphabet(n)
    z12, z34, z56, z78 = default_Z(n)
    others = [m + 1 for m in range(S.N)
              if m + 1 not in (z12, z34, z56, z78) and S.commutes(m + 1, z12)]
    climb = [z12] * (R + height)
    down = [-z12] * (R + height)
    for seq in (climb, down):
        for _ in range(noise):
            pos = rng.randint(R // 2, len(seq))
            seq.insert(pos, rng.choice(others) * rng.choice((1, -1)))
    out = [z34] * R + [z56] * R + [z78] * R
    back = [-z78] * R + [-z56] * R + [-z34] * R
    return CayleyPath(tuple(out + climb + down + back))


def heisenberg_excursion(R: int, rng: random.Random, height: int = 5, wiggle: int = 3) -> CayleyPath:
    """x^(R+h) y^k x^-(R+h) y^-k: a reduced excursion above the ball in x."""
    H = R + height
    top = [rng.choice((2, -2))] * rng.randint(1, wiggle)
    ys = len(top) if top[0] > 0 else -len(top)
    steps = [1] * H + top + [-1] * H + [(-2 if ys > 0 else 2)] * abs(ys)
    return CayleyPath(tuple(steps))


def commuting_letters(n: int) -> list[int]:
    """Greedy set of pairwise commuting Magnus letters, in alphabet order."""
    S = alphabet(n)
    out: list[int] = []
    for m in range(1, S.N + 1):
        if all(S.commutes(m, c) for c in out):
            out.append(m)
    return out


def commuting_path(n: int, rng: random.Random, size: int | None = None) -> CayleyPath:
    """A closed path over pairwise commuting letters: out in one order, back in
    another, so the middle vertices have support ``size``."""
    pool = commuting_letters(n)
    size = len(pool) if size is None else min(size, len(pool))
    out = [a * rng.choice((1, -1)) for a in rng.sample(pool, size)]
    back = [-a for a in rng.sample(out, len(out))]
    return CayleyPath(tuple(out + back))
