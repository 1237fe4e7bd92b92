"""The abelianization IA_n^ab = V* (x) (V ^ V) = Z^N and characters on it.

Basis elements e_i* (x) (e_j ^ e_k) with j < k are indexed by the position
of the corresponding Magnus generator in the alphabet order: K_ijk (j < k)
sits on (i, j, k), and K_ij sits on (i, min(i, j), max(i, j)) with sign
+1 when i < j and -1 when i > j.  ``theta`` of a Magnus s-word is therefore
a signed sum of unit vectors.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterable, Sequence

from .endomorphisms import MagnusAlphabet, alphabet

Matrix = list[list[int]]


# ------------------------------------------------------------------ basis

class FormanekBasis:
    def __init__(self, n: int):
        self.S: MagnusAlphabet = alphabet(n)
        self.n = n
        self.triples: list[tuple[int, int, int]] = []
        self.signs: list[int] = []
        for idx in self.S.indices:
            if len(idx) == 2:
                i, j = idx
                self.triples.append((i, min(i, j), max(i, j)))
                self.signs.append(1 if i < j else -1)
            else:
                self.triples.append(idx)
                self.signs.append(1)
        self.position = {t: m for m, t in enumerate(self.triples)}

    @property
    def N(self) -> int:
        return len(self.triples)

    def locate(self, i: int, j: int, k: int) -> tuple[int, int]:
        """(position, sign) of e_i* (x) (e_j ^ e_k); sign 0 when j == k."""
        if j == k:
            return -1, 0
        if j < k:
            return self.position[(i, j, k)], 1
        return self.position[(i, k, j)], -1


@lru_cache(maxsize=None)
def basis(n: int) -> FormanekBasis:
    return FormanekBasis(n)


def theta_letter(a: int, n: int) -> list[int]:
    """Unit vector (up to sign) for a signed Magnus letter code."""
    B = basis(n)
    v = [0] * B.N
    m = abs(a) - 1
    v[m] = B.signs[m] * (1 if a > 0 else -1)
    return v


def theta_word(word: Iterable[int], n: int) -> list[int]:
    B = basis(n)
    v = [0] * B.N
    for a in word:
        m = abs(a) - 1
        v[m] += B.signs[m] * (1 if a > 0 else -1)
    return v


def generator_coords(v: Sequence[int], n: int) -> list[int]:
    """Exponents (a_1..a_N) with v = sum a_m theta(s_m)."""
    B = basis(n)
    return [s * x for s, x in zip(B.signs, v)]


def norms(v: Sequence[int]) -> tuple[int, int, int, int]:
    """(l1, l2 squared, l-infinity, support size)."""
    l1 = l2 = linf = supp = 0
    for x in v:
        if x:
            ax = abs(x)
            l1 += ax
            l2 += ax * ax
            supp += 1
            if ax > linf:
                linf = ax
    return l1, l2, linf, supp


# ------------------------------------------------------------- characters

@dataclass
class Character:
    """Rational functional on IA_n^ab, stored by basis position."""
    n: int
    coeffs: list[Fraction]

    @classmethod
    def zero(cls, n: int) -> "Character":
        return cls(n, [Fraction(0)] * basis(n).N)

    @classmethod
    def from_dict(cls, n: int, values: dict[tuple[int, int, int], object]) -> "Character":
        chi = cls.zero(n)
        B = basis(n)
        for (i, j, k), val in values.items():
            m, s = B.locate(i, j, k)
            if s == 0:
                raise ValueError("c_ijj is identically zero")
            chi.coeffs[m] = s * Fraction(val)
        return chi

    def c(self, i: int, j: int, k: int) -> Fraction:
        m, s = basis(self.n).locate(i, j, k)
        return Fraction(0) if s == 0 else s * self.coeffs[m]

    def on_vector(self, v: Sequence[int]) -> Fraction:
        return sum((c * x for c, x in zip(self.coeffs, v) if x), Fraction(0))

    def on_letter(self, a: int) -> Fraction:
        m = abs(a) - 1
        val = basis(self.n).signs[m] * self.coeffs[m]
        return val if a > 0 else -val

    def on_word(self, word: Iterable[int]) -> Fraction:
        return sum((self.on_letter(a) for a in word), Fraction(0))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def to_json(self) -> dict:
        B = basis(self.n)
        return {"n": self.n, "coeffs": [
            {"i": t[0], "j": t[1], "k": t[2], "value": str(c)}
            for t, c in zip(B.triples, self.coeffs) if c]}

    @classmethod
    def from_json(cls, d: dict | str) -> "Character":
        if isinstance(d, str):
            d = json.loads(d)
        return cls.from_dict(d["n"], {(e["i"], e["j"], e["k"]): Fraction(e["value"])
                                      for e in d["coeffs"]})


def M_of(chi: Character) -> Fraction:
    """max |chi(s)| over the Magnus generators."""
    if chi.is_zero():
        raise ValueError("M is undefined for the zero character")
    return max(abs(c) for c in chi.coeffs)


# ----------------------------------------------------------------- GL_n(Z)

def identity_matrix(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    n, m, p = len(a), len(b), len(b[0])
    return [[sum(a[i][k] * b[k][j] for k in range(m) if a[i][k]) for j in range(p)]
            for i in range(n)]


def elementary(n: int, i: int, j: int, e: int = 1) -> Matrix:
    """E_ij^e: e_j -> e_j + e e_i."""
    m = identity_matrix(n)
    m[i - 1][j - 1] = e
    return m


def permutation_matrix(sigma: Sequence[int]) -> Matrix:
    """F_sigma: e_k -> e_sigma(k)."""
    n = len(sigma)
    m = [[0] * n for _ in range(n)]
    for k, s in enumerate(sigma):
        m[s - 1][k] = 1
    return m


def exact_inverse(a: Matrix) -> Matrix:
    """Integer inverse of a unimodular matrix (Gauss-Jordan over Q)."""
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    inv = [row[n:] for row in aug]
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not invertible over Z")
    return [[int(x) for x in row] for row in inv]


@dataclass
class GLnElement:
    """Integer matrix with an optional factorisation.

    Factors are ``("E", i, j, e)`` for E_ij^e and ``("F", sigma)`` for a
    permutation matrix; the matrix is the left-to-right product of factors.
    """
    matrix: Matrix
    factors: list[tuple] | None = None

    @property
    def n(self) -> int:
        return len(self.matrix)

    @classmethod
    def identity(cls, n: int) -> "GLnElement":
        return cls(identity_matrix(n), [])

    @classmethod
    def from_factors(cls, n: int, factors: Sequence[tuple]) -> "GLnElement":
        m = identity_matrix(n)
        for f in factors:
            m = matmul(m, factor_matrix(n, f))
        return cls(m, list(factors))

    def __mul__(self, other: "GLnElement") -> "GLnElement":
        facs = None
        if self.factors is not None and other.factors is not None:
            facs = self.factors + other.factors
        return GLnElement(matmul(self.matrix, other.matrix), facs)

    def inverse(self) -> "GLnElement":
        if self.factors is not None:
            return GLnElement.from_factors(self.n, [invert_factor(f) for f in reversed(self.factors)])
        return GLnElement(exact_inverse(self.matrix))

    def transvection_count(self) -> int:
        return sum(abs(f[3]) for f in self.factors or () if f[0] == "E")

    def permutation_count(self) -> int:
        return sum(1 for f in self.factors or () if f[0] == "F")

    def to_json(self) -> dict:
        d = {"matrix": [[str(x) for x in row] for row in self.matrix]}
        if self.factors is not None:
            d["factors"] = [list(f[:1]) + (list(f[1]) if f[0] == "F" else list(f[1:]))
                            for f in self.factors]
        return d

    @classmethod
    def from_json(cls, d: dict) -> "GLnElement":
        mat = [[int(x) for x in row] for row in d["matrix"]]
        facs = None
        if "factors" in d:
            facs = [("F", tuple(f[1:])) if f[0] == "F" else ("E", f[1], f[2], f[3])
                    for f in d["factors"]]
        return cls(mat, facs)


def factor_matrix(n: int, f: tuple) -> Matrix:
    if f[0] == "E":
        _, i, j, e = f
        return elementary(n, i, j, e)
    return permutation_matrix(f[1])


def invert_factor(f: tuple) -> tuple:
    if f[0] == "E":
        return ("E", f[1], f[2], -f[3])
    sigma = f[1]
    inv = [0] * len(sigma)
    for k, s in enumerate(sigma, 1):
        inv[s - 1] = k
    return ("F", tuple(inv))


def induced_image(h: Matrix, hinv: Matrix, m: int, B: FormanekBasis) -> dict[int, int]:
    """Sparse image of basis element m under the natural action of h."""
    i, j, k = B.triples[m]
    n = B.n
    dual = [(p, hinv[i - 1][p - 1]) for p in range(1, n + 1) if hinv[i - 1][p - 1]]
    colj = [(q, h[q - 1][j - 1]) for q in range(1, n + 1) if h[q - 1][j - 1]]
    colk = [(r, h[r - 1][k - 1]) for r in range(1, n + 1) if h[r - 1][k - 1]]
    wedge: dict[tuple[int, int], int] = {}
    for q, x in colj:
        for r, y in colk:
            if q == r:
                continue
            key, s = ((q, r), 1) if q < r else ((r, q), -1)
            wedge[key] = wedge.get(key, 0) + s * x * y
    out: dict[int, int] = {}
    for p, d in dual:
        for (q, r), w in wedge.items():
            if w:
                pos, s = B.locate(p, q, r)
                out[pos] = out.get(pos, 0) + s * d * w
    return {pos: c for pos, c in out.items() if c}


def _freeze(m: Matrix) -> tuple:
    return tuple(map(tuple, m))


@lru_cache(maxsize=4096)
def _action_table(h: tuple, hinv: tuple) -> tuple:
    B = basis(len(h))
    return tuple(tuple(induced_image(h, hinv, m, B).items()) for m in range(B.N))


def action_images(g: GLnElement) -> tuple:
    """Sparse images of all basis elements under g (cached per matrix)."""
    return _action_table(_freeze(g.matrix), _freeze(g.inverse().matrix))


def act_vector(g: GLnElement, v: Sequence[int]) -> list[int]:
    """Natural action of g on V* (x) (V ^ V)."""
    table = action_images(g)
    out = [0] * len(table)
    for m, x in enumerate(v):
        if x:
            for pos, c in table[m]:
                out[pos] += c * x
    return out


def act_character(g: GLnElement, chi: Character) -> Character:
    """(g chi)(x) = chi(g^-1 x)."""
    if g.n != chi.n:
        raise ValueError("rank mismatch")
    table = action_images(g.inverse())
    # work with integers over a common denominator
    L = lcm(*(c.denominator for c in chi.coeffs))
    cs = [c.numerator * (L // c.denominator) for c in chi.coeffs]
    new = [Fraction(sum(cs[p] * c for p, c in img), L) for img in table]
    return Character(chi.n, new)


def wedge_class(letters: Sequence[int], n: int) -> dict[tuple[int, int], int]:
    """Image in V ^ V of a free-group word lying in the commutator subgroup.

    Uses [w] = 1/2 sum_{s<t} eps_s eps_t e_{i_s} ^ e_{i_t}, which is additive
    on [F, F] and sends [x_a, x_b] to e_a ^ e_b.
    """
    seen = [0] * (n + 1)
    acc: dict[tuple[int, int], int] = {}
    for a in letters:
        i, e = abs(a), (1 if a > 0 else -1)
        for p in range(1, n + 1):
            if seen[p] and p != i:
                key, s = ((p, i), 1) if p < i else ((i, p), -1)
                acc[key] = acc.get(key, 0) + s * seen[p] * e
        seen[i] += e
    if any(seen):
        raise ValueError("word is not in the commutator subgroup")
    out = {}
    for key, v in acc.items():
        if v % 2:
            raise AssertionError("odd wedge coefficient")
        if v:
            out[key] = v // 2
    return out


def theta_automorphism(f) -> list[int]:
    """theta of an IA automorphism, read off from x_i^-1 f(x_i)."""
    n = f.rank
    B = basis(n)
    v = [0] * B.N
    for i in range(1, n + 1):
        for (q, r), c in wedge_class((-i,) + tuple(f.images[i - 1]), n).items():
            pos, s = B.locate(i, q, r)
            v[pos] += s * c
    return v


# ----------------------------------------------------------- regularisation

def _lex_smallest_permutation(n: int, forced: dict[int, int]) -> tuple[int, ...]:
    used = set(forced.values())
    free = iter(v for v in range(1, n + 1) if v not in used)
    return tuple(forced[k] if k in forced else next(free) for k in range(1, n + 1))


def _step1_permutation(chi: Character, M: Fraction) -> tuple[int, ...]:
    B = basis(chi.n)
    best = None
    for m, c in enumerate(chi.coeffs):
        if abs(c) != M:
            continue
        p, q, r = B.triples[m]
        if p in (q, r):
            other = r if p == q else q
            cands = [{p: 1, other: 2}]
        else:
            cands = [{p: 1, q: 3, r: 2}, {p: 1, q: 2, r: 3}]
        for forced in cands:
            sigma = _lex_smallest_permutation(chi.n, forced)
            if best is None or sigma < best:
                best = sigma
    return best


@dataclass
class Regularization:
    g: GLnElement
    Z: tuple[int, ...]
    certificate: list[dict] = field(default_factory=list)
    M: Fraction = Fraction(0)
    character: Character | None = None

    def to_json(self) -> dict:
        return {"g": self.g.to_json(), "Z": list(self.Z), "M": str(self.M),
                "certificate": self.certificate}


REG_PAIRS = ((1, 2), (3, 4), (5, 6), (7, 8))


class _Regularizer:
    """Running state for the regularisation steps: each step acts on ``lam``."""

    def __init__(self, chi: Character):
        self.n = chi.n
        self.lam = chi
        self.M = M_of(chi)
        self.third = self.M / 3
        self.factors: list[tuple] = []
        self.cert: list[dict] = []

    def trial(self, facs: Sequence[tuple]) -> Character:
        # the product f_1 ... f_k acts by f_k first
        lam = self.lam
        for f in reversed(facs):
            lam = act_character(GLnElement.from_factors(self.n, [f]), lam)
        return lam

    def commit(self, facs: Sequence[tuple], lam: Character, record: dict) -> None:
        self.lam = lam
        self.factors[:0] = list(facs)
        self.cert.append(record)

    def first_sign(self, make, ok, label):
        for e in (1, -1):
            facs = make(e)
            lam = self.trial(facs)
            if ok(lam):
                return facs, lam, e
        raise AssertionError(f"regularisation step {label}: no sign works")

    def pair(self, a: int, label: str) -> None:
        """Bring |c_aa2| up to M/3 keeping |c_112| >= M."""
        M, t = self.M, self.third
        if abs(self.lam.c(a, a, 2)) >= t:
            self.cert.append({"step": label, "factor": "1",
                              "inequality": f"|c_{a}{a}2| = {abs(self.lam.c(a, a, 2))} >= M/3"})
            return
        facs, lam, e = self.first_sign(
            lambda e: [("E", 1, a, e), ("E", a, 1, e)],
            lambda lam: abs(lam.c(1, 1, 2)) >= M and abs(lam.c(a, a, 2)) >= t, label)
        self.commit(facs, lam, {
            "step": label, "factor": f"E1{a}^{e} E{a}1^{e}",
            "inequality": f"|c_112| = {abs(lam.c(1, 1, 2))} >= M, |c_{a}{a}2| = {abs(lam.c(a, a, 2))} >= M/3"})

    def transfer(self, a: int, b: int, label: str) -> None:
        """E_2b^{+-1}: c_aab -> c_aab -+ c_aa2."""
        t = self.third
        facs, lam, e = self.first_sign(
            lambda e: [("E", 2, b, e)], lambda lam: abs(lam.c(a, a, b)) >= t, label)
        self.commit(facs, lam, {"step": label, "factor": f"E2{b}^{e}",
                                "inequality": f"|c_{a}{a}{b}| = {abs(lam.c(a, a, b))} >= M/3"})

    def step2A(self) -> None:
        M = self.M
        facs = lam = None
        for e in (2, -2):
            facs = [("E", 3, 1, e)]
            lam = self.trial(facs)
            if abs(lam.c(1, 1, 2)) >= M and abs(lam.c(3, 3, 2)) >= M:
                break
        else:
            raise AssertionError("regularisation step 2A: no sign works")
        self.commit(facs, lam, {
            "step": "2A", "factor": f"E31^{e}",
            "inequality": f"|c_112| = {abs(lam.c(1, 1, 2))} >= M, |c_332| = {abs(lam.c(3, 3, 2))} >= M"})


def regularize(chi: Character) -> Regularization:
    """Find g = g5 g4 g3 g2 g1 with |c_iij(g chi)| >= M(chi)/3 for the pairs
    (1,2), (3,4), (5,6), (7,8), and |c_112(g chi)| >= M(chi).

    Signs default to + whenever + satisfies the required inequality.
    """
    if chi.n < 8:
        raise ValueError("regularisation needs n >= 8")
    st = _Regularizer(chi)
    sigma = _step1_permutation(chi, st.M)
    facs = [("F", sigma)]
    lam = st.trial(facs)
    st.commit(facs, lam, {"step": "1", "factor": f"F{list(sigma)}",
                          "inequality": f"max(|c_112|, |c_132|) = M = {st.M}"})
    if abs(lam.c(1, 1, 2)) >= st.M:
        st.pair(3, "2B")
    else:
        st.step2A()
    st.transfer(3, 4, "3")
    st.pair(5, "4a")
    st.transfer(5, 6, "4b")
    st.pair(7, "5a")
    st.transfer(7, 8, "5b")

    g = GLnElement.from_factors(chi.n, st.factors)
    final = act_character(g, chi)
    if final.coeffs != st.lam.coeffs:
        raise AssertionError("regularisation: factor bookkeeping mismatch")
    for i, j in REG_PAIRS:
        if abs(final.c(i, i, j)) < st.third:
            raise AssertionError(f"regularisation: |c_{i}{i}{j}| < M/3")
    if abs(final.c(1, 1, 2)) < st.M:
        raise AssertionError("regularisation: |c_112| < M")
    S = alphabet(chi.n)
    Z = tuple(S.letter(p) for p in REG_PAIRS)
    return Regularization(g, Z, st.cert, st.M, final)


def random_character(n: int, rng, bound: int = 10, density: float = 1.0) -> Character:
    """Random nonzero integer character; ``rng`` is a ``random.Random``."""
    N = basis(n).N
    while True:
        coeffs = [Fraction(rng.randint(-bound, bound)) if rng.random() < density else Fraction(0)
                  for _ in range(N)]
        if any(coeffs):
            return Character(n, coeffs)
