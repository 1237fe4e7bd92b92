"""The constants B, A, C and the radius R, with witness certification.

B(phi) only depends on the image of phi in GL_n(Z), so it is computed from
a matrix.  A(phi) is only ever certified from above by explicit witness
words: for each Magnus letter s an s-word w representing phi s phi^-1
whose prefixes stay in a small l1 ball.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Iterable, Sequence

from .abelianized import GLnElement, action_images, basis, theta_automorphism
from .endomorphisms import (FreeAutomorphism, alphabet, compose, equals, inverse_sword,
                            is_IA, nielsen_L, nielsen_R, permutation_lift)


# ------------------------------------------------------------------------ B

def compute_B(g: GLnElement) -> int:
    """max over basis elements b of ||g b||_1."""
    return max(sum(abs(c) for _, c in img) for img in action_images(g))


def B_argmax(g: GLnElement) -> list[tuple[int, int, int]]:
    B = basis(g.n)
    table = action_images(g)
    vals = [sum(abs(c) for _, c in img) for img in table]
    top = max(vals)
    return [B.triples[m] for m, v in enumerate(vals) if v == top]


WORST_CASE_FACTORS = [("E", 2, 8, 1), ("E", 1, 7, 1), ("E", 7, 1, 1), ("E", 2, 6, 1),
                      ("E", 1, 5, 1), ("E", 5, 1, 1), ("E", 2, 4, 1), ("E", 1, 3, 1),
                      ("E", 3, 1, 1)]


def worst_case_g(n: int = 8) -> GLnElement:
    """E28 E17 E71 E26 E15 E51 E24 E13 E31, the longest output of regularisation."""
    return GLnElement.from_factors(n, WORST_CASE_FACTORS)


# ------------------------------------------------------------------------ A

class WitnessError(AssertionError):
    def __init__(self, letter: str, reason: str):
        super().__init__(f"{letter}: {reason}")
        self.letter = letter
        self.reason = reason


@dataclass
class AWitness:
    phi: FreeAutomorphism
    words: dict[int, tuple[int, ...]]   # positive letter code -> s-word
    bound: int

    def to_json(self) -> dict:
        S = alphabet(self.phi.rank)
        return {"phi": self.phi.to_json(), "bound": self.bound,
                "words": {S.name(a): S.format(w) for a, w in sorted(self.words.items())}}

    @classmethod
    def from_json(cls, d: dict | str) -> "AWitness":
        if isinstance(d, str):
            d = json.loads(d)
        phi = FreeAutomorphism.from_json(d["phi"])
        S = alphabet(phi.rank)
        words = {S.parse(k)[0]: S.parse(v) if v else () for k, v in d["words"].items()}
        return cls(phi, words, d["bound"])


def prefix_l1_max(word: Sequence[int], n: int) -> int:
    """max over all prefixes (including the empty one) of ||theta(v)||_1."""
    B = basis(n)
    v = [0] * B.N
    l1 = best = 0
    for a in word:
        m = abs(a) - 1
        old = abs(v[m])
        v[m] += B.signs[m] * (1 if a > 0 else -1)
        l1 += abs(v[m]) - old
        best = max(best, l1)
    return best


def word_prefix_bound(word: Sequence[int], n: int) -> int:
    """Prefix bound of w and of w^-1 together; w^-1 represents phi s^-1 phi^-1."""
    return max(prefix_l1_max(word, n), prefix_l1_max(inverse_sword(word), n))


def certify_A(w: AWitness) -> int:
    """Check every witness exactly; return the certified bound.

    Raises ``WitnessError`` naming the first offending letter.
    """
    phi = w.phi
    n = phi.rank
    S = alphabet(n)
    phinv = phi.inverse()
    for m in range(S.N):
        a = m + 1
        name = S.name(a)
        if a not in w.words:
            raise WitnessError(name, "missing witness word")
        word = w.words[a]
        target = compose(compose(phi, S.automorphism(a)), phinv)
        if not equals(S.apply_word(word), target):
            raise WitnessError(name, "word does not represent phi s phi^-1")
        p = word_prefix_bound(word, n)
        if p > w.bound:
            raise WitnessError(name, f"prefix norm {p} exceeds bound {w.bound}")
    return w.bound


def witness_search(phi: FreeAutomorphism, s: int, max_len: int = 8, max_prefix: int = 6,
                   letters: Iterable[int] | None = None, accept=None) -> tuple[int, ...] | None:
    """Iterative-deepening search for an s-word representing phi s phi^-1.

    Branches are pruned when the remaining length cannot reach the target
    theta or when a prefix (of the word or its inverse) leaves the l1 ball.
    By default only letters supported on the indices moved by phi or
    carried by s are used.  ``accept`` is an extra predicate on candidates.
    """
    n = phi.rank
    S = alphabet(n)
    target = compose(compose(phi, S.automorphism(s)), phi.inverse())
    if not is_IA(target):
        raise ValueError("phi s phi^-1 is not in IA_n")
    tv = theta_automorphism(target)
    if letters is None:
        support = set(S.indices[abs(s) - 1])
        for i in range(1, n + 1):
            if phi.images[i - 1] != (i,):
                support |= {i} | {abs(b) for b in phi.images[i - 1]}
        letters = [m + 1 for m, idx in enumerate(S.indices) if set(idx) <= support]
    alpha = sorted({x for a in letters for x in (a, -a)}, key=lambda a: (abs(a), -a))
    B = basis(n)
    unit = {a: (abs(a) - 1, B.signs[abs(a) - 1] * (1 if a > 0 else -1)) for a in alpha}
    l1_target = sum(abs(x) for x in tv)

    for L in range(l1_target, max_len + 1, 2):
        cur = [0] * B.N
        word: list[int] = []
        # prefixes of w^-1 have theta = theta(v) - theta(w), so bounding the
        # distance to the target also bounds them
        def dfs(depth: int, dist: int, l1: int) -> tuple[int, ...] | None:
            if depth == L:
                if dist == 0:
                    f = S.apply_word(word)
                    if equals(f, target) and (accept is None or accept(tuple(word))):
                        return tuple(word)
                return None
            for a in alpha:
                if word and word[-1] == -a:
                    continue
                m, e = unit[a]
                old, new = cur[m], cur[m] + e
                nd = dist - abs(tv[m] - old) + abs(tv[m] - new)
                if nd > L - depth - 1:
                    continue
                nl = l1 - abs(old) + abs(new)
                if nl > max_prefix or nd > max_prefix:
                    continue
                cur[m] = new
                word.append(a)
                r = dfs(depth + 1, nd, nl)
                word.pop()
                cur[m] = old
                if r is not None:
                    return r
            return None

        r = dfs(0, l1_target, 0)
        if r is not None and word_prefix_bound(r, n) <= max_prefix:
            return r
    return None


def _canonical_relabel(idx: Sequence[int], fixed: set[int], n: int) -> tuple[int, ...]:
    """Permutation sigma fixing ``fixed`` that sends indices of idx outside
    ``fixed`` to the smallest free values, in order of appearance."""
    free = [v for v in range(1, n + 1) if v not in fixed]
    target: dict[int, int] = {}
    for i in idx:
        if i not in fixed and i not in target:
            target[i] = free[len(target)]
    # complete to a bijection of the free values
    rest_src = [v for v in free if v not in target]
    rest_dst = [v for v in free if v not in target.values()]
    target.update(zip(rest_src, rest_dst))
    return tuple(target.get(k, k) for k in range(1, n + 1))


def _invert_perm(sigma: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(sigma)
    for k, s in enumerate(sigma, 1):
        inv[s - 1] = k
    return tuple(inv)


def search_witness_set(phi: FreeAutomorphism, fixed: set[int], max_len: int = 8,
                       max_prefix: int = 6, fallback=None) -> AWitness | None:
    """Witnesses for all letters, searching one representative per orbit of
    the index permutations fixing ``fixed`` (which must commute with phi).

    ``fallback(rep)`` may propose a word for a representative; it is tried
    before the search, kept when its prefix bound is within budget, and also
    kept (with its larger bound) when the search fails.
    """
    n = phi.rank
    S = alphabet(n)
    cache: dict[int, tuple[int, ...] | None] = {}
    words: dict[int, tuple[int, ...]] = {}
    for m in range(S.N):
        a = m + 1
        sigma = _canonical_relabel(S.indices[m], fixed, n)
        rep = S.relabel(a, sigma)
        if rep not in cache:
            w = fallback(rep) if fallback else None
            if w is None or word_prefix_bound(w, n) > max_prefix:
                # a failed search keeps the (over-budget) fallback word
                w = witness_search(phi, rep, max_len, max_prefix) or w
            cache[rep] = w
        w = cache[rep]
        if w is None:
            return None
        back = _invert_perm(sigma)
        words[a] = tuple(S.relabel(b, back) for b in w)
    bound = max(word_prefix_bound(w, n) for w in words.values())
    return AWitness(phi, words, bound)


def rewrite_through(w: AWitness, word: Sequence[int]) -> tuple[int, ...]:
    """An s-word for phi(word) phi^-1, concatenating the witness words."""
    out: list[int] = []
    for a in word:
        out.extend(w.words[a] if a > 0 else inverse_sword(w.words[-a]))
    return tuple(out)


def relabel_witness(w: AWitness, sigma: Sequence[int]) -> AWitness:
    """Conjugate the whole witness by the index permutation sigma."""
    n = w.phi.rank
    S = alphabet(n)
    P = permutation_lift(sigma, n)
    phi = compose(compose(P, w.phi), P.inverse())
    words = {}
    for a, word in w.words.items():
        b = S.relabel(a, sigma)
        new = tuple(S.relabel(c, sigma) for c in word)
        if b < 0:
            b, new = -b, inverse_sword(new)
        words[b] = new
    return AWitness(phi, words, w.bound)


def base_nielsen_witnesses(n: int = 8, max_len: int = 8, max_prefix: int = 6) -> dict[str, AWitness]:
    """Witness sets for R_21^{+-1} by search and for L_21^{+-1} via
    L_21 = R_21 K_21^-1 and L_21^-1 = K_21 R_21^-1 when the search budget fails."""
    S = alphabet(n)
    k21 = S.letter((2, 1))
    R, L = nielsen_R(2, 1, n), nielsen_L(2, 1, n)
    out: dict[str, AWitness] = {}
    out["R21"] = search_witness_set(R, {1, 2}, max_len, max_prefix)
    out["R21^-1"] = search_witness_set(R.inverse(), {1, 2}, max_len, max_prefix)
    if out["R21"] is None or out["R21^-1"] is None:
        raise RuntimeError("no R_21 witness within budget")
    wR, wRi = out["R21"], out["R21^-1"]
    # L s L^-1 = R (K21^-1 s K21) R^-1
    out["L21"] = search_witness_set(
        L, {1, 2}, max_len, max_prefix,
        fallback=lambda a: rewrite_through(wR, (-k21, a, k21)))
    # L^-1 s L = K21 (R^-1 s R) K21^-1
    out["L21^-1"] = search_witness_set(
        L.inverse(), {1, 2}, max_len, max_prefix,
        fallback=lambda a: (k21,) + rewrite_through(wRi, (a,)) + (-k21,))
    return out


def certify_nielsen_witnesses(base: dict[str, AWitness], n: int = 8) -> dict:
    """Relabel the base witness sets to every R_ji, L_ji (and inverses) and
    certify each copy exactly.  Returns bounds and witnesses by label."""
    bounds: dict[str, int | None] = {}
    witnesses: dict[str, AWitness] = {}
    for j in range(1, n + 1):
        for i in range(1, n + 1):
            if i == j:
                continue
            # sigma(1) = i, sigma(2) = j sends R_21 to R_ji
            rest = [v for v in range(1, n + 1) if v not in (i, j)]
            sigma = tuple([i, j] + rest)
            for kind in ("R", "L"):
                for suffix in ("", "^-1"):
                    w0 = base.get(f"{kind}21{suffix}")
                    label = f"{kind}{j}{i}{suffix}"
                    if w0 is None:
                        bounds[label] = None
                        continue
                    w = relabel_witness(w0, sigma)
                    bounds[label] = certify_A(w)
                    witnesses[label] = w
    return {"bounds": bounds, "witnesses": witnesses}


def load_base_witnesses(path=None) -> dict[str, AWitness]:
    """Shipped witness sets for R_21^{+-1}, L_21^{+-1} at n = 8."""
    if path is None:
        from importlib import resources
        text = resources.files("effgen.data").joinpath("nielsen_witnesses.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return {k: AWitness.from_json(v) for k, v in json.loads(text).items()}


# ------------------------------------------------------------------ bounds

def compose_A_bound(a_psi: int, b_phi: int, a_phi: int) -> int:
    """A(phi psi) <= A(psi) B(phi) + A(phi)."""
    return a_psi * b_phi + a_phi


def chain_A_bound(items: Sequence[tuple[int, int]]) -> int:
    """A(phi_1 ... phi_k) <= sum_m A(phi_m) B(phi_1 ... phi_{m-1}).

    ``items`` lists (A(phi_m), B(phi_1 ... phi_{m-1})), the first B being 1.
    """
    return sum(a * b for a, b in items)


def chain_A_for_factors(A_values: Sequence[int], factors: Sequence[tuple], n: int) -> int:
    """Chain bound for a factored GL_n element, with exact prefix B values."""
    items = []
    prefix = GLnElement.identity(n)
    for a, f in zip(A_values, factors):
        items.append((a, compute_B(prefix)))
        prefix = prefix * GLnElement.from_factors(n, [f])
    return chain_A_bound(items)


@dataclass(frozen=True)
class ConstantsProfile:
    A: int
    B: int
    C: Fraction
    label: str = "custom"

    def __post_init__(self):
        if not self.A >= self.B >= 1:
            raise ValueError("a profile needs A >= B >= 1")
        if Fraction(self.C) <= 0:
            raise ValueError("C must be positive")

    @classmethod
    def toy(cls) -> "ConstantsProfile":
        return cls(1, 1, Fraction(1), "toy")

    @classmethod
    def paper(cls) -> "ConstantsProfile":
        return cls(8100, 150, Fraction(3), "paper")

    @classmethod
    def named(cls, label: str) -> "ConstantsProfile":
        if label == "toy":
            return cls.toy()
        if label == "paper":
            return cls.paper()
        raise ValueError(f"unknown profile {label!r}")


def radius_R(p: ConstantsProfile) -> int:
    """R = 16 (BC+1)^2 (AB+3A+1), rounded up when C is fractional."""
    C = Fraction(p.C)
    return ceil(16 * (p.B * C + 1) ** 2 * (p.A * p.B + 3 * p.A + 1))


def r_of(p: ConstantsProfile) -> int:
    return (p.A * p.B + 3 * p.A + 1) // 2


def prefix_bound(p: ConstantsProfile, r: int, C: Fraction | None = None) -> Fraction:
    """(2BC+1)(AB+A+r)+2A."""
    C = Fraction(p.C if C is None else C)
    return (2 * p.B * C + 1) * (p.A * p.B + p.A + r) + 2 * p.A


def final_inequality(p: ConstantsProfile, R: int | None = None) -> Fraction:
    """((2BC+1)(AB+3A+2r+1)+r)^2 - 2rR; negative means the push step shrinks norms."""
    R = radius_R(p) if R is None else R
    r = r_of(p)
    C = Fraction(p.C)
    return ((2 * p.B * C + 1) * (p.A * p.B + 3 * p.A + 2 * r + 1) + r) ** 2 - 2 * r * R


def constants_report(p: ConstantsProfile) -> dict:
    R = radius_R(p)
    return {"label": p.label, "A": p.A, "B": p.B, "C": str(p.C), "R": R, "r": r_of(p),
            "final_inequality": str(final_inequality(p, R)),
            "final_inequality_negative": final_inequality(p, R) < 0}


def lift_A_bound(bounds: dict, factor: tuple) -> int:
    """Certified A of the lift R_ji^{+-1} of E_ij^{+-1}."""
    _, i, j, e = factor
    return bounds[f"R{j}{i}" + ("" if e > 0 else "^-1")]


def certified_global_A(bounds: dict, n: int = 8) -> dict:
    """Chain the certified Nielsen bounds into a global A.

    The global bound is max A(R^{+-1}) * 9 * 150: nine transvection lifts,
    each prefix having B <= 150; the prefix claim is checked exactly on the
    worst-case factorization (and its inverse), whose exact chain is also
    reported.
    """
    g = worst_case_g(n)
    facs = list(g.factors)
    inv_facs = [(f[0], f[1], f[2], -f[3]) for f in reversed(facs)]
    B_full = max(compute_B(g), compute_B(g.inverse()))
    prefix_ok = True
    for seq in (facs, inv_facs):
        for k in range(len(seq) + 1):
            if compute_B(GLnElement.from_factors(n, seq[:k])) > B_full:
                prefix_ok = False
    A_R = max(v for k, v in bounds.items() if k.startswith("R") and v is not None)
    exact = max(chain_A_for_factors([lift_A_bound(bounds, f) for f in seq], seq, n)
                for seq in (facs, inv_facs))
    return {"A_R_max": A_R, "B": B_full, "prefix_B_dominated": prefix_ok,
            "A_global": A_R * len(facs) * B_full, "A_worst_case_exact_chain": exact}
