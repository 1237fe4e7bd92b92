"""Non-negative forms: chain selection, the explicit form for a regular
character, and the bounded form obtained by conjugating by a t-power.

Words are kept as paths (no free reduction), since every prefix matters.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Callable, Sequence

from .abelianized import Character, GLnElement, act_character, basis, M_of
from .endomorphisms import FreeAutomorphism, alphabet, equals
from .constants import AWitness, ConstantsProfile, rewrite_through, word_prefix_bound

LetterChar = Callable[[int], Fraction]
Commutes = Callable[[int, int], bool]

DEFAULT_Z_PAIRS = ((1, 2), (3, 4), (5, 6), (7, 8))


class NotChainCentralizing(RuntimeError):
    pass


class NotRegular(ValueError):
    pass


def default_Z(n: int) -> tuple[int, ...]:
    S = alphabet(n)
    return tuple(S.letter(p) for p in DEFAULT_Z_PAIRS)


def is_chain_centralizing(letters: Sequence[int], Z: Sequence[int], commutes: Commutes) -> bool:
    """For every s and z some z' in Z commutes with both."""
    return all(any(commutes(zp, s) and commutes(zp, z) for zp in Z)
               for s in letters for z in Z)


@dataclass
class ChainSelection:
    z: list[int]
    exponents: list[int] = field(default_factory=list)


def chain_select(word: Sequence[int], Z: Sequence[int], commutes: Commutes) -> list[int]:
    """z_i: first member of Z commuting with s_i and with z_{i-1}."""
    out: list[int] = []
    for i, s in enumerate(word):
        for z in Z:
            if commutes(z, s) and (i == 0 or commutes(z, out[-1])):
                out.append(z)
                break
        else:
            raise NotChainCentralizing(f"no element of Z fits position {i}")
    return out


def _as_letter_char(chi) -> LetterChar:
    return chi.on_letter if isinstance(chi, Character) else chi


def minimal_exponents(word: Sequence[int], z: Sequence[int], chi: LetterChar) -> list[int]:
    """Smallest |n_i| with n_i chi(z_i) >= max(0, -P_i, -P_{i-1})."""
    out = []
    P_prev = Fraction(0)
    P = Fraction(0)
    for i, (s, zi) in enumerate(zip(word, z)):
        P_prev, P = P, P + chi(s)
        need = max(Fraction(0), -P, -P_prev if i > 0 else Fraction(0))
        cz = chi(zi)
        if cz == 0:
            raise NotRegular("chi vanishes on an element of Z")
        k = ceil(need / abs(cz))
        out.append(k if cz > 0 else -k)
    return out


def assemble_cc(word: Sequence[int], z: Sequence[int], ns: Sequence[int]) -> tuple[int, ...]:
    """z_1^n1 s_1 z_2^n2 z_1^-n1 s_2 ... s_k z_k^-nk."""
    out: list[int] = []

    def power(a: int, e: int):
        out.extend([a if e > 0 else -a] * abs(e))

    k = len(word)
    if k == 0:
        return ()
    power(z[0], ns[0])
    for i in range(k):
        out.append(word[i])
        if i + 1 < k:
            power(z[i + 1], ns[i + 1])
        power(z[i], -ns[i])
    return tuple(out)


def nonneg_form_cc(word: Sequence[int], chi, Z: Sequence[int],
                   commutes: Commutes | None = None) -> tuple[tuple[int, ...], ChainSelection]:
    """The explicit (chi, S)-non-negative form of a chain-centralizing pair.

    ``chi`` is a ``Character`` or any callable on letters; ``commutes`` defaults
    to exact commutation of Magnus generators.
    """
    f = _as_letter_char(chi)
    if commutes is None:
        commutes = alphabet(chi.n).commutes
    total = sum((f(a) for a in word), Fraction(0))
    if total < 0:
        raise ValueError("chi(g) < 0")
    for zz in Z:
        if f(zz) == 0:
            raise NotRegular("chi is not regular for Z")
    z = chain_select(word, Z, commutes)
    ns = minimal_exponents(word, z, f)
    return assemble_cc(word, z, ns), ChainSelection(z, ns)


def prefix_values(word: Sequence[int], chi) -> list[Fraction]:
    f = _as_letter_char(chi)
    out = [Fraction(0)]
    for a in word:
        out.append(out[-1] + f(a))
    return out


def verify_cc_schema(word: Sequence[int], sel: ChainSelection, commutes: Commutes) -> bool:
    """Symbolic equality check: every z_i commutes with s_i and z_{i+1}, so
    each z_i^-n_i can be moved right and cancelled."""
    z = sel.z
    for i, s in enumerate(word):
        if not commutes(z[i], s):
            return False
        if i + 1 < len(word) and not commutes(z[i], z[i + 1]):
            return False
    return True


def is_minimal(word: Sequence[int], sel: ChainSelection, chi) -> bool:
    """Shrinking any |n_i| by one breaks one of the defining inequalities."""
    f = _as_letter_char(chi)
    P = prefix_values(word, f)
    for i, n in enumerate(sel.exponents):
        if n == 0:
            continue
        m = n - (1 if n > 0 else -1)
        v = m * f(sel.z[i])
        if v >= 0 and v >= -P[i + 1] and (i == 0 or v >= -P[i]):
            return False
    return True


# --------------------------------------------------------- bounded forms

@dataclass
class PhiData:
    """An automorphism phi with witnesses for phi and phi^-1."""
    phi: FreeAutomorphism
    forward: AWitness
    backward: AWitness

    @classmethod
    def identity(cls, n: int) -> "PhiData":
        S = alphabet(n)
        idf = FreeAutomorphism.identity(n)
        words = {m + 1: (m + 1,) for m in range(S.N)}
        w = AWitness(idf, words, 1)
        return cls(idf, w, w)

    @property
    def n(self) -> int:
        return self.phi.rank

    def matrix(self) -> GLnElement:
        return GLnElement(self.phi.abelianization())

    def A(self) -> int:
        n = self.n
        return max(max(word_prefix_bound(w, n) for w in W.words.values())
                   for W in (self.forward, self.backward))

    def B(self) -> int:
        from .constants import compute_B
        g = self.matrix()
        return max(compute_B(g), compute_B(g.inverse()))


@dataclass
class BoundedForm:
    word: tuple[int, ...]
    t: int
    A: int
    r: int
    C_eff: Fraction
    bound: Fraction
    prefix_l1_max: int
    prefix_chi_min: Fraction
    selection: ChainSelection | None = None


def first_maximal_letter(chi: Character) -> int:
    """First t in S^{+-1} (alphabet order, + before -) with chi(t) = M(chi)."""
    M = M_of(chi)
    for m in range(len(chi.coeffs)):
        for a in (m + 1, -(m + 1)):
            if chi.on_letter(a) == M:
                return a
    raise AssertionError("unreachable")


def prefix_l1_values(word: Sequence[int], n: int) -> list[int]:
    B = basis(n)
    v = [0] * B.N
    l1 = 0
    out = [0]
    for a in word:
        m = abs(a) - 1
        old = abs(v[m])
        v[m] += B.signs[m] * (1 if a > 0 else -1)
        l1 += abs(v[m]) - old
        out.append(l1)
    return out


def bounded_nonneg_form(word: Sequence[int], chi: Character, profile: ConstantsProfile,
                        phi: PhiData | None = None, Z: Sequence[int] | None = None) -> BoundedForm:
    """A (chi, S)-non-negative form of g with every prefix in the l1 ball of
    radius (2BC+1)(AB+A+r)+2A.

    The constant C used is the effective ratio M(chi)/min|chi(phi(z))|; the
    profile's A and B must dominate the certified values of ``phi``.
    """
    n = chi.n
    S = alphabet(n)
    phi = phi or PhiData.identity(n)
    Z = tuple(Z) if Z is not None else default_Z(n)
    word = tuple(word)
    if chi.on_word(word) < 0:
        raise ValueError("chi(g) < 0")
    A, B = profile.A, profile.B
    if phi.A() > A or phi.B() > B:
        raise ValueError("profile constants are below the certified constants of phi")
    M = M_of(chi)
    t = first_maximal_letter(chi)
    p = (-t,) * A + word + (t,) * A
    # phi(S)-word for p: letter a is represented by phi applied to phi^-1(a)
    p_tilde = rewrite_through(phi.backward, p)
    chi_phi = act_character(phi.matrix().inverse(), chi)      # chi o phi
    q_tilde, sel = nonneg_form_cc(p_tilde, chi_phi, Z, S.commutes)
    q = rewrite_through(phi.forward, q_tilde)
    w = (t,) * A + q + (-t,) * A

    zmin = min(abs(chi_phi.on_letter(z)) for z in Z)
    C_eff = M / zmin
    r = len(word)
    base = A * B + A + r
    bound = (1 + 2 * B * Fraction(ceil(C_eff * base), base)) * base + 2 * A
    l1s = prefix_l1_values(w, n)
    chis = prefix_values(w, chi)
    res = BoundedForm(w, t, A, r, C_eff, bound, max(l1s), min(chis), sel)
    if res.prefix_chi_min < 0:
        raise AssertionError("bounded form has a negative prefix")
    if res.prefix_l1_max > bound:
        raise AssertionError("bounded form exceeds its prefix bound")
    return res


def bound_formula(A: int, B: int, C, r: int) -> Fraction:
    """(2BC+1)(AB+A+r)+2A."""
    return (2 * B * Fraction(C) + 1) * (A * B + A + r) + 2 * A


def same_automorphism(u: Sequence[int], v: Sequence[int], n: int) -> bool:
    S = alphabet(n)
    return equals(S.apply_word(u), S.apply_word(v))
