"""Automorphisms of F_n stored as tuples of generator images.

Includes the Magnus generators K_ij, K_ijk of IA_n, the Nielsen maps R_ji,
L_ji and the permutation lifts of GL_n(Z) generators.  Words over the Magnus
alphabet ("s-words") are tuples of nonzero ints: ``+(m+1)`` is the m-th
Magnus generator in the fixed alphabet order and ``-(m+1)`` its inverse.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from .free_words import RankError, Word, free_reduce

Images = tuple[tuple[int, ...], ...]


class WordLengthExceeded(RuntimeError):
    """Raised when a composition produces an image longer than the budget."""


def _substitute(images: Images, letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for a in letters:
        if a > 0:
            out.extend(images[a - 1])
        else:
            out.extend(-b for b in reversed(images[-a - 1]))
    return free_reduce(out)


@dataclass(frozen=True)
class FreeAutomorphism:
    rank: int
    images: Images
    inverse_images: Images | None = None

    @classmethod
    def identity(cls, rank: int) -> "FreeAutomorphism":
        ims = tuple((i,) for i in range(1, rank + 1))
        return cls(rank, ims, ims)

    @classmethod
    def from_words(cls, images: Sequence[Word], inverse_images: Sequence[Word] | None = None):
        rank = images[0].rank
        inv = None if inverse_images is None else tuple(w.letters for w in inverse_images)
        return cls(rank, tuple(w.letters for w in images), inv)

    def __call__(self, w: Word) -> Word:
        if w.rank != self.rank:
            raise RankError("rank mismatch")
        return Word(self.rank, _substitute(self.images, w.letters))

    def image(self, i: int) -> Word:
        return Word(self.rank, self.images[i - 1])

    def inverse(self) -> "FreeAutomorphism":
        if self.inverse_images is None:
            raise ValueError("automorphism carries no certified inverse")
        return FreeAutomorphism(self.rank, self.inverse_images, self.images)

    def __mul__(self, other: "FreeAutomorphism") -> "FreeAutomorphism":
        return compose(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FreeAutomorphism):
            return NotImplemented
        return equals(self, other)

    def __hash__(self) -> int:
        return hash((self.rank, self.images))

    def max_image_length(self) -> int:
        return max(len(im) for im in self.images)

    def check_inverse(self) -> bool:
        """Direct substitution check of the stored inverse in both orders."""
        if self.inverse_images is None:
            return False
        gens = tuple((i,) for i in range(1, self.rank + 1))
        for a, b in ((self.images, self.inverse_images), (self.inverse_images, self.images)):
            if tuple(_substitute(a, im) for im in b) != gens:
                return False
        return True

    def abelianization(self) -> list[list[int]]:
        """Exponent-sum matrix; column j holds the exponent sums of the image of x_j."""
        n = self.rank
        mat = [[0] * n for _ in range(n)]
        for j, im in enumerate(self.images):
            for a in im:
                mat[abs(a) - 1][j] += 1 if a > 0 else -1
        return mat

    def to_json(self) -> dict:
        d = {"rank": self.rank, "images": [str(Word(self.rank, im)) for im in self.images]}
        if self.inverse_images is not None:
            d["inverse_images"] = [str(Word(self.rank, im)) for im in self.inverse_images]
        return d

    @classmethod
    def from_json(cls, d: dict | str) -> "FreeAutomorphism":
        if isinstance(d, str):
            d = json.loads(d)
        n = d["rank"]
        ims = tuple(Word.parse(n, s).letters for s in d["images"])
        inv = d.get("inverse_images")
        if inv is not None:
            inv = tuple(Word.parse(n, s).letters for s in inv)
        return cls(n, ims, inv)


def compose(f: FreeAutomorphism, g: FreeAutomorphism, budget: int | None = None) -> FreeAutomorphism:
    """(f o g)(x_i) = f(g(x_i)); ``budget`` caps the image length."""
    if f.rank != g.rank:
        raise RankError(f"rank mismatch: {f.rank} vs {g.rank}")
    ims = tuple(_substitute(f.images, im) for im in g.images)
    inv = None
    if f.inverse_images is not None and g.inverse_images is not None:
        inv = tuple(_substitute(g.inverse_images, im) for im in f.inverse_images)
    if budget is not None:
        longest = max(len(im) for im in (ims + (inv or ())))
        if longest > budget:
            raise WordLengthExceeded(f"image length {longest} exceeds budget {budget}")
    return FreeAutomorphism(f.rank, ims, inv)


def equals(f: FreeAutomorphism, g: FreeAutomorphism) -> bool:
    if f.rank != g.rank:
        raise RankError("rank mismatch")
    return f.images == g.images


def is_IA(f: FreeAutomorphism) -> bool:
    n = f.rank
    return f.abelianization() == [[int(i == j) for j in range(n)] for i in range(n)]


def commutator(f: FreeAutomorphism, g: FreeAutomorphism) -> FreeAutomorphism:
    """[f, g] = f^-1 g^-1 f g."""
    return compose(compose(f.inverse(), g.inverse()), compose(f, g))


# ---------------------------------------------------------------- generators

def _check(n: int, *idx: int) -> None:
    if len(set(idx)) != len(idx):
        raise ValueError(f"indices {idx} must be distinct")
    for i in idx:
        if not 1 <= i <= n:
            raise ValueError(f"index {i} out of range for rank {n}")


def _modify(n: int, i: int, image: Sequence[int], inv_image: Sequence[int]) -> FreeAutomorphism:
    ims = [(k,) for k in range(1, n + 1)]
    inv = list(ims)
    ims[i - 1] = free_reduce(image)
    inv[i - 1] = free_reduce(inv_image)
    return FreeAutomorphism(n, tuple(ims), tuple(inv))


def magnus(idx: Sequence[int], rank: int) -> FreeAutomorphism:
    """K_ij (x_i -> x_j^-1 x_i x_j) or K_ijk (x_i -> x_i [x_j, x_k])."""
    if len(idx) == 2:
        i, j = idx
        _check(rank, i, j)
        return _modify(rank, i, (-j, i, j), (j, i, -j))
    if len(idx) == 3:
        i, j, k = idx
        _check(rank, i, j, k)
        return _modify(rank, i, (i, -j, -k, j, k), (i, -k, -j, k, j))
    raise ValueError(f"bad Magnus index {idx!r}")


def nielsen_R(j: int, i: int, rank: int) -> FreeAutomorphism:
    """R_ji: x_j -> x_j x_i."""
    _check(rank, i, j)
    return _modify(rank, j, (j, i), (j, -i))


def nielsen_L(j: int, i: int, rank: int) -> FreeAutomorphism:
    """L_ji: x_j -> x_i x_j."""
    _check(rank, i, j)
    return _modify(rank, j, (i, j), (-i, j))


def permutation_lift(sigma: Sequence[int], rank: int) -> FreeAutomorphism:
    """x_k -> x_sigma(k); ``sigma`` is 1-based, ``sigma[k-1] = sigma(k)``."""
    if sorted(sigma) != list(range(1, rank + 1)):
        raise ValueError("not a permutation")
    inv = [0] * rank
    for k, s in enumerate(sigma, 1):
        inv[s - 1] = k
    return FreeAutomorphism(rank, tuple((s,) for s in sigma), tuple((s,) for s in inv))


def transposition(i: int, j: int, rank: int) -> FreeAutomorphism:
    _check(rank, i, j)
    sigma = list(range(1, rank + 1))
    sigma[i - 1], sigma[j - 1] = j, i
    return permutation_lift(sigma, rank)


# ---------------------------------------------------------- Magnus alphabet

_LETTER_RE = re.compile(r"K\[(\d+(?:,\d+)*)\](\^-1)?$")


class MagnusAlphabet:
    """The Magnus generating set S of IA_n in its fixed order.

    K_ij (all i != j) come first, sorted by (i, j); then K_ijk with j < k,
    sorted by (i, j, k).  ``N = n * C(n, 2)``.
    """

    def __init__(self, n: int):
        if n < 2:
            raise ValueError("rank must be at least 2")
        self.n = n
        pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
        triples = [(i, j, k) for i in range(1, n + 1)
                   for j, k in combinations(range(1, n + 1), 2) if i not in (j, k)]
        self.indices: list[tuple[int, ...]] = pairs + triples
        self.position = {idx: m for m, idx in enumerate(self.indices)}
        self._autos: dict[int, FreeAutomorphism] = {}
        self._commute: dict[tuple[int, int], bool] = {}

    @property
    def N(self) -> int:
        return len(self.indices)

    def letter(self, idx: Sequence[int], sign: int = 1) -> int:
        """Signed letter code for K[idx]^sign, normalising K_ikj = K_ijk^-1."""
        idx = tuple(idx)
        if len(idx) == 3 and idx[1] > idx[2]:
            idx = (idx[0], idx[2], idx[1])
            sign = -sign
        try:
            return sign * (self.position[idx] + 1)
        except KeyError:
            raise ValueError(f"invalid Magnus index {idx} for n={self.n}") from None

    def name(self, a: int) -> str:
        idx = self.indices[abs(a) - 1]
        s = "K[" + ",".join(map(str, idx)) + "]"
        return s if a > 0 else s + "^-1"

    def parse(self, text: str) -> tuple[int, ...]:
        out = []
        for tok in text.split():
            m = _LETTER_RE.match(tok)
            if not m:
                raise ValueError(f"cannot parse Magnus letter {tok!r}")
            idx = tuple(int(t) for t in m.group(1).split(","))
            out.append(self.letter(idx, -1 if m.group(2) else 1))
        return tuple(out)

    def format(self, word: Iterable[int]) -> str:
        return " ".join(self.name(a) for a in word)

    def automorphism(self, a: int) -> FreeAutomorphism:
        m = abs(a) - 1
        f = self._autos.get(m)
        if f is None:
            f = self._autos[m] = magnus(self.indices[m], self.n)
        return f if a > 0 else f.inverse()

    def apply_word(self, word: Iterable[int], budget: int | None = None) -> FreeAutomorphism:
        """Left-to-right product s_1 s_2 ... as automorphism s_1 o s_2 o ..."""
        f = FreeAutomorphism.identity(self.n)
        for a in word:
            f = compose(f, self.automorphism(a), budget)
        return f

    def commutes(self, a: int, b: int) -> bool:
        """Exact commutation of two Magnus generators (signs are irrelevant)."""
        key = (min(abs(a), abs(b)), max(abs(a), abs(b)))
        r = self._commute.get(key)
        if r is None:
            f, g = self.automorphism(key[0]), self.automorphism(key[1])
            r = self._commute[key] = equals(compose(f, g), compose(g, f))
        return r

    def lemma_commutes(self, a: int, b: int) -> bool:
        """Index criterion for commutation of Magnus generators (sufficient only)."""
        p, q = self.indices[abs(a) - 1], self.indices[abs(b) - 1]
        if p == q:
            return True
        if len(p) == 3 and len(q) == 2:
            p, q = q, p
        if len(p) == 2:
            return p[0] not in q and q[0] not in p
        return not set(p) & set(q)

    def relabel(self, a: int, sigma: Sequence[int]) -> int:
        """Image of a letter under the index permutation ``sigma`` (1-based)."""
        idx = tuple(sigma[i - 1] for i in self.indices[abs(a) - 1])
        return self.letter(idx, 1 if a > 0 else -1)


@lru_cache(maxsize=None)
def alphabet(n: int) -> MagnusAlphabet:
    return MagnusAlphabet(n)


def apply_word(word: str | Iterable[int], rank: int) -> FreeAutomorphism:
    S = alphabet(rank)
    if isinstance(word, str):
        word = S.parse(word)
    return S.apply_word(word)


def inverse_sword(word: Sequence[int]) -> tuple[int, ...]:
    return tuple(-a for a in reversed(word))


def relation_clause(p: Sequence[int], q: Sequence[int]) -> str | None:
    """'a' for [K_ij, K_kl] with i not in {k,l}, k not in {i,j};
    'b' for [K_ij, K_klm] with i not in {k,l,m}, k not in {i,j}; else None."""
    if len(p) == 3 and len(q) == 2:
        p, q = q, p
    if len(p) != 2:
        return None
    if p[0] in q or q[0] in p:
        return None
    return "a" if len(q) == 2 else "b"


def verify_relations(n: int) -> dict:
    """Check exactly that every pair covered by the two commutation clauses commutes."""
    S = alphabet(n)
    counts = {"a": 0, "b": 0}
    failures = []
    for x in range(1, S.N + 1):
        for y in range(x + 1, S.N + 1):
            c = relation_clause(S.indices[x - 1], S.indices[y - 1])
            if c is None:
                continue
            f, g = S.automorphism(x), S.automorphism(y)
            counts[c] += 1
            if not equals(compose(f, g), compose(g, f)):
                failures.append((S.name(x), S.name(y)))
    return {"n": n, "pairs": counts, "failures": failures, "ok": not failures}
