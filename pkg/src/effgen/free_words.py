"""Reduced words in the free group F_n.

A letter is a nonzero integer: ``+i`` stands for the generator x_i and ``-i``
for its inverse.  Words are immutable and always freely reduced.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple


class Letter(NamedTuple):
    index: int
    sign: int

    def code(self) -> int:
        return self.index * self.sign


class RankError(ValueError):
    pass


def _check_letters(rank: int, letters: Iterable[int]) -> None:
    for a in letters:
        if a == 0 or abs(a) > rank:
            raise RankError(f"letter {a} out of range for rank {rank}")


def free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    """Single stack pass; cancels adjacent ``a, -a`` pairs."""
    stack: list[int] = []
    push = stack.append
    pop = stack.pop
    for a in letters:
        if stack and stack[-1] == -a:
            pop()
        else:
            push(a)
    return tuple(stack)


@dataclass(frozen=True, slots=True)
class Word:
    rank: int
    letters: tuple[int, ...] = ()

    @classmethod
    def reduce(cls, rank: int, raw: Iterable[int | Letter]) -> "Word":
        codes = [a.code() if isinstance(a, Letter) else int(a) for a in raw]
        _check_letters(rank, codes)
        return cls(rank, free_reduce(codes))

    @classmethod
    def generator(cls, rank: int, i: int) -> "Word":
        _check_letters(rank, (i,))
        return cls(rank, (i,))

    @classmethod
    def parse(cls, rank: int, text: str) -> "Word":
        """Parse ``"x3 x1^-1 x3^-1"``; the empty string (or ``1``) is the identity."""
        codes = []
        for tok in text.split():
            if tok in ("1", "e"):
                continue
            sign = 1
            if tok.endswith("^-1"):
                sign, tok = -1, tok[:-3]
            if not tok.startswith("x") or not tok[1:].isdigit():
                raise ValueError(f"cannot parse letter {tok!r}")
            codes.append(sign * int(tok[1:]))
        return cls.reduce(rank, codes)

    def __str__(self) -> str:
        return " ".join(f"x{a}" if a > 0 else f"x{-a}^-1" for a in self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return multiply(self, other)

    def inverse(self) -> "Word":
        return Word(self.rank, tuple(-a for a in reversed(self.letters)))

    def is_identity(self) -> bool:
        return not self.letters

    def exponent_sums(self) -> list[int]:
        sums = [0] * self.rank
        for a in self.letters:
            sums[abs(a) - 1] += 1 if a > 0 else -1
        return sums


def multiply(a: Word, b: Word) -> Word:
    if a.rank != b.rank:
        raise RankError(f"rank mismatch: {a.rank} vs {b.rank}")
    x, y = a.letters, b.letters
    # only the junction can cancel
    k = 0
    m = min(len(x), len(y))
    while k < m and x[-1 - k] == -y[k]:
        k += 1
    return Word(a.rank, x[: len(x) - k] + y[k:])


def invert(a: Word) -> Word:
    return a.inverse()


def commutator(a: Word, b: Word) -> Word:
    """[a, b] = a^-1 b^-1 a b."""
    return Word.reduce(a.rank, a.inverse().letters + b.inverse().letters + a.letters + b.letters)
