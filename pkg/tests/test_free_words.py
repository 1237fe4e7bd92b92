import pytest
from hypothesis import given, strategies as st

from effgen.free_words import Letter, RankError, Word, commutator, free_reduce, invert, multiply

RANK = 4
letters = st.integers(1, RANK).flatmap(lambda i: st.sampled_from((i, -i)))
raw = st.lists(letters, max_size=30)
words = raw.map(lambda r: Word.reduce(RANK, r))


def W(text):
    return Word.parse(RANK, text)


# oracle examples

def test_reduce_examples():
    assert W("x1 x1^-1").is_identity()
    assert W("x1 x2 x2^-1 x1") == W("x1 x1")
    assert Word.reduce(RANK, [-2, 1, 2]).letters == (-2, 1, 2)


def test_reduce_accepts_letter_tuples():
    assert Word.reduce(RANK, [Letter(1, 1), Letter(1, -1)]).is_identity()


def test_multiply_examples():
    assert multiply(W("x1 x2"), W("x2^-1 x3")) == W("x1 x3")
    w = W("x1 x3^-1 x2")
    assert (w * w.inverse()).is_identity()
    assert multiply(W("x1"), W("x1")) == W("x1 x1")


def test_invert_examples():
    assert invert(W("x1 x2")) == W("x2^-1 x1^-1")
    assert invert(W("")).is_identity()
    assert invert(W("x1^-1")) == W("x1")


def test_commutator():
    assert str(commutator(W("x2"), W("x3"))) == "x2^-1 x3^-1 x2 x3"
    assert commutator(W("x1"), W("x1")).is_identity()


def test_errors():
    with pytest.raises(RankError):
        multiply(Word(2, (1,)), Word(3, (1,)))
    with pytest.raises(ValueError):
        Word.reduce(2, [3])
    with pytest.raises(ValueError):
        Word.parse(2, "y1")


def test_parse_print_round_trip():
    text = "x3 x1^-1 x3^-1"
    assert str(W(text)) == text


# properties

@given(raw)
def test_reduce_idempotent(r):
    once = free_reduce(r)
    assert free_reduce(once) == once
    assert all(a != -b for a, b in zip(once, once[1:]))


@given(words, words, words)
def test_multiply_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(words)
def test_invert_involution(a):
    assert invert(invert(a)) == a
    assert (a * invert(a)).is_identity()
    assert (Word(RANK) * a) == a == (a * Word(RANK))


@given(words, words)
def test_length_bound(a, b):
    assert len(a * b) <= len(a) + len(b)
    assert a * b == Word.reduce(RANK, a.letters + b.letters)


@given(words)
def test_round_trip(a):
    assert Word.parse(RANK, str(a)) == a
