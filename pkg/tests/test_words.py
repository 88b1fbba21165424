import pytest
from hypothesis import given, strategies as st

from ncball import words
from ncball.errors import CapExceeded, InputError


def test_concat():
    assert words.concat((), (1, 2)) == (1, 2)
    assert words.concat((1,), (2,)) == (1, 2)
    assert words.length(words.concat((2, 1), (1, 1, 2))) == 5


def test_enumerate_counts():
    ws, idx = words.enumerate_words(2, 1)
    assert ws == [(), (1,), (2,)]
    assert len(words.enumerate_words(2, 2)[0]) == 7
    assert len(words.enumerate_words(3, 2)[0]) == 13
    assert idx[(2,)] == 2


def test_reverse():
    assert words.reverse((1, 2, 2)) == (2, 2, 1)
    assert words.reverse(()) == ()
    assert words.reverse((1,)) == (1,)


def test_graded_order_is_prefix_stable():
    a = words.enumerate_words(3, 2)[0]
    b = words.enumerate_words(3, 3)[0]
    assert b[:len(a)] == a
    assert [len(w) for w in b] == sorted(len(w) for w in b)


def test_cap_and_validation():
    with pytest.raises(CapExceeded):
        words.enumerate_words(2, 30, cap=1000)
    with pytest.raises(InputError):
        words.validate((0, 1))
    with pytest.raises(InputError):
        words.validate((3,), n=2)
    with pytest.raises(InputError):
        words.from_json("12")


@given(st.integers(1, 4), st.lists(st.integers(1, 4), max_size=6))
def test_index_roundtrip(n, letters):
    w = tuple(min(a, n) for a in letters)
    ws, idx = words.enumerate_words(n, len(w))
    assert ws[words.index(w, n)] == w
    assert idx[w] == words.index(w, n)
    assert words.unrank(words.rank(w, n), len(w), n) == w


@given(st.lists(st.integers(1, 3), max_size=5), st.lists(st.integers(1, 3), max_size=5))
def test_reverse_antihomomorphism(u, v):
    u, v = tuple(u), tuple(v)
    assert words.reverse(words.concat(u, v)) == words.concat(words.reverse(v), words.reverse(u))
