"""Words in the free monoid on n generators.

A word is a tuple of 1-based letters; the empty tuple is the unit.  Words are
ordered degree first, then lexicographically, which makes every degree
truncation a prefix of the ordered basis.
"""
from .errors import CapExceeded, InputError

EMPTY = ()
DEFAULT_WORD_CAP = 10**7


def validate(u, n=None):
    u = tuple(int(a) for a in u)
    for a in u:
        if a < 1 or (n is not None and a > n):
            raise InputError(f"letter {a} out of range 1..{n}")
    return u


def length(u):
    return len(u)


def concat(u, v):
    return tuple(u) + tuple(v)


def reverse(u):
    return tuple(reversed(u))


def count_words(n, d):
    """Number of words of length at most d."""
    if n == 1:
        return d + 1
    return (n ** (d + 1) - 1) // (n - 1)


def level_offset(n, k):
    """Index of the first word of length k in the graded order."""
    return count_words(n, k - 1) if k > 0 else 0


def rank(u, n):
    """Position of u among the words of its own length."""
    r = 0
    for a in u:
        r = r * n + (a - 1)
    return r


def index(u, n):
    """Position of u in the graded order."""
    return level_offset(n, len(u)) + rank(u, n)


def unrank(r, k, n):
    """Inverse of rank for words of length k."""
    letters = []
    for _ in range(k):
        r, a = divmod(r, n)
        letters.append(a + 1)
    return tuple(reversed(letters))


def words_of_length(n, k):
    return [unrank(r, k, n) for r in range(n**k)]


def enumerate_words(n, d, cap=DEFAULT_WORD_CAP):
    """All words of length <= d in graded order, plus the inverse index map."""
    if n < 1 or d < 0:
        raise InputError("need n >= 1 and d >= 0")
    total = count_words(n, d)
    if total > cap:
        raise CapExceeded(f"{total} words exceed cap {cap}")
    out = []
    for k in range(d + 1):
        out.extend(words_of_length(n, k))
    return out, {w: i for i, w in enumerate(out)}


def to_json(u):
    return list(u)


def from_json(obj, n=None):
    if not isinstance(obj, list):
        raise InputError("word must be a JSON array")
    return validate(obj, n)
