"""Words over a finite alphabet: the free semigroup with unit.

A word is a tuple of 1-based generator indices; the empty tuple is the
unit.  Every block-matrix index in this package uses the same canonical
order on words: graded lexicographic (shorter words first, ties broken by
the letter sequence), so that all words of equal length sit in one
contiguous slice.
"""

from __future__ import annotations

import itertools

Word = tuple[int, ...]
MultiDegree = tuple[int, ...]

EMPTY: Word = ()


def check_letters(w: Word, arity: int) -> None:
    """Raise ValueError if any letter of ``w`` falls outside 1..arity."""
    for a in w:
        if not 1 <= a <= arity:
            raise ValueError(f"letter {a} out of range for alphabet of size {arity}")


def concat(w: Word, v: Word) -> Word:
    return w + v


def transpose(w: Word) -> Word:
    """Reverse the letter sequence of ``w``."""
    return w[::-1]


def abelianize(w: Word, arity: int) -> MultiDegree:
    """Occurrence counts of each generator in ``w``, as an arity-tuple."""
    counts = [0] * arity
    for a in w:
        if not 1 <= a <= arity:
            raise ValueError(f"letter {a} out of range for alphabet of size {arity}")
        counts[a - 1] += 1
    return tuple(counts)


def sort_key(w: Word) -> tuple[int, Word]:
    """Key realizing the canonical graded-lex order."""
    return (len(w), w)


def word_count(arity: int, max_len: int) -> int:
    """Number of words of length <= max_len, i.e. sum of arity**j."""
    return sum(arity**j for j in range(max_len + 1))


def enumerate_words(arity: int, max_len: int) -> list[Word]:
    """All words of length <= max_len, in canonical graded-lex order.

    This list is the index for every Gram and block-evaluation matrix.
    """
    if arity < 1:
        raise ValueError("alphabet must have at least one letter")
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    out: list[Word] = []
    for j in range(max_len + 1):
        out.extend(itertools.product(range(1, arity + 1), repeat=j))
    return out


def word_positions(arity: int, max_len: int) -> dict[Word, int]:
    """Word -> position map for the canonical order."""
    return {w: i for i, w in enumerate(enumerate_words(arity, max_len))}


def enumerate_multidegrees(arity: int, max_total: int) -> list[MultiDegree]:
    """All multidegrees with total <= max_total, ordered by (total, tuple)."""
    degs = [
        t
        for t in itertools.product(range(max_total + 1), repeat=arity)
        if sum(t) <= max_total
    ]
    degs.sort(key=lambda t: (sum(t), t))
    return degs
