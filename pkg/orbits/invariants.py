"""Orbit invariants: rank distribution of the span and the left/right point profiles.

Used as an optional filter while enumerating orbits and in tests.
"""

from dataclasses import dataclass
from typing import List, Sequence, Tuple

from gf2.vectors import rank_of_words, set_bits
from orbits.restriction import RestrictionSet, word_to_matrix


def _trim(counts: List[int]) -> Tuple[int, ...]:
    while len(counts) > 1 and counts[-1] == 0:
        counts.pop()
    return tuple(counts)


def _span(words: Sequence[int]) -> List[int]:
    span = [0]
    for word in words:
        span += [w ^ word for w in span]
    return span


@dataclass(frozen=True)
class OrbitInvariants:
    rank_distribution: Tuple[int, ...]
    left_profile: Tuple[int, ...]
    right_profile: Tuple[int, ...]

    def signature(self, square: bool) -> tuple:
        if square:
            profiles = tuple(sorted((self.left_profile, self.right_profile)))
            return (self.rank_distribution, profiles)
        return (self.rank_distribution, self.left_profile, self.right_profile)


def _profile(rows_of: List[List[int]], size: int) -> Tuple[int, ...]:
    """rows_of[k][i] is row i of the k-th basis matrix (as an int)."""
    counts = [0] * (len(rows_of) + 1)
    for x in range(1 << size):
        picked = set_bits(x)
        stack = []
        for rows in rows_of:
            acc = 0
            for i in picked:
                acc ^= rows[i]
            stack.append(acc)
        counts[rank_of_words(stack)] += 1
    return _trim(counts)


def orbit_invariants(s: RestrictionSet) -> OrbitInvariants:
    l, m = s.l, s.m
    ranks = [0] * (min(l, m) + 1)
    for word in _span(s.basis):
        ranks[word_to_matrix(word, l, m).rank()] += 1
    matrices = s.matrices()
    left = _profile([list(matrix.rows) for matrix in matrices], l)
    right = _profile([list(matrix.transpose().rows) for matrix in matrices], m)
    return OrbitInvariants(_trim(ranks), left, right)
