"""Exact rank decisions for tiny F2 tensors by exhaustive search.

View T as the space X spanned by its slices along one factor. T has rank <= r
exactly when X fits inside a space spanned by r rank-one matrices, which
happens iff X can be completed by at most r - dim X rank-one matrices to a
space W that is spanned by the rank-one matrices it contains.
"""

from typing import List, Sequence, Tuple

import numpy as np

from engine.techniques import bound_flattening
from errors import ResourceLimitError
from gf2.vectors import rank_of_words, reduce_word, rref, set_bits
from tensors import Bipartition, Tensor3, unfolding

MAX_SIDE = 4
MAX_RANK = 8


class OracleLimitError(ResourceLimitError):
    """Tensor or rank outside the sizes the exhaustive search supports."""


def _rank_one_words(rows: int, cols: int) -> List[int]:
    words = []
    for u in range(1, 1 << rows):
        for v in range(1, 1 << cols):
            words.append(sum(v << (i * cols) for i in set_bits(u)))
    return words


class _SliceSpace:
    """Slices along one factor, packed as rows x cols matrices."""

    def __init__(self, slices: Sequence[int], rows: int, cols: int):
        self.rows, self.cols = rows, cols
        self.basis, _ = rref(slices)
        self.candidates = sorted(_rank_one_words(rows, cols), reverse=True)
        self.is_rank_one = np.zeros(1 << (rows * cols), dtype=bool)
        self.is_rank_one[self.candidates] = True

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def spanned_by_rank_one(self, basis: List[int]) -> bool:
        elements = [0]
        for word in basis:
            elements += [e ^ word for e in elements]
        picked = [e for e in elements if self.is_rank_one[e]]
        return rank_of_words(picked) == len(basis)

    def completes(self, budget: int) -> bool:
        def search(basis: List[int], start: int, left: int) -> bool:
            if self.spanned_by_rank_one(basis):
                return True
            if left == 0:
                return False
            for index in range(start, len(self.candidates)):
                word = self.candidates[index]
                if reduce_word(word, basis) == 0:
                    continue
                extended, _ = rref(basis + [word])
                if search(extended, index + 1, left - 1):
                    return True
            return False

        return search(list(self.basis), 0, budget)


def _sides(T: Tensor3) -> List[Tuple[List[int], int, int]]:
    return [
        (unfolding(T, Bipartition.AB_C), T.dA, T.dB),
        (unfolding(T, Bipartition.BC_A), T.dC, T.dB),
        (unfolding(T, Bipartition.CA_B), T.dC, T.dA),
    ]


def exhaustive_rank_leq(T: Tensor3, r: int) -> bool:
    """True iff T is a sum of at most r rank-one tensors."""
    if max(T.shape) > MAX_SIDE or r > MAX_RANK:
        raise OracleLimitError(f"oracle supports factors <= {MAX_SIDE} and r <= {MAX_RANK}")
    if r < 0:
        return False
    if r < bound_flattening(T):
        return False
    best = None
    for slices, rows, cols in _sides(T):
        space = _SliceSpace(slices, rows, cols)
        key = (r - space.dimension, len(space.candidates))
        if best is None or key < best[0]:
            best = (key, space)
    (budget, _), space = best
    return space.completes(budget)
