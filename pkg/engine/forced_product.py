"""Forced-product bound: strip independent single products, branch on their unknown outputs.

For a rotation of T, the nonzero C-slices are the t computed expressions. Slices
of rank one are single products; a greedily chosen independent set of s of them
may be assumed computed verbatim by an optimal algorithm. Removing them leaves
s(t-s) unknown output coefficients, and every assignment yields a residual whose
flattening bound, plus s, bounds the rank of T.
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

from engine.techniques import bound_flattening
from gf2 import BitMatrix
from gf2.vectors import rank_of_words
from tensors import Bipartition, Tensor3, c_slices, rotate, unfolding

EVALUATED = "evaluated"
EARLY_EXIT = "early-exit"
SKIPPED_CAP = "skipped-cap"
NO_RANK_ONE = "no-rank-one"


@dataclass(frozen=True)
class ForcedProductRun:
    perm: int
    s: int
    t: int
    assignments: int
    bound: Optional[int]
    status: str
    evaluated: int = 0

    @property
    def skipped(self) -> bool:
        return self.bound is None


def select_single_products(T: Tensor3) -> Tuple[List[int], List[int]]:
    """C-indices of the chosen rank-one slices and of the remaining nonzero slices."""
    pivots = {}
    selected, others = [], []
    for c, matrix in c_slices(T):
        word = matrix.encode()
        if matrix.rank() == 1:
            reduced = word
            while reduced:
                top = reduced.bit_length() - 1
                if top not in pivots:
                    break
                reduced ^= pivots[top]
            if reduced:
                pivots[reduced.bit_length() - 1] = reduced
                selected.append(c)
                continue
        others.append(c)
    return selected, others


def _slice_deltas(T: Tensor3, source: int, target: int) -> List[List[Tuple[int, int]]]:
    """Row updates of each unfolding when slice `source` is added into slice `target`."""
    matrix = T.slices[source]
    ab_c = [(target, matrix.encode())]
    bc_a = [(a, row << (target * T.dB)) for a, row in enumerate(matrix.rows) if row]
    ca_b = [(b, col << (target * T.dA)) for b, col in enumerate(matrix.transpose().rows) if col]
    return [ab_c, bc_a, ca_b]


def _residual_base(T: Tensor3, selected: List[int]) -> Tensor3:
    slices = list(T.slices)
    for c in selected:
        slices[c] = BitMatrix.zeros(T.dA, T.dB)
    return Tensor3(T.dA, T.dB, T.dC, tuple(slices))


def _bounded_max_rank(rows: List[List[int]], stop_at: int) -> int:
    """Max rank over the unfoldings, returning early once it reaches `stop_at`."""
    best = 0
    for matrix in rows:
        best = max(best, rank_of_words(matrix))
        if best >= stop_at:
            break
    return best


def forced_product_rotation(T: Tensor3, perm: int, cap: int, beat: int = -1) -> ForcedProductRun:
    """Evaluate one rotation of T.

    `T` is the unrotated tensor. Enumeration stops once the rotation cannot
    exceed `beat`; the reported bound then is at most `beat`.
    """
    R = rotate(T, perm)
    selected, others = select_single_products(R)
    s, t = len(selected), len(selected) + len(others)
    if s == 0:
        return ForcedProductRun(perm, 0, t, 0, None, NO_RANK_ONE)
    unknowns = s * (t - s)
    if unknowns >= cap:
        return ForcedProductRun(perm, s, t, 1 << unknowns, None, SKIPPED_CAP)

    base = _residual_base(R, selected)
    state = [unfolding(base, part) for part in Bipartition]
    deltas = [_slice_deltas(R, k, j) for k in selected for j in others]
    total = 1 << unknowns
    # Gray code: step g flips the unknown at the lowest set bit of g
    best = _bounded_max_rank(state, R.dA * R.dB * R.dC + 1)
    evaluated = 1
    status = EVALUATED
    for g in range(1, total):
        if s + best <= beat:
            status = EARLY_EXIT
            break
        flip = (g & -g).bit_length() - 1
        for matrix, updates in zip(state, deltas[flip]):
            for row, xor in updates:
                matrix[row] ^= xor
        best = min(best, _bounded_max_rank(state, best))
        evaluated += 1
    return ForcedProductRun(perm, s, t, total, s + best, status, evaluated)


def forced_product_runs(T: Tensor3, cap: int) -> Tuple[int, Optional[int], List[ForcedProductRun]]:
    """(bound, best_perm, per-rotation runs); best_perm is None when plain flattening wins."""
    best, best_perm = bound_flattening(T), None
    runs = []
    for perm in range(3):
        run = forced_product_rotation(T, perm, cap, beat=best)
        runs.append(run)
        if run.bound is not None and run.bound > best:
            best, best_perm = run.bound, perm
    return best, best_perm, runs


def bound_forced_product(T: Tensor3, config) -> Tuple[int, Optional[int]]:
    best, best_perm, _ = forced_product_runs(T, config.fp_bit_cap)
    return best, best_perm
