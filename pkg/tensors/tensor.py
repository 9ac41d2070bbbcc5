"""Trilinear tensors over F2 and restricted matrix-multiplication tensors."""

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from errors import ContractViolation
from gf2 import BitMatrix, BitVector
from gf2.vectors import rank_of_words, set_bits
from orbits.restriction import RestrictionSet, format_functional


class Bipartition(enum.Enum):
    AB_C = "AB|C"
    BC_A = "BC|A"
    CA_B = "CA|B"


Labels = Tuple[Tuple[str, ...], Tuple[str, ...], Tuple[str, ...]]


@dataclass(frozen=True)
class Tensor3:
    """Tensor in F2^dA x F2^dB x F2^dC held as dC slices of dA x dB matrices."""

    dA: int
    dB: int
    dC: int
    slices: Tuple[BitMatrix, ...]
    labels: Optional[Labels] = None

    def __post_init__(self):
        if len(self.slices) != self.dC:
            raise ContractViolation(f"expected {self.dC} slices, got {len(self.slices)}")
        for matrix in self.slices:
            if matrix.shape != (self.dA, self.dB):
                raise ContractViolation(f"slice shape {matrix.shape} != {(self.dA, self.dB)}")

    @classmethod
    def zeros(cls, dA: int, dB: int, dC: int) -> "Tensor3":
        return cls(dA, dB, dC, tuple(BitMatrix.zeros(dA, dB) for _ in range(dC)))

    @classmethod
    def from_cells(cls, dA: int, dB: int, dC: int, cells: Iterable[Tuple[int, int, int]]) -> "Tensor3":
        """Tensor with a 1 at each listed (a, b, c); repeated cells cancel."""
        rows = [[0] * dA for _ in range(dC)]
        for a, b, c in cells:
            if not (0 <= a < dA and 0 <= b < dB and 0 <= c < dC):
                raise ContractViolation(f"cell {(a, b, c)} outside {dA}x{dB}x{dC}")
            rows[c][a] ^= 1 << b
        return cls(dA, dB, dC, tuple(BitMatrix(r, dB) for r in rows))

    @property
    def shape(self) -> Tuple[int, int, int]:
        return self.dA, self.dB, self.dC

    def cells(self) -> Iterator[Tuple[int, int, int]]:
        for c, matrix in enumerate(self.slices):
            for a, row in enumerate(matrix.rows):
                for b in set_bits(row):
                    yield a, b, c

    def cell_count(self) -> int:
        return sum(1 for _ in self.cells())

    def is_zero(self) -> bool:
        return not any(any(matrix.rows) for matrix in self.slices)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor3):
            return NotImplemented
        return self.shape == other.shape and self.slices == other.slices

    def __hash__(self) -> int:
        return hash((self.shape, self.slices))

    def describe(self) -> str:
        if self.labels is None:
            names = (
                tuple(f"a{i}" for i in range(self.dA)),
                tuple(f"b{i}" for i in range(self.dB)),
                tuple(f"c{i}" for i in range(self.dC)),
            )
        else:
            names = self.labels
        terms = [f"{names[0][a]}*{names[1][b]}*{names[2][c]}" for a, b, c in self.cells()]
        return " + ".join(terms) if terms else "0"


def unfolding(T: Tensor3, bipartition: Bipartition) -> List[int]:
    """Rows of the flattening matrix, each row packed into an int.

    AB|C: row c, bit a*dB + b. BC|A: row a, bit c*dB + b. CA|B: row b, bit c*dA + a.
    """
    if bipartition is Bipartition.AB_C:
        return [matrix.encode() for matrix in T.slices]
    if bipartition is Bipartition.BC_A:
        rows = [0] * T.dA
        for c, matrix in enumerate(T.slices):
            for a, row in enumerate(matrix.rows):
                rows[a] |= row << (c * T.dB)
        return rows
    rows = [0] * T.dB
    for c, matrix in enumerate(T.slices):
        for b, column in enumerate(matrix.transpose().rows):
            rows[b] |= column << (c * T.dA)
    return rows


def unfoldings(T: Tensor3) -> Tuple[List[int], List[int], List[int]]:
    return tuple(unfolding(T, part) for part in Bipartition)


def flattening_rank(T: Tensor3, bipartition: Bipartition) -> int:
    return rank_of_words(unfolding(T, bipartition))


def rotate(T: Tensor3, shift: int) -> Tensor3:
    """Cyclic shift of the factors; one step maps (A, B, C) to (C, A, B)."""
    if shift not in (0, 1, 2):
        raise ContractViolation(f"shift must be 0, 1 or 2, got {shift}")
    for _ in range(shift):
        # the new slice b has rows c and columns a
        rows = [[0] * T.dC for _ in range(T.dB)]
        for a, b, c in T.cells():
            rows[b][c] |= 1 << a
        labels = None if T.labels is None else (T.labels[2], T.labels[0], T.labels[1])
        T = Tensor3(T.dC, T.dA, T.dB, tuple(BitMatrix(r, T.dA) for r in rows), labels)
    return T


def c_slices(T: Tensor3) -> List[Tuple[int, BitMatrix]]:
    return [(c, matrix) for c, matrix in enumerate(T.slices) if any(matrix.rows)]


def add_rank_one(T: Tensor3, u: BitVector, v: BitVector, w: BitVector) -> Tensor3:
    """T + u (x) v (x) w over F2."""
    if (u.width, v.width, w.width) != T.shape:
        raise ContractViolation(f"rank-one widths {(u.width, v.width, w.width)} != {T.shape}")
    if not (u and v and w):
        return T
    slices = list(T.slices)
    for c in w.indices():
        rows = list(slices[c].rows)
        for a in u.indices():
            rows[a] ^= v.bits
        slices[c] = BitMatrix(rows, T.dB)
    return Tensor3(T.dA, T.dB, T.dC, tuple(slices), T.labels)


def rank_one_factors(matrix: BitMatrix) -> Tuple[int, int]:
    """(u, v) with matrix = u v^T, for a rank-one matrix."""
    nonzero = [row for row in matrix.rows if row]
    if not nonzero or any(row != nonzero[0] for row in nonzero):
        raise ContractViolation("matrix is not rank one")
    u = sum(1 << a for a, row in enumerate(matrix.rows) if row)
    return u, nonzero[0]


def _variable_expressions(s: RestrictionSet) -> Tuple[Tuple[int, ...], List[int]]:
    """Free bits, and for every variable bit its value as a mask over free-variable indices."""
    free = s.free_bits
    index = {bit: k for k, bit in enumerate(free)}
    expressions = [0] * s.width
    for bit, k in index.items():
        expressions[bit] = 1 << k
    for row in s.basis:
        top = row.bit_length() - 1
        expressions[top] = sum(1 << index[bit] for bit in set_bits(row) if bit != top)
    return free, expressions


def build_restricted_tensor(l: int, m: int, n: int, s: RestrictionSet) -> Tensor3:
    """Sum of a_ij (x) b_jk (x) c_ki with the first matrix confined by `s`.

    The A basis is the free (non-pivot) variables in ascending bit order; B is
    indexed by j*n + k and C by k*l + i.
    """
    if (s.l, s.m) != (l, m):
        raise ContractViolation(f"{s.l}x{s.m} restrictions for a <{l},{m},{n}> tensor")
    free, expressions = _variable_expressions(s)
    dA, dB, dC = len(free), m * n, n * l
    rows = [[0] * dA for _ in range(dC)]
    for i in range(l):
        for j in range(m):
            for a in set_bits(expressions[i * m + j]):
                for k in range(n):
                    rows[k * l + i][a] ^= 1 << (j * n + k)
    labels = (
        tuple(format_functional(1 << bit, l, m) for bit in free),
        tuple(f"b_{{{j},{k}}}" for j in range(m) for k in range(n)),
        tuple(f"c_{{{k},{i}}}" for k in range(n) for i in range(l)),
    )
    return Tensor3(dA, dB, dC, tuple(BitMatrix(r, dB) for r in rows), labels)


def matmul_tensor(l: int, m: int, n: int) -> Tensor3:
    return build_restricted_tensor(l, m, n, RestrictionSet(l, m, ()))
