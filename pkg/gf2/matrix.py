from functools import lru_cache
from typing import Iterator, List, Sequence, Tuple

from errors import ContractViolation
from gf2.vectors import rank_of_words, set_bits


class BitMatrix:
    """Dense matrix over F2. Row i is an int whose bit j is entry (i, j)."""

    __slots__ = ("rows", "cols")

    def __init__(self, rows: Sequence[int], cols: int):
        mask = (1 << cols) - 1
        for row in rows:
            if row < 0 or row & ~mask:
                raise ContractViolation(f"row {row:#x} does not fit in {cols} columns")
        self.rows: Tuple[int, ...] = tuple(rows)
        self.cols = cols

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), self.cols

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls([1 << i for i in range(n)], n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls([0] * rows, cols)

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]]) -> "BitMatrix":
        cols = len(entries[0]) if entries else 0
        rows = []
        for line in entries:
            if len(line) != cols:
                raise ContractViolation("ragged matrix rows")
            rows.append(sum((value & 1) << j for j, value in enumerate(line)))
        return cls(rows, cols)

    @classmethod
    def from_int(cls, code: int, rows: int, cols: int) -> "BitMatrix":
        """Inverse of `encode`: entry (i, j) is bit i*cols + j."""
        mask = (1 << cols) - 1
        return cls([(code >> (i * cols)) & mask for i in range(rows)], cols)

    def encode(self) -> int:
        code = 0
        for i, row in enumerate(self.rows):
            code |= row << (i * self.cols)
        return code

    def to_lists(self) -> List[List[int]]:
        return [[(row >> j) & 1 for j in range(self.cols)] for row in self.rows]

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        return mat_mul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.cols == other.cols and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.rows, self.cols))

    def __repr__(self) -> str:
        return f"BitMatrix({self.to_lists()})"

    def transpose(self) -> "BitMatrix":
        return transpose(self)

    def rank(self) -> int:
        return rank_of_words(self.rows)

    def is_invertible(self) -> bool:
        return is_invertible(self)

    def inverse(self) -> "BitMatrix":
        return inverse(self)


def mat_mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.cols != b.n_rows:
        raise ContractViolation(f"cannot multiply {a.shape} by {b.shape}")
    rows = []
    for row in a.rows:
        acc = 0
        for j in set_bits(row):
            acc ^= b.rows[j]
        rows.append(acc)
    return BitMatrix(rows, b.cols)


def transpose(m: BitMatrix) -> BitMatrix:
    rows = [0] * m.cols
    for i, row in enumerate(m.rows):
        for j in set_bits(row):
            rows[j] |= 1 << i
    return BitMatrix(rows, m.n_rows)


def rank(m: BitMatrix) -> int:
    return rank_of_words(m.rows)


def is_invertible(m: BitMatrix) -> bool:
    if m.n_rows != m.cols:
        raise ContractViolation(f"is_invertible needs a square matrix, got {m.shape}")
    return rank_of_words(m.rows) == m.cols


def inverse(m: BitMatrix) -> BitMatrix:
    """Gauss-Jordan on [M | I]."""
    n = m.cols
    if m.n_rows != n:
        raise ContractViolation(f"inverse needs a square matrix, got {m.shape}")
    work = [row | (1 << (n + i)) for i, row in enumerate(m.rows)]
    for col in range(n):
        pick = next((r for r in range(col, n) if (work[r] >> col) & 1), None)
        if pick is None:
            raise ContractViolation("matrix is singular")
        work[col], work[pick] = work[pick], work[col]
        for r in range(n):
            if r != col and (work[r] >> col) & 1:
                work[r] ^= work[col]
    return BitMatrix([row >> n for row in work], n)


def gl_order(n: int) -> int:
    """|GL(n, F2)| = prod_{k<n} (2^n - 2^k)."""
    order = 1
    for k in range(n):
        order *= (1 << n) - (1 << k)
    return order


@lru_cache(maxsize=None)
def _gl_elements(n: int) -> Tuple[BitMatrix, ...]:
    elements = []
    for code in range(1 << (n * n)):
        candidate = BitMatrix.from_int(code, n, n)
        if rank_of_words(candidate.rows) == n:
            elements.append(candidate)
    return tuple(elements)


def enumerate_gl(n: int) -> Iterator[BitMatrix]:
    """Every invertible n x n matrix once, by ascending row-major encoding."""
    if not 1 <= n <= 4:
        raise ContractViolation(f"GL enumeration supports 1 <= n <= 4, got {n}")
    return iter(_gl_elements(n))


def group_sequence(n: int) -> Tuple[BitMatrix, ...]:
    """GL(n) with the identity moved to the front, rest in `enumerate_gl` order."""
    elements = tuple(enumerate_gl(n))
    identity = BitMatrix.identity(n)
    return (identity,) + tuple(g for g in elements if g != identity)
