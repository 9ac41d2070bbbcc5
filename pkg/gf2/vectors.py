from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Sequence, Tuple, Union

from errors import ContractViolation


@dataclass(frozen=True)
class BitVector:
    """A vector over F2 packed into an int; bit k is coordinate k."""

    width: int
    bits: int = 0

    def __post_init__(self):
        if self.width < 0:
            raise ContractViolation(f"negative width {self.width}")
        if self.bits < 0 or self.bits >> self.width:
            raise ContractViolation(
                f"bits {self.bits:#x} do not fit in width {self.width}"
            )

    @classmethod
    def from_indices(cls, width: int, indices: Iterable[int]) -> "BitVector":
        bits = 0
        for index in indices:
            bits ^= 1 << index
        return cls(width, bits)

    def indices(self) -> List[int]:
        return set_bits(self.bits)

    def __xor__(self, other: "BitVector") -> "BitVector":
        if other.width != self.width:
            raise ContractViolation(f"width mismatch {self.width} != {other.width}")
        return BitVector(self.width, self.bits ^ other.bits)

    def __bool__(self) -> bool:
        return self.bits != 0


def pivot(word: int) -> int:
    """Largest set bit of a word; -1 for zero."""
    return word.bit_length() - 1


def set_bits(word: int) -> List[int]:
    out = []
    while word:
        low = word & -word
        out.append(low.bit_length() - 1)
        word ^= low
    return out


def popcount(word: int) -> int:
    return bin(word).count("1")


def reduce_word(word: int, basis: Sequence[int]) -> int:
    """Reduce a word against an RREF basis (rows in descending pivot order)."""
    for row in basis:
        if (word >> (row.bit_length() - 1)) & 1:
            word ^= row
    return word


def _rref_words(words: Iterable[int]) -> Tuple[List[int], FrozenSet[int]]:
    rows: List[int] = []
    for word in words:
        for row in rows:
            if (word >> (row.bit_length() - 1)) & 1:
                word ^= row
        if not word:
            continue
        top = 1 << (word.bit_length() - 1)
        rows = [row ^ word if row & top else row for row in rows]
        rows.append(word)
    rows.sort(reverse=True)
    return rows, frozenset(row.bit_length() - 1 for row in rows)


def rref(basis: Iterable[Union[int, BitVector]]) -> Tuple[list, FrozenSet[int]]:
    """Reduced row echelon form of the span of `basis`.

    Rows are `BitVector`s of one width or plain ints packed the same way (bit k
    is coordinate k); the result has the same kind as the input. The pivot of a
    row is its largest set bit. Every pivot column is zero in all other rows,
    rows are sorted by pivot descending and zero rows are dropped, which makes
    the result unique for the span.
    """
    items = list(basis)
    if not items or not isinstance(items[0], BitVector):
        return _rref_words(items)
    width = items[0].width
    if any(not isinstance(v, BitVector) or v.width != width for v in items):
        raise ContractViolation("rref needs vectors of one width")
    rows, pivots = _rref_words(v.bits for v in items)
    return [BitVector(width, row) for row in rows], pivots


def rank_of_words(words: Iterable[int]) -> int:
    """Dimension of the span; plain elimination, no back-substitution."""
    pivots = {}
    rank = 0
    for word in words:
        while word:
            top = word.bit_length() - 1
            row = pivots.get(top)
            if row is None:
                pivots[top] = word
                rank += 1
                break
            word ^= row
    return rank


def in_span(word: int, basis: Sequence[int]) -> bool:
    return reduce_word(word, basis) == 0
