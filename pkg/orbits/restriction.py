import re
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Tuple

from errors import ContractViolation
from gf2 import BitMatrix, rref, transpose
from gf2.batch import basis_key, MAX_WORD_BITS
from gf2.vectors import set_bits

_TERM = re.compile(r"^a_?\{?\s*(\d+)\s*[,_]?\s*(\d+)\s*\}?$")


def word_to_matrix(word: int, l: int, m: int) -> BitMatrix:
    """Functional word -> l x m coefficient matrix (a_{i,j} is bit i*m + j)."""
    return BitMatrix.from_int(word, l, m)


def matrix_to_word(matrix: BitMatrix) -> int:
    return matrix.encode()


def format_functional(word: int, l: int, m: int) -> str:
    if not word:
        return "0"
    return "+".join(f"a_{{{bit // m},{bit % m}}}" for bit in set_bits(word))


def parse_functional(text: str, l: int, m: int) -> int:
    """Inverse of `format_functional`; also accepts `a01` and `a_0_1` terms."""
    text = text.replace(" ", "")
    if text == "0":
        return 0
    word = 0
    for term in text.split("+"):
        match = _TERM.match(term)
        if not match:
            raise ContractViolation(f"cannot parse functional term {term!r}")
        i, j = int(match.group(1)), int(match.group(2))
        if i >= l or j >= m:
            raise ContractViolation(f"variable a_{{{i},{j}}} outside a {l}x{m} matrix")
        word ^= 1 << (i * m + j)
    return word


@dataclass(frozen=True)
class RestrictionSet:
    """A subspace of linear functionals on F2^{l x m}, held as its RREF basis."""

    l: int
    m: int
    basis: Tuple[int, ...] = ()
    pivots: FrozenSet[int] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.l * self.m > MAX_WORD_BITS:
            raise ContractViolation(f"{self.l}x{self.m} functionals exceed {MAX_WORD_BITS} bits")
        rows, pivots = rref(self.basis)
        if tuple(rows) != tuple(self.basis):
            raise ContractViolation(f"basis {self.basis} is not in RREF")
        object.__setattr__(self, "pivots", pivots)

    @classmethod
    def from_functionals(cls, l: int, m: int, words: Iterable[int]) -> "RestrictionSet":
        words = list(words)
        limit = 1 << (l * m)
        for word in words:
            if not 0 <= word < limit:
                raise ContractViolation(f"functional {word:#x} does not fit a {l}x{m} matrix")
        rows, _ = rref(words)
        return cls(l, m, tuple(rows))

    @classmethod
    def parse(cls, l: int, m: int, texts: Iterable[str]) -> "RestrictionSet":
        return cls.from_functionals(l, m, [parse_functional(t, l, m) for t in texts])

    @property
    def width(self) -> int:
        return self.l * self.m

    @property
    def codim(self) -> int:
        return len(self.basis)

    @property
    def pivot_mask(self) -> int:
        mask = 0
        for bit in self.pivots:
            mask |= 1 << bit
        return mask

    @property
    def free_bits(self) -> Tuple[int, ...]:
        return tuple(b for b in range(self.width) if b not in self.pivots)

    @property
    def key(self) -> bytes:
        return basis_key(self.basis)

    def is_full(self) -> bool:
        return self.codim == self.width

    def extensions(self) -> List[int]:
        """Every nonzero functional vanishing on the pivot bits, ascending.

        These are the canonical forms of the functionals on the restricted space.
        """
        free = self.free_bits
        words = []
        for mask in range(1, 1 << len(free)):
            word = 0
            for k, bit in enumerate(free):
                if (mask >> k) & 1:
                    word |= 1 << bit
            words.append(word)
        words.sort()
        return words

    def extended(self, words: Iterable[int]) -> "RestrictionSet":
        return RestrictionSet.from_functionals(self.l, self.m, self.basis + tuple(words))

    def matrices(self) -> List[BitMatrix]:
        return [word_to_matrix(word, self.l, self.m) for word in self.basis]

    def complement(self) -> "RestrictionSet":
        """Annihilator of the span under the pairing <x, y> = |x & y| mod 2."""
        vectors = []
        for free in self.free_bits:
            vector = 1 << free
            for row in self.basis:
                if (row >> free) & 1:
                    vector |= 1 << (row.bit_length() - 1)
            vectors.append(vector)
        return RestrictionSet.from_functionals(self.l, self.m, vectors)

    def describe(self) -> str:
        return "{" + ", ".join(format_functional(w, self.l, self.m) for w in self.basis) + "}"


@dataclass(frozen=True)
class SymmetryWitness:
    """Group element (L, R, transposed) acting on functionals as M -> L M R (or L M^T R)."""

    left: BitMatrix
    right: BitMatrix
    transposed: bool = False

    @classmethod
    def identity(cls, l: int, m: int) -> "SymmetryWitness":
        return cls(BitMatrix.identity(l), BitMatrix.identity(m), False)

    def check_shape(self, l: int, m: int):
        if self.left.shape != (l, l) or self.right.shape != (m, m):
            raise ContractViolation(
                f"witness shapes {self.left.shape}, {self.right.shape} do not fit {l}x{m}"
            )
        if self.transposed and l != m:
            raise ContractViolation("transposed witness on a non-square format")

    def is_valid(self, l: int, m: int) -> bool:
        try:
            self.check_shape(l, m)
        except ContractViolation:
            return False
        return self.left.is_invertible() and self.right.is_invertible()

    def apply_word(self, word: int, l: int, m: int) -> int:
        matrix = word_to_matrix(word, l, m)
        if self.transposed:
            matrix = transpose(matrix)
        return matrix_to_word(self.left @ matrix @ self.right)

    def apply(self, words: Iterable[int], l: int, m: int) -> RestrictionSet:
        self.check_shape(l, m)
        return RestrictionSet.from_functionals(l, m, [self.apply_word(w, l, m) for w in words])
