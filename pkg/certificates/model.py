"""In-memory form of a proof certificate and of the per-orbit technique payloads."""

import enum
from dataclasses import dataclass
from typing import Tuple, Union

from orbits.restriction import SymmetryWitness

FIELD_F2 = 2


class TechniqueKind(enum.IntEnum):
    FLATTENING = 0
    FORCED_PRODUCT = 1
    DEGENERATE = 2
    SUBSTITUTION = 3

    @property
    def label(self) -> str:
        return self.name.lower().replace("_", "-")


@dataclass(frozen=True)
class Flattening:
    kind = TechniqueKind.FLATTENING


@dataclass(frozen=True)
class ForcedProduct:
    perm: int
    kind = TechniqueKind.FORCED_PRODUCT


@dataclass(frozen=True)
class Degenerate:
    added: Tuple[int, ...]
    kind = TechniqueKind.DEGENERATE


@dataclass(frozen=True)
class SubstitutionRecord:
    """A proved node: `subset` picks positions of the node's component sequence.

    Zeroing the picked components and mapping the result by `witness` lands on the
    representative of `child`.
    """

    depth: int
    subset: int
    witness: SymmetryWitness
    child: int

    @property
    def size(self) -> int:
        return bin(self.subset).count("1")


@dataclass(frozen=True)
class Substitution:
    target: int
    records: Tuple[SubstitutionRecord, ...]
    kind = TechniqueKind.SUBSTITUTION


Technique = Union[Flattening, ForcedProduct, Degenerate, Substitution]


@dataclass(frozen=True)
class CertificateHeader:
    l: int
    m: int
    n: int
    square: bool
    final_bound: int
    step_limit: int
    fp_bit_cap: int
    field: int = FIELD_F2

    @property
    def format(self) -> str:
        return f"<{self.l},{self.m},{self.n}>"


@dataclass(frozen=True)
class OrbitRecord:
    dimension: int
    basis: Tuple[int, ...]
    bound: int
    technique: Technique


@dataclass(frozen=True)
class Certificate:
    header: CertificateHeader
    layer_counts: Tuple[int, ...]
    orbits: Tuple[OrbitRecord, ...]

    @property
    def final_bound(self) -> int:
        return self.header.final_bound

    def bounds(self) -> Tuple[int, ...]:
        return tuple(record.bound for record in self.orbits)
