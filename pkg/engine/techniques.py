from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Tuple

from certificates.model import Technique, TechniqueKind
from errors import InvariantViolation
from orbits.catalog import OrbitCatalog
from tensors import Bipartition, Tensor3, flattening_rank


@dataclass(frozen=True)
class BoundEntry:
    """Finalized bound of one orbit and the technique that certifies it."""

    orbit_id: int
    bound: int
    technique: Technique
    steps: int = field(default=0, compare=False)
    seconds: float = field(default=0.0, compare=False)
    details: Tuple[Tuple[str, object], ...] = field(default=(), compare=False)

    @property
    def kind(self) -> TechniqueKind:
        return self.technique.kind


def bound_flattening(T: Tensor3) -> int:
    """Largest rank among the three flattenings."""
    return max(flattening_rank(T, part) for part in Bipartition)


def bound_degenerate(
    orbit_id: int, catalog: OrbitCatalog, table: Mapping[int, int]
) -> Tuple[int, Tuple[int, ...]]:
    """Best bound inherited from a one-functional extension of the orbit.

    Ties keep the smallest functional. Every child must sit in a deeper layer
    whose bound is already in `table`.
    """
    rep = catalog.representative(orbit_id)
    best, added = 0, ()
    for word in rep.extensions():
        child, _ = catalog.canonicalize(rep.extended([word]))
        if catalog.dimension(child) <= rep.codim:
            raise InvariantViolation(
                f"orbit {orbit_id} extension {word:#x} fell into layer {catalog.dimension(child)}"
            )
        bound = table[child]
        if bound > best or not added:
            best, added = bound, (word,)
    return best, added


def pick_technique(candidates: Sequence[Tuple[int, TechniqueKind]]) -> Optional[TechniqueKind]:
    """Cheapest technique reaching the best bound (kinds compare by cost)."""
    if not candidates:
        return None
    best = max(bound for bound, _ in candidates)
    return min(kind for bound, kind in candidates if bound == best)
