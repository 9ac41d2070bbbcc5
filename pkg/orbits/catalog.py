"""Orbit catalog: enumeration of restriction-subspace orbits and canonical lookup.

The group acting on restriction sets is GL_l x GL_m (times the transpose when the
format is square). The lookup index maps the RREF of every right-normalized form
{Rep R} of every representative to its orbit; a set is canonicalized by probing
the RREF of its left-normalized forms {L M} (and {L M^T}) against that index.
"""

import time
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from errors import InvariantViolation, ContractViolation, ResourceLimitError
from gf2 import BitMatrix, group_sequence
from gf2.batch import apply_images, batch_keys, batch_rref, MAX_WORD_BITS
from logger import logger, progress_disabled
from orbits.counting import layer_count_lower_bound
from orbits.invariants import orbit_invariants
from orbits.restriction import RestrictionSet, SymmetryWitness
from orbits.sharded import DEFAULT_SHARDS, ShardedMap

# Rough per-entry cost of the lookup index: key bytes plus dict and int overhead.
ENTRY_OVERHEAD_BYTES = 120
CANDIDATE_CHUNK = 256
ORBIT_SHIFT = 16


class CatalogBudgetError(ResourceLimitError):
    """The lookup index would outgrow the configured memory budget."""


def _right_images(group: Sequence[BitMatrix], l: int, m: int) -> np.ndarray:
    # bit i*m+j is E_ij; E_ij R has row i equal to row j of R
    images = np.zeros((len(group), l * m), dtype=np.int64)
    for g, right in enumerate(group):
        for i in range(l):
            for j in range(m):
                images[g, i * m + j] = right.rows[j] << (i * m)
    return images


def _left_images(group: Sequence[BitMatrix], l: int, m: int, transposed: bool) -> np.ndarray:
    # L E_ij has column j equal to column i of L; with the transpose E_ij becomes E_ji
    images = np.zeros((len(group), l * m), dtype=np.int64)
    for g, left in enumerate(group):
        for i in range(l):
            for j in range(m):
                src, dst = (j, i) if transposed else (i, j)
                word = 0
                for a in range(l):
                    if (left.rows[a] >> src) & 1:
                        word |= 1 << (a * m + dst)
                images[g, i * m + j] = word
    return images


class OrbitCatalog:
    """Per-dimension orbit representatives plus the canonical lookup index.

    Orbit ids are assigned in enumeration order: the empty restriction set is
    orbit 0 and ids grow with the number of restrictions.
    """

    def __init__(
        self,
        l: int,
        m: int,
        square: bool,
        shard_count: int = DEFAULT_SHARDS,
        memory_budget: Optional[int] = None,
    ):
        if not (2 <= l <= 4 and 2 <= m <= 4):
            raise ContractViolation(f"unsupported format {l}x{m}; need 2 <= l, m <= 4")
        if l * m > MAX_WORD_BITS:
            raise ContractViolation(f"{l}x{m} functionals exceed {MAX_WORD_BITS} bits")
        if square and l != m:
            raise ContractViolation("a square catalog needs l == m")
        self.l = l
        self.m = m
        self.square = square
        self.memory_budget = memory_budget
        self.representatives: List[RestrictionSet] = []
        self.layers: Dict[int, List[int]] = {d: [] for d in range(l * m + 1)}
        self._dimension: List[int] = []
        self._lookup: ShardedMap[bytes, int] = ShardedMap(shard_count)
        self._lookup_bytes = 0
        self._left_group = group_sequence(l)
        self._right_group = group_sequence(m)
        self._right_inverses: Dict[int, BitMatrix] = {}
        left = [_left_images(self._left_group, l, m, False)]
        if square:
            left.append(_left_images(self._left_group, l, m, True))
        self._left = np.concatenate(left)
        self._right = _right_images(self._right_group, l, m)

    @property
    def width(self) -> int:
        return self.l * self.m

    def __len__(self) -> int:
        return len(self.representatives)

    def representative(self, orbit_id: int) -> RestrictionSet:
        return self.representatives[orbit_id]

    def dimension(self, orbit_id: int) -> int:
        return self._dimension[orbit_id]

    def layer(self, d: int) -> List[int]:
        return list(self.layers.get(d, []))

    def counts_by_dimension(self) -> List[int]:
        return [len(self.layers[d]) for d in range(self.width + 1)]

    @property
    def lookup_size(self) -> int:
        return len(self._lookup)

    def _register(self, basis: Tuple[int, ...]) -> int:
        orbit_id = len(self.representatives)
        rep = RestrictionSet(self.l, self.m, basis)
        forms = batch_rref(apply_images(self._right, basis), self.width)
        added = 0
        for r_index, key in enumerate(batch_keys(forms)):
            inserted, _ = self._lookup.insert_if_absent(key, (orbit_id << ORBIT_SHIFT) | r_index)
            if inserted:
                added += len(key) + ENTRY_OVERHEAD_BYTES
        self._lookup_bytes += added
        if self.memory_budget is not None and self._lookup_bytes > self.memory_budget:
            raise CatalogBudgetError(
                f"orbit lookup needs ~{self._lookup_bytes} bytes, budget is {self.memory_budget}"
            )
        self.representatives.append(rep)
        self._dimension.append(len(basis))
        self.layers[len(basis)].append(orbit_id)
        return orbit_id

    def _left_keys(self, bases: np.ndarray) -> List[List[bytes]]:
        """Keys of every left-normalized form, per basis, in lookup order."""
        count, depth = bases.shape
        group = self._left.shape[0]
        if depth == 0:
            return [[b""] * group for _ in range(count)]
        rows = np.empty((count, group, depth), dtype=np.int64)
        for k in range(depth):
            column = bases[:, k]
            out = np.zeros((count, group), dtype=np.int64)
            for bit in range(self.width):
                hit = ((column >> bit) & 1).astype(bool)
                if hit.any():
                    out[hit] ^= self._left[:, bit]
            rows[:, :, k] = out
        keys = batch_keys(batch_rref(rows.reshape(count * group, depth), self.width))
        return [keys[i * group:(i + 1) * group] for i in range(count)]

    def _match(self, keys: List[bytes]) -> Tuple[int, int, int]:
        position, value = self._lookup.first_hit(keys)
        if position < 0:
            return -1, -1, -1
        return value >> ORBIT_SHIFT, position, value & ((1 << ORBIT_SHIFT) - 1)

    def _witness(self, position: int, r_index: int) -> SymmetryWitness:
        base = len(self._left_group)
        inverse = self._right_inverses.get(r_index)
        if inverse is None:
            inverse = self._right_group[r_index].inverse()
            self._right_inverses[r_index] = inverse
        return SymmetryWitness(self._left_group[position % base], inverse, position >= base)

    def find(self, s: RestrictionSet) -> Optional[Tuple[int, SymmetryWitness]]:
        self._check_format(s)
        bases = np.array([s.basis], dtype=np.int64).reshape(1, s.codim)
        orbit_id, position, r_index = self._match(self._left_keys(bases)[0])
        if orbit_id < 0:
            return None
        return orbit_id, self._witness(position, r_index)

    def canonicalize(self, s: RestrictionSet) -> Tuple[int, SymmetryWitness]:
        """Orbit id of `s` and a witness g with RREF(g . s) equal to its representative."""
        found = self.find(s)
        if found is None:
            raise InvariantViolation(f"no orbit matches {s.describe()}; catalog incomplete")
        return found

    def orbit_of(self, s: RestrictionSet) -> int:
        return self.canonicalize(s)[0]

    def _check_format(self, s: RestrictionSet):
        if (s.l, s.m) != (self.l, self.m):
            raise ContractViolation(f"{s.l}x{s.m} restriction set on a {self.l}x{self.m} catalog")

    def _extend(self, orbit_id: int, use_invariants: bool, signatures: set) -> int:
        rep = self.representatives[orbit_id]
        candidates = rep.extensions()
        found = 0
        for start in range(0, len(candidates), CANDIDATE_CHUNK):
            chunk = candidates[start:start + CANDIDATE_CHUNK]
            extended = [rep.extended([word]).basis for word in chunk]
            bases = np.array(extended, dtype=np.int64).reshape(len(chunk), rep.codim + 1)
            keys = self._left_keys(bases)
            for basis, key in zip(extended, keys):
                if use_invariants:
                    signature = orbit_invariants(
                        RestrictionSet(self.l, self.m, basis)
                    ).signature(self.square)
                    if signature not in signatures:
                        signatures.add(signature)
                        self._register(basis)
                        found += 1
                        continue
                if self._match(key)[0] < 0:
                    self._register(basis)
                    found += 1
        return found

    def enumerate(self, use_invariants: bool = False):
        """Fill the catalog layer by layer, extending each representative by one functional."""
        if self.representatives:
            raise ContractViolation("catalog already enumerated")
        self._register(())
        started = time.monotonic()
        bar = tqdm(total=self.width, desc=f"orbits {self.l}x{self.m}", disable=progress_disabled())
        with bar as progress_bar:
            for d in range(self.width):
                signatures: set = set()
                for orbit_id in list(self.layers[d]):
                    self._extend(orbit_id, use_invariants, signatures)
                logger.info(
                    "catalog layer finished",
                    extra={
                        "dimension": d + 1,
                        "orbits": len(self.layers[d + 1]),
                        "visited": len(self._lookup),
                    },
                )
                progress_bar.update(1)
        logger.info(
            "catalog complete",
            extra={
                "format": f"{self.l}x{self.m}",
                "square": self.square,
                "orbits": len(self),
                "seconds": round(time.monotonic() - started, 3),
            },
        )
        return self

    def check_layers(self):
        """Layer structure every complete catalog has; raises ContractViolation otherwise."""
        if not self.representatives or self.representatives[0].basis != ():
            raise ContractViolation("orbit 0 must be the empty restriction set")
        if self._dimension != sorted(self._dimension):
            raise ContractViolation("orbits are not ordered by layer")
        counts = self.counts_by_dimension()
        if counts != counts[::-1]:
            raise ContractViolation(f"layer counts {counts} break the d <-> lm-d duality")
        for d, count in enumerate(counts):
            least = layer_count_lower_bound(self.l, self.m, self.square, d)
            if count < least:
                raise ContractViolation(f"layer {d} holds {count} orbits, needs at least {least}")

    @classmethod
    def from_representatives(
        cls,
        l: int,
        m: int,
        square: bool,
        bases: Iterable[Sequence[int]],
        shard_count: int = DEFAULT_SHARDS,
        memory_budget: Optional[int] = None,
    ) -> "OrbitCatalog":
        """Rebuild a catalog from stored representatives.

        Rejects duplicate orbits, sets out of layer order and layer counts no
        complete catalog can have.
        """
        catalog = cls(l, m, square, shard_count, memory_budget)
        for basis in bases:
            s = RestrictionSet.from_functionals(l, m, basis)
            if tuple(s.basis) != tuple(basis):
                raise ContractViolation(f"stored representative {list(basis)} is not in RREF")
            if catalog.representatives and catalog.find(s) is not None:
                raise ContractViolation(f"stored representative {s.describe()} repeats an orbit")
            catalog._register(s.basis)
        catalog.check_layers()
        return catalog


def enumerate_orbits(
    l: int,
    m: int,
    square: bool,
    shard_count: int = DEFAULT_SHARDS,
    memory_budget: Optional[int] = None,
    use_invariants: bool = False,
) -> OrbitCatalog:
    return OrbitCatalog(l, m, square, shard_count, memory_budget).enumerate(use_invariants)


def canonicalize(catalog: OrbitCatalog, s: RestrictionSet) -> Tuple[int, SymmetryWitness]:
    return catalog.canonicalize(s)
