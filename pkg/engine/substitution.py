"""Substitution with backtracking.

Assume a decomposition of T with fewer than `target` terms and walk the sorted
sequences of its A-components. A node is proved when zeroing some of its
components (always including the last one) kills that many terms and lands in
an orbit whose bound closes the gap to `target`. A node that cannot be proved
and whose components could already be a whole decomposition fails the search.
"""

import enum
import itertools
import random
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple

from certificates.model import SubstitutionRecord
from errors import ContractViolation, InvariantViolation
from gf2.vectors import rank_of_words
from logger import logger
from orbits.catalog import OrbitCatalog
from orbits.restriction import SymmetryWitness


class SubstitutionStatus(enum.Enum):
    PROVED = "proved"
    FAILED = "failed"
    ABORTED = "aborted"


@dataclass(frozen=True)
class SubstitutionOutcome:
    status: SubstitutionStatus
    records: Tuple[SubstitutionRecord, ...] = ()
    steps: int = 0

    @property
    def proved(self) -> bool:
        return self.status is SubstitutionStatus.PROVED


class CanonicalCache:
    """Bounded memo of canonicalization results; evicts a random half when full."""

    def __init__(self, capacity: int, seed: int = 0):
        if capacity < 2:
            raise ContractViolation(f"cache capacity must be >= 2, got {capacity}")
        self.capacity = capacity
        self._entries: Dict[tuple, Tuple[int, SymmetryWitness]] = {}
        self._random = random.Random(seed)
        self.hits = 0
        self.misses = 0

    def get(self, key: tuple) -> Optional[Tuple[int, SymmetryWitness]]:
        found = self._entries.get(key)
        if found is None:
            self.misses += 1
        else:
            self.hits += 1
        return found

    def put(self, key: tuple, value: Tuple[int, SymmetryWitness]):
        if len(self._entries) >= self.capacity:
            keys = list(self._entries)
            for old in self._random.sample(keys, len(keys) // 2):
                del self._entries[old]
        self._entries[key] = value

    def __len__(self) -> int:
        return len(self._entries)


_local = threading.local()


def thread_cache(capacity: int) -> CanonicalCache:
    cache = getattr(_local, "cache", None)
    if cache is None or cache.capacity != capacity:
        cache = CanonicalCache(capacity)
        _local.cache = cache
    return cache


def closed_subsets(sequence: Tuple[int, ...]):
    """Position masks of the sub-lists holding every copy of their components.

    The last component's copies are always included; the others are chosen in
    ascending bitmask order over the distinct components.
    """
    groups: List[int] = []
    masks: List[int] = []
    for position, component in enumerate(sequence):
        if not groups or groups[-1] != component:
            groups.append(component)
            masks.append(0)
        masks[-1] |= 1 << position
    last = masks[-1]
    for choice in range(1 << (len(groups) - 1)):
        subset = last
        for g in range(len(groups) - 1):
            if (choice >> g) & 1:
                subset |= masks[g]
        yield subset


def spans_everything(words, free_count: int) -> bool:
    return rank_of_words(words) == free_count


class _Stop(Exception):
    pass


class SubstitutionSearch:
    """One (orbit, target) attempt. Not reusable across attempts."""

    def __init__(
        self,
        orbit_id: int,
        catalog: OrbitCatalog,
        table: Mapping[int, int],
        target: int,
        flattening: int,
        step_limit: int,
        cache_capacity: int,
        workers: int = 1,
    ):
        self.orbit_id = orbit_id
        self.catalog = catalog
        self.table = table
        self.target = target
        self.flattening = flattening
        self.step_limit = step_limit
        self.cache_capacity = cache_capacity
        self.workers = workers
        self.rep = catalog.representative(orbit_id)
        self.components = self.rep.extensions()
        self.free_count = len(self.rep.free_bits)
        self._steps = itertools.count(1)
        self._stop = threading.Event()
        self.steps = 0

    def _tick(self):
        step = next(self._steps)
        self.steps = max(self.steps, step)
        if self._stop.is_set():
            raise _Stop(SubstitutionStatus.ABORTED)
        if step > self.step_limit:
            raise _Stop(SubstitutionStatus.ABORTED)

    def _child(self, words: Tuple[int, ...]) -> Tuple[int, SymmetryWitness]:
        cache = thread_cache(self.cache_capacity)
        key = (self.orbit_id, words)
        found = cache.get(key)
        if found is None:
            found = self.catalog.canonicalize(self.rep.extended(words))
            if self.catalog.dimension(found[0]) <= self.rep.codim:
                raise InvariantViolation(
                    f"substitution from orbit {self.orbit_id} reached layer "
                    f"{self.catalog.dimension(found[0])}"
                )
            cache.put(key, found)
        return found

    def _prove_node(self, sequence: Tuple[int, ...]) -> Optional[SubstitutionRecord]:
        for subset in closed_subsets(sequence):
            size = bin(subset).count("1")
            picked = {sequence[p] for p in range(len(sequence)) if (subset >> p) & 1}
            words = tuple(self.components[c] for c in sorted(picked))
            child, witness = self._child(words)
            if size + self.table[child] >= self.target:
                return SubstitutionRecord(len(sequence), subset, witness, child)
        return None

    def _exact_decomposition_possible(self, sequence: Tuple[int, ...]) -> bool:
        if not sequence:
            return self.free_count == 0
        if len(sequence) < self.flattening:
            return False
        return spans_everything({self.components[c] for c in sequence}, self.free_count)

    def _node(self, sequence: Tuple[int, ...], records: List[SubstitutionRecord]):
        self._tick()
        if sequence:
            record = self._prove_node(sequence)
            if record is not None:
                records.append(record)
                return
        if self._exact_decomposition_possible(sequence):
            raise _Stop(SubstitutionStatus.FAILED)
        start = sequence[-1] if sequence else 0
        for component in range(start, len(self.components)):
            self._node(sequence + (component,), records)

    def _branch(self, component: int) -> Tuple[SubstitutionStatus, List[SubstitutionRecord]]:
        records: List[SubstitutionRecord] = []
        try:
            self._node((component,), records)
        except _Stop as stop:
            self._stop.set()
            return stop.args[0], records
        return SubstitutionStatus.PROVED, records

    def run(self) -> SubstitutionOutcome:
        try:
            self._tick()
            if self._exact_decomposition_possible(()):
                return SubstitutionOutcome(SubstitutionStatus.FAILED, (), self.steps)
        except _Stop as stop:
            return SubstitutionOutcome(stop.args[0], (), self.steps)

        branches = range(len(self.components))
        if self.workers > 1 and len(self.components) > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                results = list(pool.map(self._branch, branches))
        else:
            results = []
            for component in branches:
                results.append(self._branch(component))
                if results[-1][0] is not SubstitutionStatus.PROVED:
                    break

        statuses = [status for status, _ in results]
        if SubstitutionStatus.FAILED in statuses:
            return SubstitutionOutcome(SubstitutionStatus.FAILED, (), self.steps)
        if SubstitutionStatus.ABORTED in statuses:
            return SubstitutionOutcome(SubstitutionStatus.ABORTED, (), self.steps)
        merged = tuple(record for _, records in results for record in records)
        return SubstitutionOutcome(SubstitutionStatus.PROVED, merged, self.steps)


def bound_substitution(
    orbit_id: int,
    catalog: OrbitCatalog,
    table: Mapping[int, int],
    target: int,
    config,
    flattening: int,
    workers: int = 1,
) -> SubstitutionOutcome:
    """Try to prove R(T_orbit) >= target. Proved, Failed or Aborted (step limit)."""
    search = SubstitutionSearch(
        orbit_id,
        catalog,
        table,
        target,
        flattening,
        config.step_limit,
        config.cache_capacity,
        workers,
    )
    outcome = search.run()
    if not outcome.proved:
        logger.info(
            "substitution attempt ended",
            extra={
                "orbit": orbit_id,
                "target": target,
                "status": outcome.status.value,
                "steps": outcome.steps,
            },
        )
    return outcome
