"""Independent certificate verification.

The verifier rebuilds the orbit catalog, checks the embedded representatives
against it, and re-establishes every claimed bound from the most restricted
layer up. It shares tensor construction, flattening, the forced-product
evaluation and canonicalization with the prover, never the search.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from tqdm import tqdm

from certificates.model import (
    Certificate,
    Degenerate,
    Flattening,
    ForcedProduct,
    OrbitRecord,
    Substitution,
    SubstitutionRecord,
)
from certificates.replay import ReplayError, replay_substitution
from engine.config import EngineConfig
from engine.forced_product import forced_product_rotation
from engine.techniques import bound_flattening
from errors import MMRankError
from gf2.vectors import rank_of_words
from logger import logger, progress_disabled
from orbits.catalog import OrbitCatalog, enumerate_orbits
from orbits.restriction import RestrictionSet
from tensors import build_restricted_tensor

CATALOG_CHECK = "catalog"


class VerificationError(MMRankError):
    """A certificate claim could not be re-established."""

    def __init__(self, orbit_id: int, technique: str, check: str, detail: str = ""):
        message = f"orbit {orbit_id} ({technique}): {check}"
        if detail:
            message += f": {detail}"
        super().__init__(message)
        self.orbit_id = orbit_id
        self.technique = technique
        self.check = check
        self.detail = detail

    def as_dict(self) -> Dict:
        return {
            "orbit": self.orbit_id,
            "technique": self.technique,
            "check": self.check,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class VerifiedBound:
    final_bound: int
    table: Tuple[int, ...]
    layer_seconds: Dict[int, float] = field(default_factory=dict)

    def summary(self) -> Dict:
        return {
            "status": "verified",
            "final_bound": self.final_bound,
            "orbits": len(self.table),
            "layer_seconds": {str(d): round(s, 6) for d, s in sorted(self.layer_seconds.items())},
        }


class Verifier:
    def __init__(self, cert: Certificate, config: Optional[EngineConfig] = None):
        self.cert = cert
        self.config = config or EngineConfig.load()
        header = cert.header
        self.l, self.m, self.n = header.l, header.m, header.n
        self.catalog: Optional[OrbitCatalog] = None
        self.table: Dict[int, int] = {}

    def _fail(self, orbit_id: int, record: Optional[OrbitRecord], check: str, detail: str = ""):
        technique = record.technique.kind.label if record is not None else CATALOG_CHECK
        raise VerificationError(orbit_id, technique, check, detail)

    def check_catalog(self):
        header = self.cert.header
        self.catalog = enumerate_orbits(
            header.l,
            header.m,
            header.square,
            self.config.shard_count,
            self.config.memory_budget,
        )
        counts = tuple(self.catalog.counts_by_dimension())
        if counts != self.cert.layer_counts:
            self._fail(-1, None, "orbit-count-mismatch", f"recomputed {counts}")
        for orbit_id, record in enumerate(self.cert.orbits):
            if tuple(self.catalog.representative(orbit_id).basis) != record.basis:
                self._fail(orbit_id, record, "representative-mismatch", "embedded representative")

    def _flattening(self, orbit_id: int, record: OrbitRecord, T):
        if bound_flattening(T) < record.bound:
            self._fail(orbit_id, record, "bound-exceeds-flattening")

    def _forced_product(self, orbit_id: int, record: OrbitRecord, T):
        technique: ForcedProduct = record.technique
        run = forced_product_rotation(
            T, technique.perm, self.cert.header.fp_bit_cap, beat=record.bound - 1
        )
        if run.bound is None:
            self._fail(orbit_id, record, "forced-product-skipped", run.status)
        if run.bound < record.bound:
            self._fail(orbit_id, record, "bound-exceeds-forced-product", f"rotation gives {run.bound}")

    def _degenerate(self, orbit_id: int, record: OrbitRecord, rep: RestrictionSet):
        technique: Degenerate = record.technique
        extended = rep.extended(technique.added)
        if extended.codim != rep.codim + len(technique.added):
            self._fail(orbit_id, record, "added-dependent")
        child, _ = self.catalog.canonicalize(extended)
        if self.table[child] < record.bound:
            self._fail(orbit_id, record, "bound-exceeds-child", f"child orbit {child}")

    def _substitution_record(
        self,
        orbit_id: int,
        record: OrbitRecord,
        rep: RestrictionSet,
        components: List[int],
        sequence: Tuple[int, ...],
        node: SubstitutionRecord,
    ):
        target = record.technique.target
        if not (node.subset >> (len(sequence) - 1)) & 1:
            self._fail(orbit_id, record, "subset-missing-last")
        if not node.witness.is_valid(self.l, self.m):
            self._fail(orbit_id, record, "witness-invalid")
        if self.catalog.dimension(node.child) <= rep.codim:
            self._fail(orbit_id, record, "child-not-deeper", f"child orbit {node.child}")
        words = {components[sequence[p]] for p in range(len(sequence)) if (node.subset >> p) & 1}
        extended = rep.extended(sorted(words))
        image = node.witness.apply(extended.basis, self.l, self.m)
        if image.basis != self.catalog.representative(node.child).basis:
            self._fail(
                orbit_id,
                record,
                "representative-mismatch",
                f"node {list(sequence)} does not map onto orbit {node.child}",
            )
        if node.size + self.table[node.child] < target:
            self._fail(orbit_id, record, "bound-below-target", f"node {list(sequence)}")

    def _substitution(self, orbit_id: int, record: OrbitRecord, rep: RestrictionSet, T):
        technique: Substitution = record.technique
        if record.bound > technique.target:
            self._fail(orbit_id, record, "bound-exceeds-target")
        components = rep.extensions()
        free_count = len(rep.free_bits)
        flattening = bound_flattening(T)
        try:
            for sequence, node in replay_substitution(len(components), technique.records):
                if node is not None:
                    self._substitution_record(orbit_id, record, rep, components, sequence, node)
                    continue
                # an expanded node must not be a possible complete decomposition
                if not sequence:
                    exact = free_count == 0
                else:
                    exact = len(sequence) >= flattening and rank_of_words(
                        {components[c] for c in sequence}
                    ) == free_count
                if exact:
                    self._fail(orbit_id, record, "exact-decomposition-node", f"node {list(sequence)}")
        except ReplayError as e:
            self._fail(orbit_id, record, e.check, str(e))

    def verify_orbit(self, orbit_id: int) -> int:
        record = self.cert.orbits[orbit_id]
        rep = self.catalog.representative(orbit_id)
        technique = record.technique
        if isinstance(technique, Degenerate):
            self._degenerate(orbit_id, record, rep)
            return record.bound
        T = build_restricted_tensor(self.l, self.m, self.n, rep)
        if isinstance(technique, Flattening):
            self._flattening(orbit_id, record, T)
        elif isinstance(technique, ForcedProduct):
            self._forced_product(orbit_id, record, T)
        elif isinstance(technique, Substitution):
            self._substitution(orbit_id, record, rep, T)
        return record.bound

    def _run_layer(self, ids: List[int]) -> List[int]:
        threads = self.config.thread_count
        if threads == 1 or len(ids) == 1:
            return [self.verify_orbit(orbit_id) for orbit_id in ids]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(self.verify_orbit, ids))

    def verify(self) -> VerifiedBound:
        self.check_catalog()
        layer_seconds: Dict[int, float] = {}
        bar = tqdm(total=len(self.cert.orbits), desc="verify", disable=progress_disabled())
        with bar as progress_bar:
            for d in range(self.catalog.width, -1, -1):
                started = time.monotonic()
                ids = self.catalog.layer(d)
                bounds = self._run_layer(ids)
                for orbit_id, bound in zip(ids, bounds):
                    self.table[orbit_id] = bound
                layer_seconds[d] = time.monotonic() - started
                logger.info(
                    "verification layer finished",
                    extra={"dimension": d, "orbits": len(ids), "seconds": round(layer_seconds[d], 6)},
                )
                progress_bar.update(len(ids))
        if self.table[0] != self.cert.header.final_bound:
            self._fail(0, self.cert.orbits[0], "final-bound-mismatch")
        table = tuple(self.table[i] for i in range(len(self.cert.orbits)))
        return VerifiedBound(self.cert.header.final_bound, table, layer_seconds)


def verify(cert: Certificate, config: Optional[EngineConfig] = None) -> VerifiedBound:
    try:
        return Verifier(cert, config).verify()
    except VerificationError as e:
        logger.error("certificate rejected", extra=e.as_dict())
        raise


def verified_bound_table(cert: Certificate, config: Optional[EngineConfig] = None) -> Tuple[int, ...]:
    return verify(cert, config).table
