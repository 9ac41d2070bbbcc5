import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional

from tqdm import tqdm

from certificates.model import (
    Certificate,
    CertificateHeader,
    Degenerate,
    Flattening,
    ForcedProduct,
    OrbitRecord,
    Substitution,
    TechniqueKind,
)
from engine.config import EngineConfig
from engine.forced_product import forced_product_runs
from engine.substitution import bound_substitution
from engine.techniques import BoundEntry, bound_degenerate, bound_flattening, pick_technique
from errors import ContractViolation
from logger import logger, progress_disabled
from orbits.catalog import OrbitCatalog, enumerate_orbits
from tensors import build_restricted_tensor


@dataclass(frozen=True)
class ProofResult:
    catalog: OrbitCatalog
    entries: List[BoundEntry]
    certificate: Certificate

    @property
    def final_bound(self) -> int:
        return self.entries[0].bound

    @property
    def table(self) -> List[int]:
        return [entry.bound for entry in self.entries]


def check_format(l: int, m: int, n: int):
    if not all(2 <= x <= 4 for x in (l, m, n)):
        raise ContractViolation(f"unsupported format <{l},{m},{n}>; need 2 <= l, m, n <= 4")


class FormatProver:
    """Layered dynamic program over the orbits of one <l,m,n> format."""

    def __init__(
        self,
        l: int,
        m: int,
        n: int,
        config: EngineConfig,
        target: Optional[int] = None,
        catalog: Optional[OrbitCatalog] = None,
    ):
        check_format(l, m, n)
        self.l, self.m, self.n = l, m, n
        self.square = l == m == n
        self.config = config
        self.target = target
        if catalog is None:
            catalog = enumerate_orbits(
                l, m, self.square, config.shard_count, config.memory_budget
            )
        elif (catalog.l, catalog.m, catalog.square) != (l, m, self.square):
            raise ContractViolation(
                f"catalog {catalog.l}x{catalog.m} square={catalog.square} does not fit <{l},{m},{n}>"
            )
        else:
            catalog.check_layers()
        self.catalog = catalog
        self.table: Dict[int, int] = {}

    def _initial(self, orbit_id: int):
        rep = self.catalog.representative(orbit_id)
        T = build_restricted_tensor(self.l, self.m, self.n, rep)
        flat = bound_flattening(T)
        fp_bound, perm, runs = forced_product_runs(T, self.config.fp_bit_cap)
        deg_bound, added = bound_degenerate(orbit_id, self.catalog, self.table)

        candidates = [(flat, TechniqueKind.FLATTENING)]
        if perm is not None:
            candidates.append((fp_bound, TechniqueKind.FORCED_PRODUCT))
        if added:
            candidates.append((deg_bound, TechniqueKind.DEGENERATE))
        kind = pick_technique(candidates)
        if kind is TechniqueKind.FLATTENING:
            technique, bound = Flattening(), flat
        elif kind is TechniqueKind.FORCED_PRODUCT:
            technique, bound = ForcedProduct(perm), fp_bound
        else:
            technique, bound = Degenerate(added), deg_bound
        details = [("flattening", flat)]
        for run in runs:
            if run.bound is not None:
                summary = (run.s, run.t, run.assignments, run.bound)
                details.append((f"forced_product_{run.perm}", summary))
        return flat, bound, technique, details

    def prove_orbit(self, orbit_id: int, workers: int = 1) -> BoundEntry:
        started = time.monotonic()
        flat, bound, technique, details = self._initial(orbit_id)
        steps = 0
        while not (orbit_id == 0 and self.target is not None and bound >= self.target):
            outcome = bound_substitution(
                orbit_id, self.catalog, self.table, bound + 1, self.config, flat, workers
            )
            steps += outcome.steps
            if not outcome.proved:
                break
            bound += 1
            technique = Substitution(bound, outcome.records)
        entry = BoundEntry(
            orbit_id, bound, technique, steps, time.monotonic() - started, tuple(details)
        )
        logger.info(
            "orbit bound finalized",
            extra={
                "orbit": orbit_id,
                "dimension": self.catalog.dimension(orbit_id),
                "bound": bound,
                "technique": technique.kind.label,
                "steps": steps,
            },
        )
        return entry

    def _run_layer(self, ids: List[int]) -> List[BoundEntry]:
        threads = self.config.thread_count
        if len(ids) == 1:
            return [self.prove_orbit(ids[0], workers=threads)]
        if threads == 1:
            return [self.prove_orbit(orbit_id) for orbit_id in ids]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(self.prove_orbit, ids))

    def run(self) -> ProofResult:
        entries: Dict[int, BoundEntry] = {}
        bar = tqdm(
            total=len(self.catalog),
            desc=f"prove <{self.l},{self.m},{self.n}>",
            disable=progress_disabled(),
        )
        with bar as progress_bar:
            for d in range(self.catalog.width, -1, -1):
                ids = self.catalog.layer(d)
                # layer barrier: bounds become visible only after the whole layer finished
                finished = self._run_layer(ids)
                for entry in finished:
                    entries[entry.orbit_id] = entry
                    self.table[entry.orbit_id] = entry.bound
                progress_bar.update(len(ids))
        ordered = [entries[orbit_id] for orbit_id in range(len(self.catalog))]
        return ProofResult(self.catalog, ordered, self.certificate(ordered))

    def certificate(self, entries: List[BoundEntry]) -> Certificate:
        header = CertificateHeader(
            self.l,
            self.m,
            self.n,
            self.square,
            entries[0].bound,
            self.config.step_limit,
            self.config.fp_bit_cap,
        )
        records = tuple(
            OrbitRecord(
                self.catalog.dimension(entry.orbit_id),
                tuple(self.catalog.representative(entry.orbit_id).basis),
                entry.bound,
                entry.technique,
            )
            for entry in entries
        )
        return Certificate(header, tuple(self.catalog.counts_by_dimension()), records)


def prove_format(
    l: int,
    m: int,
    n: int,
    config: Optional[EngineConfig] = None,
    target: Optional[int] = None,
    catalog: Optional[OrbitCatalog] = None,
) -> ProofResult:
    """Bound every orbit from the most restricted layer up; orbit 0 carries the format's bound."""
    config = config or EngineConfig.load()
    started = time.monotonic()
    result = FormatProver(l, m, n, config, target, catalog).run()
    logger.info(
        "format proved",
        extra={
            "format": f"<{l},{m},{n}>",
            "bound": result.final_bound,
            "orbits": len(result.entries),
            "seconds": round(time.monotonic() - started, 3),
        },
    )
    return result
