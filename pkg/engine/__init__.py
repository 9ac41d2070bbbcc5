"""Engine package: per-orbit bound techniques and the layered prover."""

from engine.config import EngineConfig
from engine.techniques import BoundEntry, bound_flattening, bound_degenerate
from engine.forced_product import (
    ForcedProductRun,
    bound_forced_product,
    forced_product_rotation,
    forced_product_runs,
)
from engine.substitution import (
    SubstitutionOutcome,
    SubstitutionStatus,
    bound_substitution,
)
from engine.prover import ProofResult, prove_format
from engine.summary import write_summary

__all__ = [
    "EngineConfig",
    "BoundEntry",
    "bound_flattening",
    "bound_degenerate",
    "ForcedProductRun",
    "bound_forced_product",
    "forced_product_rotation",
    "forced_product_runs",
    "SubstitutionOutcome",
    "SubstitutionStatus",
    "bound_substitution",
    "ProofResult",
    "prove_format",
    "write_summary",
]
