"""Oracle package: brute-force exact rank decisions used to cross-check the engine."""

from oracle.exhaustive import exhaustive_rank_leq, OracleLimitError

__all__ = ["exhaustive_rank_leq", "OracleLimitError"]
