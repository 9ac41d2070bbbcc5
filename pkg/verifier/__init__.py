"""Verifier package for independently re-establishing certificate bounds."""

from verifier.replay import Verifier, VerifiedBound, VerificationError, verify, verified_bound_table

__all__ = ["Verifier", "VerifiedBound", "VerificationError", "verify", "verified_bound_table"]
