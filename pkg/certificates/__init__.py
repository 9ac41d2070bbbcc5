"""Certificates package for writing, reading and replaying proof certificates."""

from certificates.model import (
    Certificate,
    CertificateHeader,
    OrbitRecord,
    TechniqueKind,
    Flattening,
    ForcedProduct,
    Degenerate,
    Substitution,
    SubstitutionRecord,
)
from certificates.codec import write, read, to_bytes, from_bytes, check_well_formed
from certificates.replay import ReplayError, replay_substitution
from certificates.report import dump_text
from framing import (
    CertificateError,
    BadMagicError,
    VersionMismatchError,
    ChecksumError,
    StructureError,
)

__all__ = [
    "Certificate",
    "CertificateHeader",
    "OrbitRecord",
    "TechniqueKind",
    "Flattening",
    "ForcedProduct",
    "Degenerate",
    "Substitution",
    "SubstitutionRecord",
    "write",
    "read",
    "to_bytes",
    "from_bytes",
    "check_well_formed",
    "ReplayError",
    "replay_substitution",
    "dump_text",
    "CertificateError",
    "BadMagicError",
    "VersionMismatchError",
    "ChecksumError",
    "StructureError",
]
