"""Orbits package for restriction subspaces under the sandwich (and transpose) symmetry."""

from orbits.restriction import (
    RestrictionSet,
    SymmetryWitness,
    format_functional,
    parse_functional,
    word_to_matrix,
    matrix_to_word,
)
from orbits.catalog import OrbitCatalog, CatalogBudgetError, enumerate_orbits, canonicalize
from orbits.invariants import OrbitInvariants, orbit_invariants
from orbits.counting import gaussian_binomial, layer_count_lower_bound, orbit_count_lower_bound
from orbits.storage import dump_catalog, load_catalog
from orbits.presets import structured_restrictions, STRUCTURES

__all__ = [
    "RestrictionSet",
    "SymmetryWitness",
    "format_functional",
    "parse_functional",
    "word_to_matrix",
    "matrix_to_word",
    "OrbitCatalog",
    "CatalogBudgetError",
    "enumerate_orbits",
    "canonicalize",
    "OrbitInvariants",
    "orbit_invariants",
    "orbit_count_lower_bound",
    "gaussian_binomial",
    "layer_count_lower_bound",
    "dump_catalog",
    "load_catalog",
    "structured_restrictions",
    "STRUCTURES",
]
