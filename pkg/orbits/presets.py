from typing import Callable, Dict, List

from errors import ContractViolation
from orbits.restriction import RestrictionSet


def _bit(i: int, j: int, m: int) -> int:
    return 1 << (i * m + j)


def _symmetric(l: int, m: int) -> List[int]:
    return [_bit(i, j, m) | _bit(j, i, m) for i in range(l) for j in range(i + 1, m)]


def _skew(l: int, m: int) -> List[int]:
    # alternating over F2: symmetric with a zero diagonal
    return _symmetric(l, m) + [_bit(i, i, m) for i in range(l)]


def _upper(l: int, m: int) -> List[int]:
    return [_bit(i, j, m) for i in range(l) for j in range(m) if i > j]


def _lower(l: int, m: int) -> List[int]:
    return [_bit(i, j, m) for i in range(l) for j in range(m) if i < j]


def _diagonal(l: int, m: int) -> List[int]:
    return [_bit(i, j, m) for i in range(l) for j in range(m) if i != j]


STRUCTURES: Dict[str, Callable[[int, int], List[int]]] = {
    "symmetric": _symmetric,
    "skew": _skew,
    "upper": _upper,
    "lower": _lower,
    "diagonal": _diagonal,
}
SQUARE_ONLY = {"symmetric", "skew"}


def structured_restrictions(kind: str, l: int, m: int) -> RestrictionSet:
    """Restriction set confining the first matrix to a structured family."""
    if kind not in STRUCTURES:
        raise ContractViolation(f"unknown structure {kind!r}; choose from {sorted(STRUCTURES)}")
    if kind in SQUARE_ONLY and l != m:
        raise ContractViolation(f"{kind} matrices need l == m, got {l}x{m}")
    return RestrictionSet.from_functionals(l, m, STRUCTURES[kind](l, m))
