"""GF(2) package: bit-packed vectors, matrices, RREF and GL enumeration."""

from gf2.vectors import BitVector, rref, rank_of_words, reduce_word, pivot, popcount
from gf2.matrix import (
    BitMatrix,
    mat_mul,
    transpose,
    rank,
    is_invertible,
    inverse,
    enumerate_gl,
    group_sequence,
    gl_order,
)

__all__ = [
    "BitVector",
    "BitMatrix",
    "rref",
    "rank",
    "rank_of_words",
    "reduce_word",
    "pivot",
    "popcount",
    "mat_mul",
    "transpose",
    "is_invertible",
    "inverse",
    "enumerate_gl",
    "group_sequence",
    "gl_order",
]
