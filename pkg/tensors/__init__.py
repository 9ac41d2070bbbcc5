"""Tensors package: restricted matrix-multiplication tensors over F2 and their flattenings."""

from tensors.tensor import (
    Bipartition,
    Tensor3,
    add_rank_one,
    build_restricted_tensor,
    c_slices,
    flattening_rank,
    matmul_tensor,
    rank_one_factors,
    rotate,
    unfolding,
    unfoldings,
)

__all__ = [
    "Bipartition",
    "Tensor3",
    "add_rank_one",
    "build_restricted_tensor",
    "c_slices",
    "flattening_rank",
    "matmul_tensor",
    "rank_one_factors",
    "rotate",
    "unfolding",
    "unfoldings",
]
