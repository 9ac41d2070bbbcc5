"""Batched F2 linear maps and RREF over numpy arrays of packed words.

A batch is a 2-D array: one row per group element, one column per basis word.
Words are at most 16 bits wide (functionals of l x m matrices with lm <= 16).
"""

import struct
from typing import List, Sequence

import numpy as np

from gf2.vectors import set_bits

WORD_DTYPE = np.dtype("<u2")
MAX_WORD_BITS = 16


def basis_key(words: Sequence[int]) -> bytes:
    """Hashable key of an RREF basis; equal to the matching `batch_keys` entry."""
    return struct.pack(f"<{len(words)}H", *words)


def apply_images(images: np.ndarray, words: Sequence[int]) -> np.ndarray:
    """Apply many linear maps to each word.

    `images[g, b]` is the image of basis bit b under map g. Returns an array of
    shape (len(images), len(words)).
    """
    out = np.zeros((images.shape[0], len(words)), dtype=np.int64)
    for k, word in enumerate(words):
        bits = set_bits(word)
        if bits:
            out[:, k] = np.bitwise_xor.reduce(images[:, bits], axis=1)
    return out


def batch_rref(rows: np.ndarray, width: int) -> np.ndarray:
    """Row-wise RREF of every batch entry, rows sorted descending.

    Matches `gf2.vectors.rref` entry by entry when the rows of each entry are
    linearly independent (zero rows would sort to the end and are kept).
    """
    rows = np.array(rows, dtype=np.int64, copy=True)
    count, depth = rows.shape
    if depth == 0 or count == 0:
        return rows
    used = np.zeros((count, depth), dtype=bool)
    everyone = np.arange(count)
    for bit in range(width - 1, -1, -1):
        has_bit = ((rows >> bit) & 1).astype(bool)
        candidates = has_bit & ~used
        found = candidates.any(axis=1)
        if not found.any():
            continue
        choice = candidates.argmax(axis=1)
        pivot_rows = rows[everyone, choice]
        clear = has_bit & found[:, None]
        clear[everyone, choice] = False
        rows ^= np.where(clear, pivot_rows[:, None], 0)
        used[everyone[found], choice[found]] = True
    return -np.sort(-rows, axis=1)


def batch_keys(rows: np.ndarray) -> List[bytes]:
    count, depth = rows.shape
    if depth == 0:
        return [b""] * count
    packed = np.ascontiguousarray(rows.astype(WORD_DTYPE))
    return packed.view(np.dtype((np.void, depth * WORD_DTYPE.itemsize))).ravel().tolist()
