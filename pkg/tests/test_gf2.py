import random

import numpy as np
import pytest

from errors import ContractViolation
from gf2 import (
    BitMatrix,
    BitVector,
    enumerate_gl,
    gl_order,
    group_sequence,
    inverse,
    is_invertible,
    mat_mul,
    rank,
    rank_of_words,
    reduce_word,
    rref,
)
from gf2.batch import apply_images, basis_key, batch_keys, batch_rref


@pytest.fixture
def rng():
    """Seeded random source."""
    return random.Random(2024)


def test_bit_vector_width_check():
    """Test that bits beyond the width are rejected."""
    with pytest.raises(ContractViolation):
        BitVector(3, 0b1000)
    vector = BitVector.from_indices(4, [0, 2, 2, 3])
    assert vector.bits == 0b1001
    assert vector.indices() == [0, 3]


def test_rref_is_unique_for_the_span():
    """Test that different spanning lists give the same RREF."""
    rows_a, pivots_a = rref([0b0110, 0b0011, 0b0101])
    rows_b, pivots_b = rref([0b0101, 0b0110, 0b0000])
    assert rows_a == rows_b == [0b0101, 0b0011]
    assert pivots_a == pivots_b == frozenset({2, 1})


def test_rref_clears_pivot_columns(rng):
    """Test that every pivot column is zero outside its own row."""
    for _ in range(50):
        words = [rng.randrange(1 << 9) for _ in range(rng.randrange(1, 7))]
        rows, pivots = rref(words)
        assert rows == sorted(rows, reverse=True)
        assert len(rows) == rank_of_words(words)
        for row in rows:
            top = row.bit_length() - 1
            assert all(not (other >> top) & 1 for other in rows if other != row)
        for word in words:
            assert reduce_word(word, rows) == 0


def test_matrix_inverse_and_rank():
    """Test inverse, rank and invertibility of a small matrix."""
    m = BitMatrix.from_lists([[1, 1, 0], [0, 1, 1], [0, 0, 1]])
    assert is_invertible(m)
    assert (m @ inverse(m)) == BitMatrix.identity(3)
    singular = BitMatrix.from_lists([[1, 1], [1, 1]])
    assert rank(singular) == 1
    with pytest.raises(ContractViolation):
        inverse(singular)


def test_encode_round_trip():
    """Test that matrix encoding matches the row-major bit layout."""
    m = BitMatrix.from_lists([[0, 1, 0], [1, 0, 1]])
    assert m.encode() == 0b101010
    assert BitMatrix.from_int(m.encode(), 2, 3) == m
    assert m.transpose().shape == (3, 2)


def test_gl_orders():
    """Test the size of the general linear groups."""
    assert gl_order(2) == 6
    assert gl_order(3) == 168
    assert gl_order(4) == 20160
    assert len(list(enumerate_gl(2))) == 6
    assert len(list(enumerate_gl(3))) == 168


def test_gl_enumeration_is_ascending():
    """Test the deterministic enumeration order and identity-first sequence."""
    codes = [g.encode() for g in enumerate_gl(3)]
    assert codes == sorted(codes)
    sequence = group_sequence(3)
    assert sequence[0] == BitMatrix.identity(3)
    assert len(set(sequence)) == 168


def test_gl_enumeration_limits():
    """Test that unsupported sizes are refused."""
    with pytest.raises(ContractViolation):
        list(enumerate_gl(5))
    with pytest.raises(ContractViolation):
        group_sequence(0)


def test_batch_rref_matches_scalar_rref(rng):
    """Test that the numpy RREF agrees with the scalar one on independent rows."""
    batches = []
    expected = []
    while len(batches) < 40:
        words = [rng.randrange(1, 1 << 9) for _ in range(3)]
        if rank_of_words(words) != 3:
            continue
        batches.append(words)
        expected.append(rref(words)[0])
    out = batch_rref(np.array(batches, dtype=np.int64), 9)
    assert out.tolist() == expected
    keys = batch_keys(out)
    assert keys == [basis_key(rows) for rows in expected]


def test_apply_images_is_linear():
    """Test that a batched map sends each word to the xor of its bit images."""
    images = np.array([[0b01, 0b10], [0b11, 0b01]], dtype=np.int64)
    out = apply_images(images, [0b01, 0b11, 0b00])
    assert out.tolist() == [[0b01, 0b11, 0], [0b11, 0b10, 0]]


def test_mat_mul():
    """Test a product over F2 and the shape check."""
    a = BitMatrix.from_lists([[1, 0], [1, 1]])
    b = BitMatrix.from_lists([[0, 1], [1, 1]])
    assert mat_mul(a, b) == BitMatrix.from_lists([[0, 1], [1, 0]])
    assert mat_mul(a, BitMatrix.identity(2)) == a
    with pytest.raises(ContractViolation):
        mat_mul(a, BitMatrix.identity(3))


def random_matrix(rng, rows, cols):
    """Uniformly random F2 matrix."""
    return BitMatrix([rng.randrange(1 << cols) for _ in range(rows)], cols)


def test_rank_of_transpose(rng):
    """Test that row rank equals column rank and transposing twice is the identity."""
    for _ in range(100):
        m = random_matrix(rng, rng.randrange(1, 7), rng.randrange(1, 7))
        assert rank(m) == rank(m.transpose())
        assert m.transpose().transpose() == m
        assert rank(m) <= min(m.shape)


def test_mat_mul_is_associative(rng):
    """Test (AB)C = A(BC) on random triples."""
    for _ in range(100):
        p, q, r, s = (rng.randrange(1, 6) for _ in range(4))
        a, b, c = random_matrix(rng, p, q), random_matrix(rng, q, r), random_matrix(rng, r, s)
        assert mat_mul(mat_mul(a, b), c) == mat_mul(a, mat_mul(b, c))
        assert (a @ b).transpose() == b.transpose() @ a.transpose()


def test_rref_is_idempotent(rng):
    """Test that reducing a reduced basis changes nothing."""
    for _ in range(100):
        words = [rng.randrange(1 << 12) for _ in range(rng.randrange(0, 9))]
        rows, pivots = rref(words)
        assert rref(rows) == (rows, pivots)


def test_rref_of_bit_vectors():
    """Test that vector input gives vector output of the same width."""
    rows, pivots = rref([BitVector(4, 0b0110), BitVector(4, 0b0011), BitVector(4, 0b0101)])
    assert rows == [BitVector(4, 0b0101), BitVector(4, 0b0011)]
    assert pivots == frozenset({2, 1})
    assert rref([]) == ([], frozenset())
    with pytest.raises(ContractViolation):
        rref([BitVector(4, 1), BitVector(5, 1)])


def test_gl_counts_by_enumeration():
    """Test the group sizes against full enumeration, including n = 1 and n = 4."""
    assert [g.encode() for g in enumerate_gl(1)] == [1]
    elements = list(enumerate_gl(4))
    assert len(elements) == gl_order(4) == 20160
    assert all(is_invertible(g) for g in elements[:500])
    assert len(set(elements)) == len(elements)
