import random

import pytest

from engine.forced_product import select_single_products
from errors import ContractViolation
from gf2 import BitMatrix, BitVector
from orbits import RestrictionSet
from tensors import (
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
)


@pytest.fixture
def t222():
    """The unrestricted 2x2 by 2x2 product tensor."""
    return matmul_tensor(2, 2, 2)


def test_matmul_tensor_shape(t222):
    """Test the size and cells of the product tensor."""
    assert t222.shape == (4, 4, 4)
    assert t222.cell_count() == 8
    for part in Bipartition:
        assert flattening_rank(t222, part) == 4
    t234 = matmul_tensor(2, 3, 4)
    assert t234.shape == (6, 12, 8)
    assert t234.cell_count() == 24


def test_restricted_tensors_from_the_walkthrough(walkthrough_sets):
    """Test cell counts of restricted 2x2 products."""
    t1 = build_restricted_tensor(2, 2, 2, walkthrough_sets[1])
    assert t1.shape == (1, 4, 4)
    assert t1.cell_count() == 2
    t6 = build_restricted_tensor(2, 2, 2, walkthrough_sets[6])
    assert t6.shape == (2, 4, 4)
    assert t6.cell_count() == 10
    t0 = build_restricted_tensor(2, 2, 2, walkthrough_sets[0])
    assert t0.is_zero()
    assert t0.describe() == '0'


def test_labels_follow_the_free_variables(walkthrough_sets):
    """Test that the A labels name the surviving variables."""
    t4 = build_restricted_tensor(2, 2, 2, walkthrough_sets[4])
    assert t4.labels[0] == ('a_{0,1}', 'a_{1,1}')
    assert t4.labels[1][0] == 'b_{0,0}'
    assert t4.labels[2][1] == 'c_{0,1}'
    assert 'a_{0,1}*b_{1,0}*c_{0,0}' in t4.describe()


def test_rotation_cycles(t222, walkthrough_sets):
    """Test that rotations permute the factors and compose to the identity."""
    t6 = build_restricted_tensor(2, 2, 2, walkthrough_sets[6])
    once = rotate(t6, 1)
    assert once.shape == (4, 2, 4)
    assert rotate(once, 2) == t6
    assert rotate(rotate(once, 1), 1) == t6
    assert sorted(once.cells()) == sorted((c, a, b) for a, b, c in t6.cells())
    with pytest.raises(ContractViolation):
        rotate(t222, 3)


def test_unfoldings_have_the_right_shape(walkthrough_sets):
    """Test row counts and widths of the three flattenings."""
    t6 = build_restricted_tensor(2, 2, 2, walkthrough_sets[6])
    assert len(unfolding(t6, Bipartition.AB_C)) == 4
    assert len(unfolding(t6, Bipartition.BC_A)) == 2
    assert len(unfolding(t6, Bipartition.CA_B)) == 4
    assert max(unfolding(t6, Bipartition.BC_A)).bit_length() <= 16
    assert max(unfolding(t6, Bipartition.CA_B)).bit_length() <= 8


def test_add_rank_one():
    """Test adding rank-one terms over F2."""
    T = Tensor3.zeros(2, 2, 2)
    u, v, w = BitVector(2, 0b11), BitVector(2, 0b01), BitVector(2, 0b10)
    once = add_rank_one(T, u, v, w)
    assert sorted(once.cells()) == [(0, 0, 1), (1, 0, 1)]
    assert add_rank_one(once, u, v, w).is_zero()
    assert add_rank_one(T, BitVector(2, 0), v, w) == T
    with pytest.raises(ContractViolation):
        add_rank_one(T, BitVector(3, 1), v, w)


def test_rank_one_factors():
    """Test splitting a rank-one matrix."""
    m = BitMatrix.from_lists([[1, 0, 1], [0, 0, 0], [1, 0, 1]])
    assert rank_one_factors(m) == (0b101, 0b101)
    with pytest.raises(ContractViolation):
        rank_one_factors(BitMatrix.identity(2))


def test_from_cells_and_slices():
    """Test building a tensor from cells and listing its nonzero slices."""
    T = Tensor3.from_cells(2, 2, 3, [(0, 1, 2), (1, 1, 2), (0, 0, 0), (0, 0, 0)])
    assert T.cell_count() == 2
    assert [c for c, _ in c_slices(T)] == [2]
    with pytest.raises(ContractViolation):
        Tensor3.from_cells(2, 2, 2, [(2, 0, 0)])


def test_restriction_format_must_match():
    """Test that restrictions for another format are refused."""
    with pytest.raises(ContractViolation):
        build_restricted_tensor(2, 2, 2, RestrictionSet(2, 3, ()))


def random_tensor(rng):
    """Random tensor with sides between 1 and 4."""
    dA, dB, dC = (rng.randrange(1, 5) for _ in range(3))
    cells = [(rng.randrange(dA), rng.randrange(dB), rng.randrange(dC))
             for _ in range(rng.randrange(0, 12))]
    return Tensor3.from_cells(dA, dB, dC, cells)


def test_rotation_on_random_tensors():
    """Test that three rotations are the identity and flattenings move with the factors."""
    rng = random.Random(5)
    for _ in range(100):
        T = random_tensor(rng)
        once = rotate(T, 1)
        assert rotate(rotate(once, 1), 1) == T
        assert rotate(T, 2) == rotate(once, 1)
        assert rotate(T, 0) == T
        assert flattening_rank(once, Bipartition.AB_C) == flattening_rank(T, Bipartition.CA_B)
        assert flattening_rank(once, Bipartition.BC_A) == flattening_rank(T, Bipartition.AB_C)
        assert flattening_rank(once, Bipartition.CA_B) == flattening_rank(T, Bipartition.BC_A)


@pytest.mark.parametrize('l, m, n', [
    (2, 2, 2), (2, 2, 3), (2, 3, 4), (3, 2, 2), (3, 3, 3), (3, 3, 4), (3, 4, 4), (4, 3, 2),
])
def test_unrestricted_flattening_ranks(l, m, n):
    """Test that each flattening of the product tensor has full rank."""
    T = matmul_tensor(l, m, n)
    assert T.shape == (l * m, m * n, n * l)
    assert flattening_rank(T, Bipartition.BC_A) == l * m
    assert flattening_rank(T, Bipartition.CA_B) == m * n
    assert flattening_rank(T, Bipartition.AB_C) == n * l


def test_flattening_does_not_grow_under_restriction():
    """Test that adding a restriction never raises a flattening rank."""
    rng = random.Random(17)
    for _ in range(40):
        s = RestrictionSet(2, 3, ())
        ranks = [flattening_rank(build_restricted_tensor(2, 3, 2, s), part) for part in Bipartition]
        while not s.is_full():
            s = s.extended([rng.choice(s.extensions())])
            T = build_restricted_tensor(2, 3, 2, s)
            smaller = [flattening_rank(T, part) for part in Bipartition]
            assert all(a <= b for a, b in zip(smaller, ranks))
            ranks = smaller


def test_equal_spans_give_equal_tensors():
    """Test that the tensor depends only on the span of the restrictions."""
    first = RestrictionSet.parse(2, 2, ['a00', 'a01+a10'])
    second = RestrictionSet.parse(2, 2, ['a00+a01+a10', 'a00'])
    assert first == second
    assert build_restricted_tensor(2, 2, 2, first) == build_restricted_tensor(2, 2, 2, second)
    third = RestrictionSet.parse(2, 3, ['a00+a12', 'a12', 'a01+a00'])
    fourth = RestrictionSet.parse(2, 3, ['a01', 'a00', 'a12+a01'])
    assert build_restricted_tensor(2, 3, 3, third) == build_restricted_tensor(2, 3, 3, fourth)


def test_residual_of_walkthrough_set_4(walkthrough_sets):
    """Test that removing both single products of {a00, a01+a10} leaves flattening rank 4."""
    T = build_restricted_tensor(2, 2, 2, walkthrough_sets[4])
    selected, others = select_single_products(T)
    assert (len(selected), len(others)) == (2, 2)
    residual = T
    for c in selected:
        u, v = rank_one_factors(T.slices[c])
        residual = add_rank_one(residual, BitVector(T.dA, u), BitVector(T.dB, v), BitVector(T.dC, 1 << c))
    assert [c for c, _ in c_slices(residual)] == others
    assert flattening_rank(residual, Bipartition.CA_B) == 4
    assert max(flattening_rank(residual, part) for part in Bipartition) == 4
