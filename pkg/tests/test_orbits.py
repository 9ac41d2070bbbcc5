import io
import random

import pytest

from errors import ContractViolation, InvariantViolation
from framing import CertificateError, FrameWriter, StructureError
from gf2 import BitMatrix, enumerate_gl
from orbits import (
    CatalogBudgetError,
    OrbitCatalog,
    RestrictionSet,
    SymmetryWitness,
    dump_catalog,
    enumerate_orbits,
    format_functional,
    gaussian_binomial,
    layer_count_lower_bound,
    load_catalog,
    orbit_count_lower_bound,
    orbit_invariants,
    parse_functional,
    structured_restrictions,
)
from orbits.sharded import ShardedMap


def random_restriction(rng, l, m):
    """Random subspace of l x m functionals."""
    depth = rng.randrange(0, l * m + 1)
    return RestrictionSet.from_functionals(l, m, [rng.randrange(1 << (l * m)) for _ in range(depth)])


def random_witness(rng, l, m, square):
    """Random group element."""
    left = rng.choice(list(enumerate_gl(l)))
    right = rng.choice(list(enumerate_gl(m)))
    return SymmetryWitness(left, right, square and rng.random() < 0.5)


@pytest.fixture(scope='module')
def catalog_2x3():
    """Orbit catalog of 2x3 restriction sets."""
    return enumerate_orbits(2, 3, False)


@pytest.mark.parametrize('l, m, square, total', [
    (2, 2, True, 10),
    (2, 2, False, 11),
    (2, 3, False, 31),
    (2, 4, False, 86),
    pytest.param(3, 3, True, 496, marks=pytest.mark.slow),
    pytest.param(3, 3, False, 710, marks=pytest.mark.slow),
])
def test_orbit_counts(l, m, square, total):
    """Test the number of orbits for every small format."""
    catalog = enumerate_orbits(l, m, square)
    counts = catalog.counts_by_dimension()
    assert len(catalog) == total
    assert sum(counts) == total
    assert counts[0] == counts[-1] == 1
    assert counts == counts[::-1]
    assert orbit_count_lower_bound(l, m, square) <= total


def test_catalog_layers_2x2(catalog_2x2):
    """Test the per-dimension layers of the 2x2 catalog."""
    assert catalog_2x2.counts_by_dimension() == [1, 2, 4, 2, 1]
    assert catalog_2x2.representative(0).basis == ()
    assert catalog_2x2.dimension(len(catalog_2x2) - 1) == 4
    ids = [orbit_id for d in range(5) for orbit_id in catalog_2x2.layer(d)]
    assert ids == list(range(10))


def test_canonicalize_returns_working_witness(catalog_2x2, catalog_2x3):
    """Test that the witness maps every restriction set onto its representative."""
    rng = random.Random(7)
    for catalog in (catalog_2x2, catalog_2x3):
        for _ in range(60):
            s = random_restriction(rng, catalog.l, catalog.m)
            orbit_id, witness = catalog.canonicalize(s)
            assert witness.is_valid(catalog.l, catalog.m)
            image = witness.apply(s.basis, catalog.l, catalog.m)
            assert image.basis == catalog.representative(orbit_id).basis
            assert catalog.dimension(orbit_id) == s.codim


def test_orbit_is_invariant_under_the_group(catalog_2x2, catalog_2x3):
    """Test that moving a set by a group element keeps its orbit and invariants."""
    rng = random.Random(11)
    for catalog in (catalog_2x2, catalog_2x3):
        for _ in range(200):
            s = random_restriction(rng, catalog.l, catalog.m)
            g = random_witness(rng, catalog.l, catalog.m, catalog.square)
            moved = g.apply(s.basis, catalog.l, catalog.m)
            assert catalog.orbit_of(moved) == catalog.orbit_of(s)
            assert (orbit_invariants(moved).signature(catalog.square)
                    == orbit_invariants(s).signature(catalog.square))


def test_transpose_merges_orbits():
    """Test that {a00, a01} and {a00, a10} only meet with the transpose symmetry."""
    rows = RestrictionSet.parse(2, 2, ['a00', 'a01'])
    cols = RestrictionSet.parse(2, 2, ['a00', 'a10'])
    plain = enumerate_orbits(2, 2, False)
    assert plain.orbit_of(rows) != plain.orbit_of(cols)
    square = enumerate_orbits(2, 2, True)
    assert square.orbit_of(rows) == square.orbit_of(cols)


def test_invariant_filter_gives_the_same_catalog(catalog_2x3):
    """Test that enumerating with invariants changes nothing but speed."""
    filtered = enumerate_orbits(2, 3, False, use_invariants=True)
    assert filtered.counts_by_dimension() == catalog_2x3.counts_by_dimension()
    assert [r.basis for r in filtered.representatives] == [r.basis for r in catalog_2x3.representatives]


def test_catalog_budget():
    """Test that a tiny memory budget aborts enumeration."""
    with pytest.raises(CatalogBudgetError):
        enumerate_orbits(2, 2, True, memory_budget=1000)


def test_catalog_format_checks(catalog_2x2):
    """Test the format checks on catalogs and lookups."""
    with pytest.raises(ContractViolation):
        OrbitCatalog(2, 3, True)
    with pytest.raises(ContractViolation):
        OrbitCatalog(5, 2, False)
    with pytest.raises(ContractViolation):
        catalog_2x2.canonicalize(RestrictionSet(2, 3, ()))


def test_unregistered_orbit_is_an_invariant_violation():
    """Test that canonicalizing against an incomplete catalog fails loudly."""
    catalog = OrbitCatalog(2, 2, True)
    catalog._register(())
    with pytest.raises(InvariantViolation):
        catalog.canonicalize(RestrictionSet.parse(2, 2, ['a00']))


def test_catalog_round_trip(catalog_2x3):
    """Test dumping and reloading a catalog."""
    sink = io.BytesIO()
    size = dump_catalog(catalog_2x3, sink)
    data = sink.getvalue()
    assert size == len(data)
    assert data[:4] == b'MM2O'
    loaded = load_catalog(io.BytesIO(data))
    assert loaded.counts_by_dimension() == catalog_2x3.counts_by_dimension()
    assert [r.basis for r in loaded.representatives] == [r.basis for r in catalog_2x3.representatives]
    s = RestrictionSet.parse(2, 3, ['a01+a12', 'a10'])
    assert loaded.orbit_of(s) == catalog_2x3.orbit_of(s)


def test_corrupt_catalog_file_is_rejected(catalog_2x2):
    """Test that damaged catalog files raise certificate errors."""
    sink = io.BytesIO()
    dump_catalog(catalog_2x2, sink)
    data = bytearray(sink.getvalue())
    data[12] ^= 0x01
    with pytest.raises(CertificateError):
        load_catalog(io.BytesIO(bytes(data)))


def test_duplicate_representatives_are_rejected():
    """Test that a stored catalog may not list one orbit twice."""
    with pytest.raises(ContractViolation):
        OrbitCatalog.from_representatives(2, 2, True, [(), (1,), (2,)])


def test_functional_text_round_trip():
    """Test formatting and parsing of functionals."""
    word = parse_functional('a_{0,1}+a10', 2, 2)
    assert word == 0b0110
    assert format_functional(word, 2, 2) == 'a_{0,1}+a_{1,0}'
    assert parse_functional(format_functional(word, 2, 2), 2, 2) == word
    assert parse_functional('a_1_2', 2, 3) == 1 << 5
    assert format_functional(0, 2, 2) == '0'
    with pytest.raises(ContractViolation):
        parse_functional('a22', 2, 2)
    with pytest.raises(ContractViolation):
        parse_functional('b01', 2, 2)


def test_restriction_set_basics():
    """Test RREF validation, extensions and the annihilator."""
    with pytest.raises(ContractViolation):
        RestrictionSet(2, 2, (1, 2))
    s = RestrictionSet.parse(2, 2, ['a00'])
    assert s.codim == 1
    assert s.free_bits == (1, 2, 3)
    assert s.extensions() == [2, 4, 6, 8, 10, 12, 14]
    dual = s.complement()
    assert dual.codim == 3
    assert all(not word & 1 for word in dual.basis)
    assert dual.complement() == s
    assert RestrictionSet.parse(2, 2, ['a00', 'a01', 'a10', 'a11']).is_full()


def test_witness_shape_checks():
    """Test witness validation."""
    witness = SymmetryWitness(BitMatrix.identity(2), BitMatrix.identity(3), True)
    assert not witness.is_valid(2, 3)
    with pytest.raises(ContractViolation):
        witness.apply([1], 2, 3)
    singular = SymmetryWitness(BitMatrix.from_lists([[1, 1], [1, 1]]), BitMatrix.identity(2))
    assert not singular.is_valid(2, 2)
    assert SymmetryWitness.identity(2, 2).apply_word(0b0110, 2, 2) == 0b0110


def test_structured_restrictions():
    """Test the structured matrix families."""
    assert structured_restrictions('symmetric', 2, 2).basis == (0b0110,)
    assert structured_restrictions('upper', 2, 2).basis == (0b0100,)
    assert structured_restrictions('lower', 2, 2).basis == (0b0010,)
    assert structured_restrictions('diagonal', 2, 2).basis == (0b0100, 0b0010)
    assert structured_restrictions('skew', 2, 2).basis == (0b1000, 0b0110, 0b0001)
    with pytest.raises(ContractViolation):
        structured_restrictions('symmetric', 2, 3)
    with pytest.raises(ContractViolation):
        structured_restrictions('banded', 2, 2)


def test_invariants_of_the_full_space():
    """Test the rank distribution of all 2x2 matrices."""
    full = RestrictionSet.parse(2, 2, ['a00', 'a01', 'a10', 'a11'])
    assert orbit_invariants(full).rank_distribution == (1, 9, 6)
    assert orbit_invariants(RestrictionSet(2, 2, ())).rank_distribution == (1,)


def test_counting_bound():
    """Test the counting estimate against the known orbit counts."""
    assert orbit_count_lower_bound(2, 2, True) <= 10
    assert orbit_count_lower_bound(2, 3, False) <= 31
    assert orbit_count_lower_bound(3, 3, True) <= 496
    assert orbit_count_lower_bound(2, 2, True, use_duality=True) >= orbit_count_lower_bound(2, 2, True)


def test_sharded_map():
    """Test insert-if-absent semantics and probing."""
    table = ShardedMap(7)
    assert table.insert_if_absent(b'a', 1) == (True, 1)
    assert table.insert_if_absent(b'a', 2) == (False, 1)
    table.insert_if_absent(b'c', 3)
    assert len(table) == 2
    assert b'a' in table and b'b' not in table
    assert table.first_hit([b'x', b'c', b'a']) == (1, 3)
    assert table.first_hit([b'x']) == (-1, None)
    assert table.shard_count == 7
    with pytest.raises(ContractViolation):
        ShardedMap(0)


def catalog_file(l, m, square, bases):
    """Catalog file bytes listing `bases` in the given order."""
    writer = FrameWriter(b'MM2O', 1)
    writer.u8(l)
    writer.u8(m)
    writer.u8(int(square))
    writer.u32(len(bases))
    for basis in bases:
        writer.u8(len(basis))
        for word in basis:
            writer.u64(word)
    return writer.finish()


def test_reordered_catalog_file_is_rejected(catalog_2x2):
    """Test that a catalog whose first orbit is not the empty set does not load."""
    bases = [rep.basis for rep in catalog_2x2.representatives]
    bases[0], bases[1] = bases[1], bases[0]
    with pytest.raises(StructureError):
        load_catalog(io.BytesIO(catalog_file(2, 2, True, bases)))
    with pytest.raises(ContractViolation):
        OrbitCatalog.from_representatives(2, 2, True, bases)


def test_catalog_out_of_layer_order_is_rejected(catalog_2x2):
    """Test that representatives must come in ascending layers."""
    bases = [rep.basis for rep in catalog_2x2.representatives]
    bases[2], bases[3] = bases[3], bases[2]
    assert len(bases[2]) != len(bases[3])
    with pytest.raises(StructureError):
        load_catalog(io.BytesIO(catalog_file(2, 2, True, bases)))


def test_incomplete_catalog_is_rejected(catalog_2x2):
    """Test that missing orbits break the layer counts."""
    bases = [rep.basis for rep in catalog_2x2.representatives]
    missing_layer_one = bases[:1] + bases[2:]
    with pytest.raises(StructureError):
        load_catalog(io.BytesIO(catalog_file(2, 2, True, missing_layer_one)))
    with pytest.raises(StructureError):
        load_catalog(io.BytesIO(catalog_file(2, 2, True, bases[:-1])))


def test_layer_count_lower_bounds():
    """Test subspace counts and the per-layer orbit minimum."""
    assert [gaussian_binomial(4, d) for d in range(5)] == [1, 15, 35, 15, 1]
    assert [gaussian_binomial(6, d) for d in range(7)] == [1, 63, 651, 1395, 651, 63, 1]
    assert gaussian_binomial(3, 4) == 0
    assert layer_count_lower_bound(2, 2, True, 2) == 1
    assert layer_count_lower_bound(2, 3, False, 3) == 2


def group_elements(l, m, square):
    """Every group element acting on l x m functionals."""
    transposes = (False, True) if square else (False,)
    return [SymmetryWitness(left, right, t)
            for left in enumerate_gl(l) for right in enumerate_gl(m) for t in transposes]


@pytest.mark.parametrize('l, m, square', [(2, 2, True), (2, 2, False), (2, 3, False)])
def test_representatives_are_pairwise_inequivalent(l, m, square):
    """Test by brute force that orbits are disjoint and cover every subspace."""
    catalog = enumerate_orbits(l, m, square)
    group = group_elements(l, m, square)
    seen = {}
    for orbit_id, rep in enumerate(catalog.representatives):
        images = {g.apply(rep.basis, l, m).basis for g in group}
        for basis in images:
            assert basis not in seen, f'orbits {seen.get(basis)} and {orbit_id} meet'
            seen[basis] = orbit_id
    assert len(seen) == sum(gaussian_binomial(l * m, d) for d in range(l * m + 1))
