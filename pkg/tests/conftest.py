import pytest

from certificates import to_bytes
from engine import EngineConfig, prove_format
from orbits import RestrictionSet, enumerate_orbits

# The ten restriction sets of the 2x2 walkthrough. Key 9 is the unrestricted
# product, key 0 kills every variable.
WALKTHROUGH_SETS = {
    0: ['a00', 'a01', 'a10', 'a11'],
    1: ['a00', 'a01', 'a10'],
    2: ['a00', 'a01+a10', 'a11'],
    3: ['a00', 'a01'],
    4: ['a00', 'a01+a10'],
    5: ['a00', 'a11'],
    6: ['a01+a10', 'a00+a01+a11'],
    7: ['a00'],
    8: ['a01+a10'],
    9: [],
}
WALKTHROUGH_BOUNDS = [0, 2, 4, 4, 6, 4, 6, 6, 6, 7]


@pytest.fixture(scope='session')
def config():
    """Single-threaded engine config with the shipped defaults."""
    return EngineConfig.load(thread_count=1)


@pytest.fixture(scope='session')
def catalog_2x2():
    """Orbit catalog of 2x2 restriction sets with the transpose symmetry."""
    return enumerate_orbits(2, 2, True)


@pytest.fixture(scope='session')
def walkthrough_sets():
    """The ten 2x2 restriction sets, keyed as in WALKTHROUGH_SETS."""
    return {k: RestrictionSet.parse(2, 2, texts) for k, texts in WALKTHROUGH_SETS.items()}


@pytest.fixture(scope='session')
def proof_222(config):
    """Full <2,2,2> proof run."""
    return prove_format(2, 2, 2, config)


@pytest.fixture(scope='session')
def walkthrough_orbits(proof_222, walkthrough_sets):
    """Orbit id of every walkthrough set in the proof's catalog."""
    return {k: proof_222.catalog.orbit_of(s) for k, s in walkthrough_sets.items()}


@pytest.fixture(scope='session')
def cert_bytes(proof_222):
    """Serialized <2,2,2> certificate."""
    return to_bytes(proof_222.certificate)


@pytest.fixture(scope='session')
def walkthrough_bounds():
    """Lower bounds the walkthrough sets are known to reach, in key order."""
    return WALKTHROUGH_BOUNDS
