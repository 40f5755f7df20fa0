import pytest

from backend import properties
from backend.properties import DEFAULT_COUNTS, PROPERTIES, PropertyParams, run_property
from backend.document import SELFCHECK_PROPERTIES

PARAMS = PropertyParams(3, 8, (-12, 12))

REDUCED_COUNTS = {
    "cartier": 25,
    "galois-invariance": 25,
    "kummer-invariance": 20,
    "sp-homomorphism": 20,
    "sp-equivariance": 20,
    "lift-roundtrip": 10,
    "filtration": 10,
}


def test_every_selfcheck_name_has_a_property():
    assert set(PROPERTIES) == set(SELFCHECK_PROPERTIES) == set(DEFAULT_COUNTS) == set(REDUCED_COUNTS)


@pytest.mark.parametrize("name", sorted(REDUCED_COUNTS))
def test_property_holds(name):
    count = REDUCED_COUNTS[name]
    result = run_property(name, PARAMS, count, seed=1)
    assert result.passed, result.failures
    assert result.to_dict()["count"] == count


@pytest.mark.parametrize("params", [PropertyParams(2, 8, (-12, 12)), PropertyParams(5, 24, (-12, 12))])
def test_kummer_invariance_for_other_primes(params):
    result = run_property("kummer-invariance", params, 10, seed=11)
    assert result.passed, result.failures


@pytest.mark.slow
@pytest.mark.parametrize("name", sorted(DEFAULT_COUNTS))
def test_property_holds_at_full_count(name):
    result = run_property(name, PARAMS, seed=0)
    assert result.count == DEFAULT_COUNTS[name]
    assert result.passed, result.failures


def test_runs_are_reproducible():
    first = run_property("galois-invariance", PARAMS, 10, seed=5).to_dict()
    second = run_property("galois-invariance", PARAMS, 10, seed=5).to_dict()
    assert first == second


def test_failures_are_counted_and_capped(monkeypatch):
    monkeypatch.setitem(properties.PROPERTIES, "cartier", lambda rng, params: False)
    result = run_property("cartier", PARAMS, 8, seed=0)
    assert result.failed == 8
    assert len(result.failures) == 5
    assert not result.to_dict()["pass"]
