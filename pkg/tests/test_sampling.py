import math

import numpy as np
import pytest

from aialo.errors import DomainError, UnknownParameterOnly
from aialo.sampling import (
    NoisyOracle,
    SampleLedger,
    confidence_radius,
    delta_prime,
    draw,
    draw_batch,
)


def test_degenerate_noise_returns_true_value():
    oracle = NoisyOracle(np.array([3.0, -1.0]), np.array([1e-12, 1e-12]), rng_seed=1)
    ledger = SampleLedger(2)
    assert draw(oracle, ledger, 0) == pytest.approx(3.0, abs=1e-9)
    assert draw(oracle, ledger, 1) == pytest.approx(-1.0, abs=1e-9)


def test_replay_determinism_and_substream_independence():
    values = []
    for _ in range(2):
        oracle = NoisyOracle(np.zeros(3), np.ones(3), rng_seed=77)
        ledger = SampleLedger(3)
        values.append((draw(oracle, ledger, 1), draw(oracle, ledger, 1)))
    assert values[0] == values[1]
    assert values[0][0] != values[0][1]

    # Drawing from other parameters first must not shift parameter 1's stream.
    oracle = NoisyOracle(np.zeros(3), np.ones(3), rng_seed=77)
    ledger = SampleLedger(3)
    draw(oracle, ledger, 0)
    draw(oracle, ledger, 2)
    assert draw(oracle, ledger, 1) == values[0][0]


def test_batch_draws_match_sequential_draws():
    a = NoisyOracle(np.array([2.0]), np.array([1.0]), rng_seed=5)
    b = NoisyOracle(np.array([2.0]), np.array([1.0]), rng_seed=5)
    la, lb = SampleLedger(1), SampleLedger(1)
    batch = draw_batch(a, la, 0, 4)
    single = [draw(b, lb, 0) for _ in range(4)]
    np.testing.assert_allclose(batch, single)


def test_law_of_large_numbers():
    oracle = NoisyOracle(np.array([3.0]), np.array([1.0]), rng_seed=123)
    ledger = SampleLedger(1)
    draw_batch(oracle, ledger, 0, 10**5)
    assert ledger.mean(0) == pytest.approx(3.0, abs=0.02)


def test_unknown_parameter_index_rejected():
    oracle = NoisyOracle(np.array([1.0]), np.array([1.0]), rng_seed=0)
    with pytest.raises(UnknownParameterOnly):
        draw(oracle, SampleLedger(1), 1)


def test_ledger_consistency():
    rng = np.random.default_rng(4)
    oracle = NoisyOracle(rng.normal(size=5), np.ones(5), rng_seed=9)
    ledger = SampleLedger(5)
    for i in rng.integers(0, 5, size=200):
        draw(oracle, ledger, int(i))
    assert ledger.total == int(ledger.counts.sum()) == 200
    np.testing.assert_allclose(ledger.means(), ledger.sums / ledger.counts)


def test_confidence_radius_value():
    # 3*sqrt(2*ln(ln(1.5)/0.01)) evaluated at high precision
    assert confidence_radius(1.0, 1, 0.01) == pytest.approx(8.163583474483728, rel=1e-12)


def test_confidence_radius_linear_in_sigma():
    u1 = confidence_radius(1.0, 17, 0.003)
    u2 = confidence_radius(2.0, 17, 0.003)
    assert u2 == pytest.approx(2.0 * u1, rel=1e-12)


def test_confidence_radius_decreasing():
    dp = 0.01
    assert confidence_radius(1.0, 10**6, dp) < confidence_radius(1.0, 10**4, dp) \
        < confidence_radius(1.0, 10**2, dp)


def test_confidence_radius_vector_matches_scalar():
    s = np.array([1, 5, 50, 5000])
    vec = confidence_radius(1.5, s, 0.004)
    for i, si in enumerate(s):
        assert vec[i] == pytest.approx(confidence_radius(1.5, int(si), 0.004), rel=1e-12)


def test_confidence_radius_domain_error():
    with pytest.raises(DomainError):
        confidence_radius(1.0, 1, 0.9)  # ln(1.5)/0.9 < 1


def test_delta_prime_values():
    assert delta_prime(0.1, 80) == pytest.approx(1.574901312368592e-3, rel=1e-12)
    assert delta_prime(0.1, 1) == pytest.approx(0.029240177382128668, rel=1e-12)
    for delta in (0.01, 0.1, 0.5, 0.99):
        for m in (1, 3, 80):
            assert 0.0 < delta_prime(delta, m) < 1.0


def test_uniform_coverage_of_confidence_radius():
    # Simultaneous coverage over s <= 5000 should hold in at least
    # 1 - 20*dp^{3/2} of trials; dp chosen so that bound equals 1 - delta.
    delta = 0.1
    dp = delta_prime(delta, 1)
    horizon, trials = 5000, 2000
    rng = np.random.default_rng(2024)
    draws = rng.normal(0.0, 1.0, size=(trials, horizon))
    steps = np.arange(1, horizon + 1, dtype=float)
    means = np.cumsum(draws, axis=1) / steps
    radii = confidence_radius(1.0, steps, dp)
    covered = np.all(np.abs(means) <= radii, axis=1)
    assert covered.mean() >= 1.0 - 20.0 * dp**1.5 - 0.02


def test_coverage_bound_constant():
    dp = delta_prime(0.1, 1)
    assert 20.0 * dp**1.5 == pytest.approx(0.1, rel=1e-9)
