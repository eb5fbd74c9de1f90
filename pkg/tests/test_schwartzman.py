from fractions import Fraction

import numpy as np
import pytest

from solenoids.circle import GapSchedule, RotationNumber, build_denjoy
from solenoids.currents import rs_class
from solenoids.regression import reference_solenoid
from solenoids.schwartzman import (
    ExhaustionPolicy,
    birkhoff_frequencies,
    full_representation_check,
    projective_distance,
    schwartzman_estimate,
)


def test_single_block_frequencies_and_estimate():
    spec = reference_solenoid((1,), ((1, 0),), (1,))
    for N in (1, 10, 1000):
        assert birkhoff_frequencies(spec, 0.3, N).tolist() == [1.0]
        est = schwartzman_estimate(spec, None, 0.3, N, ExhaustionPolicy(schedule=(N,)))
        assert est.normalized == (1, 0)


def test_first_passage_indicator(half_spec):
    assert birkhoff_frequencies(half_spec, 0.1, 1).tolist() == [1.0, 0.0]
    assert birkhoff_frequencies(half_spec, 0.6, 1).tolist() == [0.0, 1.0]


def test_half_half_frequencies_against_orbit_oracle(half_spec):
    N = 100_000
    bound = 10 * np.log(N) / N
    # rigid-rotation oracle: exact rational orbit membership
    alpha, _ = RotationNumber.golden().fraction(bits=128)
    x, step, half = Fraction(1, 10), alpha, Fraction(1, 2)
    hits = 0
    for _ in range(N):
        hits += x < half
        x += step
        if x >= 1:
            x -= 1
    oracle = hits / N
    freq = birkhoff_frequencies(half_spec, 0.1, N)
    assert abs(freq[0] - oracle) <= 1e-12
    assert np.max(np.abs(freq - 0.5)) <= bound


def test_estimate_half_half_at_1e4(half_spec):
    est = schwartzman_estimate(half_spec, None, 0.1, 10_000)
    assert np.max(np.abs(np.array(est.normalized, dtype=float) - 0.5)) <= 2e-3


def test_estimate_identity_and_gamma_bound(ref_spec):
    policy = ExhaustionPolicy(closing_volume=5, schedule=(100, 1000, 10_000))
    previous = None
    for N in policy.schedule:
        est = schwartzman_estimate(ref_spec, None, 0.42, N, policy)
        assert all(x * est.volume == r for x, r in zip(est.normalized, est.raw))
        assert est.gamma_ratio <= Fraction(5, N)
        if previous is not None:
            assert est.gamma_ratio < previous
        previous = est.gamma_ratio


def test_symmetric_window(ref_spec):
    policy = ExhaustionPolicy(sidedness="symmetric", schedule=(10,))
    est = schwartzman_estimate(ref_spec, None, 0.42, 10, policy)
    assert sum(est.raw) == 21


def test_policy_validation():
    with pytest.raises(ValueError):
        ExhaustionPolicy(schedule=(10, 10))
    with pytest.raises(ValueError):
        ExhaustionPolicy(closing_volume=-1)
    with pytest.raises(ValueError):
        ExhaustionPolicy(sidedness="both")


def test_projective_distance():
    assert projective_distance((1, 0), (3, 0)) == 0
    assert projective_distance((1, 1), (1, 0)) == pytest.approx(1.0)


def test_full_representation_single_block():
    spec = reference_solenoid((1,), ((1, 0),), (1,))
    report = full_representation_check(spec, None, 5, ExhaustionPolicy(schedule=(10, 100)))
    assert report.max_distance == [0.0, 0.0]
    assert report.passed


def test_full_representation_golden(ref_spec):
    report = full_representation_check(ref_spec, None, 50, ExhaustionPolicy(), seed=3)
    assert report.passed
    assert report.max_distance[-1] <= 1e-3
    assert all(b <= a for a, b in zip(report.max_distance, report.max_distance[1:]))
    assert "block-window" in report.note
    lines = report.to_csv().splitlines()
    assert lines[0] == "N,leaf,distance,gamma_ratio"
    assert len(lines) == 1 + 3 * 50


def test_rational_rotation_fails():
    fmap = build_denjoy(RotationNumber.from_rational(2, 5), GapSchedule(0.0, 2.0), allow_rational=True)
    spec = reference_solenoid(fmap=fmap)
    report = full_representation_check(spec, None, 50, ExhaustionPolicy(), seed=0)
    assert not report.passed
    assert report.max_distance[-1] > 1e-2


def test_volume_normalized_target(ref_spec):
    est = schwartzman_estimate(ref_spec, None, 0.2, 100_000)
    target = rs_class(ref_spec).normalized
    assert max(abs(float(x - y)) for x, y in zip(est.normalized, target)) <= 1e-3
