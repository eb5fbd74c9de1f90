from fractions import Fraction

import numpy as np
import pytest

from solenoids.circle import RotationNumber, from_fixed, rotation_orbit, to_fixed

GOLDEN = (5**0.5 - 1) / 2


def test_golden_value_and_convergents():
    rot = RotationNumber.golden()
    assert rot.value == pytest.approx(GOLDEN, abs=1e-16)
    conv = [(p, q) for (p, q, _), _ in zip(rot.convergents(), range(8))]
    # Fibonacci ratios
    assert conv[:6] == [(0, 1), (1, 1), (1, 2), (2, 3), (3, 5), (5, 8)]


def test_fraction_error_bound_holds():
    rot = RotationNumber.parse("1,2;3,1")
    approx, err = rot.fraction(bits=80)
    # value of [0; 1, 2, 3, 1, 3, 1, ...] computed from a long explicit expansion
    digits = [1, 2] + [3, 1] * 40
    x = Fraction(0)
    for a in reversed(digits):
        x = 1 / (a + x)
    assert abs(approx - x) <= err + Fraction(1, 10**40)


@pytest.mark.parametrize(
    "text, rational",
    [("golden", None), ("2/5", (2, 5)), ("1,2;1", None)],
)
def test_parse_round_trip(text, rational):
    rot = RotationNumber.parse(text)
    assert rot.rational == rational
    assert RotationNumber.from_dict(rot.to_dict()) == rot


def test_rational_test_mode():
    rot = RotationNumber.from_rational(2, 6)
    assert rot.is_rational
    assert rot.rational == (1, 3)
    orbit = from_fixed(rotation_orbit(rot, 0.0, np.arange(6)))
    expected = np.array([0, 1 / 3, 2 / 3, 0, 1 / 3, 2 / 3])
    dist = np.abs(np.mod(orbit - expected + 0.5, 1.0) - 0.5)
    assert np.all(dist < 1e-15)
    assert np.all((orbit >= 0) & (orbit < 1))


def test_finite_expansion_must_be_flagged():
    with pytest.raises(ValueError):
        RotationNumber.from_digits([2, 3])
    assert RotationNumber.from_digits([2, 3], truncated=True).truncated


@pytest.mark.parametrize("bad", ["", "5/3", "1/1", "a;b", "3/2"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        RotationNumber.parse(bad)


def test_fixed_point_orbit_matches_rational_oracle():
    rot = RotationNumber.golden()
    alpha, _ = rot.fraction(bits=128)
    theta = Fraction(1, 7)
    n = np.array([-(10**9), -5, 0, 3, 10**6, 10**12])
    got = from_fixed(rotation_orbit(rot, float(theta), n))
    for ni, g in zip(n, got):
        exact = (theta + int(ni) * alpha) % 1
        # alpha is stored to 2^-65, so the drift grows linearly in |n|
        assert abs(g - float(exact)) <= abs(int(ni)) * 2.0**-64 + 1e-15


def test_fixed_roundtrip():
    x = np.array([0.0, 0.25, 0.5, 0.999999])
    np.testing.assert_array_equal(from_fixed(to_fixed(x)), x)
