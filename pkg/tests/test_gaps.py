import math

import numpy as np
import pytest

from solenoids.circle import GapSchedule


def test_total_mass_closed_form():
    g = GapSchedule(0.1, 2.0)
    assert g.total_mass == pytest.approx(0.1 * (math.pi**2 / 3 - 1), rel=1e-14)


def test_one_sided_tail_matches_direct_sum():
    g = GapSchedule(0.3, 2.5)
    N = 50
    n = np.arange(N + 1, 2_000_000, dtype=np.float64)
    head = np.sum(g.length(n))
    # integral estimate of what the direct sum leaves out
    rest = 0.3 * (2_000_000.5) ** (-1.5) / 1.5
    assert g.one_sided_tail(N) == pytest.approx(head + rest, rel=1e-9)
    assert 2 * g.one_sided_tail(N) <= g.tail_bound(N)


def test_degenerate():
    g = GapSchedule(0.0, 2.0)
    assert g.degenerate
    assert g.total_mass == 0.0
    assert g.one_sided_tail(10) == 0.0


@pytest.mark.parametrize("c, s", [(-0.1, 2.0), (0.1, 1.0), (float("inf"), 2.0)])
def test_invalid(c, s):
    with pytest.raises(ValueError):
        GapSchedule(c, s)
