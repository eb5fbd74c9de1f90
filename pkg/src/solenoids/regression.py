"""Frozen reference configurations shared by the verifier and the tests."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np

from .circle import EXACT, GAP_SEPARATED, GapSchedule, RotationNumber, build_denjoy, build_partition
from .currents import Bump, TorusForm, TorusModel
from .solenoid import BlockSpec, SolenoidSpec, build_solenoid

REFERENCE_GAPS = (0.1, 2.0)


@lru_cache(maxsize=None)
def reference_map(c: float = REFERENCE_GAPS[0], s: float = REFERENCE_GAPS[1]):
    return build_denjoy(RotationNumber.golden(), GapSchedule(c, s))


def reference_solenoid(
    weights=(Fraction(3, 10), Fraction(7, 10)),
    coords=((1, 0), (0, 1)),
    volumes=(1, 2),
    mode: str = EXACT,
    closing_volume=0,
    measure_scale=1,
    fmap=None,
) -> SolenoidSpec:
    fmap = fmap or reference_map()
    part = build_partition(fmap, weights, mode=mode)
    blocks = [
        BlockSpec(f"S{i + 1}", 1, Fraction(v), tuple(c)) for i, (c, v) in enumerate(zip(coords, volumes))
    ]
    return build_solenoid(fmap, part, blocks, closing_volume=closing_volume, measure_scale=measure_scale)


_SPECS = [
    ((1,), ((1, 0, 0),)),
    ((Fraction(3, 10), Fraction(7, 10)), ((1, 0, 0), (0, 1, 0))),
    ((Fraction(1, 2), Fraction(1, 2)), ((1, 0, 0), (0, 0, 1))),
    ((Fraction(1, 5), Fraction(3, 10), Fraction(1, 2)), ((1, 0, 0), (0, 1, 0), (0, 0, 1))),
    ((Fraction(3, 10), Fraction(7, 10)), ((1, 1, 0), (0, -1, 1))),
    ((Fraction(2, 3), Fraction(1, 3)), ((1, 0, 1), (0, 1, 0))),
    ((Fraction(1, 4), Fraction(3, 4)), ((-1, 0, 0), (1, 1, 1))),
    ((Fraction(1, 7), Fraction(6, 7)), ((0, 1, 0), (1, 0, -1))),
    ((Fraction(2, 5), Fraction(1, 5), Fraction(2, 5)), ((1, 0, 0), (0, 1, 0), (1, 1, 0))),
    ((Fraction(9, 10), Fraction(1, 10)), ((0, 0, 1), (1, -1, 0))),
]


def _bump_on_path(torus: TorusModel, v, tau: float, radius: float, amplitude: float) -> Bump:
    center = np.mod(np.asarray(torus.ball_center) + tau * np.asarray(v, dtype=float), 1.0)
    return Bump(tuple(float(c) for c in center), radius, amplitude)


def currents_suite(seed: int = 20) -> list[tuple[str, SolenoidSpec, TorusForm]]:
    """Twenty (solenoid, torus form) pairs on T^3 for backend cross-checks.

    Bumps are centred on the leaf crossings so that the exact parts are
    actually sampled by the quadrature.
    """
    rng = np.random.default_rng(seed)
    torus = TorusModel()
    cases = []
    for j, (weights, coords) in enumerate(_SPECS):
        mode = EXACT if j % 2 == 0 else GAP_SEPARATED
        spec = reference_solenoid(weights, coords, [1 + i for i in range(len(coords))], mode=mode)
        for f in range(2):
            constant = tuple(float(x) for x in np.round(rng.uniform(-2, 2, 3), 3))
            v = coords[f % len(coords)]
            bump = _bump_on_path(torus, v, 0.3 + 0.1 * f, 0.1, float(np.round(rng.uniform(-1.5, 1.5), 3)))
            cases.append((f"spec{j}-form{f}", spec, TorusForm(torus, constant, (bump,))))
    return cases
