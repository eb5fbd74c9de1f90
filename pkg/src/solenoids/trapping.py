"""Audit of the five trapping-region conditions on the symbolic model.

The model has a collar W' = [0, 1] x S^{k-1} x K glued between blocks: a
leaf leaves block i through D_i^-, enters the collar at t = 0, crosses the
level t = 1/2 where the transversal T = {p} x K sits, and leaves at t = 1
into the next block through D_j^+ after the holonomy h.  The map
pi: S -> T takes collar time t to epsilon0 * (2t - 1) and sweeps each block
over [epsilon0, 1 - epsilon0] on the circle.  The sphere factor is connected
for k >= 2 and a point for k = 1, so components of pi^{-1}(0) are indexed
by the transversal coordinate.

Conditions are checked on a finite sample of leaf passages; every failure
carries a witness.  ``seeded_defects`` returns one broken model per
condition so the audit itself can be tested.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .circle import from_fixed, rotation_orbit
from .solenoid import SolenoidSpec

_LEVEL_TOL = 1e-12
_MATCH_TOL = 1e-12
_MIN_SLOPE = 1e-8

CONDITIONS = {
    1: "W is the preimage of (-epsilon0, epsilon0)",
    2: "global transversal inside the zero level",
    3: "each zero-level component meets T once",
    4: "0 is a regular value",
    5: "complementary pieces enter and leave T once each",
}


def _linear_collar(epsilon0: float) -> Callable:
    return lambda t: epsilon0 * (2.0 * np.asarray(t, dtype=np.float64) - 1.0)


@dataclass(frozen=True)
class TrappingModel:
    epsilon0: float
    collar_pi: Callable
    block_ranges: tuple[tuple[float, float], ...]
    components: np.ndarray  # rotation coordinate of each sampled zero-level component
    component_blocks: np.ndarray  # block crossed right after each component
    transversal: tuple[tuple[float, float], ...]  # (rotation coordinate, collar time)
    return_map: Callable  # rotation coordinate of the next zero-level crossing
    r: int


@dataclass(frozen=True)
class ConditionResult:
    condition: int
    passed: bool
    detail: str
    witness: object = None

    def to_dict(self) -> dict:
        witness = self.witness
        if isinstance(witness, np.generic):
            witness = witness.item()
        return {
            "condition": self.condition,
            "name": CONDITIONS[self.condition],
            "passed": self.passed,
            "detail": self.detail,
            "witness": witness,
        }


@dataclass(frozen=True)
class TrappingReport:
    results: tuple[ConditionResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def __getitem__(self, condition: int) -> ConditionResult:
        return self.results[condition - 1]

    def __iter__(self):
        return iter(self.results)

    def __len__(self) -> int:
        return len(self.results)

    def failed(self) -> list[int]:
        return [r.condition for r in self.results if not r.passed]

    def to_dict(self) -> dict:
        return {"passed": self.passed, "conditions": [r.to_dict() for r in self.results]}


def trapping_model(spec: SolenoidSpec, n_leaves: int = 16, passages: int = 8, seed: int = 0):
    """Sampled symbolic model of the collar, blocks and transversal of ``spec``."""
    eps = spec.epsilon0
    rng = np.random.default_rng(seed)
    starts = rng.random(n_leaves)
    fixed = rotation_orbit(spec.map.alpha, starts[:, None], np.arange(passages))
    components = from_fixed(fixed).ravel()
    alpha = spec.map.rotation
    return TrappingModel(
        epsilon0=eps,
        collar_pi=_linear_collar(eps),
        block_ranges=tuple((eps, 1.0 - eps) for _ in range(spec.r)),
        components=components,
        component_blocks=spec.partition.block_of_angle(components),
        transversal=tuple((float(c), 0.5) for c in components),
        return_map=lambda theta: np.mod(np.asarray(theta) + alpha, 1.0),
        r=spec.r,
    )


def _circ_dist(a, b):
    return np.abs(np.mod(np.asarray(a) - np.asarray(b) + 0.5, 1.0) - 0.5)


def _zero_level(model: TrappingModel, grid: np.ndarray):
    vals = np.asarray(model.collar_pi(grid))
    sign = np.sign(vals)
    crossings = []
    for i in range(len(grid) - 1):
        if sign[i] == 0:
            crossings.append(float(grid[i]))
        elif sign[i] * sign[i + 1] < 0:
            crossings.append(brentq(lambda t: float(model.collar_pi(t)), grid[i], grid[i + 1], xtol=1e-15))
    return crossings


def _condition_1(model: TrappingModel, grid) -> ConditionResult:
    eps = model.epsilon0
    if not 0 < eps < 0.5:
        return ConditionResult(1, False, f"epsilon0 = {eps} outside (0, 1/2)", eps)
    vals = np.asarray(model.collar_pi(grid))
    if abs(vals[0] + eps) > _LEVEL_TOL or abs(vals[-1] - eps) > _LEVEL_TOL:
        return ConditionResult(1, False, "collar ends are not mapped to -/+ epsilon0", (vals[0], vals[-1]))
    inner = vals[1:-1]
    bad = np.flatnonzero(np.abs(inner) >= eps)
    if bad.size:
        return ConditionResult(1, False, "collar interior leaves (-eps0, eps0)", float(grid[1 + bad[0]]))
    for i, (lo, hi) in enumerate(model.block_ranges):
        if not (eps <= lo < hi <= 1.0 - eps):
            return ConditionResult(
                1, False, f"block {i} sweeps pi over ({lo}, {hi}), meeting (-eps0, eps0)", i
            )
    return ConditionResult(1, True, "W equals the open collar")


def _condition_2(model: TrappingModel) -> ConditionResult:
    if not model.transversal:
        return ConditionResult(2, False, "transversal is empty", None)
    for theta, t in model.transversal:
        level = float(model.collar_pi(t))
        if abs(level) > _LEVEL_TOL:
            return ConditionResult(2, False, f"transversal point at pi = {level:.3g}", (theta, t))
    t_theta = np.array([p[0] for p in model.transversal])
    for i in range(model.r):
        comps = model.components[model.component_blocks == i]
        if comps.size == 0:
            continue
        if not np.any(_circ_dist(comps[:, None], t_theta[None, :]) <= _MATCH_TOL):
            return ConditionResult(2, False, f"leaves through block {i} never meet T", i)
    return ConditionResult(2, True, f"{len(model.transversal)} transversal points on pi = 0")


def _condition_3(model: TrappingModel) -> ConditionResult:
    t_theta = np.array([p[0] for p in model.transversal]) if model.transversal else np.empty(0)
    for theta in model.components:
        hits = int(np.count_nonzero(_circ_dist(theta, t_theta) <= _MATCH_TOL))
        if hits != 1:
            return ConditionResult(
                3, False, f"component at rotation coordinate {theta:.12f} meets T {hits} times", float(theta)
            )
    return ConditionResult(3, True, f"{len(model.components)} components, one point each")


def _condition_4(model: TrappingModel, grid) -> ConditionResult:
    zeros = _zero_level(model, grid)
    if len(zeros) != 1:
        return ConditionResult(4, False, f"collar meets pi = 0 at {len(zeros)} times", zeros)
    t0 = zeros[0]
    h = 1e-6
    slope = (float(model.collar_pi(t0 + h)) - float(model.collar_pi(t0 - h))) / (2 * h)
    if abs(slope) < _MIN_SLOPE:
        return ConditionResult(4, False, f"d pi / dt = {slope:.3g} at the zero level", t0)
    return ConditionResult(4, True, f"d pi / dt = {slope:.6g} at t = {t0:.6g}")


def _condition_5(model: TrappingModel, grid) -> ConditionResult:
    zeros = _zero_level(model, grid)
    if not zeros:
        return ConditionResult(5, False, "no zero level in the collar", None)
    t0 = zeros[0]
    delta = 1e-3
    before = float(model.collar_pi(t0 - delta))
    after = float(model.collar_pi(t0 + delta))
    if not (before < 0 < after):
        return ConditionResult(5, False, "leaves cross the zero level against the orientation", t0)
    for i, (lo, hi) in enumerate(model.block_ranges):
        if not (0 < lo < hi < 1):
            return ConditionResult(5, False, f"block {i} reaches the zero level", i)
    nxt = np.asarray(model.return_map(model.components))
    stall = np.flatnonzero(_circ_dist(nxt, model.components) <= _MATCH_TOL)
    if stall.size:
        theta = float(model.components[stall[0]])
        return ConditionResult(
            5, False, "piece closes up on a single transversal point (no distinct exit)", theta
        )
    return ConditionResult(5, True, "every piece runs from one T point to a different one")


def check_trapping(spec_or_model, grid_size: int = 257) -> TrappingReport:
    """Check the five trapping conditions; failures are report entries."""
    model = spec_or_model
    if isinstance(spec_or_model, SolenoidSpec):
        model = trapping_model(spec_or_model)
    grid = np.linspace(0.0, 1.0, grid_size)
    return TrappingReport(
        (
            _condition_1(model, grid),
            _condition_2(model),
            _condition_3(model),
            _condition_4(model, grid),
            _condition_5(model, grid),
        )
    )


def seeded_defects(model: TrappingModel) -> dict[str, tuple[TrappingModel, int]]:
    """One mutation per condition: name -> (broken model, condition it breaks)."""
    eps = model.epsilon0
    ranges = list(model.block_ranges)
    ranges[0] = (eps / 2.0, 1.0 - eps)
    moved = list(model.transversal)
    moved[0] = (moved[0][0], 0.6)
    return {
        "block-enters-collar": (replace(model, block_ranges=tuple(ranges)), 1),
        "transversal-off-level": (replace(model, transversal=tuple(moved)), 2),
        "transversal-point-deleted": (replace(model, transversal=tuple(model.transversal[1:])), 3),
        "degenerate-level": (
            replace(model, collar_pi=lambda t: eps * (2.0 * np.asarray(t, dtype=np.float64) - 1.0) ** 3),
            4,
        ),
        "stalled-holonomy": (replace(model, return_map=lambda theta: np.asarray(theta)), 5),
    }
