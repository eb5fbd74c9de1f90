"""Schwartzman asymptotic cycles of solenoid leaves.

A leaf is exhausted by windows of complete block passages; each window is
closed up by a cap of fixed volume lying in the trapping ball, so the cap
adds volume but no homology.  The normalized class of the window is
compared projectively with the Ruelle-Sullivan class of the solenoid.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .circle import apply_map, blow_up, locate_blocks
from .currents import rs_class
from .homology import HomologyBasis
from .solenoid import SolenoidSpec, itinerary

FORWARD = "forward"
SYMMETRIC = "symmetric"
EXHAUSTION_NOTE = (
    "limits are checked along block-window exhaustions only "
    "(windows of complete block passages closed by homologically trivial caps)"
)
DEFAULT_TOLERANCE = 1e-3
_CHUNK = 1 << 21


@dataclass(frozen=True)
class ExhaustionPolicy:
    sidedness: str = FORWARD
    closing_volume: Fraction = Fraction(0)
    schedule: tuple[int, ...] = (1_000, 10_000, 100_000)

    def __post_init__(self):
        if self.sidedness not in (FORWARD, SYMMETRIC):
            raise ValueError(f"sidedness must be {FORWARD!r} or {SYMMETRIC!r}")
        cv = Fraction(self.closing_volume) if not isinstance(self.closing_volume, float) else Fraction(repr(self.closing_volume))
        if cv < 0:
            raise ValueError("closing volume must be >= 0")
        object.__setattr__(self, "closing_volume", cv)
        schedule = tuple(int(n) for n in self.schedule)
        if not schedule or schedule[0] < 1 or any(b <= a for a, b in zip(schedule, schedule[1:])):
            raise ValueError(f"schedule must be strictly increasing positive integers, got {schedule}")
        object.__setattr__(self, "schedule", schedule)

    def window(self, N: int) -> tuple[int, int]:
        return (0, N) if self.sidedness == FORWARD else (-N, N + 1)

    def to_dict(self) -> dict:
        return {
            "sidedness": self.sidedness,
            "closing_volume": str(self.closing_volume),
            "schedule": list(self.schedule),
        }


@dataclass(frozen=True)
class AsymptoticEstimate:
    raw: tuple[int, ...]
    volume: Fraction
    normalized: tuple[Fraction, ...]
    N: int
    frequencies: tuple[float, ...]
    gamma_ratio: Fraction

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "raw": list(self.raw),
            "volume": str(self.volume),
            "normalized": [float(v) for v in self.normalized],
            "frequencies": list(self.frequencies),
            "gamma_ratio": float(self.gamma_ratio),
        }


def _window_counts(spec: SolenoidSpec, thetas, n0: int, n1: int) -> np.ndarray:
    """Per-leaf passage counts through each block, shape (leaves, r)."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=np.float64))
    counts = np.zeros((len(thetas), spec.r), dtype=np.int64)
    step = max(1, _CHUNK // max(1, len(thetas)))
    for a in range(n0, n1, step):
        b = min(n1, a + step)
        blocks = itinerary(spec, thetas, a, b)
        for i in range(spec.r):
            counts[:, i] += np.count_nonzero(blocks == i, axis=1)
    return counts


def birkhoff_frequencies(spec: SolenoidSpec, theta_y: float, N: int, method: str = "rotation"):
    """Fraction of the first N return times spent in each block.

    ``rotation`` follows the orbit in collapse coordinates with ordinary
    floating point; ``denjoy-orbit`` places h^n(y) = Phi(theta_y + n alpha)
    on the Denjoy circle and locates blocks there; ``return-map`` iterates
    the Denjoy map itself (slow, meant for small N).
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if method == "rotation":
        alpha = float(spec.map.rotation)
        n = np.arange(N, dtype=np.float64)
        theta = np.mod(theta_y + n * alpha, 1.0)
        blocks = spec.partition.block_of_angle(theta)
    elif method == "denjoy-orbit":
        alpha = float(spec.map.rotation)
        theta = np.mod(theta_y + np.arange(N, dtype=np.float64) * alpha, 1.0)
        blocks = locate_blocks(spec.partition, spec.map, blow_up(spec.map, theta))
        if np.any(blocks < 0):
            raise ValueError("orbit point fell into a separating gap")
    elif method == "return-map":
        y = float(blow_up(spec.map, theta_y))
        blocks = np.empty(N, dtype=np.int64)
        for k in range(N):
            blocks[k] = locate_blocks(spec.partition, spec.map, y)
            y = float(apply_map(spec.map, y))
        if np.any(blocks < 0):
            raise ValueError("return-map orbit fell into a separating gap")
    else:
        raise ValueError(f"unknown method {method!r}")
    return np.bincount(blocks, minlength=spec.r) / N


def _estimate_from_counts(spec: SolenoidSpec, counts: np.ndarray, N: int, policy: ExhaustionPolicy):
    coords = spec.coords_matrix()
    raw = tuple(int(v) for v in counts @ coords)
    volume = sum((int(c) * v for c, v in zip(counts, spec.volumes)), Fraction(0)) + policy.closing_volume
    normalized = tuple(Fraction(v) / volume for v in raw)
    total = int(counts.sum())
    return AsymptoticEstimate(
        raw=raw,
        volume=volume,
        normalized=normalized,
        N=N,
        frequencies=tuple(float(c) / total for c in counts),
        gamma_ratio=policy.closing_volume / volume,
    )


def schwartzman_estimate(
    spec: SolenoidSpec,
    basis: HomologyBasis | None,
    theta_y: float,
    N: int,
    policy: ExhaustionPolicy | None = None,
) -> AsymptoticEstimate:
    policy = policy or ExhaustionPolicy()
    if basis is not None and basis.rank != spec.coords_matrix().shape[1]:
        raise ValueError("basis rank does not match block coordinates")
    counts = _window_counts(spec, [theta_y], *policy.window(N))[0]
    return _estimate_from_counts(spec, counts, N, policy)


def projective_distance(u, v) -> float:
    """l1 distance after scaling both vectors to unit l1 norm."""
    su = sum(abs(x) for x in u)
    sv = sum(abs(x) for x in v)
    if su == 0 or sv == 0:
        return float("inf")
    return float(sum(abs(Fraction(x) / su - Fraction(y) / sv) for x, y in zip(u, v)))


@dataclass
class RepresentationReport:
    schedule: tuple[int, ...]
    leaves: tuple[float, ...]
    rows: list[dict]
    max_distance: list[float]
    max_coordinate_error: list[float]
    tolerance: float
    verdict: str
    note: str = EXHAUSTION_NOTE

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["N", "leaf", "distance", "gamma_ratio"])
        for row in self.rows:
            writer.writerow([row["N"], row["leaf"], repr(row["distance"]), repr(row["gamma_ratio"])])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "tolerance": self.tolerance,
            "schedule": list(self.schedule),
            "max_distance": self.max_distance,
            "final_max_distance": self.max_distance[-1],
            "max_coordinate_error": self.max_coordinate_error,
            "leaves": len(self.leaves),
            "note": self.note,
        }


def full_representation_check(
    spec: SolenoidSpec,
    basis: HomologyBasis | None,
    m: int,
    policy: ExhaustionPolicy | None = None,
    seed: int = 0,
    tolerance: float = DEFAULT_TOLERANCE,
) -> RepresentationReport:
    """Compare leaf estimates for m random leaves with the normalized class.

    Passes when the worst projective distance does not grow along the
    schedule and ends at or below ``tolerance``.
    """
    if m < 1:
        raise ValueError("leaf sample size must be >= 1")
    policy = policy or ExhaustionPolicy()
    target = rs_class(spec, basis).normalized
    thetas = np.random.default_rng(seed).random(m)
    rows: list[dict] = []
    max_dist: list[float] = []
    max_coord: list[float] = []
    for N in policy.schedule:
        counts = _window_counts(spec, thetas, *policy.window(N))
        worst = 0.0
        worst_coord = 0.0
        for leaf, c in enumerate(counts):
            est = _estimate_from_counts(spec, c, N, policy)
            d = projective_distance(est.normalized, target)
            coord = max(float(abs(x - Fraction(y))) for x, y in zip(est.normalized, target))
            rows.append({"N": N, "leaf": leaf, "distance": d, "gamma_ratio": float(est.gamma_ratio)})
            worst = max(worst, d)
            worst_coord = max(worst_coord, coord)
        max_dist.append(worst)
        max_coord.append(worst_coord)
    monotone = all(b <= a for a, b in zip(max_dist, max_dist[1:]))
    verdict = "pass" if monotone and max_dist[-1] <= tolerance else "fail"
    return RepresentationReport(
        policy.schedule, tuple(float(t) for t in thetas), rows, max_dist, max_coord, tolerance, verdict
    )
