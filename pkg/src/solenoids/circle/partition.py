"""Cyclically ordered partitions of the Cantor set with prescribed measures."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .denjoy import DenjoyMap, blow_up, collapse
from .rotation import from_fixed, rotation_orbit

EXACT = "exact"
GAP_SEPARATED = "gap-separated"
MODES = (EXACT, GAP_SEPARATED)

WEIGHT_SUM_TOL = 1e-12


class PartitionError(ValueError):
    """Raised when a gap-separated partition misses its measure tolerance."""

    def __init__(self, message: str, deviation: float):
        super().__init__(message)
        self.deviation = deviation


def as_fraction(value) -> Fraction:
    """Exact rational for ints, Fractions, decimal strings and floats.

    Floats go through their shortest repr, so 0.3 becomes 3/10 rather than
    the binary expansion of the double.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    value = float(value)
    if not np.isfinite(value):
        raise ValueError(f"non-finite value {value}")
    return Fraction(repr(value))


@dataclass(frozen=True)
class MeasuredPartition:
    """Blocks K_0..K_{r-1} of the Cantor set in cyclic order.

    ``cuts`` holds r + 1 lifted rotation-circle angles with
    ``cuts[r] = cuts[0] + 1``; block i collapses onto the arc between
    ``cuts[i]`` and ``cuts[i+1]``.  In exact mode the arcs are half-open
    ``[cuts[i], cuts[i+1])`` and ``measures`` are exact rationals.  In
    gap-separated mode every cut is the collapse of a gap (``gap_indices``),
    blocks are compact and pairwise disjoint, and an orbit angle sitting on a
    cut belongs to the block on its left (the left-endpoint convention).
    """

    weights: tuple[Fraction, ...]
    cuts: tuple[float, ...]
    measures: tuple
    mode: str = EXACT
    gap_indices: tuple[int, ...] | None = None
    tol: float = 0.0
    renormalized: bool = False
    n_search: int = 0

    @property
    def r(self) -> int:
        return len(self.weights)

    @property
    def deviations(self) -> tuple[float, ...]:
        return tuple(abs(float(m) - float(w)) for m, w in zip(self.measures, self.weights))

    @property
    def max_deviation(self) -> float:
        return max(self.deviations)

    def block_of_angle(self, theta) -> np.ndarray:
        """Block index (0-based) of rotation-circle angles under the mode's convention."""
        theta = np.asarray(theta, dtype=np.float64)
        if self.r == 1:
            return np.zeros(theta.shape, dtype=np.int64)
        cuts = np.asarray(self.cuts)
        shifted = np.mod(theta - cuts[0], 1.0)
        inner = cuts[1:-1] - cuts[0]
        if self.mode == EXACT:
            return np.searchsorted(inner, shifted, side="right").astype(np.int64)
        idx = np.searchsorted(inner, shifted, side="left").astype(np.int64)
        return np.where(shifted == 0.0, self.r - 1, idx)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "weights": [str(w) for w in self.weights],
            "cuts": list(self.cuts),
            "measures": [str(m) if isinstance(m, Fraction) else m for m in self.measures],
            "gap_indices": None if self.gap_indices is None else list(self.gap_indices),
            "tol": self.tol,
            "renormalized": self.renormalized,
            "n_search": self.n_search,
        }


def _normalize_weights(weights) -> tuple[tuple[Fraction, ...], bool]:
    lam = tuple(as_fraction(w) for w in weights)
    if not lam:
        raise ValueError("at least one weight is required")
    if any(w <= 0 for w in lam):
        raise ValueError(f"weights must be positive, got {[str(w) for w in lam]}")
    total = sum(lam)
    if abs(float(total) - 1.0) > WEIGHT_SUM_TOL:
        raise ValueError(f"weights sum to {float(total)!r}, not 1")
    if total != 1:
        return tuple(w / total for w in lam), True
    return lam, False


def build_partition(
    fmap: DenjoyMap,
    weights,
    mode: str = EXACT,
    tol: float = 1e-3,
    n_search: int = 10_000,
) -> MeasuredPartition:
    """Partition K into r blocks with mu_K(K_i) = weights[i].

    Exact mode cuts the rotation circle at the cumulative sums.  Gap-separated
    mode moves each cut to the nearest orbit angle {theta* + n alpha} with
    |n| <= n_search, so every cut sits inside a gap; it raises
    ``PartitionError`` if some block then misses its weight by more than tol.
    """
    if mode not in MODES:
        raise ValueError(f"unknown partition mode {mode!r}; expected one of {MODES}")
    lam, renormalized = _normalize_weights(weights)
    cumulative = [Fraction(0)]
    for w in lam:
        cumulative.append(cumulative[-1] + w)

    if mode == EXACT:
        cuts = tuple(float(c) for c in cumulative)
        return MeasuredPartition(lam, cuts, lam, EXACT, None, 0.0, renormalized)

    if fmap.gaps.degenerate:
        raise ValueError("gap-separated partitions need gaps (the schedule has total mass 0)")
    n = np.arange(-n_search, n_search + 1, dtype=np.int64)
    angles = from_fixed(rotation_orbit(fmap.alpha, fmap.seed_angle, n))
    order = np.argsort(angles, kind="stable")
    sorted_angles = angles[order]

    chosen = []
    cuts = []
    for i, target in enumerate(cumulative[:-1]):
        t = float(target)
        k = int(np.searchsorted(sorted_angles, t))
        candidates = [(k - 1) % len(n), k % len(n)]
        best = min(candidates, key=lambda c: abs((sorted_angles[c] - t + 0.5) % 1.0 - 0.5))
        angle = float(sorted_angles[best])
        if i == 0 and angle >= 0.5:
            angle -= 1.0
        chosen.append(int(n[order[best]]))
        cuts.append(angle)
    cuts.append(cuts[0] + 1.0)
    if len(set(chosen)) != len(chosen) or any(b <= a for a, b in zip(cuts, cuts[1:])):
        raise PartitionError(
            f"cuts collide within |n| <= {n_search}; increase n_search", deviation=float("inf")
        )
    measures = tuple(b - a for a, b in zip(cuts, cuts[1:]))
    deviation = max(abs(m - float(w)) for m, w in zip(measures, lam))
    if deviation > tol:
        raise PartitionError(
            f"gap-separated partition deviates by {deviation:.3g} > tol {tol:g} "
            f"with |n| <= {n_search}",
            deviation=deviation,
        )
    return MeasuredPartition(
        lam, tuple(cuts), measures, GAP_SEPARATED, tuple(chosen), tol, renormalized, n_search
    )


def partition_from_dict(fmap: DenjoyMap, data: dict) -> MeasuredPartition:
    """Rebuild a partition and check it against the stored cuts."""
    mode = data.get("mode", EXACT)
    tol = data.get("tol") or 1e-3
    part = build_partition(
        fmap, data["weights"], mode, tol, n_search=data.get("n_search") or 10_000
    )
    stored = data.get("cuts")
    if stored is not None and not np.allclose(stored, part.cuts, rtol=0, atol=1e-12):
        raise ValueError("stored cuts do not match the partition rebuilt from the weights")
    return part


def block_arcs(partition: MeasuredPartition, fmap: DenjoyMap, tol: float | None = None):
    """Circle-coordinate arcs (start, end) covering each block, as lifts."""
    starts = []
    ends = []
    for i in range(partition.r):
        a, b = partition.cuts[i], partition.cuts[i + 1]
        if partition.mode == GAP_SEPARATED:
            n_a = partition.gap_indices[i]
            start = float(blow_up(fmap, a, tol)) + float(fmap.gap_length(n_a))
        else:
            start = float(blow_up(fmap, a, tol))
        starts.append(start)
        ends.append(float(blow_up(fmap, b, tol)))
    return starts, ends


def locate_block(partition: MeasuredPartition, fmap: DenjoyMap, x, tol: float | None = None):
    """Index of the block containing circle point x, or None inside a separating gap."""
    x = float(x) % 1.0
    if partition.mode == EXACT:
        theta = collapse(fmap, x, tol)
        return int(partition.block_of_angle(theta))
    starts, ends = block_arcs(partition, fmap, tol)
    for i, (a, b) in enumerate(zip(starts, ends)):
        for lift in (x - 1.0, x, x + 1.0):
            if a <= lift <= b:
                return i
    return None


def locate_blocks(partition: MeasuredPartition, fmap: DenjoyMap, x, tol: float | None = None):
    """Vectorised ``locate_block``; -1 marks points inside a separating gap."""
    x = np.mod(np.asarray(x, dtype=np.float64), 1.0)
    if partition.mode == EXACT:
        return partition.block_of_angle(collapse(fmap, x, tol))
    starts, ends = block_arcs(partition, fmap, tol)
    out = np.full(x.shape, -1, dtype=np.int64)
    for i, (a, b) in enumerate(zip(starts, ends)):
        for lift in (x - 1.0, x, x + 1.0):
            out = np.where((a <= lift) & (lift <= b), i, out)
    return out
