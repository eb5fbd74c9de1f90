"""Symbolic k-solenoids glued from blocks over a Denjoy holonomy.

A leaf is never stored as a point set.  It is the bi-infinite sequence of
blocks it crosses, read off from the rotation orbit of its transversal
coordinate; all geometry enters through block volumes, the closing volume
and the convention that test forms vanish on the ball containing the
trapping region.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .circle import (
    DenjoyMap,
    MeasuredPartition,
    apply_map,
    as_fraction,
    from_fixed,
    lift_inverse,
    lift_map,
    rotation_orbit,
)


@dataclass(frozen=True)
class BlockSpec:
    """One block S_i: a closed oriented k-manifold with two balls removed.

    ``boundary_orientations`` records how the boundary spheres of the removed
    balls D+ and D- are identified with S^{k-1}: +1 orientation preserving
    for D+, -1 reversing for D-.
    """

    label: str
    dimension: int
    volume: Fraction
    homology_coords: tuple[int, ...]
    normal_bundle_trivial: bool = True
    boundary_orientations: tuple[int, int] = (1, -1)
    filler: bool = False

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError(f"block {self.label!r}: dimension must be >= 1")
        object.__setattr__(self, "volume", as_fraction(self.volume))
        if self.volume <= 0:
            raise ValueError(f"block {self.label!r}: volume must be positive, got {self.volume}")
        coords = tuple(int(c) for c in self.homology_coords)
        if not coords:
            raise ValueError(f"block {self.label!r}: homology coordinates are empty")
        if not any(coords) and not self.filler:
            raise ValueError(f"block {self.label!r}: zero homology class (flag it as filler)")
        object.__setattr__(self, "homology_coords", coords)
        if tuple(self.boundary_orientations) != (1, -1):
            raise ValueError(
                f"block {self.label!r}: boundary spheres must be glued (+1 for D+, -1 for D-)"
            )

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "dimension": self.dimension,
            "volume": str(self.volume),
            "homology_coords": list(self.homology_coords),
            "normal_bundle_trivial": self.normal_bundle_trivial,
            "boundary_orientations": list(self.boundary_orientations),
            "filler": self.filler,
        }

    @classmethod
    def from_dict(cls, data: dict) -> BlockSpec:
        return cls(
            label=data["label"],
            dimension=int(data["dimension"]),
            volume=data["volume"],
            homology_coords=tuple(data["homology_coords"]),
            normal_bundle_trivial=data.get("normal_bundle_trivial", True),
            boundary_orientations=tuple(data.get("boundary_orientations", (1, -1))),
            filler=data.get("filler", False),
        )


def _transition(u):
    """C-infinity step from 0 (u <= 0) to 1 (u >= 1)."""
    u = np.asarray(u, dtype=np.float64)
    inner = (u > 0) & (u < 1)
    uc = np.where(inner, u, 0.5)
    a = np.exp(-1.0 / uc)
    b = np.exp(-1.0 / (1.0 - uc))
    return np.where(u <= 0, 0.0, np.where(u >= 1, 1.0, a / (a + b)))


@dataclass(frozen=True)
class CutoffProfile:
    """rho: R -> [0, 1], 1 for t <= 0, 0 for t >= c_cut, strictly decreasing between."""

    c_cut: float = 0.25
    kind: str = "smooth"

    def __post_init__(self):
        if not 0 < self.c_cut < 1:
            raise ValueError(f"c_cut must lie in (0, 1), got {self.c_cut}")
        if self.kind not in ("smooth", "cubic"):
            raise ValueError(f"unknown profile kind {self.kind!r}")

    def __call__(self, t):
        u = np.asarray(t, dtype=np.float64) / self.c_cut
        if self.kind == "cubic":
            v = np.clip(u, 0.0, 1.0)
            out = 1.0 - v * v * (3.0 - 2.0 * v)
        else:
            out = 1.0 - _transition(u)
        return float(out) if np.ndim(t) == 0 else out

    def is_valid(self, samples: int = 1001) -> bool:
        t = np.linspace(0.0, self.c_cut, samples)
        vals = np.asarray(self(t))
        return (
            self(-1.0) == 1.0
            and self(0.0) == 1.0
            and self(self.c_cut) == 0.0
            and self(1.0) == 0.0
            and bool(np.all(np.diff(vals) <= 0))
            # floating point saturates near the ends; demand strictness in the bulk
            and bool(np.all(np.diff(vals[samples // 10 : -(samples // 10)]) < 0))
        )

    def to_dict(self) -> dict:
        return {"c_cut": self.c_cut, "kind": self.kind}


@dataclass(frozen=True)
class SolenoidSpec:
    map: DenjoyMap
    partition: MeasuredPartition
    blocks: tuple[BlockSpec, ...]
    epsilon0: float = 0.25
    rho: CutoffProfile = field(default_factory=CutoffProfile)
    closing_volume: Fraction = Fraction(0)
    measure_scale: Fraction = Fraction(1)

    @property
    def r(self) -> int:
        return len(self.blocks)

    @property
    def dimension(self) -> int:
        return self.blocks[0].dimension

    @property
    def volumes(self) -> tuple[Fraction, ...]:
        return tuple(b.volume for b in self.blocks)

    def coords_matrix(self) -> np.ndarray:
        """Integer matrix with one row of homology coordinates per block."""
        return np.array([b.homology_coords for b in self.blocks], dtype=np.int64)

    def block_measures(self) -> tuple:
        """mu(K_i), including the transversal scale factor."""
        scale = self.measure_scale
        return tuple(
            m * scale if isinstance(m, Fraction) else float(m) * float(scale)
            for m in self.partition.measures
        )


def build_solenoid(
    fmap: DenjoyMap,
    partition: MeasuredPartition,
    blocks,
    epsilon0: float = 0.25,
    rho: CutoffProfile | None = None,
    closing_volume=0,
    measure_scale=1,
) -> SolenoidSpec:
    """Validate and assemble a solenoid; raises ValueError on any inconsistency."""
    blocks = tuple(blocks)
    if len(blocks) != partition.r:
        raise ValueError(f"{len(blocks)} blocks for a partition with {partition.r} pieces")
    dims = {b.dimension for b in blocks}
    if len(dims) != 1:
        raise ValueError(f"all blocks must share one dimension, got {sorted(dims)}")
    if len({len(b.homology_coords) for b in blocks}) != 1:
        raise ValueError("blocks disagree on the rank of their homology coordinates")
    if not 0 < epsilon0 < 0.5:
        raise ValueError(f"epsilon0 must lie in (0, 1/2), got {epsilon0}")
    rho = rho or CutoffProfile()
    if not rho.is_valid():
        raise ValueError("cutoff profile fails its endpoint or monotonicity conditions")
    closing_volume = as_fraction(closing_volume)
    if closing_volume < 0:
        raise ValueError(f"closing volume must be >= 0, got {closing_volume}")
    measure_scale = as_fraction(measure_scale)
    if measure_scale <= 0:
        raise ValueError(f"transversal measure scale must be positive, got {measure_scale}")
    return SolenoidSpec(
        fmap, partition, blocks, float(epsilon0), rho, closing_volume, measure_scale
    )


@dataclass(frozen=True)
class LeafSegment:
    """Blocks crossed by the leaf through Phi(base_angle) for passages n in [start, stop)."""

    base_angle: float
    start: int
    stop: int
    blocks: np.ndarray

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "block"])
        for n, b in zip(range(self.start, self.stop), self.blocks):
            writer.writerow([n, int(b)])
        return buf.getvalue()


def itinerary(spec: SolenoidSpec, theta_y, n0: int, n1: int) -> np.ndarray:
    """Block indices for passages n0 <= n < n1; theta_y may be an array of leaves."""
    n = np.arange(n0, n1, dtype=np.int64)
    theta = np.asarray(theta_y, dtype=np.float64)
    fixed = rotation_orbit(spec.map.alpha, theta[..., None], n)
    return spec.partition.block_of_angle(from_fixed(fixed))


def leaf_blocks(spec: SolenoidSpec, theta_y: float, n0: int, n1: int) -> LeafSegment:
    if n1 <= n0:
        raise ValueError(f"empty passage range [{n0}, {n1})")
    return LeafSegment(float(theta_y), n0, n1, itinerary(spec, float(theta_y), n0, n1))


def holonomy_return(spec: SolenoidSpec, x, tol: float | None = None):
    """Poincare return map on the transversal: the Denjoy map itself."""
    return apply_map(spec.map, x, tol)


def isotopy_eval(spec: SolenoidSpec, t: float, x, tol: float | None = None):
    """h_t(x) = h~(h~^{-1}(x) rho(t) + x (1 - rho(t))) mod 1."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"isotopy time must lie in [0, 1], got {t}")
    weight = spec.rho(t)
    x = np.asarray(x, dtype=np.float64)
    if weight == 1.0:
        return float(x) if x.ndim == 0 else x.copy()
    if weight == 0.0:
        return apply_map(spec.map, x, tol)
    z = np.asarray(lift_inverse(spec.map, x, tol)) * weight + x * (1.0 - weight)
    out = np.mod(np.asarray(lift_map(spec.map, z, tol)), 1.0)
    return float(out) if x.ndim == 0 else out


def solenoid_to_dict(spec: SolenoidSpec) -> dict:
    return {
        "map": spec.map.to_dict(),
        "partition": spec.partition.to_dict(),
        "blocks": [b.to_dict() for b in spec.blocks],
        "epsilon0": spec.epsilon0,
        "rho": spec.rho.to_dict(),
        "closing_volume": str(spec.closing_volume),
        "measure_scale": str(spec.measure_scale),
    }


def solenoid_from_dict(data: dict) -> SolenoidSpec:
    from .circle import partition_from_dict

    fmap = DenjoyMap.from_dict(data["map"])
    part = partition_from_dict(fmap, data["partition"])
    return build_solenoid(
        fmap,
        part,
        [BlockSpec.from_dict(b) for b in data["blocks"]],
        epsilon0=data.get("epsilon0", 0.25),
        rho=CutoffProfile(**data.get("rho", {})),
        closing_volume=data.get("closing_volume", "0"),
        measure_scale=data.get("measure_scale", "1"),
    )
