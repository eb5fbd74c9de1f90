"""Ambient homology data, target normalization and the embedding obstruction."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .circle import as_fraction

OBSTRUCTED = "obstructed"
UNOBSTRUCTED = "unobstructed"
INAPPLICABLE = "inapplicable"


@dataclass(frozen=True)
class HomologyBasis:
    """Basis C_1..C_b of H_k(M) with periods, intersection data and volumes.

    ``period_matrix[i][j]`` is the pairing of cycle i with the closed form
    omega_j.  ``intersection_form`` is the integer matrix of the cup-square
    pairing used by the embedding obstruction; it must be
    (-1)^{k(n-k)}-symmetric.
    """

    n: int
    k: int
    labels: tuple[str, ...]
    period_matrix: tuple[tuple[float, ...], ...]
    volumes: tuple[Fraction, ...]
    intersection_form: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        if not 0 < self.k < self.n:
            raise ValueError(f"need 0 < k < n, got k={self.k}, n={self.n}")
        b = len(self.labels)
        if b == 0:
            raise ValueError("homology basis has rank 0")
        periods = tuple(tuple(float(v) for v in row) for row in self.period_matrix)
        if len(periods) != b or len({len(row) for row in periods}) > 1:
            raise ValueError(f"period matrix must have {b} rows of equal length")
        object.__setattr__(self, "period_matrix", periods)
        vols = tuple(as_fraction(v) for v in self.volumes)
        if len(vols) != b or any(v <= 0 for v in vols):
            raise ValueError(f"need {b} positive cycle volumes")
        object.__setattr__(self, "volumes", vols)
        if self.intersection_form is not None:
            q = np.array(self.intersection_form, dtype=object)
            if q.shape != (b, b):
                raise ValueError(f"intersection form must be {b}x{b}, got {q.shape}")
            if any(int(v) != v for v in q.ravel()):
                raise ValueError("intersection form must be integral")
            q = tuple(tuple(int(v) for v in row) for row in self.intersection_form)
            sign = (-1) ** (self.k * (self.n - self.k))
            for i in range(b):
                for j in range(b):
                    if q[i][j] != sign * q[j][i]:
                        kind = "symmetric" if sign == 1 else "antisymmetric"
                        raise ValueError(f"intersection form must be {kind} for n={self.n}, k={self.k}")
            object.__setattr__(self, "intersection_form", q)

    @property
    def rank(self) -> int:
        return len(self.labels)

    @property
    def codimension(self) -> int:
        return self.n - self.k

    @classmethod
    def standard(cls, n: int, k: int, rank: int, volumes=None, intersection_form=None):
        """Basis whose forms are dual to the cycles (identity period matrix)."""
        return cls(
            n,
            k,
            tuple(f"C{i + 1}" for i in range(rank)),
            tuple(tuple(1.0 if i == j else 0.0 for j in range(rank)) for i in range(rank)),
            tuple(volumes if volumes is not None else [1] * rank),
            intersection_form,
        )

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "labels": list(self.labels),
            "period_matrix": [list(r) for r in self.period_matrix],
            "volumes": [str(v) for v in self.volumes],
            "intersection_form": None
            if self.intersection_form is None
            else [list(r) for r in self.intersection_form],
        }

    @classmethod
    def from_dict(cls, data: dict) -> HomologyBasis:
        return cls(
            n=int(data["n"]),
            k=int(data["k"]),
            labels=tuple(data["labels"]),
            period_matrix=tuple(tuple(r) for r in data["period_matrix"]),
            volumes=tuple(data["volumes"]),
            intersection_form=None
            if data.get("intersection_form") is None
            else tuple(tuple(r) for r in data["intersection_form"]),
        )


@dataclass(frozen=True)
class NormalizedTarget:
    """a = scale * sum_i weights[i] * signs[i] * C_{cycles[i]} with sum(weights) = 1."""

    cycles: tuple[int, ...]
    signs: tuple[int, ...]
    weights: tuple[Fraction, ...]
    scale: Fraction

    @property
    def r(self) -> int:
        return len(self.cycles)

    def block_coords(self, rank: int) -> list[tuple[int, ...]]:
        """Signed unit homology vectors of the active cycles."""
        rows = []
        for c, s in zip(self.cycles, self.signs):
            row = [0] * rank
            row[c] = s
            rows.append(tuple(row))
        return rows

    def reconstruct(self, rank: int) -> tuple[Fraction, ...]:
        out = [Fraction(0)] * rank
        for c, s, w in zip(self.cycles, self.signs, self.weights):
            out[c] += self.scale * w * s
        return tuple(out)

    def to_dict(self) -> dict:
        return {
            "cycles": list(self.cycles),
            "signs": list(self.signs),
            "weights": [str(w) for w in self.weights],
            "scale": str(self.scale),
        }


def target_coords(a) -> tuple[Fraction, ...]:
    return tuple(as_fraction(v) for v in a)


def normalize_target(a, basis: HomologyBasis | None = None) -> NormalizedTarget:
    """Drop zero coordinates, flip signs and rescale so the weights sum to 1."""
    coords = target_coords(a)
    if basis is not None and len(coords) != basis.rank:
        raise ValueError(f"target has {len(coords)} coordinates, basis has rank {basis.rank}")
    active = [i for i, v in enumerate(coords) if v != 0]
    if not active:
        raise ValueError("target class is zero; there is nothing to realize")
    scale = sum(abs(coords[i]) for i in active)
    return NormalizedTarget(
        cycles=tuple(active),
        signs=tuple(1 if coords[i] > 0 else -1 for i in active),
        weights=tuple(abs(coords[i]) / scale for i in active),
        scale=scale,
    )


@dataclass(frozen=True)
class ObstructionResult:
    verdict: str
    self_intersection: Fraction | None

    def message(self) -> str:
        if self.self_intersection is None:
            return self.verdict
        return f"{self.verdict}, aᵀQa = {self.self_intersection}"

    def to_dict(self) -> dict:
        value = self.self_intersection
        return {
            "verdict": self.verdict,
            "self_intersection": None if value is None else str(value),
        }


def self_intersection(a, q) -> Fraction:
    coords = target_coords(a)
    return sum(
        (coords[i] * q[i][j] * coords[j] for i in range(len(coords)) for j in range(len(coords))),
        Fraction(0),
    )


def embedding_obstruction(a, basis: HomologyBasis) -> ObstructionResult:
    """Whether a nonzero self-intersection forbids an embedded, atomless realization.

    Only meaningful in even codimension.  In odd codimension the verdict is
    ``inapplicable`` and, when a form is supplied, its value on a is reported
    (it vanishes by antisymmetry).
    """
    coords = target_coords(a)
    if len(coords) != basis.rank:
        raise ValueError(f"target has {len(coords)} coordinates, basis has rank {basis.rank}")
    q = basis.intersection_form
    if basis.codimension % 2:
        value = None if q is None else self_intersection(coords, q)
        return ObstructionResult(INAPPLICABLE, value)
    if q is None and basis.n > 2 * basis.k:
        # two k-cycles in general position are disjoint when 2k < n
        return ObstructionResult(UNOBSTRUCTED, Fraction(0))
    if q is None:
        raise ValueError(
            f"codimension {basis.codimension} is even: the intersection form is required"
        )
    value = self_intersection(coords, q)
    return ObstructionResult(OBSTRUCTED if value != 0 else UNOBSTRUCTED, value)


def realization_mode(basis: HomologyBasis, obstruction: ObstructionResult) -> str:
    """'embedding' when n >= 2k + 1 and nothing obstructs it, else 'transversal immersion'."""
    if obstruction.verdict == OBSTRUCTED:
        return "transversal immersion"
    return "embedding" if basis.n >= 2 * basis.k + 1 else "transversal immersion"
