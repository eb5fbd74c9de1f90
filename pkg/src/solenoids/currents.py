"""Generalized currents of measured solenoids: classes and pairings.

Two independent routes to the same number:

* ``rs_pairing_periods`` integrates each block's period against the block
  measure (every leaf crossing of block i contributes <C_i, omega>).
* ``rs_pairing_quadrature`` places the 1-solenoid in a flat torus T^n, pulls
  back a concrete closed 1-form that vanishes on the ball B holding the
  trapping region, integrates it along each leaf crossing with adaptive
  quadrature, and integrates the result over the transversal against mu_K
  in collapse coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .circle import as_fraction, blow_up
from .homology import HomologyBasis
from .solenoid import SolenoidSpec, _transition

PERIODS = "periods"
QUADRATURE = "quadrature"


class QuadratureError(RuntimeError):
    def __init__(self, message: str, estimate: float, residual: float):
        super().__init__(message)
        self.estimate = estimate
        self.residual = residual


@dataclass(frozen=True)
class PairingReport:
    value: float | Fraction
    error_bound: float
    backend: str

    def to_dict(self) -> dict:
        value = self.value
        return {
            "value": float(value),
            "exact": str(value) if isinstance(value, Fraction) else None,
            "error_bound": self.error_bound,
            "backend": self.backend,
        }


@dataclass(frozen=True)
class RSClass:
    raw: tuple
    normalized: tuple
    total_volume: Fraction | float

    def to_dict(self) -> dict:
        def enc(v):
            return str(v) if isinstance(v, Fraction) else v

        return {
            "raw": [enc(v) for v in self.raw],
            "raw_float": [float(v) for v in self.raw],
            "normalized": [enc(v) for v in self.normalized],
            "normalized_float": [float(v) for v in self.normalized],
            "total_volume": enc(self.total_volume),
        }


# --- forms -----------------------------------------------------------------


def _number(v):
    if isinstance(v, (Fraction, int)):
        return Fraction(v)
    return float(v)


@dataclass(frozen=True)
class PeriodForm:
    """A closed k-form known only through its periods on the basis cycles."""

    periods: tuple
    is_exact: bool = False

    def __post_init__(self):
        periods = tuple(_number(p) for p in self.periods)
        object.__setattr__(self, "periods", periods)
        if self.is_exact and any(p != 0 for p in periods):
            raise ValueError("an exact form has all periods equal to zero")

    def to_dict(self) -> dict:
        return {
            "kind": "abstract-periods",
            "periods": [str(p) if isinstance(p, Fraction) else p for p in self.periods],
            "is_exact": self.is_exact,
        }


@dataclass(frozen=True)
class TorusModel:
    """Flat torus R^n / Z^n with a ball B where test forms vanish.

    Forms are identically zero for |x - center| <= inner_radius and agree
    with their constant part beyond outer_radius.
    """

    n: int = 3
    ball_center: tuple[float, ...] = (0.5, 0.5, 0.5)
    inner_radius: float = 0.08
    outer_radius: float = 0.2

    def __post_init__(self):
        object.__setattr__(self, "ball_center", tuple(float(c) for c in self.ball_center))
        if len(self.ball_center) != self.n:
            raise ValueError("ball center has the wrong dimension")
        if not 0 < self.inner_radius < self.outer_radius < 0.5:
            raise ValueError("need 0 < inner_radius < outer_radius < 1/2")

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "ball_center": list(self.ball_center),
            "inner_radius": self.inner_radius,
            "outer_radius": self.outer_radius,
        }


@dataclass(frozen=True)
class Bump:
    """Potential amplitude * eta(|x - center| / radius), eta a C-infinity bump."""

    center: tuple[float, ...]
    radius: float
    amplitude: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        if not 0 < self.radius < 0.5:
            raise ValueError(f"bump radius must lie in (0, 1/2), got {self.radius}")

    def to_dict(self) -> dict:
        return {"center": list(self.center), "radius": self.radius, "amplitude": self.amplitude}


def _wrap(d):
    return d - np.round(d)


@dataclass(frozen=True)
class TorusForm:
    """Closed 1-form sum_j c_j (dx_j - d(psi_B x_j)) + sum_m d(bump_m) on T^n.

    Cohomologous to the constant form sum_j c_j dx_j; the bumps add exact
    pieces supported away from B.
    """

    torus: TorusModel
    constant: tuple[float, ...]
    bumps: tuple[Bump, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "constant", tuple(float(c) for c in self.constant))
        if len(self.constant) != self.torus.n:
            raise ValueError(f"constant part needs {self.torus.n} coefficients")
        center = np.array(self.torus.ball_center)
        for b in self.bumps:
            if len(b.center) != self.torus.n:
                raise ValueError("bump center has the wrong dimension")
            gap = np.linalg.norm(_wrap(np.array(b.center) - center))
            if gap < b.radius + self.torus.inner_radius:
                raise ValueError("bump support meets the ball B where forms must vanish")

    @property
    def periods(self) -> tuple[float, ...]:
        return self.constant

    @property
    def is_exact(self) -> bool:
        return not any(self.constant)

    def period_form(self) -> PeriodForm:
        return PeriodForm(self.constant, self.is_exact)

    def atoms(self) -> list[tuple[float, tuple]]:
        """(coefficient, atom key) pairs; the pairing is linear over atoms."""
        out = [(c, ("axis", j)) for j, c in enumerate(self.constant) if c != 0]
        out += [(b.amplitude, ("bump", b.center, b.radius)) for b in self.bumps if b.amplitude != 0]
        return out

    def to_dict(self) -> dict:
        return {
            "kind": "torus-concrete",
            "torus": self.torus.to_dict(),
            "constant": list(self.constant),
            "bumps": [b.to_dict() for b in self.bumps],
        }


def linear_combination(forms, coeffs):
    """sum_i coeffs[i] * forms[i] for forms of one kind."""
    forms = list(forms)
    coeffs = list(coeffs)
    if all(isinstance(f, PeriodForm) for f in forms):
        periods = [sum(c * f.periods[j] for c, f in zip(coeffs, forms)) for j in range(len(forms[0].periods))]
        return PeriodForm(tuple(periods), all(f.is_exact for f in forms))
    if all(isinstance(f, TorusForm) for f in forms):
        torus = forms[0].torus
        if any(f.torus != torus for f in forms):
            raise ValueError("forms live on different torus models")
        constant = [sum(c * f.constant[j] for c, f in zip(coeffs, forms)) for j in range(torus.n)]
        merged: dict[tuple, float] = {}
        for c, f in zip(coeffs, forms):
            for b in f.bumps:
                key = (b.center, b.radius)
                merged[key] = merged.get(key, 0.0) + c * b.amplitude
        bumps = tuple(Bump(k[0], k[1], a) for k, a in merged.items())
        return TorusForm(torus, tuple(constant), bumps)
    raise TypeError("cannot combine forms of different kinds")


def form_from_dict(data: dict):
    kind = data.get("kind")
    if kind == "abstract-periods":
        return PeriodForm(tuple(as_fraction(p) if isinstance(p, str) else p for p in data["periods"]),
                          bool(data.get("is_exact", False)))
    if kind == "torus-concrete":
        torus = TorusModel(**{**data["torus"], "ball_center": tuple(data["torus"]["ball_center"])})
        bumps = tuple(Bump(tuple(b["center"]), b["radius"], b.get("amplitude", 1.0)) for b in data.get("bumps", []))
        return TorusForm(torus, tuple(data["constant"]), bumps)
    raise ValueError(f"unknown form kind {kind!r}")


# --- classes and period pairing -------------------------------------------------


def _check_rank(spec: SolenoidSpec, rank: int):
    widths = {len(b.homology_coords) for b in spec.blocks}
    if widths != {rank}:
        raise ValueError(f"block homology coordinates have length {widths}, expected {rank}")


def rs_class(spec: SolenoidSpec, basis: HomologyBasis | None = None) -> RSClass:
    """[f, S_mu] = sum_i mu(K_i) C_i, raw and divided by sum_i mu(K_i) Vol_i."""
    rank = len(spec.blocks[0].homology_coords)
    if basis is not None:
        _check_rank(spec, basis.rank)
    measures = spec.block_measures()
    raw = []
    for j in range(rank):
        raw.append(sum((m * b.homology_coords[j] for m, b in zip(measures, spec.blocks)), 0 * measures[0]))
    if all(isinstance(m, Fraction) for m in measures):
        total = sum((m * b.volume for m, b in zip(measures, spec.blocks)), Fraction(0))
    else:
        total = float(sum(float(m) * float(b.volume) for m, b in zip(measures, spec.blocks)))
    normalized = tuple(v / total for v in raw)
    return RSClass(tuple(raw), normalized, total)


def _periods_of(form) -> tuple:
    if isinstance(form, (PeriodForm, TorusForm)):
        return form.periods
    raise TypeError(f"unsupported form type {type(form).__name__}")


def rs_pairing_periods(spec: SolenoidSpec, basis: HomologyBasis | None, form) -> PairingReport:
    """sum_i mu(K_i) <C_i, omega>, exact when all inputs are rational."""
    periods = _periods_of(form)
    width = len(spec.blocks[0].homology_coords)
    if len(periods) != width:
        raise ValueError(f"form has {len(periods)} periods, blocks have rank {width}")
    if basis is not None:
        _check_rank(spec, basis.rank)
    if getattr(form, "is_exact", False):
        return PairingReport(Fraction(0), 0.0, PERIODS)
    total = 0
    for m, b in zip(spec.block_measures(), spec.blocks):
        total += m * sum(c * p for c, p in zip(b.homology_coords, periods))
    return PairingReport(total, 0.0, PERIODS)


# --- quadrature backend ---------------------------------------------------------


def _dtransition(u: float) -> float:
    if u <= 0.0 or u >= 1.0:
        return 0.0
    a = np.exp(-1.0 / u)
    b = np.exp(-1.0 / (1.0 - u))
    return float(a * b * (1.0 / u**2 + 1.0 / (1.0 - u) ** 2) / (a + b) ** 2)


def _atom_field(torus: TorusModel, atom: tuple, x: np.ndarray) -> np.ndarray:
    """Vector field (covector) of a unit atom at point x of T^n."""
    if atom[0] == "axis":
        j = atom[1]
        d = _wrap(x - np.asarray(torus.ball_center))
        r = float(np.sqrt(d @ d))
        width = torus.outer_radius - torus.inner_radius
        u = (r - torus.inner_radius) / width
        psi = 1.0 - float(_transition(u))
        out = np.zeros(torus.n)
        out[j] = 1.0 - psi
        if 0.0 < u < 1.0:
            dpsi = -_dtransition(u) / width
            out -= dpsi * d[j] * d / r
        return out
    _, center, radius = atom
    d = _wrap(x - np.asarray(center))
    r = float(np.sqrt(d @ d))
    u = r / radius
    if r == 0.0 or u >= 1.0:
        return np.zeros(torus.n)
    deta = -_dtransition(u) / radius
    return deta * d / r


def _frame(v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Two unit vectors orthogonal to v and to each other."""
    basis = [v / np.linalg.norm(v)]
    for axis in np.argsort(np.abs(v)):
        e = np.zeros(len(v))
        e[axis] = 1.0
        for b in basis:
            e -= (e @ b) * b
        if np.linalg.norm(e) > 1e-8:
            basis.append(e / np.linalg.norm(e))
        if len(basis) == 3:
            break
    return basis[1], basis[2]


@dataclass(frozen=True)
class _Crossing:
    start: np.ndarray
    direction: np.ndarray
    wiggle: np.ndarray
    amplitude: float

    def point(self, tau: float) -> np.ndarray:
        return self.start + tau * self.direction + self.amplitude * np.sin(np.pi * tau) * self.wiggle

    def velocity(self, tau: float) -> np.ndarray:
        return self.direction + self.amplitude * np.pi * np.cos(np.pi * tau) * self.wiggle


def _crossing(torus: TorusModel, coords: tuple[int, ...], block: int, y: float) -> _Crossing:
    """Leaf crossing of block ``block`` through transversal point y.

    Starts inside the inner ball, runs once around the cycle ``coords`` with
    a sinusoidal detour and returns to its start modulo Z^n.
    """
    v = np.array(coords, dtype=np.float64)
    w, u = _frame(v)
    offset = (y - 0.5) * torus.inner_radius
    start = np.asarray(torus.ball_center) + offset * u
    return _Crossing(start, v, w, 0.05 + 0.02 * block)


def _breakpoints(torus: TorusModel, length: float) -> list[float]:
    pts = []
    for r in (torus.inner_radius, torus.outer_radius):
        for tau in (r / length, 1.0 - r / length):
            if 0.0 < tau < 1.0:
                pts.append(tau)
    return sorted(pts)


@lru_cache(maxsize=4096)
def _atom_integral(torus: TorusModel, atom: tuple, coords: tuple, block: int, y: float, epsabs: float):
    path = _crossing(torus, coords, block, y)

    def integrand(tau):
        return float(_atom_field(torus, atom, path.point(tau)) @ path.velocity(tau))

    points = _breakpoints(torus, float(np.linalg.norm(path.direction)))
    value, abserr, info = _quad(integrand, points, epsabs)
    return value, abserr, info


def _quad(integrand, points, epsabs):
    out = quad(integrand, 0.0, 1.0, points=points or None, epsabs=epsabs, epsrel=0.0, limit=400, full_output=1)
    # a fourth element (the warning message) only appears when quad gave up
    return out[0], out[1], int(len(out) > 3)


def rs_pairing_quadrature(
    spec: SolenoidSpec,
    form: TorusForm,
    quad_tol: float = 1e-7,
    nodes: int = 3,
) -> PairingReport:
    """Leafwise quadrature of the pulled-back form, then transversal integration.

    Only the block flow-boxes contribute: the form vanishes on B, which
    contains the collar flow-box.  Raises ``QuadratureError`` if a leaf
    integral does not converge or the accumulated error exceeds quad_tol.
    """
    if not isinstance(form, TorusForm):
        raise TypeError("the quadrature backend needs a torus-concrete form")
    torus = form.torus
    if spec.dimension != 1:
        raise ValueError("the torus quadrature backend handles 1-solenoids only")
    if torus.n < 2 * spec.dimension + 1:
        raise ValueError(f"torus dimension {torus.n} < 2k + 1; blocks cannot embed disjointly")
    _check_rank(spec, torus.n)
    atoms = form.atoms()
    epsabs = quad_tol / 100.0
    gl_x, gl_w = np.polynomial.legendre.leggauss(nodes)
    measures = spec.block_measures()
    total = 0.0
    error = 0.0
    stalled = None
    for i, block in enumerate(spec.blocks):
        a, b = spec.partition.cuts[i], spec.partition.cuts[i + 1]
        thetas = 0.5 * (b - a) * gl_x + 0.5 * (a + b)
        weights = 0.5 * gl_w
        ys = np.mod(np.asarray(blow_up(spec.map, thetas)), 1.0)
        leaf_values = []
        leaf_errors = []
        for y in ys:
            v = 0.0
            e = 0.0
            for coef, atom in atoms:
                val, err, ier = _atom_integral(torus, atom, block.homology_coords, i, float(y), epsabs)
                if ier and stalled is None:
                    stalled = i
                v += coef * val
                e += abs(coef) * err
            leaf_values.append(v)
            leaf_errors.append(e)
        # mean against the normalised measure on the block, times its mass
        mass = float(measures[i])
        total += mass * float(np.dot(weights, leaf_values))
        spread = max(leaf_values) - min(leaf_values)
        error += mass * (max(leaf_errors) + spread)
    if stalled is not None:
        raise QuadratureError(
            f"leaf integral on block {stalled} did not converge (error bound {error:.3g})",
            estimate=total,
            residual=error,
        )
    if error > quad_tol:
        raise QuadratureError(
            f"quadrature error bound {error:.3g} exceeds tolerance {quad_tol:g}",
            estimate=total,
            residual=error,
        )
    return PairingReport(total, error, QUADRATURE)
