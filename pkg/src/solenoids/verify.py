"""Invariant suites run by ``solenoids verify``; each check records its measured value."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .circle import (
    GapSchedule,
    RotationNumber,
    apply_map,
    arc_measure,
    blow_up,
    build_denjoy,
    build_partition,
    collapse,
    estimate_rotation_number,
)
from .currents import PeriodForm, TorusForm, linear_combination, rs_class, rs_pairing_periods, rs_pairing_quadrature
from .regression import currents_suite, reference_map, reference_solenoid
from .schwartzman import ExhaustionPolicy, birkhoff_frequencies, full_representation_check, schwartzman_estimate
from .solenoid import itinerary
from .trapping import check_trapping, seeded_defects, trapping_model

SUITES = ("circle", "solenoid", "currents", "schwartzman")


@dataclass
class Check:
    suite: str
    name: str
    value: float
    threshold: float
    passed: bool
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "name": self.name,
            "value": self.value,
            "threshold": self.threshold,
            "passed": self.passed,
            "seconds": round(self.seconds, 3),
        }


def _circ(d):
    return np.abs(np.mod(np.asarray(d) + 0.5, 1.0) - 0.5)


def _circle_checks(rng):
    rigid = build_denjoy(RotationNumber.golden(), GapSchedule(0.0, 2.0))
    a = rigid.rotation
    x = rng.random(1000)
    y = rng.random(1000)
    err = max(
        np.max(np.abs(blow_up(rigid, x) - x)),
        np.max(np.abs(collapse(rigid, x) - x)),
        np.max(_circ(apply_map(rigid, x) - (x + a))),
        np.max(np.abs(arc_measure(rigid, x, y) - np.mod(y - x, 1.0))),
        abs(estimate_rotation_number(rigid, 0.3, 1000) - a),
    )
    yield "rigid rotation oracle (G = 0)", float(err), 1e-12

    fmap = reference_map()
    pts = blow_up(fmap, rng.random(1000))
    lhs = collapse(fmap, apply_map(fmap, pts))
    err = float(np.max(_circ(lhs - collapse(fmap, pts) - fmap.rotation)))
    yield "semiconjugacy collapse(h(x)) = collapse(x) + alpha", err, 1e-9

    N = 10_000
    est = estimate_rotation_number(fmap, float(pts[0]), N)
    yield "rotation number estimate at N = 1e4", abs(est - fmap.rotation), 2.0 / N

    s = blow_up(fmap, rng.random(100))
    e = blow_up(fmap, rng.random(100))
    before = arc_measure(fmap, s, e)
    after = arc_measure(fmap, apply_map(fmap, s), apply_map(fmap, e))
    yield "arc measure invariance", float(np.max(np.abs(after - before))), 1e-8

    part = build_partition(fmap, (Fraction(3, 10), Fraction(7, 10)))
    exact = all(m == w for m, w in zip(part.measures, part.weights))
    yield "exact partition measures equal weights", 0.0 if exact else 1.0, 0.0

    sep = build_partition(fmap, (Fraction(3, 10), Fraction(7, 10)), mode="gap-separated", tol=1e-3)
    yield "gap-separated partition deviation", sep.max_deviation, 1e-3


def _solenoid_checks(rng):
    spec = reference_solenoid()
    alpha = spec.map.rotation
    worst = 0
    for _ in range(100):
        theta = float(rng.random())
        n0 = int(rng.integers(-1000, 1000))
        length = int(rng.integers(1, 200))
        a = itinerary(spec, theta, n0 + 1, n0 + 1 + length)
        b = itinerary(spec, (theta + alpha) % 1.0, n0, n0 + length)
        worst = max(worst, int(np.count_nonzero(a != b)))
    yield "itinerary shift equivariance (mismatches)", float(worst), 0.0

    worst = 0.0
    for theta in rng.random(10):
        counts = np.bincount(itinerary(spec, theta, 0, 100_000), minlength=spec.r) / 100_000
        worst = max(worst, float(np.max(np.abs(counts - birkhoff_frequencies(spec, theta, 100_000)))))
    yield "itinerary frequencies = Birkhoff frequencies", worst, 1e-12

    passes = 0
    specs = [
        spec,
        reference_solenoid((1,), ((1,),), (1,)),
        reference_solenoid(mode="gap-separated"),
        reference_solenoid((Fraction(1, 5), Fraction(3, 10), Fraction(1, 2)), ((1, 0), (0, 1), (1, 1)), (1, 1, 2)),
    ]
    for s in specs:
        passes += check_trapping(s).passed
    yield "trapping audit passes on constructed specs (failures)", float(len(specs) - passes), 0.0

    missed = 0
    for model, condition in seeded_defects(trapping_model(spec)).values():
        report = check_trapping(model)
        if report[condition].passed or report[condition].witness is None:
            missed += 1
    yield "seeded defects caught by their condition (misses)", float(missed), 0.0


def _currents_checks(rng):
    spec = reference_solenoid(coords=((1, 0, 0), (0, 1, 0)))
    exact = rs_pairing_periods(spec, None, PeriodForm((0, 0, 0), True)).value
    yield "exact form, periods backend", float(abs(exact)), 0.0

    cases = currents_suite()
    worst_exact = 0.0
    worst_gap = 0.0
    for _, s, form in cases:
        q = rs_pairing_quadrature(s, form, 1e-7)
        p = rs_pairing_periods(s, None, form)
        worst_gap = max(worst_gap, abs(float(p.value) - q.value))
    for _, s, form in cases[::4]:
        zero = TorusForm(form.torus, (0.0, 0.0, 0.0), form.bumps)
        worst_exact = max(worst_exact, abs(rs_pairing_quadrature(s, zero, 1e-9).value))
    yield "exact forms, quadrature backend", worst_exact, 1e-8
    yield "backend agreement on 20-case suite", worst_gap, 1e-6

    _, s, f1 = cases[2]
    f2 = cases[3][2]
    a, b = rng.uniform(-2, 2, 2)
    combo = linear_combination([f1, f2], [a, b])
    lin_q = abs(
        rs_pairing_quadrature(s, combo, 1e-7).value
        - a * rs_pairing_quadrature(s, f1, 1e-7).value
        - b * rs_pairing_quadrature(s, f2, 1e-7).value
    )
    p1, p2 = PeriodForm(tuple(rng.normal(size=3))), PeriodForm(tuple(rng.normal(size=3)))
    lin_p = abs(
        float(rs_pairing_periods(spec, None, linear_combination([p1, p2], [a, b])).value)
        - a * float(rs_pairing_periods(spec, None, p1).value)
        - b * float(rs_pairing_periods(spec, None, p2).value)
    )
    yield "linearity in the form (both backends)", float(max(lin_q, lin_p)), 1e-12

    scaled = reference_solenoid(coords=((1, 0, 0), (0, 1, 0)), measure_scale=Fraction(7, 3))
    base_cls, new_cls = rs_class(spec), rs_class(scaled)
    covariant = all(n == Fraction(7, 3) * b for n, b in zip(new_cls.raw, base_cls.raw))
    yield "scale covariance of rs_class", 0.0 if covariant else 1.0, 0.0


def _schwartzman_checks(rng):
    spec = reference_solenoid()
    lam = np.array([0.3, 0.7])
    worst = 0.0
    for theta in rng.random(50):
        worst = max(worst, float(np.max(np.abs(birkhoff_frequencies(spec, theta, 100_000) - lam))))
    yield "Birkhoff frequencies at N = 1e5", worst, 10 * math.log(1e5) / 1e5

    policy = ExhaustionPolicy(closing_volume=Fraction(5))
    identity = True
    gamma_ok = True
    for N in policy.schedule:
        est = schwartzman_estimate(spec, None, float(rng.random()), N, policy)
        identity &= all(x * est.volume == r for x, r in zip(est.normalized, est.raw))
        gamma_ok &= est.gamma_ratio <= policy.closing_volume / (N * min(spec.volumes))
    yield "estimate identity normalized * volume = raw", 0.0 if identity else 1.0, 0.0
    yield "gamma ratio bound", 0.0 if gamma_ok else 1.0, 0.0

    report = full_representation_check(spec, None, 50, policy, seed=int(rng.integers(1 << 31)))
    monotone = all(b <= a for a, b in zip(report.max_distance, report.max_distance[1:]))
    yield "full representation final distance", report.max_distance[-1], 1e-3
    yield "full representation monotone", 0.0 if monotone else 1.0, 0.0

    rational = build_denjoy(RotationNumber.from_rational(1, 2), GapSchedule(0.0, 2.0), allow_rational=True)
    control = reference_solenoid(fmap=rational)
    neg = full_representation_check(control, None, 50, policy, seed=1)
    yield "negative control (rational rotation) fails", 0.0 if not neg.passed else 1.0, 0.0


_RUNNERS = {
    "circle": _circle_checks,
    "solenoid": _solenoid_checks,
    "currents": _currents_checks,
    "schwartzman": _schwartzman_checks,
}


def run_suite(name: str, seed: int = 0) -> list[Check]:
    if name == "all":
        out = []
        for suite in SUITES:
            out.extend(run_suite(suite, seed))
        return out
    if name not in _RUNNERS:
        raise KeyError(name)
    rng = np.random.default_rng(seed)
    checks = []
    gen = _RUNNERS[name](rng)
    while True:
        start = time.perf_counter()
        try:
            label, value, threshold = next(gen)
        except StopIteration:
            break
        checks.append(Check(name, label, float(value), threshold, bool(value <= threshold), time.perf_counter() - start))
    return checks


def verify_report(name: str, seed: int = 0) -> dict:
    checks = run_suite(name, seed)
    return {
        "suite": name,
        "seed": seed,
        "passed": all(c.passed for c in checks),
        "checks": [c.to_dict() for c in checks],
    }
