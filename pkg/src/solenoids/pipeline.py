"""End-to-end realization of a target homology class by a measured solenoid."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

from .circle import EXACT, GapSchedule, RotationNumber, as_fraction, build_denjoy, build_partition
from .currents import rs_class
from .homology import HomologyBasis, embedding_obstruction, normalize_target, realization_mode
from .io import SCHEMA_VERSION, SchemaError, read_json, validate, write_json
from .schwartzman import ExhaustionPolicy, full_representation_check
from .solenoid import BlockSpec, CutoffProfile, build_solenoid, solenoid_to_dict
from .trapping import check_trapping

OUTPUT_ENV = "SOLENOIDS_OUTPUT_DIR"

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_CONSTRUCTION = 2
EXIT_VERIFICATION = 3


class ConfigError(ValueError):
    pass


@dataclass
class RealizeConfig:
    basis: str
    target: list
    seed: int
    alpha: str = "golden"
    gaps: dict = field(default_factory=lambda: {"c": 0.1, "s": 2.0})
    partition_mode: str = EXACT
    partition_tol: float = 1e-3
    volumes: list | None = None
    epsilon0: float = 0.25
    c_cut: float = 0.25
    closing_volume: float | str = 0
    schedule: list = field(default_factory=lambda: [1_000, 10_000, 100_000])
    sidedness: str = "forward"
    leaves: int = 50
    tolerance: float = 1e-3
    output_dir: str = "realize-out"

    @classmethod
    def from_dict(cls, data: dict, base: Path | None = None) -> RealizeConfig:
        try:
            validate(data, "realize_config")
        except SchemaError as exc:
            raise ConfigError(str(exc)) from None
        data = {k: v for k, v in data.items() if k != "schema_version"}
        cfg = cls(**data)
        if base is not None and not Path(cfg.basis).is_absolute():
            cfg.basis = str(base / cfg.basis)
        return cfg

    def to_dict(self) -> dict:
        return asdict(self)

    def resolved_output(self) -> Path:
        return Path(os.environ.get(OUTPUT_ENV) or self.output_dir)


def load_config(path) -> RealizeConfig:
    try:
        data = read_json(path)
    except SchemaError as exc:
        raise ConfigError(str(exc)) from None
    return RealizeConfig.from_dict(data, Path(path).parent)


@dataclass
class RealizeResult:
    exit_code: int
    message: str
    summary: dict | None = None
    output_dir: Path | None = None


def _load_basis(cfg: RealizeConfig) -> HomologyBasis:
    if not Path(cfg.basis).exists():
        raise ConfigError(f"basis file not found: {cfg.basis}")
    try:
        return HomologyBasis.from_dict(read_json(cfg.basis, "basis"))
    except (SchemaError, ValueError) as exc:
        raise ConfigError(f"invalid basis: {exc}") from None


def _prepare(cfg: RealizeConfig):
    basis = _load_basis(cfg)
    try:
        target = normalize_target(cfg.target, basis)
    except ValueError as exc:
        msg = str(exc)
        if "zero" in msg:
            msg = "empty class: the target homology class is zero, nothing to realize"
        raise ConfigError(msg) from None
    try:
        alpha = RotationNumber.parse(cfg.alpha)
        gaps = GapSchedule(**cfg.gaps)
        policy = ExhaustionPolicy(cfg.sidedness, as_fraction(cfg.closing_volume), tuple(cfg.schedule))
        rho = CutoffProfile(cfg.c_cut)
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from None
    if not 0 < cfg.epsilon0 < 0.5:
        raise ConfigError(f"epsilon0 must lie in (0, 1/2), got {cfg.epsilon0}")
    volumes = cfg.volumes if cfg.volumes is not None else list(basis.volumes)
    if len(volumes) != basis.rank:
        raise ConfigError(f"need {basis.rank} block volumes, got {len(volumes)}")
    return basis, target, alpha, gaps, policy, rho, [as_fraction(v) for v in volumes]


def run_realize(cfg: RealizeConfig) -> RealizeResult:
    """normalize -> obstruction -> Denjoy map -> partition -> solenoid -> audits.

    Exit codes: 0 all checks pass, 1 invalid configuration, 2 construction
    failure, 3 verification failure (artifacts are still written).
    """
    try:
        basis, target, alpha, gaps, policy, rho, volumes = _prepare(cfg)
    except ConfigError as exc:
        return RealizeResult(EXIT_CONFIG, str(exc))

    try:
        obstruction = embedding_obstruction(cfg.target, basis)
    except ValueError as exc:
        return RealizeResult(EXIT_CONFIG, str(exc))
    mode = realization_mode(basis, obstruction)

    try:
        fmap = build_denjoy(alpha, gaps, allow_rational=alpha.is_rational)
        partition = build_partition(fmap, target.weights, mode=cfg.partition_mode, tol=cfg.partition_tol)
        blocks = [
            BlockSpec(basis.labels[c] if s > 0 else f"-{basis.labels[c]}", basis.k, volumes[c], coords)
            for c, s, coords in zip(target.cycles, target.signs, target.block_coords(basis.rank))
        ]
        spec = build_solenoid(
            fmap, partition, blocks, epsilon0=cfg.epsilon0, rho=rho, closing_volume=policy.closing_volume
        )
    except ValueError as exc:
        return RealizeResult(EXIT_CONSTRUCTION, f"construction failed: {exc}")

    trapping = check_trapping(spec)
    cls = rs_class(spec, basis)
    expected = tuple(v / target.scale for v in target.reconstruct(basis.rank))
    if partition.mode == EXACT:
        class_error = max(abs(Fraction(x) - y) for x, y in zip(cls.raw, expected))
    else:
        class_error = max(abs(float(x) - float(y)) for x, y in zip(cls.raw, expected))
    class_bound = 0 if partition.mode == EXACT else partition.max_deviation * max(
        max(abs(c) for c in b.homology_coords) for b in blocks
    ) * len(blocks)
    class_ok = class_error <= class_bound
    report = full_representation_check(spec, basis, cfg.leaves, policy, cfg.seed, cfg.tolerance)
    min_vol = min(spec.volumes)
    gamma_ok = all(
        row["gamma_ratio"] <= float(policy.closing_volume / (row["N"] * min_vol)) * (1 + 1e-12)
        for row in report.rows
    )
    ok = trapping.passed and class_ok and report.passed and gamma_ok
    code = EXIT_OK if ok else EXIT_VERIFICATION

    out = cfg.resolved_output()
    out.mkdir(parents=True, exist_ok=True)
    construction = {
        "schema_version": SCHEMA_VERSION,
        "config": cfg.to_dict(),
        "target": target.to_dict(),
        "obstruction": obstruction.to_dict(),
        "mode": mode,
        "cuts": [str(c) if isinstance(c, Fraction) else c for c in partition.cuts],
        "solenoid": solenoid_to_dict(spec),
        "trapping": trapping.to_dict(),
    }
    write_json(out / "construction.json", construction)
    (out / "convergence.csv").write_text(report.to_csv())
    summary = {
        "schema_version": SCHEMA_VERSION,
        "exit_code": code,
        "target": [str(as_fraction(v)) for v in cfg.target],
        "scale": str(target.scale),
        "weights": [str(w) for w in target.weights],
        "rs_class": cls.to_dict(),
        "rs_class_scaled": [str(v * target.scale) if isinstance(v, Fraction) else float(v) * float(target.scale) for v in cls.raw],
        "class_error": float(class_error),
        "obstruction": obstruction.to_dict(),
        "obstruction_message": obstruction.message(),
        "mode": mode,
        "trapping_passed": trapping.passed,
        "schedule": list(policy.schedule),
        "max_distance": report.max_distance,
        "final_max_distance": report.max_distance[-1],
        "max_coordinate_error": report.max_coordinate_error,
        "max_gamma_ratio": max(row["gamma_ratio"] for row in report.rows),
        "gamma_bound_ok": gamma_ok,
        "verdict": report.verdict,
        "note": report.note,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    write_json(out / "summary.json", summary)
    failed = [
        name
        for name, good in (
            ("trapping", trapping.passed),
            ("rs_class", class_ok),
            ("representation", report.passed),
            ("gamma_ratio", gamma_ok),
        )
        if not good
    ]
    message = "all checks passed" if ok else "verification failed: " + ", ".join(failed)
    return RealizeResult(code, message, summary, out)
