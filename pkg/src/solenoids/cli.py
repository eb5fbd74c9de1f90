"""Command line: realize, verify, pair, obstruct."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .currents import QuadratureError, form_from_dict, rs_pairing_periods, rs_pairing_quadrature
from .homology import HomologyBasis, embedding_obstruction
from .io import SchemaError, dumps, read_json
from .pipeline import OUTPUT_ENV, ConfigError, RealizeConfig, load_config, run_realize
from .solenoid import solenoid_from_dict
from .verify import SUITES, verify_report

_REALIZE_FLAGS = {
    "basis": str,
    "alpha": str,
    "partition_mode": str,
    "partition_tol": float,
    "epsilon0": float,
    "c_cut": float,
    "closing_volume": str,
    "sidedness": str,
    "leaves": int,
    "tolerance": float,
    "seed": int,
    "output_dir": str,
}


def _csv_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _target(text: str) -> list:
    out = []
    for t in _csv_list(text):
        try:
            out.append(float(t) if "/" not in t else t)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {t!r}") from None
    return out


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="solenoids", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("realize", help="realize a target class and verify the construction")
    r.add_argument("--config", help="JSON config; flags below override its fields")
    for name, kind in _REALIZE_FLAGS.items():
        r.add_argument("--" + name.replace("_", "-"), dest=name, type=kind)
    r.add_argument("--target", type=_target, help="comma separated coordinates, e.g. 0.3,0.7")
    r.add_argument("--gaps", help="c,s of the gap schedule")
    r.add_argument("--volumes", type=_csv_list, help="block volume per basis cycle")
    r.add_argument("--schedule", help="comma separated N values")
    r.epilog = f"{OUTPUT_ENV} overrides the output directory."

    v = sub.add_parser("verify", help="run invariant suites")
    v.add_argument("suite", help="one of " + ", ".join((*SUITES, "all")))
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--output", help="also write the JSON report here")

    q = sub.add_parser("pair", help="pair a solenoid current with a closed form")
    q.add_argument("spec", help="solenoid JSON")
    q.add_argument("form", help="form JSON")
    q.add_argument("--backend", choices=("periods", "quadrature"), default="periods")
    q.add_argument("--tol", type=float, default=1e-7)

    o = sub.add_parser("obstruct", help="self-intersection obstruction to embedding")
    o.add_argument("basis", help="homology basis JSON")
    o.add_argument("target", type=_target)
    return p


def _realize_config(args) -> RealizeConfig:
    data: dict = {}
    base = None
    if args.config:
        try:
            data = read_json(args.config)
        except SchemaError as exc:
            raise ConfigError(str(exc)) from None
        base = Path(args.config).parent
    for name in _REALIZE_FLAGS:
        value = getattr(args, name)
        if value is not None:
            data[name] = value
    if args.target is not None:
        data["target"] = args.target
    if args.volumes is not None:
        data["volumes"] = args.volumes
    if args.gaps is not None:
        c, s = (float(t) for t in _csv_list(args.gaps))
        data["gaps"] = {"c": c, "s": s}
    if args.schedule is not None:
        data["schedule"] = [int(t) for t in _csv_list(args.schedule)]
    if args.basis is not None:
        base = None
    return RealizeConfig.from_dict(data, base)


def _cmd_realize(args) -> int:
    try:
        cfg = _realize_config(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    result = run_realize(cfg)
    if result.summary is not None:
        print(dumps({k: v for k, v in result.summary.items() if k != "timestamp"}), end="")
    stream = sys.stdout if result.exit_code == 0 else sys.stderr
    print(result.message, file=stream)
    return result.exit_code


def _cmd_verify(args) -> int:
    if args.suite not in (*SUITES, "all"):
        print(f"error: unknown suite {args.suite!r}", file=sys.stderr)
        return 1
    report = verify_report(args.suite, args.seed)
    text = dumps(report)
    if args.output:
        Path(args.output).write_text(text)
    print(text, end="")
    return 0 if report["passed"] else 3


def _cmd_pair(args) -> int:
    try:
        spec = solenoid_from_dict(read_json(args.spec, "solenoid"))
        form = form_from_dict(read_json(args.form, "form"))
        if args.backend == "periods":
            report = rs_pairing_periods(spec, None, form)
        else:
            report = rs_pairing_quadrature(spec, form, args.tol)
    except QuadratureError as exc:
        partial = {"value": exc.estimate, "error_bound": exc.residual, "backend": "quadrature", "error": str(exc)}
        print(json.dumps(partial))
        return 3
    except (SchemaError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(json.dumps(report.to_dict()))
    return 0


def _cmd_obstruct(args) -> int:
    try:
        basis = HomologyBasis.from_dict(read_json(args.basis, "basis"))
        result = embedding_obstruction(args.target, basis)
    except (SchemaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(result.message())
    return 0


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    handler = {
        "realize": _cmd_realize,
        "verify": _cmd_verify,
        "pair": _cmd_pair,
        "obstruct": _cmd_obstruct,
    }[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
