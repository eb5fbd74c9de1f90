import json
from pathlib import Path

import pytest

from solenoids.cli import main
from solenoids.pipeline import OUTPUT_ENV, load_config, run_realize

DATA = Path(__file__).resolve().parent.parent / "data"
CONFIG = DATA / "reference_config.json"


def _summary_without_time(path):
    data = json.loads(Path(path).read_text())
    data.pop("timestamp")
    return data


def test_realize_reference(tmp_path, capsys):
    code = main(["realize", "--config", str(CONFIG), "--output-dir", str(tmp_path)])
    assert code == 0
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["rs_class"]["raw"] == ["3/10", "7/10"]
    assert summary["scale"] == "1"
    assert summary["weights"] == ["3/10", "7/10"]
    assert summary["final_max_distance"] <= 1e-3
    assert summary["mode"] == "embedding"
    for name in ("construction.json", "convergence.csv", "summary.json"):
        assert (tmp_path / name).exists()


def test_realize_rank_one(tmp_path):
    code = main([
        "realize", "--basis", str(DATA / "basis_rank1.json"), "--target", "1", "--seed", "1",
        "--schedule", "100,1000", "--leaves", "5", "--output-dir", str(tmp_path),
    ])
    assert code == 0
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["rs_class"]["raw"] == ["1"]
    assert summary["max_distance"] == [0.0, 0.0]


def test_realize_zero_target(tmp_path, capsys):
    code = main(["realize", "--config", str(CONFIG), "--target", "0,0", "--output-dir", str(tmp_path)])
    assert code == 1
    assert "empty class" in capsys.readouterr().err
    assert not (tmp_path / "summary.json").exists()


def test_realize_invalid_config(tmp_path):
    assert main(["realize", "--config", str(CONFIG), "--epsilon0", "0.7", "--output-dir", str(tmp_path)]) == 1
    assert main(["realize", "--config", str(tmp_path / "missing.json")]) == 1
    assert main(["realize", "--config", str(CONFIG), "--basis", str(tmp_path / "none.json")]) == 1


def test_realize_construction_failure(tmp_path):
    code = main([
        "realize", "--config", str(CONFIG), "--partition-mode", "gap-separated",
        "--partition-tol", "1e-12", "--output-dir", str(tmp_path),
    ])
    assert code == 2


def test_realize_rational_rotation_is_a_verification_failure(tmp_path):
    code = main([
        "realize", "--config", str(CONFIG), "--alpha", "2/5", "--gaps", "0,2",
        "--output-dir", str(tmp_path),
    ])
    assert code == 3
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["verdict"] == "fail"
    assert (tmp_path / "convergence.csv").exists()


def test_obstructed_target_uses_immersion(tmp_path):
    config = json.loads(CONFIG.read_text())
    config.update(basis=str(DATA / "basis_cp2.json"), target=[1], volumes=["1"], schedule=[100, 1000], leaves=4)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(config))
    cfg = load_config(path)
    cfg.output_dir = str(tmp_path / "out")
    result = run_realize(cfg)
    assert result.summary["obstruction"]["verdict"] == "obstructed"
    assert result.summary["mode"] == "transversal immersion"


def test_summary_is_deterministic(tmp_path):
    for name in ("a", "b"):
        assert main(["realize", "--config", str(CONFIG), "--output-dir", str(tmp_path / name)]) == 0
    assert _summary_without_time(tmp_path / "a" / "summary.json") == _summary_without_time(
        tmp_path / "b" / "summary.json"
    )
    a = (tmp_path / "a" / "summary.json").read_text().splitlines()
    b = (tmp_path / "b" / "summary.json").read_text().splitlines()
    assert [x for x in a if "timestamp" not in x] == [x for x in b if "timestamp" not in x]


def test_output_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv(OUTPUT_ENV, str(tmp_path / "env"))
    assert main(["realize", "--config", str(CONFIG), "--output-dir", str(tmp_path / "flag")]) == 0
    assert (tmp_path / "env" / "summary.json").exists()
    assert not (tmp_path / "flag").exists()


def test_verify_suites(capsys):
    assert main(["verify", "bogus"]) == 1
    assert main(["verify", "circle"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["passed"]
    names = [c["name"] for c in report["checks"]]
    assert any("rigid rotation" in n for n in names)
    rigid = next(c for c in report["checks"] if "rigid rotation" in c["name"])
    assert rigid["threshold"] == 1e-12 and rigid["passed"]


@pytest.mark.slow
def test_verify_all(tmp_path):
    out = tmp_path / "report.json"
    assert main(["verify", "all", "--output", str(out)]) == 0
    assert json.loads(out.read_text())["passed"]


def test_pair(capsys):
    spec = str(DATA / "reference_spec.json")
    assert main(["pair", spec, str(DATA / "form_exact.json")]) == 0
    assert json.loads(capsys.readouterr().out)["value"] == 0
    values = {}
    for backend in ("periods", "quadrature"):
        assert main(["pair", spec, str(DATA / "form_dx.json"), "--backend", backend]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["backend"] == backend
        values[backend] = out["value"]
    assert abs(values["periods"] - values["quadrature"]) <= 1e-6


def test_pair_errors(capsys):
    spec = str(DATA / "reference_spec.json")
    assert main(["pair", spec, str(DATA / "basis_rank2.json")]) == 1
    assert main(["pair", str(DATA / "form_dx.json"), str(DATA / "form_dx.json")]) == 1
    capsys.readouterr()
    assert main(["pair", spec, str(DATA / "form_dx.json"), "--backend", "quadrature", "--tol", "1e-18"]) == 3
    partial = json.loads(capsys.readouterr().out)
    assert partial["value"] == pytest.approx(0.3, abs=1e-6)


def test_pair_dimension_mismatch(tmp_path):
    form = tmp_path / "f.json"
    form.write_text(json.dumps({"kind": "abstract-periods", "periods": [1, 0]}))
    assert main(["pair", str(DATA / "reference_spec.json"), str(form)]) == 1


def test_obstruct(capsys):
    assert main(["obstruct", str(DATA / "basis_cp2.json"), "1"]) == 0
    assert capsys.readouterr().out.strip() == "obstructed, aᵀQa = 1"
    assert main(["obstruct", str(DATA / "basis_surface.json"), "1,1"]) == 0
    assert capsys.readouterr().out.strip().startswith("inapplicable")
    assert main(["obstruct", str(DATA / "basis_rank2.json"), "1"]) == 1
