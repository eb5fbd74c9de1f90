import json
from pathlib import Path

import pytest

from solenoids.io import SchemaError, load_schema, read_json, validate

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.mark.parametrize(
    "name, schema",
    [
        ("basis_rank1.json", "basis"),
        ("basis_rank2.json", "basis"),
        ("basis_t3.json", "basis"),
        ("basis_cp2.json", "basis"),
        ("basis_surface.json", "basis"),
        ("form_dx.json", "form"),
        ("form_dx_periods.json", "form"),
        ("form_exact.json", "form"),
        ("reference_spec.json", "solenoid"),
        ("reference_config.json", "realize_config"),
    ],
)
def test_reference_data_validates(name, schema):
    read_json(DATA / name, schema)


def test_schemas_are_versioned():
    for name in ("basis", "form", "solenoid", "realize_config", "summary", "construction", "pairing"):
        assert load_schema(name)["version"] == 1


def test_violation_reports_location():
    basis = {"n": "three", "k": 1, "labels": ["a"], "period_matrix": [[1]], "volumes": [1]}
    with pytest.raises(SchemaError, match="at n:"):
        validate(basis, "basis")


def test_missing_and_broken_files(tmp_path):
    with pytest.raises(SchemaError):
        read_json(tmp_path / "nope.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(SchemaError):
        read_json(bad)
    ok = tmp_path / "ok.json"
    ok.write_text(json.dumps({"a": 1}))
    assert read_json(ok) == {"a": 1}
