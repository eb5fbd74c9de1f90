"""JSON reading, writing and schema validation."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema

SCHEMA_VERSION = 1


class SchemaError(ValueError):
    pass


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files("solenoids").joinpath(f"schemas/{name}.schema.json").read_text()
    return json.loads(text)


def validate(data, name: str):
    try:
        jsonschema.validate(data, load_schema(name))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"{name} schema violation at {where}: {exc.message}") from None
    return data


def read_json(path, schema: str | None = None):
    try:
        data = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise SchemaError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from None
    if schema is not None:
        validate(data, schema)
    return data


def dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_json(path, data):
    Path(path).write_text(dumps(data))
