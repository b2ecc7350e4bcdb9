"""Versioned JSON schemas for the output records, with a small validator.

The schema files use a restricted dialect: ``type``, ``properties``,
``required``, ``items``, ``enum``, ``additionalProperties`` (boolean) and
``$ref`` to another shipped schema by name.  That is enough to pin the
stable field names and types of every record the toolchain emits without
pulling in a full validator dependency.
"""

from __future__ import annotations

import json
from pathlib import Path

_DIR = Path(__file__).parent

SCHEMA_NAMES = (
    "resource_estimate",
    "optimization_result",
    "qec_sample",
    "verify_report",
    "results_table",
)

_TYPES = {
    "object": dict,
    "array": list,
    "string": str,
    "boolean": bool,
    "null": type(None),
}


class SchemaError(ValueError):
    pass


def schema_for(name):
    path = _DIR / f"{name}.json"
    if not path.exists():
        raise SchemaError(f"no schema named {name!r}")
    return json.loads(path.read_text())


def _check_type(value, typ, where):
    if typ == "integer":
        # bool is an int subclass but never a valid integer field
        if not isinstance(value, int) or isinstance(value, bool):
            raise SchemaError(f"{where}: expected integer, got {value!r}")
    elif typ == "number":
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise SchemaError(f"{where}: expected number, got {value!r}")
    else:
        if not isinstance(value, _TYPES[typ]):
            raise SchemaError(f"{where}: expected {typ}, got {value!r}")


def _validate(value, schema, where):
    if "$ref" in schema:
        _validate(value, schema_for(schema["$ref"]), where)
        return
    if "enum" in schema:
        if value not in schema["enum"]:
            raise SchemaError(f"{where}: {value!r} not in {schema['enum']}")
        return
    typ = schema.get("type")
    if typ is not None:
        if isinstance(typ, list):
            if not any(_try_type(value, t) for t in typ):
                raise SchemaError(f"{where}: expected one of {typ}, got {value!r}")
        else:
            _check_type(value, typ, where)
    if isinstance(value, dict):
        props = schema.get("properties", {})
        for key in schema.get("required", ()):
            if key not in value:
                raise SchemaError(f"{where}: missing required key {key!r}")
        for key, sub in props.items():
            if key in value:
                _validate(value[key], sub, f"{where}.{key}")
        if schema.get("additionalProperties") is False:
            extra = sorted(set(value) - set(props))
            if extra:
                raise SchemaError(f"{where}: unexpected keys {extra}")
    elif isinstance(value, list) and "items" in schema:
        for idx, item in enumerate(value):
            _validate(item, schema["items"], f"{where}[{idx}]")


def _try_type(value, typ):
    try:
        _check_type(value, typ, "")
        return True
    except SchemaError:
        return False


def validate(obj, name):
    """Raise SchemaError when obj does not match the named schema."""
    _validate(obj, schema_for(name), name)
    return obj
