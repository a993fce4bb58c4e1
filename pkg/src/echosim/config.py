"""Config-file and override handling. Params come from a flat table in either
JSON or "key = value" text; every key can be overridden from the CLI."""

from __future__ import annotations

import json
from dataclasses import fields

from .engine import ParameterError, Params

_PARAM_FIELDS = {f.name for f in fields(Params)}

_BOOL = {"true": True, "false": False}


def _coerce(value: str):
    text = value.strip()
    if text.lower() in _BOOL:
        return _BOOL[text.lower()]
    if (text.startswith('"') and text.endswith('"')) or \
       (text.startswith("'") and text.endswith("'")):
        return text[1:-1]
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    return text


def parse_flat_config(text: str, source: str = "<config>") -> dict:
    """Flat "key = value" lines; '#' comments and blank lines skipped."""
    table = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        table[key.strip()] = _coerce(value)
    return table


def load_config(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return json.loads(text)
    return parse_flat_config(text, source=str(path))


def params_from_table(table: dict, base: Params = None) -> Params:
    base = base if base is not None else Params()
    unknown = set(table) - _PARAM_FIELDS
    if unknown:
        raise ParameterError(f"unknown parameter keys: {sorted(unknown)}")
    return base.with_overrides(**table)


def parse_overrides(pairs) -> dict:
    """--set key=value CLI overrides."""
    table = {}
    for pair in pairs:
        if "=" not in pair:
            raise ParameterError(f"override must be key=value, got {pair!r}")
        key, _, value = pair.partition("=")
        table[key.strip()] = _coerce(value)
    return table
