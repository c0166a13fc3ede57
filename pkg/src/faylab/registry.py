"""Curve registry: builtin JSON entries plus user directories.

Entry formats:
  {"id": ..., "type": "hyperelliptic", "branch_points": [[re, im], ...]}
  {"id": ..., "type": "plane_quartic", "coefficients": {"X0^4": [re, im], ...}}

The FAYLAB_REGISTRY environment variable may name a directory whose
*.json files are prepended to (and may shadow) the builtin registry.
"""

from __future__ import annotations

import json
import os
import re
from pathlib import Path

_BUILTIN_DIR = Path(__file__).parent / "registry"

_MONO_RE = re.compile(r"X([012])(?:\^([0-9]+))?$")


class RegistryError(Exception):
    pass


def _parse_monomial(key):
    expo = [0, 0, 0]
    for part in key.split("*"):
        m = _MONO_RE.match(part.strip())
        if not m:
            raise RegistryError(f"bad monomial {key!r}")
        expo[int(m.group(1))] += int(m.group(2) or 1)
    if sum(expo) != 4:
        raise RegistryError(f"monomial {key!r} is not quartic")
    return tuple(expo)


def _load_entry(raw):
    if "id" not in raw or "type" not in raw:
        raise RegistryError("registry entry needs 'id' and 'type'")
    if raw["type"] == "hyperelliptic":
        pts = [complex(re_, im_) for re_, im_ in raw["branch_points"]]
        return {"id": raw["id"], "type": "hyperelliptic", "branch_points": pts}
    if raw["type"] == "plane_quartic":
        coeffs = {_parse_monomial(k): complex(v[0], v[1])
                  for k, v in raw["coefficients"].items()}
        return {"id": raw["id"], "type": "plane_quartic", "coefficients": coeffs}
    raise RegistryError(f"unknown curve type {raw['type']!r}")


def registry_entries():
    """All registry entries, id -> entry; env-dir entries shadow builtins."""
    out = {}
    dirs = [_BUILTIN_DIR]
    env = os.environ.get("FAYLAB_REGISTRY")
    if env:
        dirs.insert(0, Path(env))
    seen = {}
    for d in dirs:
        if not d.is_dir():
            continue
        for path in sorted(d.glob("*.json")):
            raw = json.loads(path.read_text())
            entry = _load_entry(raw)
            if entry["id"] not in seen:
                seen[entry["id"]] = entry
    return seen


def load_curve_entry(name):
    """Resolve a registry id or a path to a JSON file."""
    entries = registry_entries()
    if name in entries:
        return entries[name]
    p = Path(name)
    if p.is_file():
        return _load_entry(json.loads(p.read_text()))
    raise RegistryError(f"unknown curve {name!r}")


def hyperelliptic_ids():
    return [k for k, v in sorted(registry_entries().items())
            if v["type"] == "hyperelliptic"]


def quartic_ids():
    return [k for k, v in sorted(registry_entries().items())
            if v["type"] == "plane_quartic"]
