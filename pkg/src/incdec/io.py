"""Instance files and report emission.

Instance file::

    {"n": 3, "labels": ["a", "b", "c"], "g": <spec>, "h": <spec>}
    {"n": 4, "f": <spec>}                       # plain incremental mode
    {"type": "named", "id": "coverage_tight", "params": {"k": 3}}

Specs are ``{"type": "table", "values": [...]}`` (bit-index order),
``{"type": "modular", "weights": [...], "offset": 0}``,
``{"type": "coverage", "universe": 27, "sets": [[0, 3], ...]}`` or
``{"type": "named", "id": ..., "params": {...}, "part": "g"}``. Rationals are
integers or ``"p/q"`` strings. Values are normalized to vanish on the empty
set unless the file sets ``"raw": true``.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from pathlib import Path

from .errors import InputError
from .instances import Instance, build_named_instance
from .rational import fmt, to_value
from .setfunc import Coverage, ExplicitTable, GroundSet, Modular, Named, SetFunctionSpec, validate_spec


def _field(obj: dict, key: str, where: str):
    if key not in obj:
        raise InputError(f"{where}: missing field {key!r}")
    return obj[key]


def _values(seq, where: str) -> tuple[Fraction, ...]:
    if not isinstance(seq, list):
        raise InputError(f"{where}: expected a list")
    out = []
    for i, v in enumerate(seq):
        try:
            out.append(to_value(v))
        except InputError as exc:
            raise InputError(f"{where}[{i}]: {exc}") from None
    return tuple(out)


def spec_from_json(obj, where: str = "spec") -> SetFunctionSpec:
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected an object")
    kind = _field(obj, "type", where)
    if kind == "table":
        return ExplicitTable(_values(_field(obj, "values", where), f"{where}.values"))
    if kind == "modular":
        return Modular(_values(_field(obj, "weights", where), f"{where}.weights"), to_value(obj.get("offset", 0)))
    if kind == "coverage":
        universe = obj.get("universe", obj.get("universe_size"))
        if not isinstance(universe, int):
            raise InputError(f"{where}: 'universe' must be an integer")
        sets = _field(obj, "sets", where)
        if not isinstance(sets, list) or not all(isinstance(s, list) for s in sets):
            raise InputError(f"{where}.sets: expected a list of lists")
        return Coverage(universe, tuple(frozenset(s) for s in sets))
    if kind == "named":
        params = obj.get("params", {})
        if not isinstance(params, dict):
            raise InputError(f"{where}.params: expected an object")
        return Named(str(_field(obj, "id", where)), tuple(sorted(params.items())), obj.get("part"))
    raise InputError(f"{where}.type: unknown spec type {kind!r}")


def spec_to_json(spec: SetFunctionSpec) -> dict:
    if isinstance(spec, ExplicitTable):
        return {"type": "table", "values": [fmt(v) for v in spec.values]}
    if isinstance(spec, Modular):
        return {"type": "modular", "weights": [fmt(w) for w in spec.weights], "offset": fmt(spec.offset)}
    if isinstance(spec, Coverage):
        return {"type": "coverage", "universe": spec.universe_size, "sets": [sorted(s) for s in spec.sets]}
    if isinstance(spec, Named):
        out = {"type": "named", "id": spec.id, "params": {k: fmt(to_value(v)) for k, v in spec.params}}
        if spec.part:
            out["part"] = spec.part
        return out
    raise TypeError(spec)


def _resolve(spec: SetFunctionSpec, role: str) -> tuple[SetFunctionSpec, GroundSet | None]:
    if not isinstance(spec, Named):
        return spec, None
    inst = build_named_instance(spec.id, dict(spec.params))
    part = spec.part or role
    if part not in ("g", "h", "f"):
        raise InputError(f"{role}: unknown part {part!r}")
    resolved = getattr(inst, part)
    if resolved is None:
        raise InputError(f"{role}: named instance {spec.id!r} has no part {part!r}")
    return resolved, inst.ground


def instance_from_json(obj) -> Instance:
    if not isinstance(obj, dict):
        raise InputError("instance: expected a JSON object")
    raw = bool(obj.get("raw", False))
    if obj.get("type") == "named":
        named = spec_from_json(obj, "instance")
        inst = build_named_instance(named.id, dict(named.params))
        inst.raw = raw
        return inst
    roles = [r for r in ("g", "h", "f") if r in obj]
    if set(roles) not in ({"g", "h"}, {"f"}):
        raise InputError("instance: needs fields 'g' and 'h', or only 'f'")
    specs = {}
    named_ground = None
    for r in roles:
        specs[r], gr = _resolve(spec_from_json(obj[r], r), r)
        named_ground = named_ground or gr
    n = obj.get("n")
    if n is None and named_ground is not None:
        n = named_ground.n
    if not isinstance(n, int):
        raise InputError("instance: field 'n' must be an integer")
    labels = obj.get("labels")
    if labels is None and named_ground is not None and named_ground.n == n:
        labels = named_ground.labels
    ground = GroundSet(n, tuple(labels or ()))
    for r, s in specs.items():
        try:
            validate_spec(s, n)
        except InputError as exc:
            raise InputError(f"{r}: {exc}") from None
    return Instance(ground, raw=raw, name=obj.get("name"), **specs)


def instance_to_json(inst: Instance) -> dict:
    out = {"n": inst.ground.n, "labels": list(inst.ground.labels)}
    if inst.name:
        out["name"] = inst.name
    if inst.raw:
        out["raw"] = True
    for r in ("g", "h", "f"):
        spec = getattr(inst, r)
        if spec is not None:
            out[r] = spec_to_json(spec)
    return out


def parse_instance(path) -> Instance:
    """Load and validate an instance file."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None
    return instance_from_json(obj)


def dumps(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def emit_report(body, fmt_: str = "json", path=None, ground: GroundSet | None = None) -> str:
    """Write a report body; identical inputs give byte-identical output.

    ``body`` is a JSON-ready object, or anything with ``to_json(ground)`` /
    ``to_csv(ground)``. Returns the text written.
    """
    if fmt_ == "csv":
        if not hasattr(body, "to_csv"):
            raise InputError("csv output is only available for ratio reports")
        text = body.to_csv(ground)
    elif fmt_ == "json":
        data = body.to_json(ground) if hasattr(body, "to_json") else body
        text = dumps(data)
    else:
        raise InputError(f"unknown format {fmt_!r}")
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)
    return text
