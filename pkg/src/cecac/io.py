"""JSON instance and solution files."""
from __future__ import annotations

import json
from pathlib import Path

from .constraints import ParseError, parse_constraint, render_constraint
from .model import Candidate, CecacError, Instance, Solution, validate_instance

INSTANCE_KEYS = {"name", "attributes", "candidates", "constraints", "k", "p"}
CANDIDATE_KEYS = {"id", "attributes", "profit"}


class InputError(CecacError):
    pass


def _int(value, what):
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(f"{what} must be an integer, got {value!r}")
    return value


def _str_list(value, what):
    if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
        raise InputError(f"{what} must be a list of strings")
    return value


def instance_from_dict(doc, strict: bool = True) -> Instance:
    if not isinstance(doc, dict):
        raise InputError("instance must be a JSON object")
    missing = {"attributes", "candidates", "constraints", "k", "p"} - doc.keys()
    if missing:
        raise InputError(f"missing fields: {', '.join(sorted(missing))}")
    if strict and doc.keys() - INSTANCE_KEYS:
        raise InputError(f"unknown fields: {', '.join(sorted(doc.keys() - INSTANCE_KEYS))}")
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise InputError("name must be a string")
    attrs = _str_list(doc["attributes"], "attributes")
    if not isinstance(doc["candidates"], list):
        raise InputError("candidates must be a list")
    cands = []
    for n, c in enumerate(doc["candidates"]):
        if not isinstance(c, dict) or not {"id", "profit"} <= c.keys():
            raise InputError(f"candidate #{n} needs at least id and profit")
        if strict and c.keys() - CANDIDATE_KEYS:
            raise InputError(f"candidate #{n}: unknown fields {sorted(c.keys() - CANDIDATE_KEYS)}")
        if not isinstance(c["id"], str):
            raise InputError(f"candidate #{n}: id must be a string")
        owned = _str_list(c.get("attributes", []), f"candidate {c['id']} attributes")
        cands.append(Candidate(c["id"], frozenset(owned), _int(c["profit"], f"profit of {c['id']}")))
    cons = []
    for text in _str_list(doc["constraints"], "constraints"):
        try:
            cons.append(parse_constraint(text))
        except ParseError as exc:
            raise InputError(f"constraint {text!r}: {exc}") from None
    inst = Instance(tuple(cands), tuple(attrs), tuple(cons),
                    _int(doc["k"], "k"), _int(doc["p"], "p"), name)
    problems = validate_instance(inst)
    if problems:
        raise InputError("; ".join(map(str, problems)))
    return inst


def instance_to_dict(instance: Instance) -> dict:
    return {
        "name": instance.name,
        "attributes": list(instance.attributes),
        "candidates": [{"id": c.id, "attributes": sorted(c.attributes), "profit": c.profit}
                       for c in instance.candidates],
        "constraints": [render_constraint(r) for r in instance.constraints],
        "k": instance.k,
        "p": instance.p,
    }


def _load_json(source):
    try:
        text = Path(source).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def read_instance(path, strict: bool = True) -> Instance:
    return instance_from_dict(_load_json(path), strict)


def dumps_instance(instance: Instance) -> str:
    return json.dumps(instance_to_dict(instance), indent=2) + "\n"


def write_instance(instance: Instance, path) -> None:
    Path(path).write_text(dumps_instance(instance))


def solution_to_dict(sol: Solution, elapsed_ms: float) -> dict:
    return {
        "feasible": sol.feasible,
        "committee": sorted(sol.committee) if sol.committee else [],
        "profit": sol.profit if sol.profit is not None else sol.optimum,
        "solver": sol.solver,
        "elapsed_ms": round(elapsed_ms, 3),
    }


def read_committee(path) -> list[str]:
    doc = _load_json(path)
    committee = doc.get("committee") if isinstance(doc, dict) else doc
    return list(_str_list(committee, "committee"))
