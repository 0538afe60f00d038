"""JSON loading and dumping for every interchange object."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .allocation import Allocation, Instance
from .circuits import BoolCircuit, parse_dsl
from .errors import ParseError
from .valuations import Valuation, valuation_from_json


def read_json(path) -> object:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True).encode()).hexdigest()[:16]


def load_circuit(path) -> BoolCircuit:
    """Circuit JSON, a problem/artifact JSON wrapping one, or the text DSL."""
    text = Path(path).read_text()
    stripped = text.lstrip()
    if not stripped.startswith("{"):
        return parse_dsl(text)
    obj = read_json(path)
    return circuit_from_obj(obj)


def circuit_from_obj(obj) -> BoolCircuit:
    if isinstance(obj, dict):
        if "gates" in obj:
            return BoolCircuit.from_json(obj)
        if "circuit" in obj:
            return circuit_from_obj(obj["circuit"])
        if "target" in obj:
            return circuit_from_obj(obj["target"])
    raise ParseError("no circuit found in JSON")


def load_instance(obj) -> Instance:
    """Instance JSON, a bare valuation (two identical agents), or a
    reduction artifact targeting an instance."""
    if isinstance(obj, dict) and "target" in obj:
        obj = obj["target"]
    if not isinstance(obj, dict):
        raise ParseError("instance must be a JSON object")
    if "agents" in obj:
        return Instance.from_json(obj)
    if "type" in obj:
        return Instance.identical_agents(valuation_from_json(obj), 2)
    raise ParseError("JSON is neither an instance nor a valuation")


def load_valuation(obj, agent: int = 0) -> Valuation:
    if isinstance(obj, dict) and "type" in obj:
        return valuation_from_json(obj)
    inst = load_instance(obj)
    if not 0 <= agent < inst.n:
        raise ParseError(f"instance has no agent {agent}")
    return inst.valuations[agent]


def load_allocation(obj) -> Allocation:
    return Allocation.from_json(obj)
