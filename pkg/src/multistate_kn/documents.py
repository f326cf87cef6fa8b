"""JSON input documents: system descriptions and storage-tank scenarios."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

import jsonschema

from .errors import DomainError, ValidationError
from .reliability import ProbabilityModel
from .systems import ConsecutiveKN, GeneralizedKN, SimpleKN, SumThreshold, SystemSpec

__all__ = [
    "SYSTEM_SCHEMA",
    "TANK_SCHEMA",
    "SystemDocument",
    "TankScenario",
    "load_json",
    "parse_system",
    "parse_tank",
    "parse_law",
]

_PROBS = {
    "type": "object",
    "required": ["kind", "values"],
    "additionalProperties": False,
    "properties": {
        "kind": {"enum": ["mass", "survival"]},
        "values": {"type": "array", "minItems": 1, "items": {"type": "number", "minimum": 0, "maximum": 1}},
    },
}

SYSTEM_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["system"],
    "properties": {
        "system": {
            "type": "object",
            "required": ["type"],
            "properties": {
                "type": {"enum": ["simple_kn", "generalized_kn", "sum_threshold", "consecutive_kn"]},
                "k": {"type": "integer", "minimum": 1},
                "thresholds": {"type": "array", "minItems": 1, "items": {"type": "integer", "minimum": 1}},
                "m": {"type": "integer", "minimum": 1},
                "k_sum": {"type": "integer", "minimum": 0},
                "n": {"type": "integer", "minimum": 1},
                "system_max_level": {"type": "integer", "minimum": 1},
            },
            "allOf": [
                {"if": {"properties": {"type": {"const": "simple_kn"}}}, "then": {"required": ["k"]}},
                {"if": {"properties": {"type": {"const": "generalized_kn"}}}, "then": {"required": ["thresholds"]}},
                {"if": {"properties": {"type": {"const": "sum_threshold"}}}, "then": {"required": ["m", "k_sum"]}},
                {"if": {"properties": {"type": {"const": "consecutive_kn"}}}, "then": {"required": ["k"]}},
            ],
        },
        "components": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["max_level"],
                "properties": {
                    "max_level": {"type": "integer", "minimum": 1},
                    "probabilities": _PROBS,
                },
            },
        },
    },
}

_SURVIVAL_ROW = {"type": "array", "minItems": 1, "items": {"type": "number", "minimum": 0, "maximum": 1}}

TANK_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["n_tanks", "capacity_loads", "current_level_loads", "incoming_loads", "level_range"],
    "properties": {
        "n_tanks": {"type": "integer", "minimum": 1},
        "capacity_loads": {"type": "integer", "minimum": 1},
        "current_level_loads": {"type": "integer", "minimum": 0},
        "incoming_loads": {"type": "integer", "minimum": 0},
        "level_range": {"type": "array", "minItems": 2, "maxItems": 2, "items": {"type": "integer", "minimum": 0}},
        "survival_model": {
            "oneOf": [_SURVIVAL_ROW, {"type": "array", "minItems": 1, "items": _SURVIVAL_ROW}],
        },
    },
}


def load_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def _validate(doc: Any, schema: dict) -> None:
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ValidationError(f"{where}: {exc.message}") from exc


@dataclass(frozen=True)
class SystemDocument:
    spec: SystemSpec
    model: ProbabilityModel | None

    def require_model(self) -> ProbabilityModel:
        if self.model is None:
            raise ValidationError("this command needs probabilities for every component")
        return self.model


def _model_from_components(components: list[dict]) -> ProbabilityModel | None:
    probs = [c.get("probabilities") for c in components]
    if all(p is None for p in probs):
        return None
    if any(p is None for p in probs):
        raise ValidationError("probabilities must be given for all components or none")
    rows = []
    for i, (comp, p) in enumerate(zip(components, probs), start=1):
        if len(p["values"]) != comp["max_level"] + 1:
            raise ValidationError(
                f"component {i}: {len(p['values'])} probabilities for max level {comp['max_level']}"
            )
        rows.append((p["kind"], p["values"]))
    kinds = {k for k, _ in rows}
    if kinds == {"mass"}:
        return ProbabilityModel.from_mass([v for _, v in rows])
    if kinds == {"survival"}:
        for i, (_, v) in enumerate(rows, start=1):
            if v[0] != 1.0:
                raise ValidationError(f"component {i}: survival values must start with 1.0")
        return ProbabilityModel.from_survival([v for _, v in rows])
    # mixed inputs: convert each mass row separately
    table = []
    for i, (kind, v) in enumerate(rows, start=1):
        if kind == "mass":
            table.append(ProbabilityModel.from_mass([v]).survival[0])
        else:
            if v[0] != 1.0:
                raise ValidationError(f"component {i}: survival values must start with 1.0")
            table.append(tuple(v))
    return ProbabilityModel.from_survival(table)


def parse_system(doc: Any) -> SystemDocument:
    """Validate a system document and build the spec and (optional) model."""
    _validate(doc, SYSTEM_SCHEMA)
    sysd = doc["system"]
    comps = doc.get("components")
    kind = sysd["type"]
    caps = tuple(c["max_level"] for c in comps) if comps else None
    n = sysd.get("n")
    if n is not None and caps is not None and n != len(caps):
        raise ValidationError(f"system n={n} but {len(caps)} components listed")
    try:
        if kind in ("simple_kn", "generalized_kn"):
            if caps is None:
                raise ValidationError(f"{kind} needs a components list")
            if kind == "simple_kn":
                spec: SystemSpec = SimpleKN(sysd["k"], caps, sysd.get("system_max_level"))
            else:
                spec = GeneralizedKN(tuple(sysd["thresholds"]), caps)
        else:
            n = n if n is not None else (len(caps) if caps else None)
            if n is None:
                raise ValidationError(f"{kind} needs n or a components list")
            if kind == "sum_threshold":
                spec = SumThreshold(n, sysd["m"], sysd["k_sum"])
            else:
                spec = ConsecutiveKN(n, sysd["k"])
            if caps is not None and caps != spec.component_max_levels:
                raise ValidationError(
                    f"component max levels {list(caps)} do not match {kind} (expected {spec.component_max_levels[0]})"
                )
    except DomainError as exc:
        raise ValidationError(str(exc)) from exc
    model = _model_from_components(comps) if comps else None
    return SystemDocument(spec, model)


_LAW = re.compile(r"^\s*1\s*-\s*\(\s*([^*()]+?)\s*\*\s*j\s*\)\s*\^\s*(\S+)\s*$")


def parse_law(text: str):
    """Parse ``"1-(c*j)^e"`` (``c`` and ``e`` may be fractions like ``10/150``).

    Returns ``f(j) = max(0, 1 - (c*j)**e)``.
    """
    match = _LAW.match(text)
    if not match:
        raise ValidationError(f"law must look like '1-(c*j)^e', got {text!r}")
    try:
        c, e = float(Fraction(match.group(1))), float(Fraction(match.group(2)))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"bad constant in law {text!r}") from exc
    if c < 0 or e <= 0:
        raise ValidationError("law needs c >= 0 and e > 0")
    return lambda j: max(0.0, 1.0 - (c * j) ** e)


@dataclass(frozen=True)
class TankScenario:
    """``n`` tanks filled to ``current`` loads; ``incoming`` loads must fit below level ``l``.

    For a level ``l`` each tank has ``m = l - current`` free slots, and the
    scenario is the sum-threshold system ``J^m_[n, incoming]``.
    """

    n_tanks: int
    capacity: int
    current: int
    incoming: int
    levels: tuple[int, ...]
    survival: tuple[tuple[float, ...], ...] | None

    def system(self, level: int) -> SumThreshold | None:
        m = level - self.current
        if m < 1:
            return None
        return SumThreshold(self.n_tanks, m, self.incoming) if self.incoming <= self.n_tanks * m else None

    def model(self, level: int) -> ProbabilityModel:
        m = level - self.current
        if self.survival is None:
            raise ValidationError("tank document has no survival_model (pass --law to generate one)")
        rows = []
        for i, row in enumerate(self.survival, start=1):
            if len(row) < m + 1:
                raise ValidationError(f"tank {i}: survival array has {len(row)} entries, level {level} needs {m + 1}")
            rows.append(row[: m + 1])
        return ProbabilityModel.from_survival(rows)

    def with_law(self, law) -> "TankScenario":
        width = max(self.levels) - self.current + 1
        row = tuple([1.0] + [law(j) for j in range(1, max(width, 1))])
        return TankScenario(self.n_tanks, self.capacity, self.current, self.incoming, self.levels,
                            (row,) * self.n_tanks)


def parse_tank(doc: Any) -> TankScenario:
    _validate(doc, TANK_SCHEMA)
    lo, hi = doc["level_range"]
    if lo > hi:
        raise ValidationError(f"level_range [{lo}, {hi}] is empty")
    if hi > doc["capacity_loads"]:
        raise ValidationError(f"levels above the tank capacity {doc['capacity_loads']}")
    n = doc["n_tanks"]
    model = doc.get("survival_model")
    survival = None
    if model is not None:
        rows = [model] * n if not isinstance(model[0], list) else model
        if len(rows) != n:
            raise ValidationError(f"{len(rows)} survival arrays for {n} tanks")
        for i, row in enumerate(rows, start=1):
            if row[0] != 1.0:
                raise ValidationError(f"tank {i}: survival values must start with 1.0")
            if any(b > a for a, b in zip(row, row[1:])):
                raise ValidationError(f"tank {i}: survival values must be nonincreasing")
        survival = tuple(tuple(float(v) for v in row) for row in rows)
    return TankScenario(n, doc["capacity_loads"], doc["current_level_loads"], doc["incoming_loads"],
                        tuple(range(lo, hi + 1)), survival)
