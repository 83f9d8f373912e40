"""Check results and their JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Any

SCHEMA_ID = "gmak-report/1"

HOLDS, FAILS, INCONCLUSIVE, NOT_APPLICABLE = "holds", "fails", "inconclusive", "not_applicable"
STATUSES = (HOLDS, FAILS, INCONCLUSIVE, NOT_APPLICABLE)


def sign_str(sigma) -> str:
    """Compact text for a sign vector, e.g. ``(+,0,-)`` -> ``"+0-"``."""
    return "".join("-0+"[s + 1] for s in sigma)


def parse_sign_str(text: str) -> tuple[int, ...]:
    return tuple("-0+".index(ch) - 1 for ch in text)


def jsonable(obj: Any) -> Any:
    """Recursively convert Fractions (to strings), tuples and sets into JSON types."""
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else int(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(jsonable(v) for v in obj)
    if isinstance(obj, float) and obj != obj:
        return None
    return obj


@dataclass
class ConditionReport:
    name: str
    status: str
    anchor: str
    evidence: dict = field(default_factory=dict)
    counterexample: dict | None = None
    ms: float | None = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "anchor": self.anchor,
            "evidence": jsonable(self.evidence),
            "counterexample": jsonable(self.counterexample),
            "ms": self.ms,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ConditionReport":
        return cls(
            name=data["name"],
            status=data["status"],
            anchor=data["anchor"],
            evidence=data["evidence"],
            counterexample=data["counterexample"],
            ms=data["ms"],
        )


def load_schema() -> dict:
    return json.loads(resources.files("gmak").joinpath("report_schema.json").read_text("utf-8"))
