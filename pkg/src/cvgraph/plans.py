"""Measurement plans: ordered single-vertex homodyne actions.

Kept separate from the planner so the covariance checker and the CLI can
exchange plans without pulling in the search machinery.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bases import MeasurementBasis
from .errors import SchemaError
from .outcomes import OutcomeExpr, parse_outcome
from .rationals import format_rational


def format_step_outcome(expr: OutcomeExpr) -> str:
    """Plan outcomes are a bare symbol or a rational; anything else is a bug."""
    if expr.is_constant():
        return format_rational(expr.const)
    doc = expr.to_json()
    terms = doc["terms"]
    if doc["const"] == "0" and len(terms) == 1:
        name, coeff = next(iter(terms.items()))
        if coeff == "1":
            return name
    raise SchemaError(f"not a plan-step outcome: {expr!r}")


@dataclass(frozen=True)
class PlanStep:
    vertex: str
    basis: MeasurementBasis
    outcome: OutcomeExpr

    def to_json(self) -> dict:
        return {
            "vertex": self.vertex,
            "basis": self.basis.label(),
            "outcome": format_step_outcome(self.outcome),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "PlanStep":
        if not isinstance(doc, dict) or not {"vertex", "basis", "outcome"} <= set(doc):
            raise SchemaError(f"plan step needs vertex, basis, outcome: {doc!r}")
        return cls(
            doc["vertex"],
            MeasurementBasis.from_label(doc["basis"]),
            parse_outcome(doc["outcome"]),
        )


@dataclass(frozen=True)
class MeasurementPlan:
    steps: tuple[PlanStep, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple(self.steps))
        seen = set()
        for step in self.steps:
            if step.vertex in seen:
                raise SchemaError(f"vertex {step.vertex} measured twice")
            seen.add(step.vertex)

    def to_json(self) -> dict:
        return {"steps": [s.to_json() for s in self.steps]}

    @classmethod
    def from_json(cls, doc: dict) -> "MeasurementPlan":
        if not isinstance(doc, dict) or "steps" not in doc:
            raise SchemaError("plan document needs a 'steps' list")
        return cls(tuple(PlanStep.from_json(s) for s in doc["steps"]))
