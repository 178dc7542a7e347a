"""Measurement action strings.

Grammar (shared by the CLI and tests):

    <vertex>:x[@<sym|num>]
    <vertex>:p[@<sym|num>][:b0=<vertex>]
    <vertex>:theta:<rational-tan>[@<sym|num>]

Omitted outcomes are filled in later with fresh symbols m1, m2, ... in
action order.  Vertex labels containing ':' or '@' cannot be addressed by
an action string.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .bases import MeasurementBasis
from .errors import SchemaError
from .outcomes import OutcomeExpr, parse_outcome


@dataclass(frozen=True)
class ParsedAction:
    vertex: str
    basis: MeasurementBasis
    outcome: OutcomeExpr | None
    b0: str | None = None


def parse_action(text: str) -> ParsedAction:
    vertex, sep, rest = text.partition(":")
    if not sep or not vertex or not rest:
        raise SchemaError(f"malformed action: {text!r}")
    b0 = None
    if rest == "x" or rest.startswith("x@"):
        basis = MeasurementBasis.x()
        outcome = parse_outcome(rest[2:]) if rest != "x" else None
    elif rest.startswith("theta:"):
        tan_text, at, outcome_text = rest[len("theta:") :].partition("@")
        basis = MeasurementBasis.theta(tan_text)
        outcome = parse_outcome(outcome_text) if at else None
    elif rest.startswith("p"):
        body = rest[1:]
        body, marker, b0 = body.partition(":b0=")
        if marker and not b0:
            raise SchemaError(f"empty b0 in action: {text!r}")
        if not marker:
            b0 = None
        basis = MeasurementBasis.p()
        if not body:
            outcome = None
        elif body.startswith("@"):
            outcome = parse_outcome(body[1:])
        else:
            raise SchemaError(f"malformed action: {text!r}")
    else:
        raise SchemaError(f"unknown basis in action: {text!r}")
    return ParsedAction(vertex, basis, outcome, b0)


def assign_outcomes(actions: list[ParsedAction]) -> list[ParsedAction]:
    """Give every outcome-less action a fresh symbol, skipping names the
    explicit outcomes already use."""
    used: set[str] = set()
    for action in actions:
        if action.outcome is not None:
            used.update(action.outcome.symbols())
    filled = []
    counter = 0
    for action in actions:
        if action.outcome is None:
            while True:
                counter += 1
                name = f"m{counter}"
                if name not in used:
                    break
            used.add(name)
            action = replace(action, outcome=OutcomeExpr.symbol(name))
        filled.append(action)
    return filled
