"""Homodyne measurement bases.

A basis names the measured quadrature of one mode: ``x``, ``p``, or the
rotated quadrature with slope ``tan_theta``.  For exactness the engine
quotes rotated-quadrature outcomes for the scaled operator
``x + tan_theta * p`` (which is ``1/cos(theta)`` times the unit-normalized
quadrature); the x and p bases are unscaled.  ``theta`` with slope 0 is
normalized to ``x`` at construction, and ``p`` is the dedicated
representation of the 90-degree quadrature, so no basis ever stores an
infinite slope.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import SchemaError
from .rationals import format_rational, parse_rational


@dataclass(frozen=True)
class MeasurementBasis:
    kind: str  # "x", "p", or "theta"
    tan_theta: Fraction | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("x", "p", "theta"):
            raise SchemaError(f"unknown basis kind: {self.kind!r}")
        if self.kind == "theta":
            if self.tan_theta is None:
                raise SchemaError("theta basis needs tan_theta")
            if self.tan_theta == 0:
                object.__setattr__(self, "kind", "x")
                object.__setattr__(self, "tan_theta", None)
        elif self.tan_theta is not None:
            raise SchemaError(f"{self.kind} basis takes no tan_theta")

    @classmethod
    def x(cls) -> "MeasurementBasis":
        return cls("x")

    @classmethod
    def p(cls) -> "MeasurementBasis":
        return cls("p")

    @classmethod
    def theta(cls, tan_theta: Fraction | int | str) -> "MeasurementBasis":
        if isinstance(tan_theta, str):
            tan_theta = parse_rational(tan_theta)
        return cls("theta", Fraction(tan_theta))

    def direction(self) -> tuple[Fraction, Fraction]:
        """Coefficients (on x, on p) of the measured quadrature operator."""
        if self.kind == "x":
            return (Fraction(1), Fraction(0))
        if self.kind == "p":
            return (Fraction(0), Fraction(1))
        return (Fraction(1), Fraction(self.tan_theta))

    def label(self) -> str:
        if self.kind == "theta":
            return f"theta:{format_rational(self.tan_theta)}"
        return self.kind

    @classmethod
    def from_label(cls, text: str) -> "MeasurementBasis":
        """Inverse of :meth:`label`: "x", "p" or "theta:<tan>"."""
        if text == "x":
            return cls.x()
        if text == "p":
            return cls.p()
        if text.startswith("theta:"):
            return cls.theta(parse_rational(text[len("theta:") :]))
        raise SchemaError(f"unknown basis label: {text!r}")

    def to_json(self) -> dict:
        doc: dict = {"kind": self.kind}
        if self.kind == "theta":
            doc["tan"] = format_rational(self.tan_theta)
        return doc

    @classmethod
    def from_json(cls, doc: object) -> "MeasurementBasis":
        if isinstance(doc, str):
            return cls.from_label(doc)
        if not isinstance(doc, dict) or "kind" not in doc:
            raise SchemaError(f"basis must be an object with 'kind': {doc!r}")
        kind = doc["kind"]
        if kind == "theta":
            if "tan" not in doc:
                raise SchemaError("theta basis needs 'tan'")
            return cls.theta(parse_rational(doc["tan"]))
        if kind in ("x", "p"):
            return cls(kind)
        raise SchemaError(f"unknown basis kind: {kind!r}")
