"""Affine expressions in measurement-outcome symbols.

Measurement outcomes are symbolic by default (named symbols such as ``m1``),
so every displacement the engine tracks is an exact affine form
``const + sum(coeff_i * symbol_i)`` with rational coefficients.  Numeric
outcomes are just the constant case, and substitution turns a symbolic
expression into a numeric one.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .errors import SchemaError
from .rationals import format_rational, parse_rational

RationalLike = Fraction | int


class OutcomeExpr:
    """An exact affine combination of outcome symbols.

    Immutable; zero coefficients are never stored, so two expressions are
    equal iff they are the same affine form.
    """

    __slots__ = ("const", "_terms")

    def __init__(
        self,
        const: RationalLike = 0,
        terms: Mapping[str, RationalLike] | Iterable[tuple[str, RationalLike]] = (),
    ) -> None:
        self.const = Fraction(const)
        items = terms.items() if isinstance(terms, Mapping) else terms
        cleaned: dict[str, Fraction] = {}
        for name, coeff in items:
            if not name:
                raise SchemaError("outcome symbol name must be non-empty")
            frac = Fraction(coeff)
            if frac != 0:
                cleaned[name] = frac
        self._terms = dict(sorted(cleaned.items()))

    @property
    def terms(self) -> dict[str, Fraction]:
        return dict(self._terms)

    @classmethod
    def symbol(cls, name: str) -> "OutcomeExpr":
        return cls(0, {name: Fraction(1)})

    @classmethod
    def zero(cls) -> "OutcomeExpr":
        return cls(0)

    def is_zero(self) -> bool:
        return self.const == 0 and not self._terms

    def is_constant(self) -> bool:
        return not self._terms

    def symbols(self) -> set[str]:
        return set(self._terms)

    def substitute(self, values: Mapping[str, RationalLike]) -> "OutcomeExpr":
        """Replace symbols by rational values; unknown symbols stay symbolic."""
        const = self.const
        remaining: dict[str, Fraction] = {}
        for name, coeff in self._terms.items():
            if name in values:
                const += coeff * Fraction(values[name])
            else:
                remaining[name] = coeff
        return OutcomeExpr(const, remaining)

    def __add__(self, other: "OutcomeExpr | RationalLike") -> "OutcomeExpr":
        if isinstance(other, (Fraction, int)):
            return OutcomeExpr(self.const + other, self._terms)
        merged = dict(self._terms)
        for name, coeff in other._terms.items():
            merged[name] = merged.get(name, Fraction(0)) + coeff
        return OutcomeExpr(self.const + other.const, merged)

    def __sub__(self, other: "OutcomeExpr | RationalLike") -> "OutcomeExpr":
        return self + (-other if isinstance(other, OutcomeExpr) else -Fraction(other))

    def __neg__(self) -> "OutcomeExpr":
        return self * Fraction(-1)

    def __mul__(self, factor: RationalLike) -> "OutcomeExpr":
        factor = Fraction(factor)
        return OutcomeExpr(
            self.const * factor,
            {name: coeff * factor for name, coeff in self._terms.items()},
        )

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (Fraction, int)):
            return self.is_constant() and self.const == other
        if not isinstance(other, OutcomeExpr):
            return NotImplemented
        return self.const == other.const and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.const, tuple(self._terms.items())))

    def __repr__(self) -> str:
        return f"OutcomeExpr({self})"

    def __str__(self) -> str:
        """Compact rendering: "0", "3/2", "m1", "2*m1 - 1/2"."""
        parts: list[str] = []
        for name, coeff in self._terms.items():
            if coeff == 1:
                text = name
            elif coeff == -1:
                text = f"-{name}"
            else:
                text = f"{format_rational(coeff)}*{name}"
            parts.append(text)
        if self.const != 0 or not parts:
            parts.append(format_rational(self.const))
        rendered = parts[0]
        for part in parts[1:]:
            rendered += f" - {part[1:]}" if part.startswith("-") else f" + {part}"
        return rendered

    def to_json(self) -> dict:
        return {
            "const": format_rational(self.const),
            "terms": {name: format_rational(c) for name, c in self._terms.items()},
        }

    @classmethod
    def from_json(cls, doc: object) -> "OutcomeExpr":
        if not isinstance(doc, dict):
            raise SchemaError(f"affine expression must be an object, got {doc!r}")
        const = parse_rational(doc.get("const", "0"))
        raw_terms = doc.get("terms", {})
        if not isinstance(raw_terms, dict):
            raise SchemaError("affine 'terms' must be an object")
        terms = {name: parse_rational(text) for name, text in raw_terms.items()}
        return cls(const, terms)


def parse_outcome(text: str) -> OutcomeExpr:
    """Parse an outcome token: a rational number or a symbol name."""
    try:
        return OutcomeExpr(parse_rational(text))
    except SchemaError:
        pass
    if not text or not text.replace("_", "").isalnum() or text[0].isdigit():
        raise SchemaError(f"not a rational or symbol name: {text!r}")
    return OutcomeExpr.symbol(text)
