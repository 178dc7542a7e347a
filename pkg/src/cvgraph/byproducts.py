"""Per-mode Gaussian byproduct operators.

A byproduct is, for each vertex, an exact affine map of the mode's phase
space: a determinant-1 rational 2x2 matrix ``S`` acting on the (x, p) pair
plus a displacement ``(dx, dp)`` whose entries are affine in outcome
symbols.  Applied to a state it sends the mean vector ``r`` to ``S r + d``;
equivalently, conjugating a quadrature operator through the byproduct gives
``S r + d`` in the Heisenberg picture.

Composition follows operator order: ``compose(later, earlier)`` is the map
"earlier first, then later".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import SchemaError
from .outcomes import OutcomeExpr
from .rationals import format_rational, parse_rational


@dataclass(frozen=True)
class Mat2:
    """A 2x2 matrix of Fractions in the (x, p) basis."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self) -> None:
        for name in "abcd":
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(Fraction(1), Fraction(0), Fraction(0), Fraction(1))

    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "Mat2":
        det = self.det()
        if det == 0:
            raise ZeroDivisionError("singular 2x2 matrix")
        return Mat2(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def transpose(self) -> "Mat2":
        return Mat2(self.a, self.c, self.b, self.d)

    def apply(self, x, p):
        """Matrix-vector product; works for Fractions and OutcomeExprs."""
        return (x * self.a + p * self.b, x * self.c + p * self.d)

    def is_identity(self) -> bool:
        return self == Mat2.identity()

    def rows(self) -> list[list[Fraction]]:
        return [[self.a, self.b], [self.c, self.d]]


@dataclass(frozen=True)
class ModeOp:
    """The byproduct acting on a single mode: mean map r -> sym @ r + shift."""

    sym: Mat2
    shift: tuple[OutcomeExpr, OutcomeExpr]

    def __post_init__(self) -> None:
        if self.sym.det() != 1:
            raise SchemaError(f"symplectic part must have determinant 1: {self.sym}")

    @classmethod
    def identity(cls) -> "ModeOp":
        return cls(Mat2.identity(), (OutcomeExpr.zero(), OutcomeExpr.zero()))

    def is_identity(self) -> bool:
        return (
            self.sym.is_identity()
            and self.shift[0].is_zero()
            and self.shift[1].is_zero()
        )

    def compose(self, earlier: "ModeOp") -> "ModeOp":
        """This op applied after ``earlier``."""
        moved = self.sym.apply(*earlier.shift)
        return ModeOp(
            self.sym @ earlier.sym,
            (moved[0] + self.shift[0], moved[1] + self.shift[1]),
        )

    def inverse(self) -> "ModeOp":
        inv = self.sym.inverse()
        moved = inv.apply(*self.shift)
        return ModeOp(inv, (-moved[0], -moved[1]))


def position_shift(amount: OutcomeExpr) -> ModeOp:
    """Translation of x by ``amount`` (momentum untouched)."""
    return ModeOp(Mat2.identity(), (amount, OutcomeExpr.zero()))


def momentum_shift(amount: OutcomeExpr) -> ModeOp:
    """Translation of p by ``amount`` (position untouched)."""
    return ModeOp(Mat2.identity(), (OutcomeExpr.zero(), amount))


def shear_p(eta: Fraction) -> ModeOp:
    """The x^2 phase gate: p picks up eta*x, x unchanged."""
    return ModeOp(
        Mat2(Fraction(1), Fraction(0), Fraction(eta), Fraction(1)),
        (OutcomeExpr.zero(), OutcomeExpr.zero()),
    )


def shear_x(eta: Fraction) -> ModeOp:
    """The p^2 phase gate: x picks up -eta*p, p unchanged."""
    return ModeOp(
        Mat2(Fraction(1), Fraction(-eta), Fraction(0), Fraction(1)),
        (OutcomeExpr.zero(), OutcomeExpr.zero()),
    )


def fourier() -> ModeOp:
    """Quarter rotation mapping the x basis onto the p basis."""
    return ModeOp(
        Mat2(Fraction(0), Fraction(-1), Fraction(1), Fraction(0)),
        (OutcomeExpr.zero(), OutcomeExpr.zero()),
    )


def compose_byproduct(
    later: "LocalGaussianRecord", earlier: "LocalGaussianRecord"
) -> "LocalGaussianRecord":
    """Compose two byproduct records, ``earlier`` applied first."""
    return later.compose(earlier)


class LocalGaussianRecord:
    """A byproduct operator: one ModeOp per touched vertex.

    Vertices without an entry carry the identity.  Records are immutable;
    all operations return new records.
    """

    __slots__ = ("_ops",)

    def __init__(self, ops: Mapping[str, ModeOp] | Iterable[tuple[str, ModeOp]] = ()):
        items = ops.items() if isinstance(ops, Mapping) else ops
        self._ops = {
            vertex: op for vertex, op in sorted(items) if not op.is_identity()
        }

    @classmethod
    def identity(cls) -> "LocalGaussianRecord":
        return cls()

    @classmethod
    def single(cls, vertex: str, op: ModeOp) -> "LocalGaussianRecord":
        return cls({vertex: op})

    @property
    def vertices(self) -> tuple[str, ...]:
        return tuple(self._ops)

    def op(self, vertex: str) -> ModeOp:
        return self._ops.get(vertex, ModeOp.identity())

    def is_identity(self) -> bool:
        return not self._ops

    def restricted(self, keep: Iterable[str]) -> "LocalGaussianRecord":
        keep_set = set(keep)
        return LocalGaussianRecord(
            {v: op for v, op in self._ops.items() if v in keep_set}
        )

    def compose(self, earlier: "LocalGaussianRecord") -> "LocalGaussianRecord":
        """This record applied after ``earlier`` (vertexwise composition)."""
        merged: dict[str, ModeOp] = dict(self._ops)
        for vertex, op in earlier._ops.items():
            merged[vertex] = self.op(vertex).compose(op)
        return LocalGaussianRecord(merged)

    def inverse(self) -> "LocalGaussianRecord":
        return LocalGaussianRecord({v: op.inverse() for v, op in self._ops.items()})

    def substitute(self, values) -> "LocalGaussianRecord":
        """Substitute outcome symbols in every displacement."""
        return LocalGaussianRecord(
            {
                v: ModeOp(
                    op.sym,
                    (op.shift[0].substitute(values), op.shift[1].substitute(values)),
                )
                for v, op in self._ops.items()
            }
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LocalGaussianRecord):
            return NotImplemented
        return self._ops == other._ops

    def __repr__(self) -> str:
        return f"LocalGaussianRecord({self._ops!r})"

    def to_json(self) -> list[dict]:
        out = []
        for vertex, op in self._ops.items():
            out.append(
                {
                    "vertex": vertex,
                    "symplectic": [
                        [format_rational(x) for x in row] for row in op.sym.rows()
                    ],
                    "displacement": {
                        "x": op.shift[0].to_json(),
                        "p": op.shift[1].to_json(),
                    },
                }
            )
        return out

    @classmethod
    def from_json(cls, doc: object) -> "LocalGaussianRecord":
        if not isinstance(doc, list):
            raise SchemaError("byproduct document must be a list")
        ops: dict[str, ModeOp] = {}
        for entry in doc:
            if not isinstance(entry, dict):
                raise SchemaError(f"byproduct entry must be an object: {entry!r}")
            vertex = entry.get("vertex")
            if not isinstance(vertex, str) or not vertex:
                raise SchemaError("byproduct entry needs a 'vertex' label")
            if vertex in ops:
                raise SchemaError(f"duplicate byproduct entry for vertex {vertex!r}")
            rows = entry.get("symplectic")
            if (
                not isinstance(rows, list)
                or len(rows) != 2
                or any(not isinstance(r, list) or len(r) != 2 for r in rows)
            ):
                raise SchemaError("'symplectic' must be a 2x2 matrix")
            sym = Mat2(
                parse_rational(rows[0][0]),
                parse_rational(rows[0][1]),
                parse_rational(rows[1][0]),
                parse_rational(rows[1][1]),
            )
            disp = entry.get("displacement", {})
            if not isinstance(disp, dict):
                raise SchemaError("'displacement' must be an object")
            shift = (
                OutcomeExpr.from_json(disp.get("x", {"const": "0", "terms": {}})),
                OutcomeExpr.from_json(disp.get("p", {"const": "0", "terms": {}})),
            )
            ops[vertex] = ModeOp(sym, shift)
        return cls(ops)
