"""Independent ground truth for the rewrite rules.

A state is its nullifier system: one row per mode, each row a linear
quadrature combination pinned to an affine constant.  Gates transport row
coefficients exactly, and homodyne measurements are brute-force Gaussian
elimination over the rows.  Nothing in this module calls into
:mod:`cvgraph.rules`; agreement between the two routes is the engine's
central correctness check and would be worthless if they shared the rule
algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .bases import MeasurementBasis
from .byproducts import (
    LocalGaussianRecord,
    ModeOp,
    fourier,
    momentum_shift,
    position_shift,
    shear_p,
    shear_x,
)
from .errors import (
    EngineError,
    InconsistentOutcomeError,
    ModeMismatchError,
    UnknownVertexError,
)
from .graph import WeightedGraph, edge_key
from .outcomes import OutcomeExpr
from .rationals import format_rational

# A row is (coefficient vector, constant): columns are the x quadrature of
# every mode followed by the p quadrature of every mode, modes in label
# order.  The row asserts sum(coeff * quadrature) = constant on the state.
Row = tuple[tuple[Fraction, ...], OutcomeExpr]


def _as_expr(value) -> OutcomeExpr:
    return value if isinstance(value, OutcomeExpr) else OutcomeExpr(value)


def _row_sub(row: Row, factor: Fraction, other: Row) -> Row:
    coeffs = tuple(a - factor * b for a, b in zip(row[0], other[0]))
    return coeffs, row[1] - other[1] * factor


def _row_scale(row: Row, factor: Fraction) -> Row:
    return tuple(c * factor for c in row[0]), row[1] * factor


def _rref(rows: Iterable[Row]) -> list[Row]:
    """Reduced row echelon form over the rationals, constants carried along.

    Fully reduced rows come first in pivot-column order; rows whose
    coefficients vanished sink to the bottom, keeping whatever constants
    they accumulated so the caller can tell redundancy from inconsistency.
    """
    work = [(tuple(coeffs), const) for coeffs, const in rows]
    if not work:
        return []
    width = len(work[0][0])
    pivot_row = 0
    for col in range(width):
        pivot = next(
            (i for i in range(pivot_row, len(work)) if work[i][0][col] != 0), None
        )
        if pivot is None:
            continue
        work[pivot_row], work[pivot] = work[pivot], work[pivot_row]
        work[pivot_row] = _row_scale(work[pivot_row], 1 / work[pivot_row][0][col])
        for i in range(len(work)):
            if i != pivot_row and work[i][0][col] != 0:
                work[i] = _row_sub(work[i], work[i][0][col], work[pivot_row])
        pivot_row += 1
        if pivot_row == len(work):
            break
    return work


def _nonzero_rows(reduced: list[Row]) -> list[Row]:
    kept = []
    for coeffs, const in reduced:
        if any(c != 0 for c in coeffs):
            kept.append((coeffs, const))
        elif not const.is_zero():
            raise InconsistentOutcomeError(f"inconsistent constraint 0 = {const!r}")
    return kept


def _symplectic_pairing(
    u: Sequence[Fraction], v: Sequence[Fraction], n: int
) -> Fraction:
    total = Fraction(0)
    for m in range(n):
        total += u[m] * v[n + m] - u[n + m] * v[m]
    return total


def _transformed_pair(
    op: ModeOp, s: Fraction, t: Fraction
) -> tuple[Fraction, Fraction]:
    # Row coefficients transport by the inverse transpose of the state map.
    m = op.sym
    return m.d * s - m.c * t, -m.b * s + m.a * t


class NullifierSystem:
    """Affine Lagrangian system: as many independent commuting rows as modes."""

    __slots__ = ("modes", "rows")

    def __init__(self, modes: Iterable[str], rows: Iterable[Row]):
        modes = tuple(modes)
        if list(modes) != sorted(set(modes)):
            raise ModeMismatchError("modes must be sorted and unique")
        n = len(modes)
        clean: list[Row] = []
        for coeffs, const in rows:
            coeffs = tuple(Fraction(c) for c in coeffs)
            if len(coeffs) != 2 * n:
                raise ModeMismatchError(
                    f"row width {len(coeffs)} does not match {n} modes"
                )
            clean.append((coeffs, _as_expr(const)))
        if len(clean) != n:
            raise ModeMismatchError(f"{n} modes need {n} rows, got {len(clean)}")
        for i, u in enumerate(clean):
            for v in clean[i + 1 :]:
                if _symplectic_pairing(u[0], v[0], n) != 0:
                    raise EngineError("rows do not commute: not a Lagrangian system")
        if len(_nonzero_rows(_rref(clean))) != n:
            raise EngineError("rows are linearly dependent")
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "rows", tuple(clean))

    def __setattr__(self, name, value):
        raise AttributeError("NullifierSystem is immutable")

    def mode_index(self, a: str) -> int:
        try:
            return self.modes.index(a)
        except ValueError:
            raise UnknownVertexError(f"unknown vertex {a}") from None

    def canonical(self) -> tuple[Row, ...]:
        """Unique normal form: RREF rows in pivot order."""
        return tuple(_nonzero_rows(_rref(self.rows)))

    def row_json(self, row: Row) -> dict:
        coeffs, const = row
        n = len(self.modes)
        return {
            "x": {
                m: format_rational(coeffs[i])
                for i, m in enumerate(self.modes)
                if coeffs[i] != 0
            },
            "p": {
                m: format_rational(coeffs[n + i])
                for i, m in enumerate(self.modes)
                if coeffs[n + i] != 0
            },
            "const": const.to_json(),
        }

    def to_json(self) -> dict:
        return {
            "modes": list(self.modes),
            "rows": [self.row_json(r) for r in self.canonical()],
        }

    def __repr__(self) -> str:
        return f"NullifierSystem(modes={self.modes!r}, rows={len(self.rows)})"


def graph_to_nullifiers(
    g: WeightedGraph, record: LocalGaussianRecord | None = None
) -> NullifierSystem:
    """Nullifier system of a (possibly byproduct-dressed) graph state.

    The bare rows are ``p_a - sum_b w(a,b) x_b = 0``.  A record dresses
    them: coefficients transport through each mode's symplectic and the
    displacements feed the constants.
    """
    record = record or LocalGaussianRecord.identity()
    stray = set(record.vertices) - set(g.vertices)
    if stray:
        raise ModeMismatchError(f"record touches unknown vertices: {sorted(stray)}")
    modes = g.vertices
    n = len(modes)
    index = {m: i for i, m in enumerate(modes)}
    rows: list[Row] = []
    for a in modes:
        coeffs = [Fraction(0)] * (2 * n)
        coeffs[n + index[a]] = Fraction(1)
        for b, w in g.neighbors(a).items():
            coeffs[index[b]] = -w
        const = OutcomeExpr.zero()
        for m in record.vertices:
            op = record.op(m)
            i = index[m]
            s, t = _transformed_pair(op, coeffs[i], coeffs[n + i])
            coeffs[i], coeffs[n + i] = s, t
            dx, dp = op.shift
            const = const + dx * s + dp * t
        rows.append((tuple(coeffs), const))
    return NullifierSystem(modes, rows)


@dataclass(frozen=True)
class SymplecticGate:
    """One Gaussian gate: a single-mode op, or a two-mode CZ of given weight."""

    kind: str
    modes: tuple[str, ...]
    op: ModeOp | None = None
    weight: Fraction | None = None

    @classmethod
    def fourier_gate(cls, a: str) -> "SymplecticGate":
        return cls("fourier", (a,), op=fourier())

    @classmethod
    def shear_p_gate(cls, a: str, eta) -> "SymplecticGate":
        return cls("shear_p", (a,), op=shear_p(eta))

    @classmethod
    def shear_x_gate(cls, a: str, eta) -> "SymplecticGate":
        return cls("shear_x", (a,), op=shear_x(eta))

    @classmethod
    def shift_x_gate(cls, a: str, amount) -> "SymplecticGate":
        return cls("shift_x", (a,), op=position_shift(_as_expr(amount)))

    @classmethod
    def shift_p_gate(cls, a: str, amount) -> "SymplecticGate":
        return cls("shift_p", (a,), op=momentum_shift(_as_expr(amount)))

    @classmethod
    def cz_gate(cls, a: str, b: str, weight) -> "SymplecticGate":
        if a == b:
            raise ModeMismatchError("cz needs two distinct modes")
        return cls("cz", (a, b), weight=Fraction(weight))

    def inverse(self) -> "SymplecticGate":
        if self.kind == "cz":
            return SymplecticGate("cz", self.modes, weight=-self.weight)
        return SymplecticGate(self.kind + "_inv", self.modes, op=self.op.inverse())


def apply_gate(ns: NullifierSystem, gate: SymplecticGate) -> NullifierSystem:
    """Conjugate every row through one gate.

    Coefficients move by the inverse phase-space action; displacements only
    feed the constants.  The Lagrangian property is re-checked on
    construction, so a non-symplectic action cannot slip through.
    """
    n = len(ns.modes)
    rows: list[Row] = []
    if gate.kind == "cz":
        ia, ib = (ns.mode_index(m) for m in gate.modes)
        w = gate.weight
        for coeffs, const in ns.rows:
            work = list(coeffs)
            work[ia] = coeffs[ia] - w * coeffs[n + ib]
            work[ib] = coeffs[ib] - w * coeffs[n + ia]
            rows.append((tuple(work), const))
    else:
        i = ns.mode_index(gate.modes[0])
        dx, dp = gate.op.shift
        for coeffs, const in ns.rows:
            work = list(coeffs)
            s, t = _transformed_pair(gate.op, coeffs[i], coeffs[n + i])
            work[i], work[n + i] = s, t
            rows.append((tuple(work), const + dx * s + dp * t))
    return NullifierSystem(ns.modes, rows)


@dataclass(frozen=True)
class ProjectionResult:
    """Post-measurement system; ``forced`` is set when the measured
    quadrature was already pinned by the state."""

    system: NullifierSystem
    forced: OutcomeExpr | None = None


def oracle_measure(
    ns: NullifierSystem, a: str, basis: MeasurementBasis, outcome: OutcomeExpr
) -> ProjectionResult:
    """Project one mode's quadrature out of the system by elimination.

    The measured direction is ``(1, 0)`` for x, ``(0, 1)`` for p and
    ``(1, tan)`` for a rotated quadrature; the outcome names the value of
    that combination.  One row is spent eliminating the conjugate quadrature
    at the measured mode, every other row is reduced until its mode-a part
    is proportional to the measured direction, the substitution replaces
    that part by the outcome, and mode a's columns are dropped.  If every
    row already commutes with the measured quadrature, the outcome is not
    random: its value is forced by the state, the rows are reduced against
    the forced constraint instead, and the caller is told through
    ``forced``.
    """
    ai = ns.mode_index(a)
    n = len(ns.modes)
    ux, up = basis.direction()
    xcol, pcol = ai, n + ai

    def direction_factor(coeffs: tuple[Fraction, ...]) -> Fraction:
        # Valid once the row commutes with the measured direction: the
        # mode-a part is then a multiple of (ux, up).
        factor = coeffs[xcol] / ux if ux != 0 else coeffs[pcol] / up
        if (coeffs[xcol], coeffs[pcol]) != (factor * ux, factor * up):
            raise EngineError("row does not commute with measured quadrature")
        return factor

    betas = [ux * coeffs[pcol] - up * coeffs[xcol] for coeffs, _ in ns.rows]
    survivors: list[Row] = []
    forced: OutcomeExpr | None = None

    if all(b == 0 for b in betas):
        # Measured quadrature lies in the row span; reduce it against the
        # canonical rows to read off the value the state pins it to.
        target = [Fraction(0)] * (2 * n)
        target[xcol], target[pcol] = ux, up
        remainder: Row = (tuple(target), OutcomeExpr.zero())
        forced = OutcomeExpr.zero()
        for row in ns.canonical():
            lead = next(i for i, c in enumerate(row[0]) if c != 0)
            if remainder[0][lead] != 0:
                factor = remainder[0][lead] / row[0][lead]
                remainder = _row_sub(remainder, factor, row)
                forced = forced + row[1] * factor
        if any(c != 0 for c in remainder[0]):
            raise EngineError("commuting quadrature missing from a Lagrangian span")
        if outcome.is_constant() and forced.is_constant() and outcome != forced:
            raise InconsistentOutcomeError(
                f"outcome on {a} is forced to {forced!r}, got {outcome!r}"
            )
        pinned: Row = (tuple(target), forced)
        for row in ns.rows:
            survivors.append(_row_sub(row, direction_factor(row[0]), pinned))
    else:
        spent = next(i for i, b in enumerate(betas) if b != 0)
        for i, row in enumerate(ns.rows):
            if i == spent:
                continue
            reduced = _row_sub(row, betas[i] / betas[spent], ns.rows[spent])
            factor = direction_factor(reduced[0])
            survivors.append((reduced[0], reduced[1] - outcome * factor))

    kept_modes = ns.modes[:ai] + ns.modes[ai + 1 :]
    trimmed = [
        (coeffs[:xcol] + coeffs[xcol + 1 : pcol] + coeffs[pcol + 1 :], const)
        for coeffs, const in survivors
    ]
    rows = _nonzero_rows(_rref(trimmed))
    return ProjectionResult(NullifierSystem(kept_modes, rows), forced)


def states_equal(n1: NullifierSystem, n2: NullifierSystem) -> bool:
    """Exact subspace-plus-constants equality via canonical forms."""
    if n1.modes != n2.modes:
        raise ModeMismatchError(f"mode sets differ: {n1.modes} vs {n2.modes}")
    return n1.canonical() == n2.canonical()


@dataclass(frozen=True)
class GraphForm:
    graph: WeightedGraph
    record: LocalGaussianRecord


@dataclass(frozen=True)
class NotGraphForm:
    """Certificate that no displaced graph state matches the system: either
    a row combination free of momentum coefficients, or a self-loop weight."""

    reason: str
    certificate: dict


def canonical_graph_form(ns: NullifierSystem) -> GraphForm | NotGraphForm:
    """Invert ``graph_to_nullifiers`` when the system is a displaced graph.

    Row-reduces the momentum block against a multiplier tape.  A vanishing
    momentum combination certifies that the system is not of graph form;
    otherwise the adjacency is read off the reduced position block, a
    nonzero diagonal is the other failure certificate, and the constants
    become pure momentum shifts.
    """
    n = len(ns.modes)
    if n == 0:
        return GraphForm(WeightedGraph((), {}), LocalGaussianRecord.identity())
    # Augmented rows [p-block | multiplier tape | x-block], constants along.
    tape: list[Row] = []
    for i, (coeffs, const) in enumerate(ns.rows):
        marker = tuple(Fraction(int(j == i)) for j in range(n))
        tape.append((coeffs[n:] + marker + coeffs[:n], const))
    reduced = _rref(tape)
    for coeffs, const in reduced:
        if any(c != 0 for c in coeffs[:n]):
            continue
        lam = coeffs[n : 2 * n]
        xpart = coeffs[2 * n :]
        witness = {
            "x": {
                m: format_rational(xpart[i])
                for i, m in enumerate(ns.modes)
                if xpart[i] != 0
            },
            "p": {},
            "const": const.to_json(),
            "combination": {
                ns.modes[i]: format_rational(lam[i]) for i in range(n) if lam[i] != 0
            },
        }
        return NotGraphForm("no-momentum-support", witness)
    # The p-block reduced to the identity, so the tape holds its inverse,
    # the x-block holds (inverse of p-block) * x-block = minus the
    # adjacency, and the constants are the momentum shifts.
    adjacency = [row[0][2 * n :] for row in reduced]
    for i in range(n):
        for j in range(i + 1, n):
            if adjacency[i][j] != adjacency[j][i]:
                raise EngineError("commuting rows produced an asymmetric adjacency")
    for i in range(n):
        if adjacency[i][i] != 0:
            return NotGraphForm(
                "self-loop",
                {
                    "vertex": ns.modes[i],
                    "weight": format_rational(-adjacency[i][i]),
                },
            )
    edges = {}
    for i in range(n):
        for j in range(i + 1, n):
            if adjacency[i][j] != 0:
                edges[edge_key(ns.modes[i], ns.modes[j])] = -adjacency[i][j]
    graph = WeightedGraph(ns.modes, edges)
    shifts = {
        ns.modes[i]: momentum_shift(reduced[i][1])
        for i in range(n)
        if not reduced[i][1].is_zero()
    }
    return GraphForm(graph, LocalGaussianRecord(shifts))
