"""Graphical rewrite rules for single-mode homodyne measurements.

Each rule takes an ideal weighted graph state, removes the measured vertex,
and returns the new graph together with the exact local-Gaussian byproduct
relating the rule's output graph state to the physical post-measurement
state.  The byproduct is the part usually left implicit: it collects the
outcome-dependent momentum translations on the measured vertex's neighbors
plus the inverse of the local shear gates that were used to rotate the
measured quadrature into the position basis, restricted to the surviving
modes.

All arithmetic is exact; outcomes are affine expressions in outcome
symbols.  Rotated-quadrature outcomes are quoted for the scaled operator
``x + tan_theta * p`` (see :mod:`cvgraph.bases`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bases import MeasurementBasis
from .byproducts import (
    LocalGaussianRecord,
    ModeOp,
    momentum_shift,
    shear_p,
    shear_x,
)
from .errors import EngineError, InconsistentOutcomeError, UnknownVertexError
from .graph import WeightedGraph, edge_key
from .outcomes import OutcomeExpr

RANDOM = "random"
DETERMINISTIC = "deterministic"


@dataclass(frozen=True)
class RewriteResult:
    """Outcome of measuring one vertex.

    ``byproduct`` touches only vertices of ``graph``.  ``outcome_kind`` is
    ``"random"`` for a free homodyne outcome and ``"deterministic"`` when the
    state forces the value, in which case ``forced`` carries it.
    """

    graph: WeightedGraph
    byproduct: LocalGaussianRecord
    outcome_kind: str
    forced: OutcomeExpr | None = None

    def __post_init__(self) -> None:
        stray = set(self.byproduct.vertices) - set(self.graph.vertices)
        if stray:
            raise EngineError(f"byproduct touches deleted vertices: {sorted(stray)}")
        if (self.outcome_kind == DETERMINISTIC) != (self.forced is not None):
            raise EngineError("deterministic results must carry the forced value")


def local_complement(g: WeightedGraph, a: str, delta: Fraction) -> WeightedGraph:
    """Rewrite the subgraph on a's neighborhood.

    Every pair of neighbors b, c of ``a`` gets its weight replaced by
    ``w(b,c) - w(a,b) * w(a,c) * delta``; zero results delete the edge.
    Edges incident to ``a`` and edges outside the neighborhood are untouched.
    """
    g.require_vertex(a)
    delta = Fraction(delta)
    nbrs = sorted(g.neighbors(a).items())
    updates = {}
    for i, (b, w_ab) in enumerate(nbrs):
        for c, w_ac in nbrs[i + 1 :]:
            updates[edge_key(b, c)] = g.weight(b, c) - w_ab * w_ac * delta
    return g.with_edges(updates)


def _delete_with_shifts(
    g: WeightedGraph, a: str, outcome: OutcomeExpr
) -> tuple[WeightedGraph, LocalGaussianRecord]:
    """Vertex deletion: remove ``a`` and translate each neighbor's momentum
    by the edge weight times the outcome."""
    shifts = {
        b: momentum_shift(outcome * w) for b, w in g.neighbors(a).items()
    }
    return g.without_vertex(a), LocalGaussianRecord(shifts)


def measure_x(g: WeightedGraph, a: str, outcome: OutcomeExpr) -> RewriteResult:
    """Position measurement: delete the vertex, shift the neighbors.

    The byproduct is a pure momentum translation of ``weight * outcome`` on
    each neighbor; symplectic parts stay identity.
    """
    graph, record = _delete_with_shifts(g, a, outcome)
    return RewriteResult(graph, record, RANDOM)


def measure_theta(
    g: WeightedGraph, a: str, tan_theta: Fraction, outcome: OutcomeExpr
) -> RewriteResult:
    """Rotated-quadrature measurement with slope ``tan_theta``.

    Procedure: locally complement at the measured vertex with
    ``delta = tan_theta`` (which maps the measured quadrature onto the
    position of that vertex), then delete it as a position measurement.
    The byproduct composes the neighbor momentum shifts with the inverse
    shear gates the complementation applied to the surviving modes.
    """
    g.require_vertex(a)
    tan_theta = Fraction(tan_theta)
    if tan_theta == 0:
        return measure_x(g, a, outcome)
    nbrs = g.neighbors(a)
    rotated = local_complement(g, a, tan_theta)
    graph, shifts = _delete_with_shifts(rotated, a, outcome)
    undo = LocalGaussianRecord(
        {b: shear_p(-w * w * tan_theta) for b, w in nbrs.items()}
    )
    return RewriteResult(graph, undo.compose(shifts), RANDOM)


def measure_p(
    g: WeightedGraph,
    a: str,
    outcome: OutcomeExpr,
    b0: str | None = None,
) -> RewriteResult:
    """Momentum measurement.

    An isolated vertex is already a momentum eigenstate: it is deleted with a
    deterministic zero outcome and no byproduct.  Otherwise a finite-shear
    route is used: locally complement at a chosen neighbor ``b0`` with
    ``-1/w(a,b0)^2``, then at the measured vertex with 1, which maps the
    momentum of the measured vertex onto its position; deletion then proceeds
    as for a position measurement.  ``b0`` defaults to the smallest-labeled
    neighbor; any choice yields the same physical state (the graphs may
    differ by local Gaussians).
    """
    g.require_vertex(a)
    nbrs = g.neighbors(a)
    if b0 is None:
        if nbrs:
            b0 = min(nbrs)
    elif b0 not in nbrs:
        raise UnknownVertexError(f"b0 {b0} is not a neighbor of {a}")
    if not nbrs:
        return RewriteResult(
            g.without_vertex(a),
            LocalGaussianRecord.identity(),
            DETERMINISTIC,
            forced=OutcomeExpr.zero(),
        )

    eta = -1 / (g.weight(a, b0) ** 2)
    step1 = local_complement(g, b0, eta)
    step2 = local_complement(step1, a, Fraction(1))
    graph, shifts = _delete_with_shifts(step2, a, outcome)

    # Inverse of the second complementation's gates on survivors.
    undo_at_a = LocalGaussianRecord(
        {b: shear_p(-w * w) for b, w in step1.neighbors(a).items()}
    )
    # Inverse of the first complementation's gates on survivors: the shear
    # on b0 itself plus the x^2 shears on b0's other neighbors.
    undo_at_b0_ops: dict[str, ModeOp] = {b0: shear_x(eta)}
    for c, w in g.neighbors(b0).items():
        if c != a:
            undo_at_b0_ops[c] = shear_p(-w * w * eta)
    undo_at_b0 = LocalGaussianRecord(undo_at_b0_ops)

    record = undo_at_b0.compose(undo_at_a).compose(shifts)
    return RewriteResult(graph, record, RANDOM)


def _pull_back_direction(
    prior_op: ModeOp, direction: tuple[Fraction, Fraction], outcome: OutcomeExpr
) -> tuple[tuple[Fraction, Fraction], OutcomeExpr]:
    """Conjugate a measured quadrature through a pre-existing byproduct.

    Measuring ``u . r`` with value ``m`` on the byproduct-dressed state is
    the same event as measuring ``(S^T u) . r`` with value ``m - u . d`` on
    the undressed graph state.
    """
    ux, up = direction
    sym, (dx, dp) = prior_op.sym, prior_op.shift
    pulled = (ux * sym.a + up * sym.c, ux * sym.b + up * sym.d)
    return pulled, outcome - (dx * ux + dp * up)


def measure(
    g: WeightedGraph,
    a: str,
    basis: MeasurementBasis,
    outcome: OutcomeExpr,
    prior: LocalGaussianRecord | None = None,
    b0: str | None = None,
) -> RewriteResult:
    """Dispatch a measurement, normalizing against a pre-existing byproduct.

    When ``prior`` records a byproduct on the measured vertex, the measured
    quadrature and outcome are first pulled back through it so the graphical
    rules always see an undressed graph state; the returned byproduct then
    re-composes ``prior`` (restricted to survivors) on top of the rule's own
    byproduct, so it relates the output graph to the physical state.
    Deterministic outcomes are reported in physical terms, and a numeric
    outcome that contradicts a forced value raises.
    """
    g.require_vertex(a)
    prior = prior or LocalGaussianRecord.identity()
    direction, internal = _pull_back_direction(
        prior.op(a), basis.direction(), outcome
    )
    ux, up = direction

    if ux != 0:
        slope = up / ux
        scaled = internal * (1 / ux)
        if slope == 0:
            result = measure_x(g, a, scaled)
        else:
            result = measure_theta(g, a, slope, scaled)
    else:
        result = measure_p(g, a, internal * (1 / up), b0=b0)

    survivors = prior.restricted(result.graph.vertices)
    record = survivors.compose(result.byproduct)
    forced = result.forced
    if forced is not None:
        # Translate the graph-side forced value back to the physical one.
        sym, (dx, dp) = prior.op(a).sym, prior.op(a).shift
        bx, bp = basis.direction()
        scale = up if ux == 0 else ux
        forced = forced * scale + (dx * bx + dp * bp)
        if outcome.is_constant() and forced.is_constant() and outcome != forced:
            raise InconsistentOutcomeError(
                f"measurement on {a} is forced to {forced!r}, got {outcome!r}"
            )
    return RewriteResult(result.graph, record, result.outcome_kind, forced)
