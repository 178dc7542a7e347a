"""Finite-squeezing cross-check of a predicted rewrite.

The symbolic routes work with ideal (infinitely squeezed) states.  This
checker replays a measurement plan on honest finite-squeezing Gaussian
states in floating point: momentum-squeezed vacua coupled by CZ gates,
homodyne outcomes imposed by conditioning, the predicted byproduct undone
numerically.  If the prediction is right, every nullifier variance of the
predicted graph collapses like exp(-2r); if it is wrong, at least one
variance stays finite.  Floating point is quarantined here on purpose.

Phase-space layout matches the exact oracle: all x coordinates first, then
all p coordinates, modes in label order.  Units put a vacuum quadrature
variance at 1/2, so the squeezed inputs have var(x) = exp(2r)/2 and
var(p) = exp(-2r)/2.
"""

from __future__ import annotations

import math

import numpy as np

from .byproducts import LocalGaussianRecord
from .errors import EngineError, ModeMismatchError, UnknownVertexError
from .graph import WeightedGraph
from .plans import MeasurementPlan
from .rules import RewriteResult

_SINGULAR = 1e-12


def _input_state(g: WeightedGraph, r: float) -> tuple[np.ndarray, np.ndarray]:
    n = len(g.vertices)
    index = {m: i for i, m in enumerate(g.vertices)}
    variances = [math.exp(2 * r) / 2] * n + [math.exp(-2 * r) / 2] * n
    sigma = np.diag(variances)
    mu = np.zeros(2 * n)
    for (u, v), w in sorted(g.edges.items()):
        gate = np.eye(2 * n)
        gate[n + index[u], index[v]] = float(w)
        gate[n + index[v], index[u]] = float(w)
        sigma = gate @ sigma @ gate.T
        mu = gate @ mu
    return mu, sigma


def _condition(
    mu: np.ndarray, sigma: np.ndarray, direction: np.ndarray, value: float
) -> tuple[np.ndarray, np.ndarray]:
    variance = float(direction @ sigma @ direction)
    if variance <= _SINGULAR:
        raise EngineError("conditioning on a degenerate quadrature")
    cross = sigma @ direction
    mu = mu + cross * ((value - float(direction @ mu)) / variance)
    sigma = sigma - np.outer(cross, cross) / variance
    return mu, sigma


def _record_inverse_map(
    record: LocalGaussianRecord, modes: list[str]
) -> tuple[np.ndarray, np.ndarray]:
    n = len(modes)
    matrix = np.eye(2 * n)
    shift = np.zeros(2 * n)
    for i, m in enumerate(modes):
        op = record.op(m).inverse()
        if not (op.shift[0].is_constant() and op.shift[1].is_constant()):
            raise EngineError("byproduct displacements must be numeric here")
        matrix[i, i] = float(op.sym.a)
        matrix[i, n + i] = float(op.sym.b)
        matrix[n + i, i] = float(op.sym.c)
        matrix[n + i, n + i] = float(op.sym.d)
        shift[i] = float(op.shift[0].const)
        shift[n + i] = float(op.shift[1].const)
    return matrix, shift


def covariance_residual(
    g: WeightedGraph, plan: MeasurementPlan, predicted: RewriteResult, r: float
) -> float:
    """Worst nullifier variance of the predicted graph after replaying the
    plan at squeezing ``r`` and undoing the predicted byproduct.

    Plan outcomes and the predicted byproduct's displacements must be
    numeric; the conditional state of a Gaussian measurement depends on the
    actual value, not on a symbol.
    """
    if r <= 0:
        raise EngineError(f"squeezing parameter must be positive, got {r}")
    modes = list(g.vertices)
    n = len(modes)
    mu, sigma = _input_state(g, r)
    for step in plan.steps:
        if step.vertex not in modes:
            raise UnknownVertexError(f"unknown vertex {step.vertex}")
        if not step.outcome.is_constant():
            raise EngineError(f"plan outcome must be numeric: {step.outcome!r}")
        i = modes.index(step.vertex)
        ux, up = step.basis.direction()
        direction = np.zeros(2 * n)
        direction[i] = float(ux)
        direction[n + i] = float(up)
        mu, sigma = _condition(mu, sigma, direction, float(step.outcome.const))
        keep = [j for j in range(2 * n) if j != i and j != n + i]
        mu = mu[keep]
        sigma = sigma[np.ix_(keep, keep)]
        modes.pop(i)
        n -= 1
    if tuple(modes) != predicted.graph.vertices:
        raise ModeMismatchError(
            f"plan leaves modes {modes}, prediction has {list(predicted.graph.vertices)}"
        )
    inverse, shift = _record_inverse_map(predicted.byproduct, modes)
    mu = inverse @ mu + shift
    sigma = inverse @ sigma @ inverse.T
    worst = 0.0
    index = {m: i for i, m in enumerate(modes)}
    for a in predicted.graph.vertices:
        row = np.zeros(2 * n)
        row[n + index[a]] = 1.0
        for b, w in predicted.graph.neighbors(a).items():
            row[index[b]] = -float(w)
        worst = max(worst, float(row @ sigma @ row))
    return worst


def residual_slope(
    g: WeightedGraph,
    plan: MeasurementPlan,
    predicted: RewriteResult,
    r_values: list[float],
) -> tuple[float, list[float]]:
    """Least-squares slope of ln(residual) against r, plus the residuals."""
    if len(r_values) < 2:
        raise EngineError("slope needs at least two squeezing values")
    residuals = [covariance_residual(g, plan, predicted, r) for r in r_values]
    if any(res <= 0 for res in residuals):
        raise EngineError("nonpositive residual: nothing to fit")
    slope = float(np.polyfit(r_values, np.log(residuals), 1)[0])
    return slope, residuals
