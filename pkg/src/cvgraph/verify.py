"""Randomized cross-validation of the rewrite rules against the oracles.

Every trial draws a seeded random graph and measurement, runs the rewrite
route and the elimination route independently, and demands exact symbolic
equality.  With the covariance option each trial is replayed numerically at
several squeezing strengths: the fitted decay slope of the worst nullifier
variance must sit in the ideal window, and a deliberately perturbed
prediction must leave a visibly nonzero residual (negative control).

Results go to a JSONL report; a PNG summary figure lands next to it.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .bases import MeasurementBasis
from .covariance import covariance_residual, residual_slope
from .errors import EngineError
from .graph import WeightedGraph, edge_key
from .nullifiers import graph_to_nullifiers, oracle_measure, states_equal
from .outcomes import OutcomeExpr
from .plans import MeasurementPlan, PlanStep
from .rationals import format_rational
from .rules import RANDOM, RewriteResult, measure

THETA_GRID = (
    Fraction(2),
    Fraction(1),
    Fraction(1, 2),
    Fraction(-2),
    Fraction(-1),
    Fraction(-1, 2),
)
SLOPE_WINDOW = (-2.05, -1.95)
CONTROL_FLOOR = 0.1
CONTROL_R = 4.0


def random_graph(
    rng: random.Random, max_vertices: int, min_vertices: int = 1
) -> WeightedGraph:
    """Random graph with small rational weights (|numerator|, denominator <= 5)."""
    n = rng.randint(min_vertices, max_vertices)
    labels = tuple(str(i) for i in range(1, n + 1))
    edges = {}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.5:
                numerator = rng.choice([k for k in range(-5, 6) if k != 0])
                denominator = rng.randint(1, 5)
                edges[edge_key(labels[i], labels[j])] = Fraction(
                    numerator, denominator
                )
    return WeightedGraph(labels, edges)


def random_basis(rng: random.Random) -> MeasurementBasis:
    kind = rng.choice(("x", "p", "theta"))
    if kind == "theta":
        return MeasurementBasis.theta(rng.choice(THETA_GRID))
    return MeasurementBasis(kind)


def action_text(vertex: str, basis: MeasurementBasis, outcome: str = "m") -> str:
    if basis.kind == "theta":
        return f"{vertex}:theta:{format_rational(basis.tan_theta)}@{outcome}"
    return f"{vertex}:{basis.kind}@{outcome}"


@dataclass
class TrialOutcome:
    record: dict
    ok: bool
    r_values: list[float] | None = None
    residuals: list[float] | None = None


def _perturbed(graph: WeightedGraph) -> WeightedGraph:
    """One weight off by one: the negative-control prediction."""
    if graph.edges:
        key = sorted(graph.edges)[0]
        return graph.with_edges({key: graph.edges[key] + 1})
    if len(graph.vertices) < 2:
        raise EngineError("nothing to perturb in a graph this small")
    return graph.with_edges({edge_key(*graph.vertices[:2]): Fraction(1)})


def run_trial(
    trial_seed: int, max_vertices: int, r_values: list[float] | None = None
) -> TrialOutcome:
    rng = random.Random(trial_seed)
    graph = random_graph(rng, max_vertices, min_vertices=3 if r_values else 1)
    vertex = rng.choice(graph.vertices)
    basis = random_basis(rng)
    outcome = OutcomeExpr.symbol("m")
    record = {
        "seed": trial_seed,
        "graph": graph.to_json(),
        "action": action_text(vertex, basis),
        "symbolic_equal": False,
        "covariance_slope": None,
        "certificate": None,
    }
    try:
        rule = measure(graph, vertex, basis, outcome)
        projection = oracle_measure(
            graph_to_nullifiers(graph), vertex, basis, outcome
        )
        dressed = graph_to_nullifiers(rule.graph, rule.byproduct)
        equal = states_equal(dressed, projection.system)
        forced_match = (rule.forced is None) == (projection.forced is None) and (
            rule.forced is None or rule.forced == projection.forced
        )
        record["symbolic_equal"] = bool(equal and forced_match)
        if not record["symbolic_equal"]:
            record["certificate"] = {
                "rule": dressed.to_json(),
                "oracle": projection.system.to_json(),
            }
            return TrialOutcome(record, False)
    except EngineError as exc:
        record["certificate"] = {"error": str(exc)}
        return TrialOutcome(record, False)

    if r_values is None:
        return TrialOutcome(record, True)

    value = Fraction(rng.randint(-4, 4), rng.choice((1, 2)))
    if rule.forced is not None:
        value = rule.forced.const
    plan = MeasurementPlan((PlanStep(vertex, basis, OutcomeExpr(value)),))
    predicted = RewriteResult(
        rule.graph,
        rule.byproduct.substitute({"m": value}),
        rule.outcome_kind,
        rule.forced,
    )
    slope, residuals = residual_slope(graph, plan, predicted, r_values)
    record["covariance_slope"] = slope
    control = covariance_residual(
        graph,
        plan,
        RewriteResult(_perturbed(rule.graph), predicted.byproduct, RANDOM),
        CONTROL_R,
    )
    ok = SLOPE_WINDOW[0] <= slope <= SLOPE_WINDOW[1] and control > CONTROL_FLOOR
    if not ok:
        record["certificate"] = {
            "covariance": {"slope": slope, "control_residual": control}
        }
    return TrialOutcome(record, ok, list(r_values), residuals)


@dataclass
class VerificationSummary:
    total: int
    failures: int
    report_path: Path
    figure_path: Path
    slopes: list[float]

    @property
    def passed(self) -> bool:
        return self.failures == 0


def run_verification(
    count: int,
    max_vertices: int,
    seed: int,
    covariance: bool = False,
    r_values: tuple[float, ...] = (2.0, 3.0, 4.0),
    report_path: str | Path = "verify-report.jsonl",
) -> VerificationSummary:
    report_path = Path(report_path)
    outcomes = []
    for i in range(count):
        trial_seed = seed * 1_000_003 + i
        outcomes.append(
            run_trial(trial_seed, max_vertices, list(r_values) if covariance else None)
        )
    lines = [json.dumps(o.record, sort_keys=True) for o in outcomes]
    report_path.write_text("".join(line + "\n" for line in lines))
    figure_path = report_path.with_suffix(".png")
    _render_figure(outcomes, figure_path)
    failures = sum(1 for o in outcomes if not o.ok)
    slopes = [
        o.record["covariance_slope"]
        for o in outcomes
        if o.record["covariance_slope"] is not None
    ]
    return VerificationSummary(len(outcomes), failures, report_path, figure_path, slopes)


def _render_figure(outcomes: list[TrialOutcome], path: Path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, (left, right) = plt.subplots(1, 2, figsize=(9.0, 3.6))

    kinds = ("x", "p", "theta")
    passed = {k: 0 for k in kinds}
    failed = {k: 0 for k in kinds}
    for o in outcomes:
        kind = o.record["action"].split(":")[1].split("@")[0]
        (passed if o.ok else failed)[kind] += 1
    left.bar(kinds, [passed[k] for k in kinds], color="#2a9d8f", label="pass")
    left.bar(
        kinds,
        [failed[k] for k in kinds],
        bottom=[passed[k] for k in kinds],
        color="#e76f51",
        label="fail",
    )
    left.set_xlabel("measurement basis")
    left.set_ylabel("trials")
    left.set_title("rule vs oracle")
    left.legend(frameon=False)

    curves = [o for o in outcomes if o.residuals]
    if curves:
        for o in curves:
            right.plot(o.r_values, o.residuals, color="#457b9d", alpha=0.35, lw=1)
        r_lo, r_hi = min(curves[0].r_values), max(curves[0].r_values)
        anchor = max(o.residuals[0] for o in curves)
        import math

        guide = [anchor * math.exp(-2 * (r - r_lo)) for r in (r_lo, r_hi)]
        right.plot([r_lo, r_hi], guide, "k--", lw=1, label="slope -2")
        right.set_yscale("log")
        right.set_xlabel("squeezing r")
        right.set_ylabel("max nullifier variance")
        right.set_title("finite-squeezing residuals")
        right.legend(frameon=False)
    else:
        right.text(0.5, 0.5, "covariance check not run", ha="center", va="center")
        right.set_axis_off()

    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
