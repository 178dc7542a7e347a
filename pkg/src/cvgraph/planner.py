"""Breadth-first search for measurement sequences that carve a target graph
out of a source graph.

Matching is exact labeled-graph equality; byproducts are reported with the
plan for the caller to track, never used to widen the match.  Each
measurement deletes exactly one vertex, so any plan's length is the vertex
count difference and BFS returns a minimal one.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .bases import MeasurementBasis
from .errors import ModeMismatchError
from .graph import WeightedGraph
from .outcomes import OutcomeExpr
from .plans import MeasurementPlan, PlanStep
from .rules import measure


@dataclass(frozen=True)
class PlanQuery:
    source: WeightedGraph
    target: WeightedGraph
    max_depth: int
    bases: tuple[MeasurementBasis, ...]


@dataclass(frozen=True)
class PlanSearch:
    """Search verdict: the plan found (None if exhausted) and states popped."""

    plan: MeasurementPlan | None
    explored: int

    def to_json(self) -> dict:
        steps = None if self.plan is None else self.plan.to_json()["steps"]
        return {"steps": steps, "explored": self.explored}


def plan(query: PlanQuery) -> PlanSearch:
    """Shortest measurement sequence turning source into target.

    Actions are tried in vertex label order, then basis list order, so the
    result is deterministic.  States are deduplicated by their canonical
    graph serialization; vertex sets that can no longer reach the target
    (a needed vertex was measured, or too few vertices remain) are pruned.
    """
    missing = set(query.target.vertices) - set(query.source.vertices)
    if missing:
        raise ModeMismatchError(
            f"target vertices absent from source: {sorted(missing)}"
        )
    target_order = len(query.target.vertices)
    queue: deque[tuple[WeightedGraph, tuple[PlanStep, ...]]] = deque(
        [(query.source, ())]
    )
    visited = {query.source.canonical_text()}
    explored = 0
    while queue:
        graph, steps = queue.popleft()
        explored += 1
        if graph == query.target:
            return PlanSearch(MeasurementPlan(steps), explored)
        if len(steps) >= query.max_depth:
            continue
        if len(graph.vertices) <= target_order:
            continue
        for vertex in graph.vertices:
            if vertex in query.target.vertices:
                continue
            outcome = OutcomeExpr.symbol(f"m{len(steps) + 1}")
            for basis in query.bases:
                result = measure(graph, vertex, basis, outcome)
                key = result.graph.canonical_text()
                if key in visited:
                    continue
                visited.add(key)
                queue.append(
                    (result.graph, steps + (PlanStep(vertex, basis, outcome),))
                )
    return PlanSearch(None, explored)
