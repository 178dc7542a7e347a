"""Stateful measurement sessions.

A session holds the pair (graph, byproduct record) whose combination is the
physical state, applies measurements through the rewrite rules with the
record as the pre-existing context, lets the user re-shape the graph by
local complementation, and keeps an undo stack.  All graph math happens in
:mod:`cvgraph.rules`; this module only sequences it.
"""

from __future__ import annotations

from fractions import Fraction

from .bases import MeasurementBasis
from .byproducts import LocalGaussianRecord, shear_p, shear_x
from .errors import EngineError
from .graph import WeightedGraph
from .outcomes import OutcomeExpr
from .rationals import format_rational
from .rules import RewriteResult, local_complement, measure


class Session:
    """One interactive state: graph, byproduct record, history, undo stack."""

    def __init__(self, graph: WeightedGraph):
        self.graph = graph
        self.record = LocalGaussianRecord.identity()
        self.history: list[dict] = []
        self._snapshots: list[tuple] = []
        self._used_symbols: set[str] = set()
        self._counter = 0

    def fresh_symbol(self) -> str:
        while True:
            self._counter += 1
            name = f"m{self._counter}"
            if name not in self._used_symbols:
                self._used_symbols.add(name)
                return name

    def _push(self) -> None:
        self._snapshots.append(
            (
                self.graph,
                self.record,
                list(self.history),
                set(self._used_symbols),
                self._counter,
            )
        )

    def measure(
        self,
        vertex: str,
        basis: MeasurementBasis,
        outcome: OutcomeExpr | None = None,
        b0: str | None = None,
    ) -> RewriteResult:
        if outcome is None:
            outcome = OutcomeExpr.symbol(self.fresh_symbol())
        else:
            self._used_symbols.update(outcome.symbols())
        result = measure(
            self.graph, vertex, basis, outcome, prior=self.record, b0=b0
        )
        self._push()
        self.graph = result.graph
        self.record = result.byproduct
        entry = {
            "op": "measure",
            "vertex": vertex,
            "basis": basis.label(),
            "outcome": str(result.forced if result.forced is not None else outcome),
        }
        if result.forced is not None:
            entry["forced"] = True
        if b0 is not None:
            entry["b0"] = b0
        self.history.append(entry)
        return result

    def local_complement(self, vertex: str, delta: Fraction) -> None:
        """Apply the complementation unitary to the physical state.

        The graph is rewritten and the existing record is conjugated through
        the unitary's local pieces, so (graph, record) keeps describing the
        physical state.
        """
        delta = Fraction(delta)
        locals_ = {vertex: shear_x(-delta)}
        for b, w in self.graph.neighbors(vertex).items():
            locals_[b] = shear_p(w * w * delta)
        new_graph = local_complement(self.graph, vertex, delta)
        ops = {}
        for v in self.record.vertices:
            op = self.record.op(v)
            t = locals_.get(v)
            ops[v] = t.compose(op).compose(t.inverse()) if t else op
        self._push()
        self.graph = new_graph
        self.record = LocalGaussianRecord(ops)
        self.history.append(
            {"op": "lc", "vertex": vertex, "delta": format_rational(delta)}
        )

    def undo(self) -> None:
        if not self._snapshots:
            raise EngineError("nothing to undo")
        (
            self.graph,
            self.record,
            self.history,
            self._used_symbols,
            self._counter,
        ) = self._snapshots.pop()

    @property
    def depth(self) -> int:
        return len(self._snapshots)

    def state_json(self) -> dict:
        return {
            "graph": self.graph.to_json(),
            "byproducts": self.record.to_json(),
            "history": list(self.history),
        }
