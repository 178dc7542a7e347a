"""Weighted graphs with exact rational edge weights.

Vertices are non-empty string labels; edges are unordered pairs carrying a
nonzero Fraction weight.  Graphs are immutable: every rewrite returns a new
graph, and deleted labels are never reused, so a vertex keeps its identity
across an entire measurement sequence.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import SchemaError, UnknownVertexError
from .rationals import format_rational, parse_rational

Edge = tuple[str, str]


def edge_key(u: str, v: str) -> Edge:
    """Canonical unordered key for the pair (u, v)."""
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class WeightedGraph:
    """An undirected graph with nonzero rational edge weights.

    Invariants (enforced at construction): no self-loops, no zero-weight
    edges, every edge endpoint is a vertex, vertex labels are unique and
    stored in sorted order.
    """

    vertices: tuple[str, ...]
    edges: dict[Edge, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if len(set(self.vertices)) != len(self.vertices):
            raise SchemaError("duplicate vertex label")
        for label in self.vertices:
            if not label or not isinstance(label, str):
                raise SchemaError(f"vertex label must be a non-empty string: {label!r}")
        object.__setattr__(self, "vertices", tuple(sorted(self.vertices)))
        vertex_set = set(self.vertices)
        normalized: dict[Edge, Fraction] = {}
        for (u, v), w in self.edges.items():
            if u == v:
                raise SchemaError(f"self-loop on vertex {u!r}")
            if u not in vertex_set or v not in vertex_set:
                raise SchemaError(f"edge endpoint not in vertex set: ({u!r}, {v!r})")
            key = edge_key(u, v)
            if key in normalized:
                raise SchemaError(f"duplicate edge ({u!r}, {v!r})")
            w = Fraction(w)
            if w != 0:
                normalized[key] = w
        object.__setattr__(self, "edges", dict(sorted(normalized.items())))

    def has_vertex(self, label: str) -> bool:
        return label in self.vertices

    def require_vertex(self, label: str) -> None:
        if label not in self.vertices:
            raise UnknownVertexError(f"unknown vertex {label}")

    def weight(self, u: str, v: str) -> Fraction:
        """Weight of the edge (u, v), or 0 when absent."""
        return self.edges.get(edge_key(u, v), Fraction(0))

    def neighbors(self, a: str) -> dict[str, Fraction]:
        """Vertices sharing a nonzero-weight edge with ``a``, with weights."""
        self.require_vertex(a)
        out: dict[str, Fraction] = {}
        for (u, v), w in self.edges.items():
            if u == a:
                out[v] = w
            elif v == a:
                out[u] = w
        return out

    def without_vertex(self, a: str) -> "WeightedGraph":
        """Copy with ``a`` and all incident edges removed."""
        self.require_vertex(a)
        return WeightedGraph(
            tuple(v for v in self.vertices if v != a),
            {e: w for e, w in self.edges.items() if a not in e},
        )

    def with_edges(self, updates: dict[Edge, Fraction]) -> "WeightedGraph":
        """Copy with the given unordered-pair weights replaced (0 deletes)."""
        edges = dict(self.edges)
        for (u, v), w in updates.items():
            key = edge_key(u, v)
            if w == 0:
                edges.pop(key, None)
            else:
                edges[key] = w
        return WeightedGraph(self.vertices, edges)

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        seen = {self.vertices[0]}
        frontier = [self.vertices[0]]
        while frontier:
            current = frontier.pop()
            for other in self.neighbors(current):
                if other not in seen:
                    seen.add(other)
                    frontier.append(other)
        return len(seen) == len(self.vertices)

    def to_json(self) -> dict:
        return {
            "modes": list(self.vertices),
            "edges": [
                {"u": u, "v": v, "w": format_rational(w)}
                for (u, v), w in sorted(self.edges.items())
            ],
        }

    def canonical_text(self) -> str:
        """Deterministic serialization, usable as a dedup key."""
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


def parse_graph(text: str | bytes | dict) -> WeightedGraph:
    """Parse the graph JSON schema into a normalized WeightedGraph.

    Schema: ``{"modes": [str...], "edges": [{"u":str,"v":str,"w":rational}...]}``.
    Self-loops, duplicate edges, unknown endpoints and malformed rationals are
    rejected; zero-weight edges are dropped.
    """
    if isinstance(text, (str, bytes)):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from exc
    else:
        doc = text
    if not isinstance(doc, dict):
        raise SchemaError("graph document must be a JSON object")
    modes = doc.get("modes")
    raw_edges = doc.get("edges")
    if not isinstance(modes, list) or not all(isinstance(m, str) for m in modes):
        raise SchemaError("'modes' must be a list of strings")
    if not isinstance(raw_edges, list):
        raise SchemaError("'edges' must be a list")
    edges: dict[Edge, Fraction] = {}
    seen: set[Edge] = set()
    for entry in raw_edges:
        if not isinstance(entry, dict) or not {"u", "v", "w"} <= set(entry):
            raise SchemaError(f"edge entry must have u, v, w: {entry!r}")
        u, v = entry["u"], entry["v"]
        if u == v:
            raise SchemaError(f"self-loop on vertex {u!r}")
        key = edge_key(u, v)
        if key in seen:
            raise SchemaError(f"duplicate edge ({u!r}, {v!r})")
        seen.add(key)
        edges[key] = parse_rational(entry["w"])
    return WeightedGraph(tuple(modes), edges)


def serialize_graph(g: WeightedGraph) -> str:
    return json.dumps(g.to_json(), indent=2)


def to_dot(g: WeightedGraph) -> str:
    """Render as undirected DOT: one node per vertex, weight as edge label."""
    lines = ["graph state {"]
    for v in g.vertices:
        lines.append(f'  "{v}";')
    for (u, v), w in sorted(g.edges.items()):
        lines.append(f'  "{u}" -- "{v}" [label="{format_rational(w)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def chain(labels: list[str], weight: Fraction | int = 1) -> WeightedGraph:
    """Convenience: a path graph over ``labels`` with a uniform weight."""
    edges = {
        edge_key(a, b): Fraction(weight) for a, b in zip(labels, labels[1:])
    }
    return WeightedGraph(tuple(labels), edges)
