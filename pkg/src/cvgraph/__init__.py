"""Measurement-driven rewrites of weighted graph states, exactly.

The package keeps two independent pictures of the same physics: closed-form
rewrite rules acting on the graph (with tracked single-mode byproducts), and
a stabilizer-style elimination oracle over nullifier systems.  Agreement
between the two, plus a numeric covariance check, is the correctness story.
"""

from .actions import ParsedAction, assign_outcomes, parse_action
from .bases import MeasurementBasis
from .byproducts import (
    LocalGaussianRecord,
    Mat2,
    ModeOp,
    compose_byproduct,
    fourier,
    momentum_shift,
    position_shift,
    shear_p,
    shear_x,
)
from .covariance import covariance_residual, residual_slope
from .engine import Session
from .errors import (
    EngineError,
    InconsistentOutcomeError,
    ModeMismatchError,
    SchemaError,
    UnknownVertexError,
)
from .graph import (
    WeightedGraph,
    chain,
    edge_key,
    parse_graph,
    serialize_graph,
    to_dot,
)
from .nullifiers import (
    GraphForm,
    NotGraphForm,
    NullifierSystem,
    ProjectionResult,
    SymplecticGate,
    apply_gate,
    canonical_graph_form,
    graph_to_nullifiers,
    oracle_measure,
    states_equal,
)
from .outcomes import OutcomeExpr, parse_outcome
from .planner import PlanQuery, PlanSearch, plan
from .plans import MeasurementPlan, PlanStep
from .rationals import format_rational, parse_rational
from .rules import (
    DETERMINISTIC,
    RANDOM,
    RewriteResult,
    local_complement,
    measure,
    measure_p,
    measure_theta,
    measure_x,
)
from .verify import VerificationSummary, run_verification

__version__ = "0.1.0"

__all__ = [
    "DETERMINISTIC",
    "EngineError",
    "GraphForm",
    "InconsistentOutcomeError",
    "LocalGaussianRecord",
    "Mat2",
    "MeasurementBasis",
    "MeasurementPlan",
    "ModeMismatchError",
    "ModeOp",
    "NotGraphForm",
    "NullifierSystem",
    "OutcomeExpr",
    "ParsedAction",
    "PlanQuery",
    "PlanSearch",
    "PlanStep",
    "ProjectionResult",
    "RANDOM",
    "RewriteResult",
    "SchemaError",
    "Session",
    "SymplecticGate",
    "UnknownVertexError",
    "VerificationSummary",
    "WeightedGraph",
    "apply_gate",
    "assign_outcomes",
    "canonical_graph_form",
    "chain",
    "compose_byproduct",
    "covariance_residual",
    "edge_key",
    "fourier",
    "format_rational",
    "graph_to_nullifiers",
    "local_complement",
    "measure",
    "measure_p",
    "measure_theta",
    "measure_x",
    "momentum_shift",
    "oracle_measure",
    "parse_action",
    "parse_graph",
    "parse_outcome",
    "parse_rational",
    "plan",
    "position_shift",
    "residual_slope",
    "run_verification",
    "serialize_graph",
    "shear_p",
    "shear_x",
    "states_equal",
    "to_dot",
]
