"""Exception types shared across the engine."""


class EngineError(Exception):
    """Base class for all domain errors raised by this package."""


class SchemaError(EngineError):
    """A document or action string does not match its expected format."""


class UnknownVertexError(EngineError):
    """An operation referenced a vertex that is not in the graph."""


class ModeMismatchError(EngineError):
    """Two nullifier systems over different mode sets were compared."""


class InconsistentOutcomeError(EngineError):
    """A numeric outcome was supplied for a measurement whose value is forced
    to a different number by the state."""
