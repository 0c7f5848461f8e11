"""
Error taxonomy for FoldShip.

Each error also derives from the closest built-in so existing
`except ValueError` handlers keep catching them.
"""


class FoldShipError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(FoldShipError, ValueError):
    """Malformed, unknown, or out-of-range configuration."""


class GeometryError(FoldShipError, ValueError):
    """Invalid Kresling parameters or impossible geometry."""


class MonostableError(GeometryError):
    """lambda <= 0.5 where a bistable segment is required."""


class FoldRangeError(GeometryError):
    """Fold angle outside [alpha_deployed, alpha_folded]."""


class TopologyError(FoldShipError, ValueError):
    """Mesh is not a closed, consistently oriented surface."""


class UnsupportedFeatureError(FoldShipError, ValueError):
    """Requested feature is outside the supported scope (e.g. multi-body)."""


class CutPlanError(FoldShipError, ValueError):
    """A tube edge cannot be cut from the available stock."""

    def __init__(self, message: str, edge_class: str = ""):
        super().__init__(message)
        self.edge_class = edge_class


class DomainError(FoldShipError, ValueError):
    """Argument outside the mathematical domain of a model."""


class SimulationError(FoldShipError, ArithmeticError):
    """Non-finite state or forces during simulation."""


class ExportError(FoldShipError, OSError):
    """Failure writing an output artifact."""
