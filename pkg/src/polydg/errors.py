"""Exception hierarchy shared across the solver."""


class PolyDGError(Exception):
    """Base class for all solver errors."""


class InvalidParameterError(PolyDGError):
    """A user-supplied parameter is out of range or unsupported."""


class ConfigurationError(PolyDGError):
    """A run configuration is inconsistent or incomplete."""


class DegenerateInputError(PolyDGError):
    """Geometric input is degenerate (e.g. collinear point set)."""


class MeshQualityError(PolyDGError):
    """The generated mesh violates a quality requirement."""


class TopologyError(PolyDGError):
    """Mesh connectivity is inconsistent (e.g. unmatched periodic face)."""


class AssemblyError(PolyDGError):
    """An element matrix could not be assembled or factorized."""


class InadmissibleStateError(PolyDGError):
    """A thermodynamically inadmissible state was encountered.

    Carries the offending cell index when available.
    """

    def __init__(self, message, cell=None, face=None):
        super().__init__(message)
        self.cell = cell
        self.face = face


class PredictorDivergenceError(PolyDGError):
    """The local space-time iteration failed to reach its tolerance."""

    def __init__(self, message, cell=None, residual=None):
        super().__init__(message)
        self.cell = cell
        self.residual = residual


class NumericalFailureError(PolyDGError):
    """The time loop aborted due to a numerical failure."""
