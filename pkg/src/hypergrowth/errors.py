"""Exception hierarchy shared by all hypergrowth modules."""


class HypergrowthError(Exception):
    """Base class for every error raised by this package."""


class InvalidN(HypergrowthError, ValueError):
    """Triangles-per-vertex parameter outside the supported range."""


class InvalidRadius(HypergrowthError, ValueError):
    pass


class IndexOutOfBounds(HypergrowthError, ValueError):
    pass


class ResourceLimit(HypergrowthError):
    """Projected complex size exceeds the configured triangle budget."""


class AlreadyClosed(HypergrowthError):
    pass


class ClassificationViolation(HypergrowthError):
    """A boundary vertex has an inside-triangle count outside {2, 3}.

    This indicates a builder bug, never bad user input.
    """


class NotADisk(HypergrowthError):
    pass


class ComplexInconsistency(HypergrowthError):
    """Gluing a triangle would break the manifold / rotation-system structure."""


class PrecisionExhausted(HypergrowthError):
    pass


class UnsupportedN(HypergrowthError, ValueError):
    pass


class NumericalDegeneracy(HypergrowthError):
    pass


class DegeneratePoints(HypergrowthError, ValueError):
    pass


class OutputUnwritable(HypergrowthError, OSError):
    pass
