"""Exception types shared across the solver modules."""


class KgwsError(Exception):
    """Base class for solver errors."""


class DomainError(KgwsError, ValueError):
    """A quantity was requested outside its mathematical domain.

    Raised, for example, when a radicand that must be non-negative is
    negative at the requested energy, which signals that no bound state
    exists there.
    """


class NoBoundStateError(KgwsError):
    """The requested (n, l, branch) state does not exist for these parameters."""


class NoRootFoundError(KgwsError):
    """The quantization residual has no sign change on the scanned interval."""


class MultipleRootsError(KgwsError):
    """The quantization residual has several roots for one (n, l, branch).

    The candidate energies are attached so callers can report them.
    """

    def __init__(self, message: str, candidates: list[float]):
        super().__init__(message)
        self.candidates = candidates


class NodeCountError(KgwsError):
    """A shooting solution converged but its node count does not match n."""

    def __init__(self, message: str, found_nodes: int, energy: float):
        super().__init__(message)
        self.found_nodes = found_nodes
        self.energy = energy


class CalibrationError(KgwsError):
    """Diffuseness calibration could not reproduce the anchor value.

    Carries the best achievable diffuseness and its relative deviation so
    reports can show how close the search came.
    """

    def __init__(self, message: str, best_a: float, best_deviation: float):
        super().__init__(message)
        self.best_a = best_a
        self.best_deviation = best_deviation


class QuadratureError(KgwsError):
    """Normalization quadrature failed to converge to the requested accuracy."""


class ConfigError(KgwsError, ValueError):
    """A run configuration file or flag set failed validation."""
