"""Exception hierarchy shared by all modules."""


class AhlsError(Exception):
    """Base class for errors raised by this package."""


class NonConvergent(AhlsError, ArithmeticError):
    """Adaptive refinement stalled above the requested tolerance."""


class DivergentIntegral(AhlsError, ArithmeticError):
    """The integral does not converge (integrand fails to decay)."""


class NonFinite(AhlsError, ArithmeticError):
    """A NaN or infinite value appeared where a finite one is required."""


class ZeroVector(AhlsError, ValueError):
    """A radial or gauge evaluation was requested at the origin."""


class DegenerateBody(AhlsError, ValueError):
    """The body has (numerically) zero volume."""


class PreconditionFailed(AhlsError, ValueError):
    """A numerical precondition such as log-concavity did not hold."""


class AssumptionViolated(AhlsError, ValueError):
    """Sampled monotonicity assumptions on a profile did not hold."""


class SelfCheckFailed(AhlsError, AssertionError):
    """Two independent numerical paths disagreed beyond their error bars."""


class ConfigError(AhlsError, ValueError):
    """Invalid run configuration; the message carries the offending field."""
