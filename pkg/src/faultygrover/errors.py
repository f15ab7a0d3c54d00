"""Exception types raised by the simulators and bound checkers."""


class DegenerateInstanceError(ValueError):
    """Instance parameters for which a quantity is undefined (e.g. k = 1, p in {0, 1})."""


class PreconditionError(ValueError):
    """Arguments outside the range where a bound or formula is stated."""


class NapierDomainError(ValueError):
    """A tangent or cotangent argument sits on its pole."""


class PatternViolationError(ValueError):
    """A full density matrix is not of the six-parameter symmetric form."""


class BranchExplosionError(RuntimeError):
    """Exact enumeration produced more branches than allowed."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature ran out of panels before reaching tolerance."""


class SingularEndpointError(QuadratureError):
    """The integrand diverges at the requested upper limit."""
