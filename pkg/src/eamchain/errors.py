"""Exception types raised by the chain-stability routines."""


class DomainViolation(ValueError):
    """An argument lies outside the domain of a constitutive function."""


class NoConvergence(RuntimeError):
    """An iterative solver exhausted its iteration budget."""


class SingularHessian(RuntimeError):
    """The projected Hessian is not positive definite at a Newton iterate."""


class JacobiNoConvergence(RuntimeError):
    """The Jacobi eigensolver did not converge within its sweep budget."""


class NoSignChange(ValueError):
    """A bisection bracket does not enclose a sign change."""
