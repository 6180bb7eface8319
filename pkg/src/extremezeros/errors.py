"""Exception types raised by the library."""


class DomainError(ValueError):
    """An argument violates the precondition of an operation."""


class StaleEigenvalueError(ValueError):
    """A supplied eigenvalue is not within tolerance of the matrix spectrum."""


class DegenerateEigenvalueError(ArithmeticError):
    """An eigenvalue is too close to a neighbour for derivative formulas."""


class SingularRatioError(ArithmeticError):
    """A closed-form ratio would divide by a vanishing quantity."""


class BisectionError(RuntimeError):
    """Bisection failed to converge within the iteration cap."""
