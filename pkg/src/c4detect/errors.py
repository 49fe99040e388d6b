"""Exception hierarchy shared by the library and the command line."""


class C4Error(Exception):
    """Base class for every error raised by c4detect."""

    category = "data"


class DomainError(C4Error, ValueError):
    """An argument lies outside the domain of an operation."""


class InvalidOrderError(DomainError):
    pass


class InsufficientDataError(DomainError):
    pass


class IngestionError(DomainError):
    """Malformed price file (bad cell, gap, unordered timestamps)."""


class NumericError(C4Error, ArithmeticError):
    """A factorization or decomposition could not be carried out."""

    category = "numeric"


class SingularCovarianceError(NumericError):
    def __init__(self, eigenvalue, max_eigenvalue):
        self.eigenvalue = float(eigenvalue)
        self.max_eigenvalue = float(max_eigenvalue)
        super().__init__(
            f"covariance is near-singular: eigenvalue {self.eigenvalue:.3e} "
            f"<= 1e-10 * max eigenvalue {self.max_eigenvalue:.3e}"
        )
