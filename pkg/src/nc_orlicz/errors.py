"""Exception hierarchy shared by every module of the package."""


class NCOrliczError(Exception):
    """Base class for all package errors."""


class DomainError(NCOrliczError, ValueError):
    """An argument lies outside the domain of the operation."""


class ShapeError(NCOrliczError, ValueError):
    """Matrix operands have incompatible shapes or trace scales."""


class UnsupportedFamilyError(NCOrliczError, ValueError):
    """The operation has no implementation for this N-function family."""


class DivergenceError(NCOrliczError, ArithmeticError):
    """An integral that the operation needs is infinite."""


class UnboundedError(NCOrliczError, ArithmeticError):
    """A supremum that the operation needs is infinite."""


class NumericalFailure(NCOrliczError, ArithmeticError):
    """An iterative routine hit its iteration cap without converging."""


class ContractViolation(NCOrliczError, AssertionError):
    """A post-condition that must hold mathematically failed numerically."""
