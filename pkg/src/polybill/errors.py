class BilliardError(Exception):
    """Base class for all errors raised by polybill."""


class InvalidBody(BilliardError, ValueError):
    """Input polytope violates a structural requirement (unbounded, empty, origin not interior...)."""


class DegenerateError(InvalidBody):
    """Point set or simplex is lower dimensional."""

    def __init__(self, message, affine_dim=None):
        super().__init__(message)
        self.affine_dim = affine_dim


class DimensionMismatch(BilliardError, ValueError):
    pass


class InternalConsistencyError(BilliardError, RuntimeError):
    """An exact invariant that must hold by construction was violated."""
