"""Exception types raised by the kernels and the optimizer."""


class SingularConfigurationError(ArithmeticError):
    """A cascade prefactor denominator vanished for some (m, branch)."""

    def __init__(self, m: int, branch: int, message: str | None = None):
        self.m = m
        self.branch = branch
        super().__init__(
            message or f"singular cascade prefactor at m={m}, branch={branch:+d}"
        )


class InvalidReferenceError(ValueError):
    """The reference prefactor used to normalise a suppression ratio is zero."""


class NoFeasiblePointError(RuntimeError):
    """Every point of a scan was singular."""
