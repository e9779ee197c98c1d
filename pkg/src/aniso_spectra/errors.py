"""Exception types shared across the package.

Numeric-contract failures get their own classes so callers (and the CLI
exit-code mapping) can distinguish bad input (exit 2) from non-convergence
(exit 3).
"""


class InputError(ValueError):
    """Malformed or out-of-contract input (bad JSON, invalid polygon, ...)."""


class BadExponent(InputError):
    """p must be > 1."""


class EmptyInterval(InputError):
    """Interval with left >= right."""


class BadParams(InputError):
    """Parameters outside an operation's admissible range."""


class ZeroAnisotropy(InputError):
    """The zero anisotropy was passed to an operation that requires H != 0."""


class ZeroProfile(InputError):
    """A candidate profile/field is identically zero."""


class DegenerateKernel(InputError):
    """ker(H) != {0}, so the polar body is unbounded."""


class NotDegenerateLine(InputError):
    """Kernel is neither a line nor a half-plane; no normal form applies."""


class EmptyMesh(InputError):
    """No triangle of the structured grid fits inside the domain."""


class NonConvergence(RuntimeError):
    """Iteration budget exhausted before the stagnation tolerance was met."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class SandwichViolation(AssertionError):
    """A computed frequency escaped the [lambda_min, lambda_max] sandwich."""

    def __init__(self, lambda_min, lambda_hat, lambda_max):
        super().__init__(
            f"sandwich violated: {lambda_min!r} <= {lambda_hat!r} <= {lambda_max!r}"
        )
        self.lambda_min = lambda_min
        self.lambda_hat = lambda_hat
        self.lambda_max = lambda_max
