"""Exception types shared across the package.

The CLI maps these onto exit codes: input/parse problems exit 1,
eigensolver non-convergence exits 2, broken internal invariants exit 3.
"""


class CascadecutError(Exception):
    """Base class for all package errors."""


class InputError(CascadecutError):
    """Bad caller input: unknown ids, out-of-range parameters, missing files."""


class ParseError(InputError):
    """Malformed input file content; message names the offending line."""


class ConvergenceError(CascadecutError):
    """Iterative eigensolver failed to reach the requested tolerance.

    Carries the best residual seen and the number of iterations spent so
    callers can report how close the run got.
    """

    def __init__(self, message: str, best_residual: float, iterations: int):
        super().__init__(message)
        self.best_residual = best_residual
        self.iterations = iterations


class InvariantError(CascadecutError):
    """An internal consistency check failed; indicates a bug, not bad input."""
