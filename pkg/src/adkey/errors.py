"""Exception types shared by the package.

The CLI maps ``ValidationError`` to exit code 2 and ``NumericGuardError`` to
exit code 3.
"""


class ValidationError(ValueError):
    """Input violates a documented invariant (shape, trace, positivity...)."""


class NumericGuardError(RuntimeError):
    """A computation was refused because it would exceed a size limit."""


class DegenerateScenarioError(ValidationError):
    """A conditional state is undefined because its outcome has probability zero."""
