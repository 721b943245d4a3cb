"""Failure taxonomy shared by every module.

Three things can go wrong at desk scale: the caller asked for something
outside a contract (bad parameter), the request is well formed but too big
to enumerate honestly (budget), or an internal cross-check that should be
unconditionally true failed (invariant).  The CLI maps each class to a
distinct exit code.
"""


class ParameterError(ValueError):
    """A precondition on user-supplied parameters does not hold."""


class SquareDiscriminant(ParameterError):
    """Continued-fraction or Pell routines received a perfect square."""


class BudgetExceededError(RuntimeError):
    """The request would exceed the stated enumeration budget."""


class InvariantViolation(RuntimeError):
    """An internal identity that must hold exactly failed to hold."""


#: CLI exit codes: 0 success, 2 parameter, 3 budget, 4 invariant.
EXIT_OK = 0
EXIT_PARAMETER = 2
EXIT_BUDGET = 3
EXIT_INVARIANT = 4
