"""Exception types. The CLI maps each to its own exit status."""


class InvalidInput(ValueError):
    """Malformed permutation, basis, sequence or parameter."""


class BudgetExceeded(RuntimeError):
    """A configured node, length or time budget was hit before an answer was reached.

    ``partial`` carries whatever was fully verified before the budget ran out.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
