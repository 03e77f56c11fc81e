"""Exception types shared across the package."""


class RingMismatchError(ValueError):
    """Operands belong to different chain rings."""


class ConditionError(ValueError):
    """A subset fails Condition (F) or (D)."""


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed the allowed budget."""

    def __init__(self, needed, budget, what="enumeration"):
        self.needed = needed
        self.budget = budget
        super().__init__(f"{what} needs {needed} steps, budget is {budget}")


class ConsistencyError(AssertionError):
    """Two independent computations of the same quantity disagree."""
