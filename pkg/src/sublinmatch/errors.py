class InvalidVertex(IndexError):
    pass


class InvalidParameter(ValueError):
    pass


class SelfLoop(ValueError):
    pass


class DuplicateInsert(ValueError):
    pass


class MissingDelete(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    """Raised when a probe or evaluation budget would be overrun."""


class NoPermutationAccepted(RuntimeError):
    pass


class IterationCapExceeded(RuntimeError):
    pass


class CallCapExceeded(RuntimeError):
    pass


class SizeCapExceeded(ValueError):
    pass


class BudgetUnderrun(RuntimeWarning):
    pass


class InsufficientData(ValueError):
    pass


class InvariantViolation(AssertionError):
    pass
