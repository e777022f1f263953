class MixedMomentError(Exception):
    """Base for every error raised by the library."""


class PoleError(MixedMomentError, ValueError):
    pass


class NonConvergenceError(MixedMomentError, RuntimeError):
    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class InsufficientPrecisionError(MixedMomentError, RuntimeError):
    def __init__(self, message, required_bits=None, working_bits=None):
        super().__init__(message)
        self.required_bits = required_bits
        self.working_bits = working_bits


class BudgetError(MixedMomentError, RuntimeError):
    pass


class TruncationError(BudgetError):
    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


class NonCoprimeError(MixedMomentError, ValueError):
    pass


class UnsupportedWeightError(MixedMomentError, ValueError):
    pass


class OutOfRangeError(MixedMomentError, IndexError):
    pass


class OutOfWindowError(MixedMomentError, ValueError):
    pass


class KernelRangeError(MixedMomentError, ValueError):
    pass


class StationaryPointError(MixedMomentError, ValueError):
    pass


class UsageError(MixedMomentError, ValueError):
    pass
