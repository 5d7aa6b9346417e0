
class RainbowSeekError(Exception):
    """Base class of every error raised by the engines."""

class ParameterDomainError(RainbowSeekError, ValueError):
    pass

class InstanceFormatError(RainbowSeekError, ValueError):
    """
    A document that cannot be decoded into an Instance.
    Args:
        message: what is wrong
        line: 1-based line of the JSON syntax error, if any
        field: path of the offending field, e.g. matchings[2][0][1]
    """
    def __init__(self, message: str, line: int = None, field: str = None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)

class InvalidTupleSystem(RainbowSeekError, ValueError):
    pass

class PrimeCapExceeded(RainbowSeekError, ValueError):
    pass

class BudgetExceeded(RainbowSeekError):
    pass

class BestEffortFailed(RainbowSeekError):
    """Raised by the constructive finder below its threshold when step h has no replacement edge."""
    def __init__(self, h: int, stage: str = "augment"):
        self.h = h
        self.stage = stage
        super().__init__(f"best-effort {stage} failed at step {h}")

class GeneralPositionError(RainbowSeekError):
    pass

class InternalInvariantError(RainbowSeekError, AssertionError):
    """A proven property did not hold. Always a bug."""
