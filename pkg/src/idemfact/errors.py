"""Exception hierarchy shared by the whole package."""


class AlgebraError(ValueError):
    """Bad algebra descriptor (rank too small, non-prime modulus, universe too big)."""


class InvalidElementError(ValueError):
    pass


class AlgebraMismatchError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


class DomainError(ValueError):
    """Element lies outside the domain of a partial endomorphism."""


class MalformedInputError(ValueError):
    """Text that does not denote an endomorphism of the given algebra.

    ``position`` is the 0-based index of the offending token (or row for
    matrices); ``None`` when the problem is the overall shape.
    """

    def __init__(self, reason, position=None):
        self.reason = reason
        self.position = position
        where = "" if position is None else f" at position {position}"
        super().__init__(f"malformed input{where}: {reason}")


class NotSingularError(ValueError):
    def __init__(self, message="input is an automorphism"):
        super().__init__(message)


class DegenerateRankError(ValueError):
    pass


class InvariantError(RuntimeError):
    """A guarantee of the construction failed; always a bug.

    ``stage`` names the pipeline stage that produced the bad value.
    """

    def __init__(self, stage, message):
        self.stage = stage
        super().__init__(f"[{stage}] {message}")


class BudgetExceededError(RuntimeError):
    pass
