"""Exception hierarchy shared by every cslab module."""


class CSLabError(Exception):
    """Base class for all library errors."""


class ScheduleError(CSLabError):
    """A schedule description violates one or more invariants.

    ``violations`` holds every problem found, not just the first.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class StageBeyondHorizon(CSLabError):
    pass


class HorizonExhausted(CSLabError):
    """An approximant needs knowledge from a stage the trace does not cover."""

    def __init__(self, index, horizon):
        self.index = index
        self.horizon = horizon
        super().__init__(f"index {index} needs knowledge beyond horizon {horizon}")


class InvalidTerm(CSLabError):
    pass


class WingMismatch(CSLabError):
    pass


class DegenerateInterval(CSLabError):
    pass


class MultipleAlignments(CSLabError):
    pass


class RepeatingKernel(CSLabError):
    pass


class UninhabitedFixture(CSLabError):
    pass


class NotNormalized(CSLabError):
    pass


class NotDeduped(CSLabError):
    pass


class DepthExceeded(CSLabError):
    pass


class FormulaSyntaxError(CSLabError):
    def __init__(self, message, position):
        self.position = position
        super().__init__(f"{message} at position {position}")


class Exhausted(CSLabError):
    """Bounded countermodel search found nothing."""


class SchemaError(CSLabError):
    pass
