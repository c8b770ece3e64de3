"""Exception hierarchy.  The CLI maps these onto exit codes."""


class BetacylError(Exception):
    """Base class; any subclass except PrecisionExhausted is a precondition error."""


class ParseError(BetacylError, ValueError):
    pass


class OutOfRange(BetacylError, ValueError):
    pass


class EmptyWord(BetacylError, ValueError):
    pass


class RootBelowOne(BetacylError, ValueError):
    pass


class NotSelfAdmissible(BetacylError, ValueError):
    pass


class InvalidRange(BetacylError, ValueError):
    pass


class ScheduleTooSmall(BetacylError, ValueError):
    pass


class DegenerateLowerEndpoint(BetacylError, ValueError):
    pass


class ReportNonEmpty(BetacylError):
    pass


class PrecisionExhausted(BetacylError, ArithmeticError):
    """A decision could not be certified below the precision cap.

    ``index`` is the 1-based digit (or step) that could not be decided.
    """

    def __init__(self, index, p_max):
        super().__init__(f"could not certify step {index} at precision cap {p_max} bits")
        self.index = index
        self.p_max = p_max
