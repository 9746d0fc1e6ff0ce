"""Exception hierarchy. Input problems subclass ValueError."""


class KnotURError(Exception):
    """Base class for all errors raised by knotur."""


class DegenerateTorus(KnotURError, ValueError):
    pass


class NotCoprime(KnotURError, ValueError):
    pass


class NonPositive(KnotURError, ValueError):
    pass


class DuplicateMode(KnotURError, ValueError):
    pass


class ZeroState(KnotURError, ValueError):
    pass


class PeriodMismatch(KnotURError, ValueError):
    pass


class UnsupportedChoice(KnotURError, ValueError):
    pass


class ZeroMRL(KnotURError, ArithmeticError):
    pass


class NoConvergence(KnotURError, ArithmeticError):
    pass


class NegativeVariance(KnotURError, ArithmeticError):
    pass
