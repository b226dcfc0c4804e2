"""Exception types raised across the package."""


class ThetaAsymError(Exception):
    """Base class for all domain errors."""


class InvalidInvert(ThetaAsymError):
    pass


class CorruptCache(ThetaAsymError):
    pass


class TableTooShort(ThetaAsymError):
    pass


class NegativeM(ThetaAsymError):
    pass


class NoConvergence(ThetaAsymError):
    pass


class OrderTooHigh(ThetaAsymError):
    pass


class GammaTooShort(ThetaAsymError):
    pass


class RegimeViolation(ThetaAsymError):
    pass


class DegenerateB(ThetaAsymError):
    pass
