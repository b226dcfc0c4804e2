"""Working precision for every mpmath evaluation in the package."""

import mpmath as mp

DEFAULT_DPS = 60


def set_precision(digits: int) -> None:
    if digits < 20:
        raise ValueError("precision must be at least 20 decimal digits")
    mp.mp.dps = int(digits)


def get_precision() -> int:
    return mp.mp.dps


def default_tol():
    """Truncation tolerance a few digits below the working precision."""
    return mp.mpf(10) ** (-(mp.mp.dps + 5))
