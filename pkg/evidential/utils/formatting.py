from typing import Optional

from evidential.config.config import settings


def format_real(value: float, digits: Optional[int] = None) -> str:
    """Render a real with a fixed number of significant digits, keeping trailing zeros"""
    digits = digits or settings.SIGNIFICANT_DIGITS
    if value == 0:
        value = 0.0
    return f"{value:#.{digits}g}"


def round_real(value: float, digits: Optional[int] = None) -> float:
    """Round a real to a number of significant digits for serialization"""
    digits = digits or settings.SIGNIFICANT_DIGITS
    rounded = float(f"{value:.{digits}g}")
    return 0.0 if rounded == 0 else rounded
