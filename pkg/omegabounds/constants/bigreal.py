from dataclasses import dataclass
from typing import Dict, Union

import mpmath

from omegabounds.utils import mp_string, to_fixed

MAX_DIGITS: int = 2000


class ConstantError(ValueError):
    """Raised when a constant is requested outside its defined range."""


class PrecisionError(ConstantError):
    """Raised when a precision request exceeds what a routine supports."""


class PrecisionShortfallError(PrecisionError):
    """Raised when a computation could not reach the requested accuracy."""


def check_digits(digits: int, limit: int = MAX_DIGITS) -> None:
    if digits < 1 or digits > limit:
        raise PrecisionError(f"Precision request of {digits} digits is outside [1, {limit}]")


@dataclass(frozen=True)
class BigReal:
    """
    An arbitrary-precision real with a rigorous absolute error bound.

    The true quantity lies in [value - error_bound, value + error_bound].

    Attributes:
        value (mpmath.mpf): The approximation.
        working_digits (int): Decimal precision it was produced at.
        error_bound (mpmath.mpf): Positive bound on the absolute error.
    """

    value: mpmath.mpf
    working_digits: int
    error_bound: mpmath.mpf

    def __post_init__(self) -> None:
        assert mpmath.isfinite(self.error_bound) and self.error_bound > 0, (
            f"Error bound must be finite and positive, got {self.error_bound}"
        )

    @classmethod
    def exact_to(cls, value: mpmath.mpf, working_digits: int) -> "BigReal":
        """Wrap a value that is only subject to rounding at `working_digits`."""
        with mpmath.workdps(working_digits + 5):
            v = +mpmath.mpf(value)
            err = mpmath.mpf(10) ** (-working_digits) * max(1, abs(v))
        return cls(v, working_digits, err)

    def __add__(self, other: "BigReal") -> "BigReal":
        wd = min(self.working_digits, other.working_digits)
        with mpmath.workdps(max(self.working_digits, other.working_digits) + 5):
            return BigReal(self.value + other.value, wd, self.error_bound + other.error_bound)

    def __sub__(self, other: "BigReal") -> "BigReal":
        wd = min(self.working_digits, other.working_digits)
        with mpmath.workdps(max(self.working_digits, other.working_digits) + 5):
            return BigReal(self.value - other.value, wd, self.error_bound + other.error_bound)

    def __neg__(self) -> "BigReal":
        with mpmath.workdps(self.working_digits + 5):
            return BigReal(-self.value, self.working_digits, self.error_bound)

    def __float__(self) -> float:
        return float(self.value)

    def contains(self, x: Union[int, float, mpmath.mpf]) -> bool:
        with mpmath.workdps(self.working_digits + 5):
            return abs(self.value - mpmath.mpf(x)) <= self.error_bound

    def agrees_with(self, other: "BigReal") -> bool:
        """True when the two brackets overlap, i.e. the values differ by less than the summed bounds."""
        with mpmath.workdps(max(self.working_digits, other.working_digits) + 5):
            return abs(self.value - other.value) <= self.error_bound + other.error_bound

    def rounded(self, decimals: int) -> str:
        return to_fixed(self.value, decimals)

    @property
    def value_string(self) -> str:
        return mp_string(self.value, self.working_digits)

    @property
    def error_bound_string(self) -> str:
        return mp_string(self.error_bound, 3)

    def to_json(self, name: str, digits: int) -> Dict[str, str]:
        return {
            "name": name,
            "value_string": mp_string(self.value, digits),
            "digits": str(digits),
            "error_bound_string": self.error_bound_string,
        }
