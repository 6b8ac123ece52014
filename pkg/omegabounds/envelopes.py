"""
Explicit remainder envelopes and auxiliary functions.

Every function accepts Python floats, numpy arrays or mpmath numbers. Passing
an `mpmath.mpf` switches the arithmetic to mpmath at the caller's working
precision, which is needed near crossings and for arguments such as e^14167
that overflow a double.
"""

import math
from dataclasses import dataclass
from typing import Callable, Dict, NamedTuple, Tuple, Union

import mpmath
import numpy as np
import pandas as pd

Value = Union[float, np.ndarray, mpmath.mpf]


class DomainError(ValueError):
    """Raised when an envelope is evaluated outside its parameter window."""


class _Backend(NamedTuple):
    exp: Callable
    log: Callable
    sqrt: Callable
    floor: Callable
    e: Value


_NUMPY = _Backend(np.exp, np.log, np.sqrt, np.floor, math.e)
_MPMATH = _Backend(mpmath.exp, mpmath.log, mpmath.sqrt, mpmath.floor, mpmath.e)


def _backend(*values: Value) -> _Backend:
    if any(isinstance(v, (mpmath.mpf, mpmath.mpc)) for v in values):
        return _MPMATH
    return _NUMPY


def _as_value(x: Value) -> Value:
    if isinstance(x, (mpmath.mpf, np.ndarray)):
        return x
    if isinstance(x, (list, tuple)):
        return np.asarray(x, dtype=np.float64)
    return float(x)


def _require(condition, message: str) -> None:
    if not bool(np.all(condition)):
        raise DomainError(message)


def remainder_R(x: Value) -> Value:
    """R(x) = x e^(-√(log x)/3), the unconditional envelope of |π(x) - li(x)| for x > 1.2."""
    x = _as_value(x)
    _require(x > 1.2, "R(x) needs x > 1.2")
    b = _backend(x)
    return x * b.exp(-b.sqrt(b.log(x)) / 3)


def remainder_Rhat(x: Value) -> Value:
    """R̂(x) = √x log x, the conditional envelope of |π(x) - li(x)| for x >= 2."""
    x = _as_value(x)
    _require(x >= 2, "R̂(x) needs x >= 2")
    b = _backend(x)
    return b.sqrt(x) * b.log(x)


def tail_integral_R(y: Value) -> Value:
    """Closed form of ∫_y^∞ R(t)/t² dt = e^(-√(log y)/3)(6√(log y) + 18)."""
    y = _as_value(y)
    _require(y > 1.2, "The R tail integral needs y > 1.2")
    b = _backend(y)
    root = b.sqrt(b.log(y))
    return b.exp(-root / 3) * (6 * root + 18)


def tail_integral_Rhat(y: Value) -> Value:
    """Closed form of ∫_y^∞ R̂(t)/t² dt = (2 log y + 4)/√y."""
    y = _as_value(y)
    _require(y >= 2, "The R̂ tail integral needs y >= 2")
    b = _backend(y)
    return (2 * b.log(y) + 4) / b.sqrt(y)


def antideriv_logpow(n: int, t: Value) -> Value:
    """
    Antiderivative of log^n(t) / t^2.

    Returns -(1/t) Σ_{j=0}^n P(n, j) log^(n-j) t with P(n, j) = C(n, j) j!.

    Args:
        n (int): Power of the logarithm, n >= 0.
        t (Value): Point of evaluation, t > 0.

    Returns:
        Value: The antiderivative at t, vanishing as t -> ∞.
    """
    if n < 0:
        raise DomainError(f"The log power must be nonnegative, got {n}")
    t = _as_value(t)
    _require(t > 0, "The antiderivative needs t > 0")
    b = _backend(t)
    log_t = b.log(t)
    total = sum(math.perm(n, j) * log_t ** (n - j) for j in range(n + 1))
    return -total / t


def _check_x_m(x: Value, m: int) -> _Backend:
    if m < 1:
        raise DomainError(f"The expansion order must be at least 1, got {m}")
    _require(x >= math.e, "Envelopes are stated for x >= e")
    return _backend(x)


def envelope_E_omega(x: Value, m: int) -> Value:
    """
    Unconditional envelope of |Σ_{n<=x} ω(n) - x log log x - Mx - x Σ_{j<=m} a_j/log^j x|.

    Args:
        x (Value): Argument, x >= e.
        m (int): Expansion order, m >= 1.

    Returns:
        Value: E_ω(x, m).
    """
    x = _as_value(x)
    b = _check_x_m(x, m)
    log_x = b.log(x)
    root_x = b.sqrt(x)
    f = math.factorial(m)
    two = 2 ** (m + 1)
    decay = b.exp(-b.sqrt(2 * log_x) / 6)
    return (
        two * f * x / log_x ** (m + 1)
        + (two + 1) * b.e * f * root_x / log_x
        + x * decay * (log_x / 2 + 3 * b.sqrt(2 * log_x) + 21)
        + root_x
    )


def envelope_E_Omega(x: Value, m: int) -> Value:
    """E_Ω(x, m) = E_ω(x, m) + 33√x/log x."""
    x = _as_value(x)
    b = _check_x_m(x, m)
    return envelope_E_omega(x, m) + 33 * b.sqrt(x) / b.log(x)


def envelope_Ehat_omega(x: Value, m: int) -> Value:
    """Envelope of the ω average under the Riemann hypothesis."""
    x = _as_value(x)
    b = _check_x_m(x, m)
    log_x = b.log(x)
    x_two_thirds = b.exp(2 * log_x / 3)
    f = math.factorial(m)
    three_halves = 1.5 ** (m + 1)
    return (
        three_halves * f * x / log_x ** (m + 1)
        + 4 * x_two_thirds * log_x
        + 9 * x_two_thirds
        + (three_halves + 1) * b.e * f * x_two_thirds / log_x
        + 15 * b.sqrt(x) * log_x
    )


def envelope_Ehat_Omega(x: Value, m: int) -> Value:
    """Ê_Ω(x, m) = Ê_ω(x, m) + 33√x/log x."""
    x = _as_value(x)
    b = _check_x_m(x, m)
    return envelope_Ehat_omega(x, m) + 33 * b.sqrt(x) / b.log(x)


def h_corollary(z: Value) -> Value:
    """
    h(z) = (log² x / x)(E_ω(x, 1) - 4x/log² x) written in z = √(log x).

    h(z) < 1 is the condition under which E_ω(x, 1) < 5x/log² x.
    """
    z = _as_value(z)
    _require(z > 0, "h(z) needs z > 0")
    b = _backend(z)
    root_two = b.sqrt(2)
    first = z**4 * b.exp(-root_two * z / 6) * (z**2 / 2 + 3 * root_two * z + 21)
    second = z**2 * b.exp(-(z**2) / 2) * (z**2 + 5 * b.e)
    return first + second


def kappa(x: Value) -> Value:
    """κ(x) = 25√⌊x⌋ / log⌊x⌋."""
    x = _as_value(x)
    _require(x >= 2, "κ(x) needs x >= 2")
    b = _backend(x)
    n = b.floor(x)
    return 25 * b.sqrt(n) / b.log(n)


@dataclass(frozen=True)
class EnvelopeParams:
    """
    Parameters of the intermediate envelopes h₁, h₂, h₃.

    The split point y must satisfy 1.2 < x^δ <= y <= x^Δ < x.

    Attributes:
        x (float): Upper end of the sum, x >= e.
        m (int): Expansion order, m >= 1.
        delta (float): Lower exponent of the split window, in (0, 1).
        Delta (float): Upper exponent of the split window, in [delta, 1).
        conditional (bool): True for the Riemann-hypothesis variants.
    """

    x: Value
    m: int = 1
    delta: float = 0.5
    Delta: float = 0.5
    conditional: bool = False

    def __post_init__(self) -> None:
        if self.m < 1:
            raise DomainError(f"The expansion order must be at least 1, got {self.m}")
        if not 0 < self.delta <= self.Delta < 1:
            raise DomainError(f"Need 0 < delta <= Delta < 1, got {self.delta}, {self.Delta}")
        _require(_as_value(self.x) >= math.e, "Envelopes are stated for x >= e")

    @classmethod
    def default(cls, x: Value, m: int = 1, conditional: bool = False) -> "EnvelopeParams":
        """δ = Δ = 1/2 unconditionally and 2/3 under the Riemann hypothesis."""
        exponent = 2 / 3 if conditional else 1 / 2
        return cls(x=x, m=m, delta=exponent, Delta=exponent, conditional=conditional)

    def split_point(self) -> Value:
        """y = x^δ."""
        x = _as_value(self.x)
        b = _backend(x)
        return b.exp(b.log(x) * self.delta)


def prime_floor_envelope(x: Value, y: Value, conditional: bool = False) -> Value:
    """
    h₁(x, y), the envelope of |Σ_{p<=y} ⌊x/p⌋ - x log log y - Mx|.

    Stated for 1.2 < y <= x, or 2 <= y <= x under the Riemann hypothesis.
    """
    x, y = _as_value(x), _as_value(y)
    _require(y <= x, "The floor-sum envelope needs y <= x")
    b = _backend(x, y)
    log_y = b.log(y)
    if conditional:
        _require(y >= 2, "The conditional floor-sum envelope needs y >= 2")
        return x / b.sqrt(y) * (3 * log_y + 4) + y
    _require(y > 1.2, "The floor-sum envelope needs y > 1.2")
    root_log_y = b.sqrt(log_y)
    return x * b.exp(-root_log_y / 3) * (6 * root_log_y + 19) + y


def h_envelopes(
    x: Value,
    y: Value,
    m: int = 1,
    delta: float = 0.5,
    Delta: float = 0.5,
    conditional: bool = False,
) -> Tuple[Value, Value, Value]:
    """
    The intermediate envelopes (h₁, h₂, h₃) for a split point y.

    h₁ bounds the prime floor sum Σ_{p<=y} ⌊x/p⌋, h₂ the quotient sum
    Σ_{n<=x/y} π(x/n), and h₃ the whole of Σ_{n<=x} ω(n). Taking y = x^(1/2)
    reproduces E_ω and, under the Riemann hypothesis, y = x^(2/3) reproduces Ê_ω.

    Args:
        x (Value): Upper end of the sum.
        y (Value): Split point.
        m (int): Expansion order. Defaults to 1.
        delta (float): Lower exponent with x^δ <= y. Defaults to 1/2.
        Delta (float): Upper exponent with y <= x^Δ. Defaults to 1/2.
        conditional (bool): Use the Riemann-hypothesis forms. Defaults to False.

    Returns:
        Tuple[Value, Value, Value]: h₁, h₂, h₃.

    Raises:
        DomainError: If (x, y, δ, Δ) leave the window 1.2 < x^δ <= y <= x^Δ < x.
    """
    EnvelopeParams(x=x, m=m, delta=delta, Delta=Delta, conditional=conditional)
    x, y = _as_value(x), _as_value(y)
    b = _backend(x, y)
    log_x, log_y = b.log(x), b.log(y)
    slack = 1e-12
    _require(b.exp(delta * log_x) * (1 - slack) <= y, "Split point is below x^delta")
    _require(y <= b.exp(Delta * log_x) * (1 + slack), "Split point is above x^Delta")
    _require(b.exp(delta * log_x) > 1.2, "Need x^delta > 1.2")
    _require(b.exp(Delta * log_x) < x, "Need x^Delta < x")
    if conditional:
        _require(y >= 2, "The conditional envelopes need y >= 2")

    f = math.factorial(m)
    inv = (1 / delta) ** (m + 1)
    common = f * inv * x / log_x ** (m + 1) + (1 + inv) * b.e * f * b.exp(Delta * log_x) / log_x

    h1 = prime_floor_envelope(x, y, conditional)
    if conditional:
        root_y = b.sqrt(y)
        h2 = common + 2 * x / root_y * (log_y + 2) + 15 * b.sqrt(x) * log_x
        h3 = h1 + h2 + x * log_y / root_y
    else:
        decay = b.exp(-b.sqrt(log_y) / 3)
        h2 = common + x * decay * (1 + log_x - log_y)
        h3 = h1 + h2 + x * decay
    return h1, h2, h3


ENVELOPES: Dict[str, Callable[[Value, int], Value]] = {
    "E_omega": envelope_E_omega,
    "E_Omega": envelope_E_Omega,
    "Ehat_omega": envelope_Ehat_omega,
    "Ehat_Omega": envelope_Ehat_Omega,
}


def envelope_grid(which: str, m: int, lo: float, hi: float, steps: int) -> pd.DataFrame:
    """
    Tabulate an envelope on a log-spaced grid.

    For the E envelopes the main-term column is x/log^(m+1) x, the order of
    their leading term; for "h" the grid is in z and the main term is 1.

    Args:
        which (str): One of E_omega, E_Omega, Ehat_omega, Ehat_Omega or h.
        m (int): Expansion order (ignored for h).
        lo (float): First grid point.
        hi (float): Last grid point.
        steps (int): Number of grid points.

    Returns:
        pd.DataFrame: Columns x, value, main_term, ratio.

    Raises:
        DomainError: If `which` is unknown or the grid leaves the domain.
    """
    grid = np.geomspace(lo, hi, steps)
    if which == "h":
        value = h_corollary(grid)
        main = np.ones_like(grid)
    elif which in ENVELOPES:
        value = ENVELOPES[which](grid, m)
        main = grid / np.log(grid) ** (m + 1)
    else:
        raise DomainError(f"Unknown envelope {which!r}; expected one of {sorted(ENVELOPES) + ['h']}")
    return pd.DataFrame({"x": grid, "value": value, "main_term": main, "ratio": value / main})
