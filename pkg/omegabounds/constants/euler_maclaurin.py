"""
Euler–Maclaurin tails shared by the constant routines.

All routines here work in the caller's `mpmath.workdps` context and return a
(value, error_bound) pair. Power tails and the harmonic expansion have
completely monotone summands, so the first omitted correction bounds their
remainder. The fractional-part tail carries the Euler–Maclaurin remainder
integral explicitly; the derivatives of log^k t / t^2 take both signs.
"""

from typing import Callable, List, Tuple

import mpmath

from omegabounds.envelopes import antideriv_logpow

MAX_CORRECTION_TERMS: int = 4000


def _tail_corrections(
    derivative: Callable[[int], mpmath.mpf], eps: mpmath.mpf
) -> Tuple[mpmath.mpf, mpmath.mpf, int]:
    """
    Sum Σ_{r>=1} B_{2r}/(2r)! · derivative(2r - 1) until a term drops below eps.

    Returns:
        Tuple[mpf, mpf, int]: The partial sum, the magnitude of the first omitted
        term and its index r.
    """
    total = mpmath.mpf(0)
    for r in range(1, MAX_CORRECTION_TERMS):
        term = mpmath.bernoulli(2 * r) / mpmath.factorial(2 * r) * derivative(2 * r - 1)
        if abs(term) < eps:
            return total, abs(term), r
        total += term
    raise ArithmeticError("Euler–Maclaurin corrections did not fall below the target")


def harmonic_gamma(n: int, eps: mpmath.mpf) -> Tuple[mpmath.mpf, mpmath.mpf]:
    """γ = H_n - log n - 1/(2n) + Σ B_{2r}/(2r n^{2r}), bounded by the first omitted term."""
    head = mpmath.fsum(mpmath.mpf(1) / k for k in range(1, n + 1))
    head -= mpmath.log(n) + mpmath.mpf(1) / (2 * n)
    total = mpmath.mpf(0)
    for r in range(1, MAX_CORRECTION_TERMS):
        term = mpmath.bernoulli(2 * r) / (2 * r * mpmath.mpf(n) ** (2 * r))
        if abs(term) < eps:
            return head + total, abs(term)
        total += term
    raise ArithmeticError("Euler–Maclaurin corrections did not fall below the target")


def power_tail(k: int, n: int, eps: mpmath.mpf) -> Tuple[mpmath.mpf, mpmath.mpf]:
    """
    Σ_{m>=n} m^(-k) for an integer k >= 2.

    The leading terms are the integral n^(1-k)/(k-1) and the endpoint f(n)/2;
    the k-th derivative of t^(-k) supplies the corrections.

    Args:
        k (int): Exponent, at least 2.
        n (int): First summation index, at least 1.
        eps (mpf): Stop once a correction drops below this.

    Returns:
        Tuple[mpf, mpf]: Tail value and remainder bound.
    """
    nn = mpmath.mpf(n)
    lead = nn ** (1 - k) / (k - 1) + nn ** (-k) / 2

    # d^q/dt^q t^(-k) = (-1)^q (k)_q t^(-k-q); the formula carries -f^(2r-1)
    def derivative(q: int) -> mpmath.mpf:
        return mpmath.rf(k, q) * nn ** (-k - q)

    corrections, bound, _ = _tail_corrections(derivative, eps)
    return lead + corrections, bound


def _differentiate(c: List[mpmath.mpf], a: int) -> List[mpmath.mpf]:
    # d/dt [t^(-a) L^i] = t^(-a-1) (-a L^i + i L^(i-1))
    nxt = [mpmath.mpf(0)] * len(c)
    for i, ci in enumerate(c):
        if ci == 0:
            continue
        nxt[i] -= a * ci
        if i > 0:
            nxt[i - 1] += i * ci
    return nxt


def logpow_derivative_coefficients(k: int, order: int) -> List[List[mpmath.mpf]]:
    """
    Coefficients of the derivatives of f(t) = log^k(t) / t^2.

    The q-th derivative is t^(-2-q) · Σ_i c[q][i] log^i t.

    Args:
        k (int): Power of the logarithm.
        order (int): Highest derivative order to produce.

    Returns:
        List[List[mpf]]: c[q] for q = 0..order, each of length k + 1.
    """
    coefficients = [[mpmath.mpf(0)] * k + [mpmath.mpf(1)]]
    for q in range(order):
        coefficients.append(_differentiate(coefficients[-1], 2 + q))
    return coefficients


def fractional_part_tail(k: int, n: int, eps: mpmath.mpf) -> Tuple[mpmath.mpf, mpmath.mpf]:
    """
    ∫_n^∞ {t} log^k(t) / t^2 dt for an integer cut point n >= 2.

    Writing {t} = 1/2 + ({t} - 1/2) gives -A_k(n)/2 for the constant half,
    where A_k is the antiderivative of log^k t / t^2, and the sawtooth part
    expands into the even Bernoulli corrections -Σ B_{2r}/(2r)! · f^(2r-2)(n).
    Stopping before index r leaves the term at r plus
    ∫ B̃_{2r}(t) f^(2r-1)(t) dt / (2r)!, and |B̃_{2r}| <= |B_{2r}| bounds that
    integral by |B_{2r}|/(2r)! · ∫_n^∞ |f^(2r-1)(t)| dt.

    Args:
        k (int): Power of the logarithm.
        n (int): Integer cut point.
        eps (mpf): Stop once a correction drops below this.

    Returns:
        Tuple[mpf, mpf]: Tail value and remainder bound.
    """
    nn = mpmath.mpf(n)
    log_n = mpmath.log(nn)
    half = -antideriv_logpow(k, nn) / 2
    coefficients = logpow_derivative_coefficients(k, 0)

    def extend(q: int) -> List[mpmath.mpf]:
        while len(coefficients) <= q:
            coefficients.append(_differentiate(coefficients[-1], 1 + len(coefficients)))
        return coefficients[q]

    def evaluate(q: int) -> mpmath.mpf:
        return nn ** (-2 - q) * mpmath.fsum(ci * log_n**i for i, ci in enumerate(extend(q)))

    # _tail_corrections asks for order 2r-1; this integrand needs f^(2r-2)
    corrections, omitted, r = _tail_corrections(lambda q: -evaluate(q - 1), eps)
    weight = abs(mpmath.bernoulli(2 * r)) / mpmath.factorial(2 * r)
    remainder = weight * abs_derivative_integral(extend(2 * r - 1), 2 * r - 1, n)
    return half + corrections, omitted + remainder


def abs_derivative_integral(c: List[mpmath.mpf], q: int, n: int) -> mpmath.mpf:
    """
    Upper bound for ∫_n^∞ |t^(-2-q) Σ_i c[i] log^i t| dt.

    Each monomial integrates in closed form: with u = log t,
    ∫_n^∞ log^i(t) t^(-2-q) dt = Γ(i + 1, (1 + q) log n) / (1 + q)^(i + 1).
    """
    s = 1 + q
    x = s * mpmath.log(n)
    return mpmath.fsum(
        abs(ci) * mpmath.gammainc(i + 1, x) / mpmath.mpf(s) ** (i + 1)
        for i, ci in enumerate(c)
        if ci != 0
    )
