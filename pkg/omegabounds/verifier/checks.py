"""
Spot checks of the explicit formulas at chosen x, one CheckRecord each.

Values are computed in mpmath at `digits` working digits and reported as
decimal strings; exact integer sums come from the sieve.
"""

import functools
import math
from typing import Dict, Optional

import mpmath
import numpy as np

from omegabounds.constants import (
    ConstantSet,
    alpha0,
    alpha1,
    beta0,
    constant_set,
    euler_gamma,
    li,
    m_prime,
    meissel_mertens,
)
from omegabounds.envelopes import (
    envelope_E_omega,
    envelope_E_Omega,
    envelope_Ehat_omega,
    envelope_Ehat_Omega,
    h_corollary,
    h_envelopes,
    prime_floor_envelope,
    tail_integral_Rhat,
)
from omegabounds.identities import IdentityError
from omegabounds.sieve import PrimeTable, prefix_scan, prime_count_many, primes_up_to
from omegabounds.utils import mp_string, to_fixed
from omegabounds.verifier.report import CHECK_CLAIMS, CheckRecord

QUOTED_INTEGRAL_CONSTANT: str = "-0.62759759779276794"
QUOTED_THRESHOLDS: Dict[str, str] = {"omega_lower": "102841.56", "omega_upper": "2.48", "big_omega_lower": "8.23"}
THRESHOLD_TOLERANCE: str = "0.01"
X0: int = 1400387903260
INEQ_33X_LIMIT: int = 155652
H_BRACKET = ("119.02511", "119.02510")
CROSSING_LOG_X: int = 14167
COROLLARY_CONSTANTS: Dict[tuple, int] = {(False, False): 5, (False, True): 6, (True, False): 11, (True, True): 12}


class CheckError(ValueError):
    """Raised for an unknown check or one missing its parameters."""


@functools.lru_cache(maxsize=None)
def _constants(digits: int, m_max: int) -> ConstantSet:
    return constant_set(digits, m_max)


def _main_term(x: mpmath.mpf, lead: mpmath.mpf, cs: ConstantSet, m: int) -> mpmath.mpf:
    log_x = mpmath.log(x)
    expansion = mpmath.fsum(a.value / log_x**j for j, a in enumerate(cs.a[:m], start=1))
    return x * mpmath.log(log_x) + lead * x + x * expansion


def check_main_term(
    x: int,
    m: int = 1,
    conditional: bool = False,
    big_omega: bool = False,
    digits: int = 30,
    progress_bar: bool = False,
) -> CheckRecord:
    """
    Containment of the sieve sum in its explicit envelope.

    Computes D = |S(x) - (x log log x + Mx + x Σ_{j<=m} a_j/log^j x)| for the ω
    sum (M' replaces M for Ω) and asserts D <= E(x, m), with E the
    unconditional or Riemann-hypothesis envelope. For m = 1 it also records
    whether D fits under c·x/log² x with the constant c of the matching
    order-two corollary; that is reported, not asserted.

    Args:
        x (int): Upper end of the sum, x >= 3.
        m (int): Expansion order. Defaults to 1.
        conditional (bool): Compare against Ê instead of E. Defaults to False.
        big_omega (bool): Check Σ Ω(n) instead of Σ ω(n). Defaults to False.
        digits (int): Working precision. Defaults to 30.
        progress_bar (bool): Whether to show sieve progress.

    Returns:
        CheckRecord: ENVELOPE_M1 record with the tightness ratio D/E.
    """
    state = prefix_scan(x, progress_bar=progress_bar)
    total = state.sum_big_omega if big_omega else state.sum_omega
    cs = _constants(digits, m)
    envelope = {
        (False, False): envelope_E_omega,
        (False, True): envelope_E_Omega,
        (True, False): envelope_Ehat_omega,
        (True, True): envelope_Ehat_Omega,
    }[(conditional, big_omega)]

    with mpmath.workdps(digits + 10):
        X = mpmath.mpf(x)
        lead = (cs.M_prime if big_omega else cs.M).value
        main = _main_term(X, lead, cs, m)
        deviation = abs(total - main)
        bound = envelope(X, m)
        contained = deviation <= bound
        a1_shape = abs(cs.a[0].value - (cs.gamma.value - 1)) <= cs.a[0].error_bound + cs.gamma.error_bound

        values = {
            "sum": str(total),
            "main_term": mp_string(main, 20),
            "deviation": mp_string(deviation, 12),
            "envelope": mp_string(bound, 12),
        }
        notes = []
        if m == 1:
            c = COROLLARY_CONSTANTS[(conditional, big_omega)]
            corollary = c * X / mpmath.log(X) ** 2
            values["corollary_bound"] = mp_string(corollary, 12)
            fits = deviation <= corollary
            notes.append(f"deviation {'fits' if fits else 'exceeds'} {c}x/log^2 x at this x")
        ratio = float(deviation / bound)

    return CheckRecord(
        claim_id="ENVELOPE_M1",
        passed=bool(contained and a1_shape),
        parameters={"x": str(x), "m": str(m), "conditional": str(conditional), "big_omega": str(big_omega)},
        values=values,
        ratio=ratio,
        notes=notes,
    )


def mertens_sum_check(y: int, digits: int = 30, table: Optional[PrimeTable] = None) -> CheckRecord:
    """
    |Σ_{p<=y} 1/p - log log y - M| <= (3 log y + 4)/√y.

    The reciprocal sum is compensated (math.fsum) over the sieved primes.
    """
    table = table if table is not None else primes_up_to(max(y, 2))
    primes = table.primes[: int(np.searchsorted(table.primes, y, side="right"))]
    reciprocal_sum = math.fsum((1.0 / primes.astype(np.float64)).tolist())
    M = meissel_mertens(digits).value
    with mpmath.workdps(digits + 10):
        Y = mpmath.mpf(y)
        deviation = abs(mpmath.mpf(reciprocal_sum) - mpmath.log(mpmath.log(Y)) - M)
        bound = (3 * mpmath.log(Y) + 4) / mpmath.sqrt(Y)
        passed = deviation <= bound
        ratio = float(deviation / bound)
    return CheckRecord(
        claim_id="MERTENS_SUM",
        passed=bool(passed),
        parameters={"y": str(y)},
        values={
            "reciprocal_sum": repr(reciprocal_sum),
            "deviation": mp_string(deviation, 12),
            "bound": mp_string(bound, 12),
        },
        ratio=ratio,
    )


def _gap_33(x: int) -> mpmath.mpf:
    X = mpmath.mpf(x)
    return mpmath.sqrt(X) - 33 * mpmath.log(X)


def ineq_33x_crossing(limit: int = INEQ_33X_LIMIT) -> CheckRecord:
    """
    Least integer x* past the dip with √x > 33 log x, i.e. 33√x/log x < x/log² x.

    √x - 33 log x is increasing for x > 66², so integer bisection on
    [66², 10^6] finds the crossing.
    """
    with mpmath.workdps(30):
        lo, hi = 66**2, 10**6
        assert _gap_33(lo) < 0 < _gap_33(hi), "The crossing is not bracketed"
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if _gap_33(mid) > 0:
                hi = mid
            else:
                lo = mid
        x_star = hi
        fails_before = _gap_33(x_star - 1) <= 0
        fails_at_1e4 = _gap_33(10**4) < 0
        L = mpmath.log(mpmath.mpf(limit))
        holds_at_limit = 33 * mpmath.sqrt(limit) / L < limit / L**2
        values = {
            "x_star": str(x_star),
            "gap_at_x_star": mp_string(_gap_33(x_star), 10),
            "gap_before_x_star": mp_string(_gap_33(x_star - 1), 10),
            "gap_at_10000": mp_string(_gap_33(10**4), 10),
        }
    return CheckRecord(
        claim_id="INEQ_33X",
        passed=bool(x_star <= limit and fails_before and fails_at_1e4 and holds_at_limit),
        parameters={"limit": str(limit)},
        values=values,
    )


def pi_li_integral_check(y: int = 10**8, digits: int = 30, progress_bar: bool = False) -> CheckRecord:
    """
    ∫_2^∞ (π(t) - li(t))/t² dt by an identity and by a sieve up to y.

    The identity gives M + log log 2 - li(2)/2. Up to y the integral is exact in
    terms of the sieve: Σ_{p<=y} 1/p - π(y)/y + li(y)/y - li(2)/2 - log log y
    + log log 2, and the rest is at most ∫_y^∞ R̂(t)/t² dt in absolute value.
    """
    M = meissel_mertens(digits).value
    table = primes_up_to(y, progress_bar=progress_bar)
    reciprocal_sum = math.fsum((1.0 / table.primes.astype(np.float64)).tolist())
    with mpmath.workdps(digits + 10):
        li2 = mpmath.li(2)
        identity = M + mpmath.log(mpmath.log(2)) - li2 / 2
        Y = mpmath.mpf(y)
        truncated = (
            mpmath.mpf(reciprocal_sum)
            - mpmath.mpf(len(table)) / Y
            + mpmath.li(Y) / Y
            - li2 / 2
            - mpmath.log(mpmath.log(Y))
            + mpmath.log(mpmath.log(2))
        )
        tail = tail_integral_Rhat(Y)
        inside = abs(identity - truncated) <= tail
        rounded = to_fixed(identity, 17)
    return CheckRecord(
        claim_id="PI_LI_INTEGRAL",
        passed=bool(inside and rounded == QUOTED_INTEGRAL_CONSTANT),
        parameters={"y": str(y)},
        values={
            "identity_route": rounded,
            "quadrature_route": mp_string(truncated, 12),
            "bracket_half_width": mp_string(tail, 6),
        },
        ratio=float(abs(identity - truncated) / tail),
    )


def thresholds_check(digits: int = 40) -> CheckRecord:
    """
    The thresholds quoted in the proofs of the global bounds, and x₀.

    Recomputes e^(1.133/(M - α₀)), e^(1/√(2(β₀ - M))) and e^(1.175/(M' - α₁))
    against their quoted decimals, then checks that x₀ = 1400387903260 is the
    least integer with Ê_ω(x, 1) < 11x/log² x and that (1 - γ)x/log x beats
    11x/log² x there. The quoted x₀ > e^(12/(1-γ)) is evaluated and, if false,
    listed as a discrepancy without failing the record.
    """
    M = meissel_mertens(digits).value
    M_prime = m_prime(digits).value
    gamma = euler_gamma(digits).value
    a0, b0, a1 = alpha0(digits).value, beta0(digits).value, alpha1(digits).value

    discrepancies = []
    with mpmath.workdps(digits + 10):
        computed = {
            "omega_lower": mpmath.exp(mpmath.mpf("1.133") / (M - a0)),
            "omega_upper": mpmath.exp(1 / mpmath.sqrt(2 * (b0 - M))),
            "big_omega_lower": mpmath.exp(mpmath.mpf("1.175") / (M_prime - a1)),
        }
        tolerance = mpmath.mpf(THRESHOLD_TOLERANCE)
        thresholds_ok = all(abs(computed[k] - mpmath.mpf(q)) <= tolerance for k, q in QUOTED_THRESHOLDS.items())

        def below_11(x: int) -> bool:
            X = mpmath.mpf(x)
            return envelope_Ehat_omega(X, 1) < 11 * X / mpmath.log(X) ** 2

        holds_at_x0 = below_11(X0)
        fails_before_x0 = not below_11(X0 - 1)
        log_x0 = mpmath.log(X0)
        main_dominates = (1 - gamma) * log_x0 > 11
        exponent_11 = 11 / (1 - gamma)
        exponent_12 = 12 / (1 - gamma)
        if not log_x0 > exponent_12:
            discrepancies.append(
                f"x0 > e^(12/(1-gamma)) is false: log x0 = {mp_string(log_x0, 8)} "
                f"< 12/(1-gamma) = {mp_string(exponent_12, 8)}"
            )

        values = {f"threshold_{k}": mp_string(v, 12) for k, v in computed.items()}
        values.update(
            {
                "log_x0": mp_string(log_x0, 12),
                "exponent_11_over_1_minus_gamma": mp_string(exponent_11, 12),
                "exponent_12_over_1_minus_gamma": mp_string(exponent_12, 12),
                "x0_holds": str(holds_at_x0),
                "x0_minus_1_fails": str(fails_before_x0),
                "x0_above_e_11_over_1_minus_gamma": str(bool(log_x0 > exponent_11)),
            }
        )
    return CheckRecord(
        claim_id="THRESHOLDS",
        passed=bool(thresholds_ok and holds_at_x0 and fails_before_x0 and main_dominates),
        parameters={"x0": str(X0), "tolerance": THRESHOLD_TOLERANCE},
        values=values,
        discrepancies=discrepancies,
    )


def h_crossing(digits: int = 30) -> CheckRecord:
    """
    The crossing of h(z) = 1 near z = 119.025.

    Checks the bracket h(119.02511) < 1 < h(119.02510) at `digits` digits,
    that h decreases on the grid [24, 200] with step 0.01, locates the root,
    and confirms E_ω(x, 1) < 5x/log² x at x = e^14167 directly. Also checks
    that (1 - γ)x/log x > 5x/log² x just above log x = 5/(1 - γ) and not just
    below it.
    """
    grid = np.arange(2400, 20001) / 100.0
    on_grid = h_corollary(grid)
    decreasing = bool(np.all(np.diff(on_grid) < 0))
    positive = bool(np.all(on_grid > 0))

    gamma = euler_gamma(digits).value
    with mpmath.workdps(digits):
        below, above = (h_corollary(mpmath.mpf(z)) for z in H_BRACKET)
        bracket = below < 1 < above
        root = mpmath.findroot(
            lambda z: h_corollary(z) - 1, (mpmath.mpf(H_BRACKET[1]), mpmath.mpf(H_BRACKET[0])), solver="illinois"
        )
        X = mpmath.exp(CROSSING_LOG_X)
        L = mpmath.mpf(CROSSING_LOG_X)
        sharp = envelope_E_omega(X, 1) - 4 * X / L**2 < X / L**2

        start = 5 / (1 - gamma)
        step = mpmath.mpf("0.01")
        above_start = (1 - gamma) / (start + step) > 5 / (start + step) ** 2
        below_start = (1 - gamma) / (start - step) > 5 / (start - step) ** 2

        values = {
            "h_at_119.02511": mp_string(below, 15),
            "h_at_119.02510": mp_string(above, 15),
            "root": mp_string(root, 15),
            "log_x_at_root": mp_string(root**2, 15),
            "log_x_threshold_5_over_1_minus_gamma": mp_string(start, 12),
        }
    return CheckRecord(
        claim_id="H_CROSSING",
        passed=bool(bracket and decreasing and positive and sharp and above_start and not below_start),
        parameters={"digits": str(digits), "grid": "24:200:0.01"},
        values=values,
    )


def prime_floor_sum_check(x: int, y: int, conditional: bool = False, digits: int = 30) -> CheckRecord:
    """|Σ_{p<=y} ⌊x/p⌋ - x log log y - Mx| <= h₁(x, y) (or its conditional form)."""
    if not 2 <= y <= x:
        raise IdentityError(f"The floor sum is checked for 2 <= y <= x, got x={x}, y={y}")
    table = primes_up_to(y)
    total = int(np.sum(x // table.primes, dtype=np.int64))
    M = meissel_mertens(digits).value
    with mpmath.workdps(digits + 10):
        X, Y = mpmath.mpf(x), mpmath.mpf(y)
        deviation = abs(total - X * mpmath.log(mpmath.log(Y)) - M * X)
        bound = prime_floor_envelope(X, Y, conditional)
        passed = deviation <= bound
        ratio = float(deviation / bound)
    return CheckRecord(
        claim_id="PRIME_FLOOR_SUM",
        passed=bool(passed),
        parameters={"x": str(x), "y": str(y), "conditional": str(conditional)},
        values={"sum": str(total), "deviation": mp_string(deviation, 12), "bound": mp_string(bound, 12)},
        ratio=ratio,
    )


def pi_quotient_sum_check(
    x: int, y: int, m: int = 1, conditional: bool = False, digits: int = 30
) -> CheckRecord:
    """
    |Σ_{n<=x/y} π(x/n) - (⌊x/y⌋ li(y) + x(log log x - log log y) + x Σ a_j/log^j x)| <= h₂(x, y).

    δ = Δ = log y / log x, so y sits exactly at both ends of the split window.
    """
    if not 2 <= y < x:
        raise IdentityError(f"The quotient sum is checked for 2 <= y < x, got x={x}, y={y}")
    table = primes_up_to(x)
    q = x // y
    total = int(np.sum(prime_count_many(x // np.arange(1, q + 1, dtype=np.int64), table), dtype=np.int64))
    cs = _constants(digits, m)
    with mpmath.workdps(digits + 10):
        X, Y = mpmath.mpf(x), mpmath.mpf(y)
        exponent = float(mpmath.log(Y) / mpmath.log(X))
        log_x = mpmath.log(X)
        expansion = mpmath.fsum(a.value / log_x**j for j, a in enumerate(cs.a[:m], start=1))
        main = q * li(Y, digits).value + X * (mpmath.log(log_x) - mpmath.log(mpmath.log(Y))) + X * expansion
        deviation = abs(total - main)
        _, bound, _ = h_envelopes(X, Y, m, exponent, exponent, conditional)
        passed = deviation <= bound
        ratio = float(deviation / bound)
    return CheckRecord(
        claim_id="PI_QUOTIENT_SUM",
        passed=bool(passed),
        parameters={"x": str(x), "y": str(y), "m": str(m), "conditional": str(conditional)},
        values={"sum": str(total), "deviation": mp_string(deviation, 12), "bound": mp_string(bound, 12)},
        ratio=ratio,
    )


def run_check(
    claim: str,
    x: Optional[int] = None,
    y: Optional[int] = None,
    m: int = 1,
    conditional: bool = False,
    big_omega: bool = False,
    digits: int = 30,
    progress_bar: bool = False,
) -> CheckRecord:
    """
    Dispatch one spot check by its claim id.

    Args:
        claim (str): One of CHECK_CLAIMS.
        x (Optional[int]): Evaluation point for ENVELOPE_M1, PRIME_FLOOR_SUM and PI_QUOTIENT_SUM.
        y (Optional[int]): Prime cut for MERTENS_SUM and the split sums; sieve limit for PI_LI_INTEGRAL.
        m (int): Expansion order.
        conditional (bool): Use the envelopes that assume the Riemann hypothesis.
        big_omega (bool): Check the Ω form instead of the ω form.
        digits (int): Working digits.
        progress_bar (bool): Whether to show sieve progress.

    Returns:
        CheckRecord: The outcome.

    Raises:
        CheckError: If the claim is unknown or a parameter it needs is missing.
    """
    if claim not in CHECK_CLAIMS:
        raise CheckError(f"Unknown check {claim!r}; expected one of {list(CHECK_CLAIMS)}")
    given = {"x": x, "y": y}

    def need(*names: str) -> None:
        missing = [f"--{name}" for name in names if given[name] is None]
        if missing:
            raise CheckError(f"{claim} needs {' '.join(missing)}")

    if claim == "ENVELOPE_M1":
        need("x")
        return check_main_term(x, m, conditional, big_omega, digits, progress_bar)
    if claim == "MERTENS_SUM":
        need("y")
        return mertens_sum_check(y, digits)
    if claim == "INEQ_33X":
        return ineq_33x_crossing()
    if claim == "PI_LI_INTEGRAL":
        return pi_li_integral_check(y or 10**8, digits, progress_bar)
    if claim == "THRESHOLDS":
        return thresholds_check(max(digits, 40))
    if claim == "H_CROSSING":
        return h_crossing(digits)
    need("x", "y")
    if claim == "PRIME_FLOOR_SUM":
        return prime_floor_sum_check(x, y, conditional, digits)
    return pi_quotient_sum_check(x, y, m, conditional, digits)
