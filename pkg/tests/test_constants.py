import math

import mpmath
import numpy as np
import pytest

from omegabounds.constants import (
    BigReal,
    ConstantError,
    PrecisionError,
    PrecisionShortfallError,
    a_coeff_derivative,
    a_coeff_integral,
    alpha0,
    alpha1,
    beta0,
    constant_set,
    ei,
    euler_gamma,
    li,
    li_array,
    m_double_prime,
    m_double_prime_direct,
    m_prime,
    meissel_mertens,
    mobius,
    totient,
    zeta_int,
)
from omegabounds.constants.coefficients import INTEGRAL_MAX_J, tail_cut
from omegabounds.constants.euler_maclaurin import fractional_part_tail
from omegabounds.utils import mp_string, to_fixed

# test vector, not used by the library
GAMMA_100 = (
    "0.5772156649015328606065120900824024310421593359399235988057672348848677267776646709369470632917467495"
)
M_50 = "0.26149721284764278375542683860869585905156664826120"
M_PRIME_50 = "1.03465388189743791161979429846463825467030798434439"


def test_bigreal_bracket():
    with mpmath.workdps(30):
        x = BigReal.exact_to(mpmath.mpf(2), 20)
    assert x.error_bound > 0
    assert x.contains(2)
    assert not x.contains(2.001)
    with pytest.raises(AssertionError):
        BigReal(mpmath.mpf(1), 10, mpmath.mpf(0))


def test_bigreal_to_json():
    doc = euler_gamma(10).to_json("gamma", 10)
    assert set(doc) == {"name", "value_string", "digits", "error_bound_string"}
    assert doc["name"] == "gamma" and doc["digits"] == "10"
    assert doc["value_string"].startswith("0.577215664")


@pytest.mark.parametrize("digits, expected", [(1, "0.6"), (10, "0.5772156649"), (50, GAMMA_100[:52])])
def test_euler_gamma(digits, expected):
    value = euler_gamma(digits)
    assert value.error_bound < mpmath.mpf(10) ** -digits
    if digits == 50:
        # the 51st decimal of γ is 3, so rounding keeps the first 50
        assert value.rounded(50) == expected
    else:
        assert value.rounded(digits) == expected


def test_euler_gamma_100_digits():
    value = euler_gamma(100)
    with mpmath.workdps(120):
        # the literal is truncated, not rounded, at 100 decimals
        assert abs(value.value - mpmath.mpf(GAMMA_100)) < mpmath.mpf(10) ** -100
        assert value.contains(+mpmath.euler)


def test_precision_limits():
    with pytest.raises(PrecisionError):
        euler_gamma(0)
    with pytest.raises(PrecisionError):
        meissel_mertens(61)
    with pytest.raises(PrecisionError):
        m_double_prime_direct(16)


@pytest.mark.parametrize("k, expected", [(2, "1.6449340668"), (3, "1.2020569032"), (10, "1.0009945751")])
def test_zeta_int(k, expected):
    assert zeta_int(k, 10).rounded(10) == expected


def test_zeta_int_large_k():
    value = zeta_int(200, 30)
    with mpmath.workdps(80):
        assert value.contains(1 + mpmath.mpf(2) ** -200)
        assert value.contains(mpmath.zeta(200))


def test_zeta_int_rejects_small_k():
    with pytest.raises(ConstantError):
        zeta_int(1, 10)


@pytest.mark.parametrize(
    "k, mu, phi", [(1, 1, 1), (2, -1, 1), (4, 0, 2), (6, 1, 2), (30, -1, 8), (36, 0, 12)]
)
def test_mobius_totient(k, mu, phi):
    assert mobius(k) == mu
    assert totient(k) == phi


def test_mertens_constants_50_digits():
    assert meissel_mertens(50).rounded(50) == M_50
    assert m_prime(50).rounded(50) == M_PRIME_50


def test_m_double_prime_routes_agree():
    assert m_double_prime(10).rounded(10) == "0.7731566690"
    direct = m_double_prime_direct(6)
    assert direct.rounded(6) == "0.773157"
    assert direct.agrees_with(m_double_prime(20))
    assert (meissel_mertens(20) + direct).agrees_with(m_prime(20))


def test_m_double_prime_direct_first_term():
    # only p = 2 below 3
    only_two = m_double_prime_direct(1, prime_limit=2)
    assert only_two.contains(0.5)


def test_m_double_prime_direct_reports_what_it_certifies():
    direct = m_double_prime_direct(6)
    assert direct.working_digits == 6
    assert direct.error_bound <= mpmath.mpf(10) ** -6
    # the capped prime limit cannot reach 1e-9, and the check runs before any sieving
    with pytest.raises(PrecisionShortfallError):
        m_double_prime_direct(9)
    coarse = m_double_prime_direct(9, prime_limit=1000)
    assert coarse.working_digits < 9
    assert coarse.agrees_with(m_double_prime(20))


def test_constant_set_invariants():
    cs = constant_set(30, m_max=3)
    assert cs.beta1 is cs.M_prime
    assert (cs.M + cs.M_double_prime).agrees_with(cs.M_prime)
    with mpmath.workdps(50):
        assert cs.alpha0.contains(mpmath.mpf(45) / 32 - mpmath.log(mpmath.log(32)))
        assert cs.beta0.contains(mpmath.mpf(1) / 2 - mpmath.log(mpmath.log(2)))
        assert cs.alpha1.contains(mpmath.mpf(8) / 7 - mpmath.log(mpmath.log(7)))
    assert [d["name"] for d in cs.to_json()][-3:] == ["a1", "a2", "a3"]
    assert float(alpha0(10)) < float(beta0(10))
    assert float(alpha1(10)) < float(cs.M_prime)


@pytest.mark.parametrize("constant, total, n", [(alpha0, 45, 32), (beta0, 1, 2), (alpha1, 8, 7)])
def test_witness_constants_ignore_global_precision(constant, total, n):
    with mpmath.workdps(15):
        value = constant(30)
        negated = -value
    with mpmath.workdps(80):
        exact = mpmath.mpf(total) / n - mpmath.log(mpmath.log(n))
        assert value.error_bound < mpmath.mpf(10) ** -30
        assert value.contains(exact)
        assert abs(value.value - exact) < mpmath.mpf(10) ** -35
        assert negated.contains(-exact)


def test_exact_to_and_mp_string_ignore_global_precision():
    with mpmath.workdps(60):
        pi = +mpmath.pi
    with mpmath.workdps(15):
        wrapped = BigReal.exact_to(pi, 50)
        text = mp_string(pi, 40)
    with mpmath.workdps(60):
        assert wrapped.contains(mpmath.pi)
    assert text.startswith("3.14159265358979323846264338327950288419")


def test_a1_is_gamma_minus_one():
    a1 = a_coeff_integral(1, 30)
    gamma = euler_gamma(40)
    with mpmath.workdps(60):
        assert abs(a1.value - (gamma.value - 1)) < mpmath.mpf(10) ** -30
    assert a1.value < 0
    assert a1.rounded(30) == "-0.422784335098467139393487909918"


def test_a2_matches_stieltjes_route():
    a2 = a_coeff_integral(2, 20)
    with mpmath.workdps(40):
        expected = mpmath.euler + mpmath.stieltjes(1) - 1
        assert abs(a2.value - expected) < mpmath.mpf(10) ** -18
    assert a2.rounded(10) == "-0.4956001806"


def test_a_coeff_integral_against_quadrature():
    a3 = a_coeff_integral(3, 20)
    with mpmath.workdps(25):
        head = mpmath.fsum(
            mpmath.quad(lambda t: (t - n) * mpmath.log(t) ** 2 / t**2, [n, n + 1]) for n in range(1, 200)
        )
        rest = -a3.value - head
        # 0 <= {t} <= 1 on [200, oo)
        ceiling = (mpmath.log(200) ** 2 + 2 * mpmath.log(200) + 2) / 200
    assert 0 < rest < ceiling


@pytest.mark.slow
@pytest.mark.parametrize("j", [1, 2, 3, 4, 5, 6])
def test_coefficient_routes_agree(j):
    integral = a_coeff_integral(j, 40)
    derivative = a_coeff_derivative(j, 40)
    assert abs(integral.value - derivative.value) < mpmath.mpf(10) ** -20
    assert integral.agrees_with(derivative)


@pytest.mark.parametrize("k", range(INTEGRAL_MAX_J))
def test_tail_cut_lies_past_the_peak(k):
    assert tail_cut(k) >= 64
    assert tail_cut(k) > math.exp(k / 2)


@pytest.mark.parametrize("k, cut", [(6, 16), (9, 20)])
def test_fractional_tail_bound_holds_before_the_peak(k, cut):
    far = 200
    with mpmath.workdps(40):
        eps = mpmath.mpf(10) ** -30
        near_value, near_bound = fractional_part_tail(k, cut, eps)
        far_value, far_bound = fractional_part_tail(k, far, eps)
        between = mpmath.fsum(
            mpmath.quad(lambda t: (t - n) * mpmath.log(t) ** k / t**2, [n, n + 1]) for n in range(cut, far)
        )
        assert near_bound < mpmath.mpf(10) ** -20
        assert abs(near_value - (between + far_value)) <= near_bound + far_bound + mpmath.mpf(10) ** -28


def test_coefficient_index_limits():
    with pytest.raises(ConstantError):
        a_coeff_integral(0, 10)
    with pytest.raises(ConstantError):
        a_coeff_integral(11, 10)
    with pytest.raises(ConstantError):
        a_coeff_derivative(7, 10)


def test_li_values():
    assert abs(li(2) - 1.04516378011749278) < 1e-14
    assert abs(li(10**6) - 78627.549159) < 1e-5
    assert li(10**6) > 78498
    big = li(2, 40)
    with mpmath.workdps(50):
        assert big.contains(mpmath.li(2))


def test_li_and_ei_poles():
    with pytest.raises(ConstantError):
        li(1)
    with pytest.raises(ConstantError):
        li(0)
    with pytest.raises(ConstantError):
        ei(0)
    assert ei(1) == pytest.approx(1.8951178163559368, rel=1e-15)


@pytest.mark.parametrize("x", [10.0, 1e3, 1e6])
def test_li_derivative(x):
    h = x * 1e-6
    slope = (li(x + h) - li(x - h)) / (2 * h)
    assert slope == pytest.approx(1 / math.log(x), rel=1e-6)


def test_li_array_matches_mpmath():
    t = np.geomspace(1.5, 1e12, 60)
    expected = np.array([float(mpmath.li(v)) for v in t])
    assert np.allclose(li_array(t), expected, rtol=1e-12, atol=0)
    with pytest.raises(ConstantError):
        li_array(np.array([0.5, 2.0]))


def test_integral_constant_identity():
    M = meissel_mertens(30).value
    with mpmath.workdps(40):
        value = M + mpmath.log(mpmath.log(2)) - mpmath.li(2) / 2
    assert to_fixed(value, 17) == "-0.62759759779276794"
