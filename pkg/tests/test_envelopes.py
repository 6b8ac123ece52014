import math

import mpmath
import numpy as np
import pytest

from omegabounds.constants import euler_gamma, m_double_prime
from omegabounds.envelopes import (
    DomainError,
    EnvelopeParams,
    antideriv_logpow,
    envelope_E_omega,
    envelope_E_Omega,
    envelope_Ehat_omega,
    envelope_Ehat_Omega,
    envelope_grid,
    h_corollary,
    h_envelopes,
    kappa,
    prime_floor_envelope,
    remainder_R,
    remainder_Rhat,
    tail_integral_R,
    tail_integral_Rhat,
)

E4 = math.exp(4)


# Independent transcriptions of the formulas, written term by term.


def naive_E_omega(x, m):
    L = math.log(x)
    f = math.factorial(m)
    return (
        2 ** (m + 1) * f * x / L ** (m + 1)
        + (2 ** (m + 1) + 1) * math.e * f * math.sqrt(x) / L
        + x * math.exp(-(math.sqrt(2) / 6) * math.sqrt(L)) * (0.5 * L + 3 * math.sqrt(2) * math.sqrt(L) + 21)
        + math.sqrt(x)
    )


def naive_Ehat_omega(x, m):
    L = math.log(x)
    f = math.factorial(m)
    c = (3 / 2) ** (m + 1)
    t = x ** (2 / 3)
    return c * f * x / L ** (m + 1) + 4 * t * L + 9 * t + (c + 1) * math.e * f * t / L + 15 * math.sqrt(x) * L


def naive_h1(x, y):
    s = math.sqrt(math.log(y))
    return x * math.exp(-s / 3) * (6 * s + 19) + y


def naive_h(z):
    r = math.sqrt(2)
    return z**4 * math.exp(-r * z / 6) * (z**2 / 2 + 3 * r * z + 21) + z**2 * math.exp(-(z**2) / 2) * (
        z**2 + 5 * math.e
    )


def test_remainder_R():
    assert remainder_R(math.exp(9)) == pytest.approx(math.exp(8), rel=1e-14)
    assert remainder_R(229) == pytest.approx(229 * math.exp(-math.sqrt(math.log(229)) / 3), rel=1e-15)
    x = np.geomspace(1.3, 1e12, 200)
    assert np.all(np.diff(remainder_R(x) / x) < 0)
    with pytest.raises(DomainError):
        remainder_R(1.2)


def test_remainder_Rhat():
    assert remainder_Rhat(4) == pytest.approx(2 * math.log(4), rel=1e-15)
    assert remainder_Rhat(2657) == pytest.approx(406.4385, rel=1e-6)
    x = np.geomspace(2, 1e12, 50)
    assert np.all(remainder_Rhat(x) >= np.sqrt(x) * np.log(x) / (8 * math.pi))
    with pytest.raises(DomainError):
        remainder_Rhat(1.9)


def test_tail_integral_closed_forms():
    assert tail_integral_R(math.exp(9)) == pytest.approx(36 / math.e, rel=1e-14)
    assert tail_integral_Rhat(math.exp(2)) == pytest.approx(8 / math.e, rel=1e-14)
    assert tail_integral_Rhat(1e4) == pytest.approx(0.2242, abs=1e-4)
    y = np.geomspace(2, 1e12, 100)
    assert np.all(np.diff(tail_integral_R(y)) < 0)
    assert np.all(np.diff(tail_integral_Rhat(y)) < 0)


@pytest.mark.parametrize("y", [1e2, 1e4, 1e6])
def test_tail_integrals_against_quadrature(y):
    with mpmath.workdps(20):
        # substitute t = e^u to tame the infinite range
        r = mpmath.quad(lambda u: mpmath.exp(-mpmath.sqrt(u) / 3), [math.log(y), mpmath.inf])
        r_hat = mpmath.quad(lambda u: mpmath.sqrt(mpmath.exp(u)) * u / mpmath.exp(u), [math.log(y), mpmath.inf])
    assert tail_integral_R(y) == pytest.approx(float(r), rel=1e-6)
    assert tail_integral_Rhat(y) == pytest.approx(float(r_hat), rel=1e-6)


def test_antideriv_logpow_examples():
    assert antideriv_logpow(0, 2.0) == -0.5
    assert antideriv_logpow(1, math.e) == pytest.approx(-2 / math.e, rel=1e-15)
    with pytest.raises(DomainError):
        antideriv_logpow(-1, 2.0)


@pytest.mark.parametrize("n", range(7))
@pytest.mark.parametrize("t", [1.5, 10.0, 1e4])
def test_antideriv_logpow_differentiates_back(n, t):
    with mpmath.workdps(40):
        T = mpmath.mpf(t)
        slope = mpmath.diff(lambda s: antideriv_logpow(n, s), T)
        expected = mpmath.log(T) ** n / T**2
        assert abs(slope - expected) <= mpmath.mpf(10) ** -20 * (1 + abs(expected))
        # the float backend agrees with the mpmath one on the value itself
        assert antideriv_logpow(n, t) == pytest.approx(float(antideriv_logpow(n, T)), rel=1e-13)


@pytest.mark.parametrize("x", [E4, 1e4, 1e8, 1e12])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_envelopes_match_independent_formulas(x, m):
    assert envelope_E_omega(x, m) == pytest.approx(naive_E_omega(x, m), rel=1e-12)
    assert envelope_Ehat_omega(x, m) == pytest.approx(naive_Ehat_omega(x, m), rel=1e-12)
    diff = 33 * math.sqrt(x) / math.log(x)
    assert envelope_E_Omega(x, m) - envelope_E_omega(x, m) == pytest.approx(diff, rel=1e-9)
    assert envelope_Ehat_Omega(x, m) - envelope_Ehat_omega(x, m) == pytest.approx(diff, rel=1e-9)


def test_envelopes_in_mpmath_agree_with_double():
    with mpmath.workdps(30):
        for m in (1, 2):
            assert float(envelope_E_omega(mpmath.mpf(1e8), m)) == pytest.approx(envelope_E_omega(1e8, m), rel=1e-13)
            assert float(envelope_Ehat_Omega(mpmath.mpf(1e8), m)) == pytest.approx(
                envelope_Ehat_Omega(1e8, m), rel=1e-13
            )


def test_envelope_domain():
    with pytest.raises(DomainError):
        envelope_E_omega(2.7, 1)
    with pytest.raises(DomainError):
        envelope_Ehat_omega(10.0, 0)
    with pytest.raises(DomainError):
        envelope_E_omega(np.array([1.0, 10.0]), 1)


def test_e_omega_sharpness_at_huge_x():
    with mpmath.workdps(30):
        L = mpmath.mpf(14167)
        x = mpmath.exp(L)
        assert envelope_E_omega(x, 1) - 4 * x / L**2 < x / L**2


def test_h_corollary():
    assert h_corollary(mpmath.mpf("119.02511")) < 1 < h_corollary(mpmath.mpf("119.02510"))
    grid = np.arange(2400, 20001) / 100.0
    values = h_corollary(grid)
    assert np.all(values > 0)
    assert np.all(np.diff(values) < 0)
    for z in (0.5, 24.0, 119.0):
        assert h_corollary(z) == pytest.approx(naive_h(z), rel=1e-13)
    with pytest.raises(DomainError):
        h_corollary(0.0)


def test_main_term_beats_corollary_bound_past_threshold():
    gamma = float(euler_gamma(20))
    start = 5 / (1 - gamma)
    for L in (start + 0.01, start + 1, start + 100):
        assert (1 - gamma) / L > 5 / L**2
    assert not (1 - gamma) / (start - 0.01) > 5 / (start - 0.01) ** 2


def test_kappa():
    assert kappa(4.0) == pytest.approx(50 / math.log(4), rel=1e-15)
    assert kappa(4.9) == kappa(4.0)
    assert kappa(1e6) == pytest.approx(25000 / math.log(1e6), rel=1e-15)
    m2 = float(m_double_prime(10))
    x = np.arange(2, 10**6 + 1, dtype=np.float64)
    assert np.all(kappa(x) + m2 < 33 * np.sqrt(x) / np.log(x))
    with pytest.raises(DomainError):
        kappa(1.5)


def test_envelope_params():
    p = EnvelopeParams.default(1e6)
    assert (p.delta, p.Delta) == (0.5, 0.5)
    assert p.split_point() == pytest.approx(1e3, rel=1e-12)
    assert EnvelopeParams.default(1e6, conditional=True).delta == 2 / 3
    with pytest.raises(DomainError):
        EnvelopeParams(x=1e6, delta=0.6, Delta=0.5)
    with pytest.raises(DomainError):
        EnvelopeParams(x=1e6, m=0)
    with pytest.raises(DomainError):
        EnvelopeParams(x=2.0)


@pytest.mark.parametrize("x", [E4, 1e6, 1e10])
@pytest.mark.parametrize("m", [1, 2])
def test_h3_specializes_to_the_theorem_envelopes(x, m):
    _, _, h3 = h_envelopes(x, math.sqrt(x), m, 0.5, 0.5)
    assert h3 == pytest.approx(envelope_E_omega(x, m), rel=1e-12)
    y = x ** (2 / 3)
    if y >= 2:
        _, _, h3_rh = h_envelopes(x, y, m, 2 / 3, 2 / 3, conditional=True)
        assert h3_rh == pytest.approx(envelope_Ehat_omega(x, m), rel=1e-12)


def test_h1_matches_independent_formula():
    h1, _, _ = h_envelopes(1e6, 1e3)
    assert h1 == pytest.approx(naive_h1(1e6, 1e3), rel=1e-14)
    assert prime_floor_envelope(1e6, 1e3) == h1
    conditional = prime_floor_envelope(1e6, 1e3, conditional=True)
    assert conditional == pytest.approx(1e6 / math.sqrt(1e3) * (3 * math.log(1e3) + 4) + 1e3, rel=1e-14)


def test_h_envelopes_window():
    with pytest.raises(DomainError):
        h_envelopes(1e6, 500.0)
    with pytest.raises(DomainError):
        h_envelopes(1e6, 5e3)
    with pytest.raises(DomainError):
        prime_floor_envelope(10.0, 20.0)
    with pytest.raises(DomainError):
        prime_floor_envelope(10.0, 1.5, conditional=True)


def test_envelope_grid():
    frame = envelope_grid("E_omega", 1, 1e4, 1e8, 5)
    assert list(frame.columns) == ["x", "value", "main_term", "ratio"]
    assert len(frame) == 5
    assert frame["x"].iloc[-1] == pytest.approx(1e8)
    assert np.allclose(frame["ratio"], frame["value"] / frame["main_term"])
    assert np.all(envelope_grid("h", 1, 24, 200, 10)["main_term"] == 1)
    with pytest.raises(DomainError):
        envelope_grid("nope", 1, 1e4, 1e8, 5)
