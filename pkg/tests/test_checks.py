import pytest

from omegabounds.identities import IdentityError
from omegabounds.sieve import prefix_scan
from omegabounds.verifier.checks import (
    QUOTED_INTEGRAL_CONSTANT,
    CheckError,
    check_main_term,
    h_crossing,
    ineq_33x_crossing,
    mertens_sum_check,
    pi_li_integral_check,
    pi_quotient_sum_check,
    prime_floor_sum_check,
    run_check,
    thresholds_check,
)


@pytest.mark.parametrize("conditional", [False, True])
@pytest.mark.parametrize("big_omega", [False, True])
def test_main_term_within_envelope(conditional, big_omega):
    record = check_main_term(10**6, conditional=conditional, big_omega=big_omega)
    assert record.passed
    assert record.claim_id == "ENVELOPE_M1"
    assert 0 <= record.ratio <= 1
    assert "corollary_bound" in record.values
    assert len(record.notes) == 1


def test_main_term_higher_order():
    record = check_main_term(10**5, m=3)
    assert record.passed
    assert "corollary_bound" not in record.values
    assert record.values["sum"] == str(prefix_scan(10**5).sum_omega)


@pytest.mark.slow
@pytest.mark.parametrize("x", [10**4, 10**5, 10**6, 10**7, 10**8])
@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("conditional", [False, True])
@pytest.mark.parametrize("big_omega", [False, True])
def test_main_term_containment_grid(x, m, conditional, big_omega):
    record = check_main_term(x, m=m, conditional=conditional, big_omega=big_omega)
    assert record.passed
    assert 0 <= record.ratio <= 1


@pytest.mark.parametrize("y", [2, 10**3, 10**6])
def test_mertens_sum(y):
    record = mertens_sum_check(y)
    assert record.passed
    assert record.ratio < 1


@pytest.mark.slow
def test_mertens_sum_at_1e8():
    record = mertens_sum_check(10**8)
    assert record.passed
    assert record.ratio < 1


def test_ineq_33x_crossing():
    record = ineq_33x_crossing()
    assert record.passed
    assert record.values["x_star"] == "155652"
    assert record.values["gap_before_x_star"].startswith("-")
    assert not ineq_33x_crossing(limit=155651).passed


def test_thresholds_report_the_x0_discrepancy():
    record = thresholds_check()
    assert record.passed
    assert record.values["x0_holds"] == "True"
    assert record.values["x0_minus_1_fails"] == "True"
    assert record.values["threshold_omega_lower"].startswith("102841.")
    assert len(record.discrepancies) == 1
    assert "12/(1-gamma)" in record.discrepancies[0]


def test_h_crossing():
    record = h_crossing()
    assert record.passed
    assert record.values["root"].startswith("119.0251")
    assert float(record.values["log_x_at_root"]) < 14167


def test_prime_floor_sum():
    assert prime_floor_sum_check(10**6, 10**3).passed
    assert prime_floor_sum_check(10**6, 10**3, conditional=True).passed
    assert prime_floor_sum_check(2, 2).values["sum"] == "1"
    with pytest.raises(IdentityError):
        prime_floor_sum_check(10, 11)


def test_pi_quotient_sum():
    record = pi_quotient_sum_check(10**6, 10**3)
    assert record.passed
    assert record.ratio < 1
    assert pi_quotient_sum_check(10**6, 10**3, conditional=True).passed
    with pytest.raises(IdentityError):
        pi_quotient_sum_check(100, 100)


def test_pi_li_integral_small_sieve():
    record = pi_li_integral_check(y=10**6)
    assert record.passed
    assert record.values["identity_route"] == QUOTED_INTEGRAL_CONSTANT
    assert record.ratio <= 1


@pytest.mark.slow
def test_pi_li_integral_at_1e8():
    record = pi_li_integral_check()
    assert record.passed
    assert float(record.values["bracket_half_width"]) == pytest.approx(0.004084, abs=1e-5)


def test_run_check_dispatches_by_claim():
    assert run_check("INEQ_33X").values["x_star"] == "155652"
    record = run_check("MERTENS_SUM", y=10**3)
    assert (record.claim_id, record.passed) == ("MERTENS_SUM", True)
    assert run_check("PRIME_FLOOR_SUM", x=10**6, y=10**3, conditional=True).parameters["conditional"] == "True"


def test_run_check_rejects_unknown_or_incomplete_requests():
    with pytest.raises(CheckError):
        run_check("NOPE")
    with pytest.raises(CheckError, match="--y"):
        run_check("PRIME_FLOOR_SUM", x=100)
    with pytest.raises(CheckError, match="--x"):
        run_check("ENVELOPE_M1")
