from omegabounds.verifier.checks import (
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
from omegabounds.verifier.report import (
    CHECK_CLAIMS,
    SCAN_CLAIMS,
    CheckRecord,
    ReportError,
    VerificationReport,
    dumps,
    empty_report,
    merge_reports,
)
from omegabounds.verifier.scan import (
    CLAIMS,
    DEFAULT_SHARD_SIZE,
    CheckpointMismatchError,
    ScanError,
    scan_A0_upper_M,
    scan_A1_upper,
    scan_claim,
    scan_J_bounds,
    scan_theorem_2_1,
    scan_theorem_2_2,
)

__all__ = [
    "CHECK_CLAIMS",
    "CheckError",
    "CLAIMS",
    "DEFAULT_SHARD_SIZE",
    "SCAN_CLAIMS",
    "CheckRecord",
    "CheckpointMismatchError",
    "ReportError",
    "ScanError",
    "VerificationReport",
    "check_main_term",
    "dumps",
    "empty_report",
    "h_crossing",
    "ineq_33x_crossing",
    "merge_reports",
    "mertens_sum_check",
    "pi_li_integral_check",
    "pi_quotient_sum_check",
    "prime_floor_sum_check",
    "run_check",
    "scan_A0_upper_M",
    "scan_A1_upper",
    "scan_J_bounds",
    "scan_claim",
    "scan_theorem_2_1",
    "scan_theorem_2_2",
    "thresholds_check",
]
