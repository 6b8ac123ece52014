"""
Parallel, checkpointed range scans of the global inequalities.

A scan over [n_start, n_end] is cut into shards aligned to multiples of the
shard size. Each shard needs the exact prefix sums at its left edge, so a
parallel scan runs in two passes: the shard totals are computed in parallel
and folded in ascending order into carries, then every shard is scanned in
parallel from its carry. Shard reports are merged in order, so the result is
the same for any number of workers, and a checkpoint of finished shards lets
an interrupted scan resume with an identical outcome.
"""

import functools
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Dict, Iterator, List, NamedTuple, Optional, Tuple

import mpmath
import numpy as np
import pandas as pd
import tqdm

from omegabounds.constants import alpha0, alpha1, beta0, li_array, m_prime, meissel_mertens
from omegabounds.sieve import DEFAULT_SEGMENT_SIZE, OmegaBlock, iter_blocks, primes_up_to
from omegabounds.sieve.core import factor_count_naive
from omegabounds.utils import mp_string, split_range
from omegabounds.verifier.report import (
    MAX_VIOLATIONS,
    SCAN_CLAIMS,
    Sample,
    VerificationReport,
    empty_report,
    merge_reports,
)

DEFAULT_SHARD_SIZE: int = 2**24
DEFAULT_SAMPLE_EVERY: int = 2**16
NEAR_TIE: float = 1e-9
TIE_DIGITS: int = 40
INT64_CEILING: int = 2**62


class ScanError(ValueError):
    """Raised for malformed scan requests."""


class CheckpointMismatchError(ScanError):
    """Raised when a checkpoint file belongs to a different scan."""


@dataclass(frozen=True)
class ScanConstants:
    """
    Constants used by the slack formulas, stored as decimal strings.

    Strings keep the object picklable for worker processes and exact for the
    high-precision re-evaluation of near ties.
    """

    values: Dict[str, str]

    @functools.cached_property
    def floats(self) -> Dict[str, float]:
        return {name: float(value) for name, value in self.values.items()}

    def mp(self, digits: int = TIE_DIGITS) -> Dict[str, mpmath.mpf]:
        with mpmath.workdps(digits + 5):
            return {name: mpmath.mpf(value) for name, value in self.values.items()}


@functools.lru_cache(maxsize=None)
def scan_constants(digits: int = TIE_DIGITS) -> ScanConstants:
    M = meissel_mertens(digits)
    M_prime = m_prime(digits)
    values = {
        "M": M.value,
        "M_prime": M_prime.value,
        "M_double_prime": (M_prime - M).value,
        "alpha0": alpha0(digits).value,
        "beta0": beta0(digits).value,
        "alpha1": alpha1(digits).value,
    }
    encoded = {name: mp_string(value, digits + 5) for name, value in values.items()}
    encoded.update({"c_omega": "1.133", "c_big_omega": "1.175"})
    return ScanConstants(encoded)


class _Values(NamedTuple):
    n: object
    sum_omega: object
    sum_big_omega: object
    primes: object
    left_limit: object


class _Lib(NamedTuple):
    log: Callable
    sqrt: Callable
    exp: Callable
    li: Callable
    maximum: Callable
    minimum: Callable
    where: Callable


_NP = _Lib(np.log, np.sqrt, np.exp, li_array, np.maximum, np.minimum, np.where)
_MP = _Lib(mpmath.log, mpmath.sqrt, mpmath.exp, mpmath.li, max, min, lambda c, a, b: a if c else b)


def _a0(v: _Values, lib: _Lib):
    return v.sum_omega / v.n - lib.log(lib.log(v.n))


def _a1(v: _Values, lib: _Lib):
    return v.sum_big_omega / v.n - lib.log(lib.log(v.n))


def _j_bounds(v: _Values, k, lib: _Lib):
    j = v.sum_big_omega - v.sum_omega
    log_n = lib.log(v.n)
    r = lib.sqrt(v.n) / log_n
    low = j - (v.n * k["M_double_prime"] - 25 * r)
    high = v.n * k["M_double_prime"] - r * (2 - 20 / log_n) - j
    return lib.minimum(low, high)


def _kappa_33(v: _Values, k, lib: _Lib):
    r = lib.sqrt(v.n) / lib.log(v.n)
    return 33 * r - 25 * r - k["M_double_prime"]


def _omega_bounds(v: _Values, k, lib: _Lib):
    d = _a0(v, lib) - k["M"]
    log_n = lib.log(v.n)
    return lib.minimum(d + k["c_omega"] / log_n, 1 / (2 * log_n**2) - d)


def _big_omega_bounds(v: _Values, k, lib: _Lib):
    d = _a1(v, lib) - k["M_prime"]
    log_n = lib.log(v.n)
    lower = lib.where(v.n >= 24, d + k["c_big_omega"] / log_n, math.inf)
    return lib.minimum(lower, 1 / (2 * log_n**2) - d)


def _pi_li_envelope(v: _Values, k, lib: _Lib):
    log_n = lib.log(v.n)
    li = lib.li(v.n)
    # at a prime p > 2 the left limit π(p-) = π(p) - 1 is the other extreme
    worst = lib.maximum(abs(v.primes - li), lib.where(v.left_limit, abs(v.primes - 1 - li), 0))
    r_hat = lib.sqrt(v.n) * log_n
    r = v.n * lib.exp(-lib.sqrt(log_n) / 3)
    return lib.minimum(r_hat - worst, r - worst)


@dataclass(frozen=True)
class Claim:
    """
    A scanned inequality written as slack >= 0 (or > 0 when strict).

    Attributes:
        claim_id (str): Report tag.
        min_n (int): Smallest n the inequality is stated for.
        strict (bool): Whether slack = 0 is a violation.
        slack (Callable): Formula in (values, constants, lib); evaluated with numpy
            in bulk and with mpmath for near ties.
        witness (Optional[Tuple[int, int]]): Integer pair (n, S) at which equality holds.
        witness_uses_big_omega (bool): Whether S is a sum of Ω rather than ω.
    """

    claim_id: str
    min_n: int
    strict: bool
    slack: Callable
    witness: Optional[Tuple[int, int]] = None
    witness_uses_big_omega: bool = False


CLAIMS: Dict[str, Claim] = {
    claim.claim_id: claim
    for claim in (
        Claim("THM_2_1_LOWER", 2, False, lambda v, k, lib: _a0(v, lib) - k["alpha0"], (32, 45)),
        Claim("THM_2_1_UPPER", 2, False, lambda v, k, lib: k["beta0"] - _a0(v, lib), (2, 1)),
        Claim("THM_2_2", 2, False, lambda v, k, lib: _a1(v, lib) - k["alpha1"], (7, 8), True),
        Claim("A1_LT_BETA1", 2, True, lambda v, k, lib: k["M_prime"] - _a1(v, lib)),
        Claim("A0_LT_M", 16, True, lambda v, k, lib: k["M"] - _a0(v, lib)),
        Claim("J_BOUNDS", 2, True, _j_bounds),
        Claim("KAPPA_33", 2, True, _kappa_33),
        Claim("OMEGA_BOUNDS", 2, True, _omega_bounds),
        Claim("BIG_OMEGA_BOUNDS", 2, True, _big_omega_bounds),
        Claim("PI_LI_ENVELOPE", 2, False, _pi_li_envelope),
    )
}
assert tuple(CLAIMS) == SCAN_CLAIMS, "Claim table and report tags must agree"


@dataclass(frozen=True)
class Carry:
    """Exact Σω, ΣΩ and π at n."""

    n: int
    sum_omega: int
    sum_big_omega: int
    primes: int

    def advance(self, totals: Tuple[int, int, int], hi: int) -> "Carry":
        return Carry(hi - 1, self.sum_omega + totals[0], self.sum_big_omega + totals[1], self.primes + totals[2])

    def to_json(self) -> Dict[str, str]:
        return {
            "n": str(self.n),
            "sum_omega": str(self.sum_omega),
            "sum_big_omega": str(self.sum_big_omega),
            "primes": str(self.primes),
        }

    @classmethod
    def from_json(cls, doc: Dict[str, str]) -> "Carry":
        return cls(int(doc["n"]), int(doc["sum_omega"]), int(doc["sum_big_omega"]), int(doc["primes"]))


@dataclass(frozen=True)
class ShardTask:
    claim_id: str
    lo: int
    hi: int
    carry: Carry
    constants: ScanConstants
    segment_size: int
    sample_every: Optional[int]


@dataclass(frozen=True)
class ShardResult:
    report: VerificationReport
    end: Carry
    samples: List[Tuple[int, float, float, float]]


def _table_for(hi: int):
    return primes_up_to(max(2, math.isqrt(hi - 1)))


def _range_totals(bounds: Tuple[int, int, int]) -> Tuple[int, int, int]:
    """(Σω, ΣΩ, prime count) over [lo, hi)."""
    lo, hi, segment_size = bounds
    totals = [0, 0, 0]
    for block in iter_blocks(lo, hi, segment_size, _table_for(hi)):
        totals[0] += int(block.omega.sum(dtype=np.int64))
        totals[1] += int(block.big_omega.sum(dtype=np.int64))
        totals[2] += int(np.count_nonzero(block.big_omega == 1))
    return totals[0], totals[1], totals[2]


def _dyadic_minima(n: np.ndarray, slack: np.ndarray) -> Dict[int, Sample]:
    minima: Dict[int, Sample] = {}
    lo, hi = int(n[0]), int(n[-1])
    for k in range(lo.bit_length() - 1, hi.bit_length()):
        a = max(lo, 1 << k) - lo
        b = min(hi + 1, 1 << (k + 1)) - lo
        if a >= b:
            continue
        i = a + int(np.argmin(slack[a:b]))
        minima[k] = (int(n[i]), float(slack[i]))
    return minima


def _scan_block(
    claim: Claim, block: OmegaBlock, carry: Carry, constants: ScanConstants, sample_every: Optional[int]
) -> Tuple[VerificationReport, Carry, List[Tuple[int, float, float, float]]]:
    is_prime = block.big_omega == 1
    cum_omega = np.cumsum(block.omega, dtype=np.int64)
    cum_big_omega = np.cumsum(block.big_omega, dtype=np.int64)
    cum_primes = np.cumsum(is_prime, dtype=np.int64)
    assert carry.sum_big_omega + int(cum_big_omega[-1]) < INT64_CEILING, "Prefix sums left the int64 range"

    n_int = np.arange(block.lo, block.hi, dtype=np.int64)
    s_omega = cum_omega + carry.sum_omega
    s_big_omega = cum_big_omega + carry.sum_big_omega
    primes = cum_primes + carry.primes
    values = _Values(
        n=n_int.astype(np.float64),
        sum_omega=s_omega.astype(np.float64),
        sum_big_omega=s_big_omega.astype(np.float64),
        primes=primes.astype(np.float64),
        left_limit=is_prime & (n_int > 2),
    )
    slack = np.asarray(claim.slack(values, constants.floats, _NP), dtype=np.float64)

    witnesses: List[Tuple[int, int]] = []
    failures: List[str] = []
    witness_index = -1
    if claim.witness is not None and block.lo <= claim.witness[0] < block.hi:
        w_n, w_sum = claim.witness
        witness_index = w_n - block.lo
        observed = int((s_big_omega if claim.witness_uses_big_omega else s_omega)[witness_index])
        if observed == w_sum:
            slack[witness_index] = 0.0
            witnesses.append((w_n, w_sum))
        else:
            failures.append(f"witness ({w_n}, {w_sum}) not attained: scanned sum is {observed}")

    near = np.flatnonzero(np.abs(slack) < NEAR_TIE)
    if near.size:
        k_mp = constants.mp()
        with mpmath.workdps(TIE_DIGITS):
            for i in near:
                if i == witness_index:
                    continue
                exact = claim.slack(
                    _Values(
                        n=mpmath.mpf(int(n_int[i])),
                        sum_omega=mpmath.mpf(int(s_omega[i])),
                        sum_big_omega=mpmath.mpf(int(s_big_omega[i])),
                        primes=mpmath.mpf(int(primes[i])),
                        left_limit=bool(values.left_limit[i]),
                    ),
                    k_mp,
                    _MP,
                )
                slack[i] = -np.finfo(np.float64).tiny if exact < 0 and float(exact) == 0 else float(exact)

    bad = np.flatnonzero(slack <= 0 if claim.strict else slack < 0)
    i_min, i_max = int(np.argmin(slack)), int(np.argmax(slack))
    report = VerificationReport(
        claim_id=claim.claim_id,
        n_start=block.lo,
        n_end=block.hi - 1,
        checkpoint=block.hi - 1,
        min_slack=(int(n_int[i_min]), float(slack[i_min])),
        max_slack=(int(n_int[i_max]), float(slack[i_max])),
        equality_witnesses=witnesses,
        violations=[(int(n_int[i]), float(slack[i])) for i in bad[:MAX_VIOLATIONS]],
        violation_count=int(bad.size),
        dyadic_minima=_dyadic_minima(n_int, slack),
        extra_failures=failures,
    )

    samples: List[Tuple[int, float, float, float]] = []
    if sample_every:
        picked = np.flatnonzero(n_int % sample_every == 0)
        if picked.size:
            a0 = _a0(values, _NP)[picked]
            a1 = _a1(values, _NP)[picked]
            samples = [
                (int(n_int[i]), float(x0), float(x1), float(slack[i])) for i, x0, x1 in zip(picked, a0, a1)
            ]

    end = Carry(block.hi - 1, int(s_omega[-1]), int(s_big_omega[-1]), int(primes[-1]))
    return report, end, samples


def _scan_shard(task: ShardTask) -> ShardResult:
    claim = CLAIMS[task.claim_id]
    carry = task.carry
    assert carry.n == task.lo - 1, f"Carry at n={carry.n} does not meet shard start {task.lo}"
    reports: List[VerificationReport] = []
    samples: List[Tuple[int, float, float, float]] = []
    for block in iter_blocks(task.lo, task.hi, task.segment_size, _table_for(task.hi)):
        report, carry, rows = _scan_block(claim, block, carry, task.constants, task.sample_every)
        reports.append(report)
        samples.extend(rows)
    return ShardResult(report=merge_reports(reports), end=carry, samples=samples)


class _Checkpoint:
    """
    JSON-lines checkpoint: a header line, then one line per finished shard.

    Lines are appended and flushed one shard at a time by the driver process.
    """

    def __init__(self, path: Optional[str], header: Dict[str, str]) -> None:
        self.path = path
        self.header = header

    def load(self) -> List[Tuple[VerificationReport, Carry]]:
        if self.path is None or not os.path.exists(self.path) or os.path.getsize(self.path) == 0:
            return []
        with open(self.path, "r") as f:
            lines = [json.loads(line) for line in f if line.strip()]
        if lines[0] != {"header": self.header}:
            raise CheckpointMismatchError(
                f"Checkpoint {self.path} was written for {lines[0].get('header')}, not {self.header}"
            )
        return [(VerificationReport.from_json(r["report"]), Carry.from_json(r["end"])) for r in lines[1:]]

    def start(self) -> None:
        if self.path is None:
            return
        os.makedirs(os.path.dirname(os.path.abspath(self.path)), exist_ok=True)
        with open(self.path, "w") as f:
            f.write(json.dumps({"header": self.header}, sort_keys=True) + "\n")

    def append(self, result: ShardResult) -> None:
        if self.path is None:
            return
        record = {"report": result.report.to_json(), "end": result.end.to_json()}
        with open(self.path, "a") as f:
            f.write(json.dumps(record, sort_keys=True) + "\n")
            f.flush()


def _claim_extras(claim_id: str, constants: ScanConstants) -> Tuple[Dict[str, str], List[str]]:
    extras: Dict[str, str] = {}
    failures: List[str] = []
    if claim_id == "A0_LT_M":
        # the bound fails just below the scanned range, at n = 15
        total = sum(factor_count_naive(k)[0] for k in range(1, 16))
        with mpmath.workdps(TIE_DIGITS):
            gap = mpmath.mpf(total) / 15 - mpmath.log(mpmath.log(15)) - constants.mp()["M"]
            extras["A0_15_minus_M"] = mp_string(gap, 20)
        extras["sum_omega_15"] = str(total)
        if gap <= 0:
            failures.append("A0(15) does not exceed M")
    elif claim_id == "J_BOUNDS":
        extras["n_equals_1"] = "bound is singular at n = 1 (log 1 = 0); the scan starts at n = 2"
    return extras, failures


def scan_claim(
    claim_id: str,
    n_start: int,
    n_end: int,
    threads: int = 1,
    shard_size: int = DEFAULT_SHARD_SIZE,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    checkpoint_path: Optional[str] = None,
    max_shards: Optional[int] = None,
    samples_csv: Optional[str] = None,
    sample_every: int = DEFAULT_SAMPLE_EVERY,
    progress_bar: bool = False,
) -> VerificationReport:
    """
    Scan one claim over [n_start, n_end].

    Args:
        claim_id (str): One of SCAN_CLAIMS.
        n_start (int): First n, at least the claim's smallest admissible n.
        n_end (int): Last n.
        threads (int): Worker processes. Defaults to 1.
        shard_size (int): Integers per shard. Defaults to 2^24.
        segment_size (int): Integers per sieve block. Defaults to 2^20.
        checkpoint_path (Optional[str]): JSON-lines file of finished shards; resumed from if present.
        max_shards (Optional[int]): Stop after this many new shards (the report is then PARTIAL).
        samples_csv (Optional[str]): Append (n, A0, A1, slack) rows for n divisible by `sample_every`.
        sample_every (int): Sampling stride for `samples_csv`. Defaults to 2^16.
        progress_bar (bool): Whether to show a tqdm bar over shards.

    Returns:
        VerificationReport: The merged report; PARTIAL if stopped early.

    Raises:
        ScanError: On an unknown claim, an empty range, or n_start below the claim's range.
        CheckpointMismatchError: If the checkpoint belongs to another scan.
    """
    if claim_id not in CLAIMS:
        raise ScanError(f"Unknown claim {claim_id!r}; expected one of {', '.join(SCAN_CLAIMS)}")
    claim = CLAIMS[claim_id]
    if n_end < n_start:
        raise ScanError(f"Empty range [{n_start}, {n_end}]")
    if n_start < claim.min_n:
        raise ScanError(f"{claim_id} is stated for n >= {claim.min_n}, got n_start={n_start}")
    if threads < 1 or shard_size < 1:
        raise ScanError("threads and shard_size must be positive")

    constants = scan_constants()
    shards = split_range(n_start, n_end, shard_size)
    checkpoint = _Checkpoint(
        checkpoint_path,
        {"claim_id": claim_id, "n_start": str(n_start), "n_end": str(n_end), "shard_size": str(shard_size)},
    )
    finished = checkpoint.load()
    for (report, _), (lo, hi) in zip(finished, shards):
        if (report.n_start, report.n_end) != (lo, hi - 1):
            raise CheckpointMismatchError(
                f"Checkpoint shard [{report.n_start}, {report.n_end}] does not match [{lo}, {hi - 1}]"
            )
    if len(finished) > len(shards):
        raise CheckpointMismatchError("Checkpoint holds more shards than the range")
    if finished:
        carry = finished[-1][1]
        tqdm.tqdm.write(f"Resuming {claim_id} from checkpoint at n={carry.n}", file=sys.stderr)
    else:
        checkpoint.start()
        carry = Carry(0, 0, 0, 0)
        if n_start > 1:
            head = split_range(1, n_start - 1, shard_size)
            for totals, (lo, hi) in zip(_map_totals(head, segment_size, threads), head):
                carry = carry.advance(totals, hi)

    pending = shards[len(finished) :]
    if max_shards is not None:
        pending = pending[:max_shards]

    reports = [report for report, _ in finished]
    sample_rows: List[Tuple[int, float, float, float]] = []
    results = _run_shards(claim_id, pending, carry, constants, segment_size, threads, samples_csv and sample_every)
    for result in tqdm.tqdm(results, total=len(pending), desc=f"Scanning {claim_id}", disable=not progress_bar):
        checkpoint.append(result)
        reports.append(result.report)
        sample_rows.extend(result.samples)

    if samples_csv and sample_rows:
        frame = pd.DataFrame(sample_rows, columns=["n", "A0", "A1", "slack"])
        frame.to_csv(samples_csv, mode="a", header=not os.path.exists(samples_csv), index=False)

    if reports:
        merged = merge_reports(reports)
        if merged.n_end < n_end:
            merged = merged.merge(empty_report(claim_id, merged.n_end + 1, n_end))
    else:
        merged = empty_report(claim_id, n_start, n_end)

    extras, failures = _claim_extras(claim_id, constants)
    merged = replace(
        merged,
        extras={**merged.extras, **extras},
        extra_failures=sorted(set(merged.extra_failures) | set(failures)),
    )
    tqdm.tqdm.write(f"{claim_id} [{n_start}, {n_end}]: {merged.status}", file=sys.stderr)
    return merged


def _map_totals(shards: List[Tuple[int, int]], segment_size: int, threads: int) -> Iterator[Tuple[int, int, int]]:
    tasks = [(lo, hi, segment_size) for lo, hi in shards]
    if threads == 1:
        yield from map(_range_totals, tasks)
        return
    with ProcessPoolExecutor(max_workers=threads) as pool:
        yield from pool.map(_range_totals, tasks)


def _run_shards(
    claim_id: str,
    shards: List[Tuple[int, int]],
    carry: Carry,
    constants: ScanConstants,
    segment_size: int,
    threads: int,
    sample_every: Optional[int],
) -> Iterator[ShardResult]:
    if not shards:
        return
    if threads == 1:
        for lo, hi in shards:
            result = _scan_shard(ShardTask(claim_id, lo, hi, carry, constants, segment_size, sample_every or None))
            carry = result.end
            yield result
        return

    carries = [carry]
    for totals, (lo, hi) in zip(_map_totals(shards[:-1], segment_size, threads), shards[:-1]):
        carries.append(carries[-1].advance(totals, hi))
    tasks = [
        ShardTask(claim_id, lo, hi, c, constants, segment_size, sample_every or None)
        for (lo, hi), c in zip(shards, carries)
    ]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        yield from pool.map(_scan_shard, tasks)


def scan_theorem_2_1(n_start: int, n_end: int, **kwargs) -> Tuple[VerificationReport, VerificationReport]:
    """α₀ <= A₀(n) <= β₀: the lower and the upper report, in that order."""
    lower_kwargs = dict(kwargs)
    upper_kwargs = dict(kwargs)
    if kwargs.get("checkpoint_path"):
        root, ext = os.path.splitext(kwargs["checkpoint_path"])
        lower_kwargs["checkpoint_path"] = f"{root}.lower{ext}"
        upper_kwargs["checkpoint_path"] = f"{root}.upper{ext}"
    return (
        scan_claim("THM_2_1_LOWER", n_start, n_end, **lower_kwargs),
        scan_claim("THM_2_1_UPPER", n_start, n_end, **upper_kwargs),
    )


def scan_theorem_2_2(n_start: int, n_end: int, **kwargs) -> VerificationReport:
    """α₁ <= A₁(n), with equality only at n = 7."""
    return scan_claim("THM_2_2", n_start, n_end, **kwargs)


def scan_A1_upper(n_start: int, n_end: int, **kwargs) -> VerificationReport:
    """A₁(n) < M'."""
    return scan_claim("A1_LT_BETA1", n_start, n_end, **kwargs)


def scan_A0_upper_M(n_start: int, n_end: int, **kwargs) -> VerificationReport:
    """A₀(n) < M for n >= 16, together with A₀(15) > M."""
    return scan_claim("A0_LT_M", n_start, n_end, **kwargs)


def scan_J_bounds(n_start: int, n_end: int, **kwargs) -> VerificationReport:
    """nM'' - 25√n/log n < J(n) < nM'' - (√n/log n)(2 - 20/log n)."""
    return scan_claim("J_BOUNDS", n_start, n_end, **kwargs)
