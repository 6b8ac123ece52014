import json
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Literal, Optional, Tuple

Status = Literal["PASS", "FAIL", "PARTIAL"]

SCAN_CLAIMS: Tuple[str, ...] = (
    "THM_2_1_LOWER",
    "THM_2_1_UPPER",
    "THM_2_2",
    "A1_LT_BETA1",
    "A0_LT_M",
    "J_BOUNDS",
    "KAPPA_33",
    "OMEGA_BOUNDS",
    "BIG_OMEGA_BOUNDS",
    "PI_LI_ENVELOPE",
)
CHECK_CLAIMS: Tuple[str, ...] = (
    "ENVELOPE_M1",
    "MERTENS_SUM",
    "INEQ_33X",
    "PI_LI_INTEGRAL",
    "THRESHOLDS",
    "H_CROSSING",
    "PRIME_FLOOR_SUM",
    "PI_QUOTIENT_SUM",
)
MAX_VIOLATIONS: int = 100


class ReportError(ValueError):
    """Raised when reports cannot be combined or decoded."""


Sample = Tuple[int, float]


def _by_slack(a: Optional[Sample], b: Optional[Sample], lower: bool) -> Optional[Sample]:
    """Pick the smaller (or larger) slack; ties go to the smaller n."""
    if a is None:
        return b
    if b is None:
        return a
    key_a = (a[1] if lower else -a[1], a[0])
    key_b = (b[1] if lower else -b[1], b[0])
    return a if key_a <= key_b else b


@dataclass(frozen=True)
class VerificationReport:
    """
    Result of scanning one claim over an integer range.

    A report covers [n_start, n_end]; `checkpoint` is the last n actually
    processed, so a report with checkpoint < n_end is PARTIAL.

    Attributes:
        claim_id (str): Which inequality was scanned.
        n_start (int): First integer of the requested range.
        n_end (int): Last integer of the requested range.
        checkpoint (int): Last fully processed n (n_start - 1 before any work).
        min_slack (Optional[Tuple[int, float]]): (argmin, min) of the slack.
        max_slack (Optional[Tuple[int, float]]): (argmax, max) of the slack.
        equality_witnesses (List[Tuple[int, int]]): (n, integer sum) pairs where the bound is attained.
        violations (List[Tuple[int, float]]): The first MAX_VIOLATIONS violating (n, slack) pairs.
        violation_count (int): Total number of violations, including those not listed.
        dyadic_minima (Dict[int, Tuple[int, float]]): For each k, (argmin, min) of the slack over
            the scanned part of [2^k, 2^(k+1)).
        extras (Dict[str, str]): Claim-specific side results as decimal strings.
    """

    claim_id: str
    n_start: int
    n_end: int
    checkpoint: int
    min_slack: Optional[Sample] = None
    max_slack: Optional[Sample] = None
    equality_witnesses: List[Tuple[int, int]] = field(default_factory=list)
    violations: List[Sample] = field(default_factory=list)
    violation_count: int = 0
    dyadic_minima: Dict[int, Sample] = field(default_factory=dict)
    extras: Dict[str, str] = field(default_factory=dict)
    extra_failures: List[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        assert self.n_start - 1 <= self.checkpoint <= self.n_end, (
            f"Checkpoint {self.checkpoint} outside [{self.n_start - 1}, {self.n_end}]"
        )
        assert len(self.violations) <= self.violation_count, "Listed violations exceed the count"

    @property
    def complete(self) -> bool:
        return self.checkpoint == self.n_end

    @property
    def status(self) -> Status:
        if self.violation_count > 0 or self.extra_failures:
            return "FAIL"
        return "PASS" if self.complete else "PARTIAL"

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        """
        Combine two reports over adjacent ranges of the same claim.

        The result does not depend on the order of the arguments, and folding a
        list of shard reports gives the report of the whole range.

        Raises:
            ReportError: If the claims differ or the ranges are not adjacent.
        """
        left, right = (self, other) if self.n_start <= other.n_start else (other, self)
        if left.claim_id != right.claim_id:
            raise ReportError(f"Cannot merge {left.claim_id} with {right.claim_id}")
        if left.n_end + 1 != right.n_start:
            raise ReportError(
                f"Ranges [{left.n_start}, {left.n_end}] and [{right.n_start}, {right.n_end}] are not adjacent"
            )

        if left.complete:
            checkpoint = right.checkpoint
        else:
            if right.checkpoint >= right.n_start:
                raise ReportError("Cannot merge past a partial report")
            checkpoint = left.checkpoint

        dyadic = dict(left.dyadic_minima)
        for k, low in right.dyadic_minima.items():
            dyadic[k] = _by_slack(dyadic.get(k), low, lower=True)

        extras = dict(left.extras)
        extras.update(right.extras)
        return VerificationReport(
            claim_id=left.claim_id,
            n_start=left.n_start,
            n_end=right.n_end,
            checkpoint=checkpoint,
            min_slack=_by_slack(left.min_slack, right.min_slack, lower=True),
            max_slack=_by_slack(left.max_slack, right.max_slack, lower=False),
            equality_witnesses=sorted(set(left.equality_witnesses) | set(right.equality_witnesses)),
            violations=sorted(left.violations + right.violations)[:MAX_VIOLATIONS],
            violation_count=left.violation_count + right.violation_count,
            dyadic_minima=dyadic,
            extras=extras,
            extra_failures=sorted(set(left.extra_failures) | set(right.extra_failures)),
        )

    def to_json(self) -> Dict[str, Any]:
        """Encode as a JSON-ready dict; exact integers become strings."""

        def sample(s: Optional[Sample]) -> Optional[Dict[str, Any]]:
            return None if s is None else {"n": str(s[0]), "slack": s[1]}

        return {
            "kind": "scan",
            "claim_id": self.claim_id,
            "range": [str(self.n_start), str(self.n_end)],
            "checkpoint": str(self.checkpoint),
            "status": self.status,
            "min_slack": sample(self.min_slack),
            "max_slack": sample(self.max_slack),
            "equality_witnesses": [{"n": str(n), "sum": str(s)} for n, s in self.equality_witnesses],
            "violations": [sample(v) for v in self.violations],
            "violation_count": str(self.violation_count),
            "dyadic_minima": [
                {"k": str(k), "n": str(low[0]), "slack": low[1]} for k, low in sorted(self.dyadic_minima.items())
            ],
            "extras": dict(self.extras),
            "extra_failures": list(self.extra_failures),
        }

    @classmethod
    def from_json(cls, doc: Dict[str, Any]) -> "VerificationReport":
        if doc.get("kind") != "scan":
            raise ReportError(f"Not a scan report: kind={doc.get('kind')!r}")

        def sample(d: Optional[Dict[str, Any]]) -> Optional[Sample]:
            return None if d is None else (int(d["n"]), float(d["slack"]))

        return cls(
            claim_id=doc["claim_id"],
            n_start=int(doc["range"][0]),
            n_end=int(doc["range"][1]),
            checkpoint=int(doc["checkpoint"]),
            min_slack=sample(doc["min_slack"]),
            max_slack=sample(doc["max_slack"]),
            equality_witnesses=[(int(w["n"]), int(w["sum"])) for w in doc["equality_witnesses"]],
            violations=[sample(v) for v in doc["violations"]],
            violation_count=int(doc["violation_count"]),
            dyadic_minima={int(d["k"]): (int(d["n"]), float(d["slack"])) for d in doc["dyadic_minima"]},
            extras=dict(doc.get("extras", {})),
            extra_failures=list(doc.get("extra_failures", [])),
        )


def empty_report(claim_id: str, n_start: int, n_end: int) -> VerificationReport:
    return VerificationReport(claim_id=claim_id, n_start=n_start, n_end=n_end, checkpoint=n_start - 1)


def merge_reports(reports: Iterable[VerificationReport]) -> VerificationReport:
    """
    Fold reports of one claim into a single report.

    Raises:
        ReportError: If the list is empty, mixes claims, or leaves gaps.
    """
    ordered = sorted(reports, key=lambda r: r.n_start)
    if not ordered:
        raise ReportError("Nothing to merge")
    merged = ordered[0]
    for report in ordered[1:]:
        merged = merged.merge(report)
    return merged


@dataclass(frozen=True)
class CheckRecord:
    """
    Result of a spot check.

    Attributes:
        claim_id (str): Which check ran.
        passed (bool): Whether every asserted condition held.
        parameters (Dict[str, str]): Inputs, as decimal strings.
        values (Dict[str, str]): Computed quantities, as decimal strings.
        ratio (Optional[float]): Tightness ratio (observed / allowed) where meaningful.
        discrepancies (List[str]): Quoted statements found to be false; reported, not failed.
        notes (List[str]): Informational findings.
    """

    claim_id: str
    passed: bool
    parameters: Dict[str, str] = field(default_factory=dict)
    values: Dict[str, str] = field(default_factory=dict)
    ratio: Optional[float] = None
    discrepancies: List[str] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def status(self) -> Status:
        return "PASS" if self.passed else "FAIL"

    def to_json(self) -> Dict[str, Any]:
        return {
            "kind": "check",
            "claim_id": self.claim_id,
            "status": self.status,
            "parameters": dict(self.parameters),
            "values": dict(self.values),
            "ratio": self.ratio,
            "discrepancies": list(self.discrepancies),
            "notes": list(self.notes),
        }


def dumps(doc: Any) -> str:
    """Serialize deterministically: sorted keys, fixed separators."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
