"""
Command-line front end.

    python -m omegabounds.cli constants --digits 50
    python -m omegabounds.cli sum --x 10
    python -m omegabounds.cli hyperbola --x 100 --y 10
    python -m omegabounds.cli verify --claim THM_2_2 --from 2 --to 100000
    python -m omegabounds.cli check --claim THRESHOLDS
    python -m omegabounds.cli envelope --which E_omega --m 1 --x-grid 1e4:1e8:50
    python -m omegabounds.cli report --merge a.json b.json

Exit status is 0 on success, 1 when a verification FAILs and 2 on usage errors.
"""

import inspect
import json
import os
import re
import sys
from typing import Any, Callable, Dict, List, Optional

import jsonargparse
import pandas as pd
import tqdm

from omegabounds.constants import (
    MAX_DIGITS,
    BigReal,
    ConstantError,
    a_coeff_derivative,
    a_coeff_integral,
    alpha0,
    alpha1,
    beta0,
    constant_set,
    euler_gamma,
    li,
    m_double_prime,
    m_double_prime_direct,
    m_prime,
    meissel_mertens,
    zeta_int,
)
from omegabounds.envelopes import DomainError, envelope_grid
from omegabounds.identities import IdentityError, hyperbola_check
from omegabounds.paths import LOG_DIR, random_checkpoint_path
from omegabounds.sieve import DEFAULT_SEGMENT_SIZE, PrefixStateWriter, SieveError, j_diff, prefix_scan
from omegabounds.utils import configure_backends, parse_grid
from omegabounds.verifier import (
    SCAN_CLAIMS,
    CheckError,
    ReportError,
    ScanError,
    VerificationReport,
    dumps,
    merge_reports,
    run_check,
    scan_claim,
)

THREADS_ENV: str = "OMEGA_BOUNDS_THREADS"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
USAGE_ERRORS = (CheckError, ConstantError, DomainError, IdentityError, ReportError, ScanError, SieveError, OSError)

NAMED_CONSTANTS: Dict[str, Callable[[int], BigReal]] = {
    "gamma": euler_gamma,
    "M": meissel_mertens,
    "M_prime": m_prime,
    "beta1": m_prime,
    "M_double_prime": m_double_prime,
    "M_double_prime_direct": m_double_prime_direct,
    "alpha0": alpha0,
    "beta0": beta0,
    "alpha1": alpha1,
    "li2": lambda digits: li(2, digits),
}


def _default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return int(raw)
    except ValueError:
        raise ScanError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None


def _named_constant(name: str, digits: int) -> BigReal:
    """Resolve gamma, M, ..., a<j>, a<j>_derivative or zeta<k>."""
    if name in NAMED_CONSTANTS:
        return NAMED_CONSTANTS[name](digits)
    match = re.fullmatch(r"a(\d+)(_derivative)?", name)
    if match:
        j = int(match.group(1))
        return (a_coeff_derivative if match.group(2) else a_coeff_integral)(j, digits)
    match = re.fullmatch(r"zeta(\d+)", name)
    if match:
        return zeta_int(int(match.group(1)), digits)
    raise ConstantError(f"Unknown constant {name!r}; expected one of {sorted(NAMED_CONSTANTS)}, a<j> or zeta<k>")


def _flatten(doc: Any, prefix: str = "") -> Dict[str, str]:
    if isinstance(doc, dict):
        out: Dict[str, str] = {}
        for key, value in doc.items():
            out.update(_flatten(value, f"{prefix}{key}."))
        return out
    if isinstance(doc, list):
        out = {}
        for i, value in enumerate(doc):
            out.update(_flatten(value, f"{prefix}{i}."))
        return out
    return {prefix[:-1]: "" if doc is None else str(doc)}


def _emit(doc: Any, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(dumps(doc))
    elif fmt == "csv":
        rows = doc if isinstance(doc, list) else [doc]
        pd.DataFrame([_flatten(row) for row in rows]).to_csv(sys.stdout, index=False)
    else:
        for key, value in _flatten(doc).items():
            sys.stdout.write(f"{key}: {value}\n")


def _track(docs: List[Dict[str, Any]], cfg: jsonargparse.Namespace) -> None:
    if not cfg.wandb:
        return
    from omegabounds.verifier.tracking import log_reports

    config = {k: v for k, v in cfg.as_dict().items() if not k.startswith("wandb") and k != "config"}
    log_reports(docs, config, cfg.wandb_dir, cfg.wandb_project, cfg.wandb_entity)


def cmd_constants(cfg: jsonargparse.Namespace) -> int:
    if cfg.name is None:
        doc: Any = constant_set(cfg.digits, cfg.m_max).to_json()
    else:
        doc = _named_constant(cfg.name, cfg.digits).to_json(cfg.name, cfg.digits)
    _emit(doc, cfg.format)
    return EXIT_OK


def cmd_sum(cfg: jsonargparse.Namespace) -> int:
    if cfg.x < 1:
        raise SieveError(f"x must be at least 1, got {cfg.x}")
    if cfg.dump is not None:
        with PrefixStateWriter(cfg.dump, cfg.dump_format) as writer:
            state = prefix_scan(cfg.x, cfg.segment, sink=writer, progress_bar=cfg.progress_bar)
    else:
        state = prefix_scan(cfg.x, cfg.segment, progress_bar=cfg.progress_bar)
    doc = {
        "x": str(cfg.x),
        "sum_omega": str(state.sum_omega),
        "sum_big_omega": str(state.sum_big_omega),
        "J": str(j_diff(state)),
    }
    _emit(doc, cfg.format)
    return EXIT_OK


def cmd_hyperbola(cfg: jsonargparse.Namespace) -> int:
    split, sieve_sum, verdict = hyperbola_check(cfg.x, cfg.y)
    doc = {
        "x": str(split.x),
        "y": str(split.y),
        "term_prime_sum": str(split.term_prime_sum),
        "term_pi_sum": str(split.term_pi_sum),
        "term_correction": str(split.term_correction),
        "total": str(split.total),
        "sieve_sum": str(sieve_sum),
        "verdict": verdict,
    }
    _emit(doc, cfg.format)
    return EXIT_OK if verdict == "EXACT-MATCH" else EXIT_FAIL


def cmd_verify(cfg: jsonargparse.Namespace) -> int:
    claims = ["THM_2_1_LOWER", "THM_2_1_UPPER"] if cfg.claim == "THM_2_1" else [cfg.claim]
    threads = cfg.threads if cfg.threads is not None else _default_threads()
    base_checkpoint = cfg.checkpoint
    if base_checkpoint == "auto":
        base_checkpoint = random_checkpoint_path(cfg.claim)
        tqdm.tqdm.write(f"Checkpointing to {base_checkpoint}", file=sys.stderr)
    reports: List[VerificationReport] = []
    for claim_id in claims:
        checkpoint = base_checkpoint
        if checkpoint is not None and len(claims) > 1:
            root, ext = os.path.splitext(checkpoint)
            checkpoint = f"{root}.{claim_id.rsplit('_', 1)[-1].lower()}{ext}"
        reports.append(
            scan_claim(
                claim_id,
                getattr(cfg, "from"),
                cfg.to,
                threads=threads,
                checkpoint_path=checkpoint,
                progress_bar=cfg.progress_bar,
                **vars(cfg.scan),
            )
        )
    docs = [report.to_json() for report in reports]
    _emit(docs[0] if len(docs) == 1 else docs, cfg.format)
    _track(docs, cfg)
    return EXIT_FAIL if any(r.status == "FAIL" for r in reports) else EXIT_OK


def cmd_check(cfg: jsonargparse.Namespace) -> int:
    record = run_check(**{name: getattr(cfg, name) for name in CHECK_PARAMETERS})
    doc = record.to_json()
    _emit(doc, cfg.format)
    _track([doc], cfg)
    return EXIT_OK if record.passed else EXIT_FAIL


def cmd_envelope(cfg: jsonargparse.Namespace) -> int:
    try:
        lo, hi, steps = parse_grid(cfg.x_grid)
    except ValueError as exc:
        raise DomainError(str(exc)) from exc
    frame = envelope_grid(cfg.which, cfg.m, lo, hi, steps)
    if cfg.format == "json":
        sys.stdout.write(dumps(json.loads(frame.to_json(orient="records", double_precision=15))))
    else:
        frame.to_csv(sys.stdout, index=False, float_format="%.15g")
    return EXIT_OK


def cmd_report(cfg: jsonargparse.Namespace) -> int:
    groups: Dict[str, List[VerificationReport]] = {}
    for path in cfg.merge:
        with open(path, "r") as f:
            doc = json.load(f)
        for item in doc if isinstance(doc, list) else [doc]:
            report = VerificationReport.from_json(item)
            groups.setdefault(report.claim_id, []).append(report)
    merged = [merge_reports(reports) for _, reports in sorted(groups.items())]
    docs = [report.to_json() for report in merged]
    _emit(docs[0] if len(docs) == 1 else docs, cfg.format)
    return EXIT_FAIL if any(r.status == "FAIL" for r in merged) else EXIT_OK


CHECK_PARAMETERS = tuple(inspect.signature(run_check).parameters)
# scan_claim arguments the verify command sets itself
SCAN_FIXED = {"claim_id", "n_start", "n_end", "threads", "checkpoint_path", "progress_bar"}

COMMANDS: Dict[str, Callable[[jsonargparse.Namespace], int]] = {
    "constants": cmd_constants,
    "sum": cmd_sum,
    "hyperbola": cmd_hyperbola,
    "verify": cmd_verify,
    "check": cmd_check,
    "envelope": cmd_envelope,
    "report": cmd_report,
}


def _subparser(description: str, formats: List[str]) -> jsonargparse.ArgumentParser:
    parser = jsonargparse.ArgumentParser(description=description)
    parser.add_argument("--config", action=jsonargparse.ActionConfigFile)
    parser.add_argument("--format", type=str, choices=formats, default=formats[0])
    return parser


def _add_tracking(parser: jsonargparse.ArgumentParser, progress_bar: bool = True) -> None:
    if progress_bar:
        parser.add_argument("--progress_bar", action=jsonargparse.ActionYesNo, default=False)
    parser.add_argument("--wandb", action=jsonargparse.ActionYesNo, default=False)
    parser.add_argument("--wandb_dir", type=str, default=str(LOG_DIR))
    parser.add_argument("--wandb_project", type=str, default="omega_bounds")
    parser.add_argument("--wandb_entity", type=Optional[str], default=None)


def build_parser() -> jsonargparse.ArgumentParser:
    parser = jsonargparse.ArgumentParser(prog="omegabounds", description="Explicit bounds for ω(n) and Ω(n) averages")
    parser.add_function_arguments(configure_backends, "backend")
    subcommands = parser.add_subcommands(dest="command")

    constants = _subparser("Print the constant set, or one constant, as JSON", ["json", "text", "csv"])
    constants.add_function_arguments(constant_set)
    constants.add_argument("--name", type=Optional[str], default=None)
    subcommands.add_subcommand("constants", constants)

    summation = _subparser("Exact Σω, ΣΩ and J up to x", ["json", "text", "csv"])
    summation.add_argument("--x", type=int, required=True)
    summation.add_argument("--segment", type=int, default=DEFAULT_SEGMENT_SIZE)
    summation.add_argument("--dump", type=Optional[str], default=None)
    summation.add_argument("--dump_format", type=str, choices=["binary", "jsonl"], default="jsonl")
    summation.add_argument("--progress_bar", action=jsonargparse.ActionYesNo, default=False)
    subcommands.add_subcommand("sum", summation)

    hyperbola = _subparser("The hyperbola identity against the sieve", ["json", "text", "csv"])
    hyperbola.add_function_arguments(hyperbola_check, skip={"table"})
    subcommands.add_subcommand("hyperbola", hyperbola)

    verify = _subparser("Scan a claim over an integer range", ["json", "text"])
    verify.add_argument("--claim", type=str, choices=list(SCAN_CLAIMS) + ["THM_2_1"], required=True)
    verify.add_argument("--from", type=int, required=True)
    verify.add_argument("--to", type=int, required=True)
    verify.add_argument("--checkpoint", type=Optional[str], default=None)
    verify.add_argument("--threads", type=Optional[int], default=None)
    verify.add_function_arguments(scan_claim, "scan", skip=SCAN_FIXED)
    _add_tracking(verify)
    subcommands.add_subcommand("verify", verify)

    check = _subparser("Run a spot check", ["json", "text"])
    check.add_function_arguments(run_check)
    _add_tracking(check, progress_bar=False)
    subcommands.add_subcommand("check", check)

    envelope = _subparser("Tabulate an envelope on a log-spaced grid", ["csv", "json"])
    envelope.add_function_arguments(envelope_grid, skip={"lo", "hi", "steps"})
    envelope.add_argument("--x-grid", type=str, required=True, help="LO:HI:STEPS")
    subcommands.add_subcommand("envelope", envelope)

    report = _subparser("Merge shard reports of the same claims", ["json", "text"])
    report.add_argument("--merge", type=str, nargs="+", required=True)
    subcommands.add_subcommand("report", report)
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    """
    Parse `argv` and execute the subcommand.

    Returns:
        int: 0 on success or PASS, 1 on FAIL, 2 on usage errors.
    """
    parser = build_parser()
    try:
        cfg = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK

    configure_backends(**vars(cfg.backend))
    command = cfg.command
    sub = getattr(cfg, command)
    if getattr(sub, "digits", None) is not None and not 1 <= sub.digits <= MAX_DIGITS:
        tqdm.tqdm.write(f"--digits must be within [1, {MAX_DIGITS}]", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[command](sub)
    except USAGE_ERRORS as exc:
        tqdm.tqdm.write(f"{command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
