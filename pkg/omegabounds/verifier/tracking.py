import pathlib
from typing import Any, Dict, List, Optional

import wandb

from omegabounds.paths import LOG_DIR

REPORT_COLUMNS: List[str] = ["claim_id", "kind", "status", "n", "value", "detail"]


def _rows(doc: Dict[str, Any]) -> List[List[str]]:
    """Flatten one report document into table rows (witnesses, violations, lows, values)."""
    claim, kind, status = doc["claim_id"], doc["kind"], doc["status"]
    rows: List[List[str]] = []
    if kind == "scan":
        for w in doc["equality_witnesses"]:
            rows.append([claim, kind, status, w["n"], w["sum"], "witness"])
        for v in doc["violations"]:
            rows.append([claim, kind, status, v["n"], repr(v["slack"]), "violation"])
        for low in doc["dyadic_minima"]:
            rows.append([claim, kind, status, low["n"], repr(low["slack"]), f"octave {low['k']}"])
    else:
        for key, value in sorted(doc["values"].items()):
            rows.append([claim, kind, status, "", value, key])
        for note in doc["discrepancies"]:
            rows.append([claim, kind, status, "", "", f"discrepancy: {note}"])
    return rows


def _summary(doc: Dict[str, Any]) -> Dict[str, Any]:
    claim = doc["claim_id"]
    summary: Dict[str, Any] = {f"{claim}/status": doc["status"]}
    if doc["kind"] == "scan":
        summary[f"{claim}/violation_count"] = int(doc["violation_count"])
        summary[f"{claim}/checkpoint"] = doc["checkpoint"]
        if doc["min_slack"] is not None:
            summary[f"{claim}/min_slack"] = doc["min_slack"]["slack"]
            summary[f"{claim}/argmin"] = doc["min_slack"]["n"]
    elif doc["ratio"] is not None:
        summary[f"{claim}/ratio"] = doc["ratio"]
    return summary


def log_reports(
    docs: List[Dict[str, Any]],
    config: Dict[str, Any],
    wandb_dir: str = str(LOG_DIR),
    wandb_project: str = "omega_bounds",
    wandb_entity: Optional[str] = None,
) -> None:
    """
    Log verification documents to a Weights & Biases run.

    Each document contributes its status (and slack or ratio) to the run
    summary, and its witnesses, violations, octave minima or computed values
    to a single `reports` table.

    Args:
        docs (List[Dict[str, Any]]): Encoded scan reports and check records.
        config (Dict[str, Any]): The command's arguments, stored as run config.
        wandb_dir (str): Directory for Weights & Biases logs.
        wandb_project (str): Weights & Biases project name.
        wandb_entity (Optional[str]): Weights & Biases entity.
    """
    pathlib.Path(wandb_dir).mkdir(parents=True, exist_ok=True)
    rows = [row for doc in docs for row in _rows(doc)]
    table: wandb.Table = wandb.Table(columns=REPORT_COLUMNS, data=rows)

    wandb.init(project=wandb_project, entity=wandb_entity, dir=wandb_dir, config=config)
    wandb.log({"reports": table})
    for doc in docs:
        wandb.run.summary.update(_summary(doc))
    wandb.finish()
