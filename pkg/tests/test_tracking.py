from types import SimpleNamespace

import wandb

from omegabounds.verifier import tracking
from omegabounds.verifier.checks import ineq_33x_crossing
from omegabounds.verifier.scan import scan_theorem_2_2


def test_log_reports(monkeypatch, tmp_path):
    calls = {}
    summary = {}

    monkeypatch.setattr(wandb, "init", lambda **kwargs: calls.setdefault("init", kwargs))
    monkeypatch.setattr(wandb, "log", lambda data: calls.setdefault("log", data))
    monkeypatch.setattr(wandb, "finish", lambda: calls.setdefault("finish", True))
    monkeypatch.setattr(wandb, "run", SimpleNamespace(summary=summary), raising=False)

    docs = [scan_theorem_2_2(2, 1000).to_json(), ineq_33x_crossing().to_json()]
    tracking.log_reports(docs, {"command": "test"}, wandb_dir=str(tmp_path / "wandb"))

    assert calls["init"]["project"] == "omega_bounds"
    assert calls["init"]["config"] == {"command": "test"}
    assert (tmp_path / "wandb").is_dir()
    assert calls["finish"]
    table = calls["log"]["reports"]
    assert table.columns == tracking.REPORT_COLUMNS
    assert ["THM_2_2", "scan", "PASS", "7", "8", "witness"] in [list(row) for row in table.data]
    assert summary["THM_2_2/status"] == "PASS"
    assert summary["THM_2_2/argmin"] == "7"
    assert summary["INEQ_33X/status"] == "PASS"
