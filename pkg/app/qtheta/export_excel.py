"""Excel export of check-run telemetry."""

from __future__ import annotations

import json
import os
from typing import Any, Dict, List, Optional

import pandas as pd

from . import config
from .telemetry import prune_old_exports


def _latest_run_json_path() -> Optional[str]:
    """Return the most recent run telemetry JSON path, if any."""

    runs_dir = str(config.RUNS_DIR)
    if not os.path.isdir(runs_dir):
        return None

    runs = sorted([os.path.join(runs_dir, path) for path in os.listdir(runs_dir) if path.endswith(".json")])
    return runs[-1] if runs else None


def _flatten(entry: Dict[str, Any]) -> Dict[str, Any]:
    mismatch = entry.get("mismatch") or {}
    error = entry.get("error") or {}
    return {
        "id": entry.get("id"),
        "order": entry.get("order"),
        "status": entry.get("status"),
        "mode": entry.get("mode"),
        "window": entry.get("window"),
        "elapsed_ms": entry.get("elapsed_ms"),
        "mismatch_q_exp": mismatch.get("q_exp"),
        "mismatch_diff": mismatch.get("diff"),
        "error_code": error.get("error_code"),
        "error_message": error.get("message"),
        "error_path": error.get("path"),
        "detail": entry.get("detail"),
        "n_max_used": json.dumps(entry.get("n_max_used") or {}, sort_keys=True),
    }


def export_run_to_excel(run_path: Optional[str] = None, dest_path: Optional[str] = None) -> str:
    """Create an Excel workbook from a run telemetry payload (latest by default)."""

    run_path = run_path or _latest_run_json_path()
    if not run_path:
        raise FileNotFoundError("No run telemetry available to export")

    with open(run_path, "r", encoding="utf-8") as handle:
        payload = json.load(handle)

    rows: List[Dict[str, Any]] = [_flatten(e) for e in payload.get("entries", [])]
    df = pd.DataFrame(rows)
    if df.empty:
        df = pd.DataFrame([{"info": "No entries in run"}])

    has_status = "status" in df.columns
    passed = df[df["status"] == "pass"].copy() if has_status else pd.DataFrame()
    failed = df[df["status"] != "pass"].copy() if has_status else pd.DataFrame()
    summary = (
        df.groupby(["mode", "status"]).size().reset_index(name="count").sort_values("count", ascending=False)
        if has_status
        else pd.DataFrame()
    )

    os.makedirs(config.EXPORTS_DIR, exist_ok=True)
    if not dest_path:
        dest_path = os.path.join(str(config.EXPORTS_DIR), f"checks_{payload['run_id']}.xlsx")

    with pd.ExcelWriter(dest_path, engine="openpyxl") as writer:
        df.to_excel(writer, index=False, sheet_name="All")
        passed.to_excel(writer, index=False, sheet_name="Passed")
        failed.to_excel(writer, index=False, sheet_name="Failed")
        summary.to_excel(writer, index=False, sheet_name="Summary")

    prune_old_exports()
    return dest_path


__all__ = ["export_run_to_excel"]
