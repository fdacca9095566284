import json
from pathlib import Path

import pandas as pd
import pytest

from app.qtheta import config
from app.qtheta.export_excel import export_run_to_excel
from app.qtheta.laurent import parse_laurent
from app.qtheta.reports import MODE_ORACLE, STATUS_MISMATCH, STATUS_PASS, Report
from app.qtheta.series import MismatchRecord
from app.qtheta.telemetry import RunTelemetry, prune_old_exports


@pytest.fixture(autouse=True)
def _data_dirs(monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
    monkeypatch.setattr(config, "RUNS_DIR", tmp_path / "runs")
    monkeypatch.setattr(config, "EXPORTS_DIR", tmp_path / "exports")


def _record_run() -> str:
    telemetry = RunTelemetry(MODE_ORACLE)
    telemetry.add(Report("jtp", 4, STATUS_PASS, mode=MODE_ORACLE, window=12, n_max_used={"theta_complete": 3}))
    telemetry.add(
        Report("bad", 4, STATUS_MISMATCH, mode=MODE_ORACLE, window=12, mismatch=MismatchRecord(2, parse_laurent("-2")))
    )
    return telemetry.finalize({"jobs": 1})


def test_finalize_writes_run_payload() -> None:
    path = _record_run()

    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    assert payload["schema"] == config.REPORT_SCHEMA_VERSION
    assert payload["mode"] == MODE_ORACLE
    assert payload["jobs"] == 1
    assert payload["summary"] == {"count_pass": 1, "count_mismatch": 1}
    assert payload["entries"][1]["mismatch"] == {"q_exp": 2, "diff": "-2"}


def test_export_latest_run(tmp_path: Path) -> None:
    _record_run()

    dest = export_run_to_excel()

    assert Path(dest).parent == tmp_path / "exports"
    sheets = pd.read_excel(dest, sheet_name=None)
    assert list(sheets["Passed"]["id"]) == ["jtp"]
    failed = sheets["Failed"]
    assert list(failed["id"]) == ["bad"]
    assert int(failed["mismatch_q_exp"].iloc[0]) == 2
    assert json.loads(sheets["All"]["n_max_used"].iloc[0]) == {"theta_complete": 3}
    assert set(zip(sheets["Summary"]["status"], sheets["Summary"]["count"])) == {("pass", 1), ("mismatch", 1)}


def test_export_without_runs() -> None:
    with pytest.raises(FileNotFoundError):
        export_run_to_excel()


def test_prune_keeps_newest_exports(monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
    monkeypatch.setattr(config, "MAX_EXPORTS", 2)
    exports = tmp_path / "exports"
    exports.mkdir()
    for stamp in ("20260101", "20260102", "20260103"):
        (exports / f"checks_{stamp}.xlsx").write_bytes(b"")
    (exports / "notes.txt").write_text("keep", encoding="utf-8")

    prune_old_exports()

    assert sorted(p.name for p in exports.iterdir()) == ["checks_20260102.xlsx", "checks_20260103.xlsx", "notes.txt"]
