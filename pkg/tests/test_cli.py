import json
from pathlib import Path

import pandas as pd
import pytest

from app.qtheta import cli, config
from app.qtheta.catalog import builtin_catalog
from app.qtheta.reports import EXIT_INTERNAL, EXIT_MISMATCH, EXIT_PASS, EXIT_USAGE


@pytest.fixture(autouse=True)
def _isolated(monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
    monkeypatch.delenv("QTHETA_ORDER", raising=False)
    monkeypatch.setattr(config, "RUNS_DIR", tmp_path / "runs")
    monkeypatch.setattr(config, "EXPORTS_DIR", tmp_path / "exports")


def _definitions(tmp_path: Path) -> str:
    path = tmp_path / "defs.json"
    payload = {
        "schema": 1,
        "identities": [
            {"id": "false-const", "lhs": {"node": "const", "poly": "1"}, "rhs": {"node": "const", "poly": "x"}},
        ],
    }
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def test_list_json(capsys: pytest.CaptureFixture[str]) -> None:
    assert cli.main(["list", "--format", "json"]) == EXIT_PASS

    rows = json.loads(capsys.readouterr().out)
    assert [row["id"] for row in rows] == list(builtin_catalog())
    assert rows[0]["paper_eq"] == "Eq. (1)"


def test_list_text_filter(capsys: pytest.CaptureFixture[str]) -> None:
    assert cli.main(["list", "--filter", "triple"]) == EXIT_PASS

    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("jtp")
    assert lines[0].endswith("[Eq. (1)]")
    assert lines[-1] == "1 identities"


def test_check_passes_and_records_telemetry(capsys: pytest.CaptureFixture[str], tmp_path: Path) -> None:
    code = cli.main(["check", "jtp", "gauss-sum", "--order", "6", "--jobs", "1"])

    out = capsys.readouterr().out.splitlines()
    assert code == EXIT_PASS
    assert out[0].split()[:3] == ["jtp", "order=6", "PASS"]
    assert out[-1] == "2 checked: 2 passed, 0 mismatched, 0 errors"
    runs = list((tmp_path / "runs").glob("run_*.json"))
    assert len(runs) == 1
    payload = json.loads(runs[0].read_text(encoding="utf-8"))
    assert payload["ids"] == ["jtp", "gauss-sum"]
    assert payload["summary"] == {"count_pass": 2}


def test_check_json_output(capsys: pytest.CaptureFixture[str]) -> None:
    code = cli.main(["check", "--ids", "jtp", "--order", "4", "--jobs", "1", "--format", "json", "--no-telemetry"])

    payload = json.loads(capsys.readouterr().out)
    assert code == EXIT_PASS
    assert [r["id"] for r in payload["reports"]] == ["jtp"]
    assert payload["reports"][0]["status"] == "pass"


def test_mismatch_exit_code(capsys: pytest.CaptureFixture[str], tmp_path: Path) -> None:
    code = cli.main(
        ["check", "false-const", "--definitions", _definitions(tmp_path), "--order", "3", "--jobs", "1", "--no-telemetry"]
    )

    out = capsys.readouterr().out
    assert code == EXIT_MISMATCH
    assert "first difference at q^0:" in out
    assert out.splitlines()[-1] == "1 checked: 0 passed, 1 mismatched, 0 errors"


def test_unknown_identity_is_a_usage_error(capsys: pytest.CaptureFixture[str]) -> None:
    assert cli.main(["check", "no-such-id", "--no-telemetry"]) == EXIT_USAGE
    assert "no-such-id" in capsys.readouterr().err


def test_bad_arguments_exit_with_usage() -> None:
    with pytest.raises(SystemExit) as excinfo:
        cli.main(["check", "jtp", "--order", "0"])
    assert excinfo.value.code == EXIT_USAGE


def test_oracle_window_too_small(capsys: pytest.CaptureFixture[str]) -> None:
    code = cli.main(["oracle", "jtp", "--order", "4", "--window", "5", "--no-telemetry"])

    assert code == EXIT_USAGE
    assert "need at least 12" in capsys.readouterr().err


def test_oracle_passes(capsys: pytest.CaptureFixture[str]) -> None:
    code = cli.main(["oracle", "jtp", "--order", "3", "--jobs", "1", "--no-telemetry"])

    out = capsys.readouterr().out.splitlines()
    assert code == EXIT_PASS
    assert "[oracle W=10]" in out[0]


def test_check_exports_excel(capsys: pytest.CaptureFixture[str], tmp_path: Path) -> None:
    dest = tmp_path / "checks.xlsx"

    code = cli.main(["check", "jtp", "--order", "4", "--jobs", "1", "--excel", str(dest)])

    assert code == EXIT_PASS
    sheets = pd.read_excel(dest, sheet_name=None)
    assert set(sheets) == {"All", "Passed", "Failed", "Summary"}
    assert list(sheets["Passed"]["id"]) == ["jtp"]


def test_excel_needs_telemetry(capsys: pytest.CaptureFixture[str], tmp_path: Path) -> None:
    code = cli.main(["check", "jtp", "--order", "4", "--jobs", "1", "--no-telemetry", "--excel", str(tmp_path / "x.xlsx")])

    assert code == EXIT_USAGE
    assert "--excel needs run telemetry" in capsys.readouterr().err


def test_expand_identity_side(capsys: pytest.CaptureFixture[str]) -> None:
    assert cli.main(["expand", "jtp.lhs", "--order", "2"]) == EXIT_PASS

    lines = capsys.readouterr().out.splitlines()
    assert lines[:2] == ["q^0 : 1 - x", "q^1 : -x^-1 + x^2"]


def test_expand_json_payload(capsys: pytest.CaptureFixture[str]) -> None:
    expr = json.dumps({"node": "poch_inf", "m": {"q": 1}})

    assert cli.main(["expand", expr, "--order", "4", "--format", "json"]) == EXIT_PASS

    payload = json.loads(capsys.readouterr().out)
    assert payload["order"] == 4
    assert payload["coefficients"]["1"] == "-1"
    assert payload["coefficients"]["2"] == "-1"
    assert payload["coefficients"].get("3", "0") == "0"


def test_expand_bad_side_name(capsys: pytest.CaptureFixture[str]) -> None:
    assert cli.main(["expand", "jtp.middle"]) == EXIT_USAGE


def test_expand_non_evaluable_expression(capsys: pytest.CaptureFixture[str]) -> None:
    expr = json.dumps({"node": "inv", "inner": {"node": "poch_inf", "m": {"x": 1}}})

    assert cli.main(["expand", expr, "--order", "3", "--raw"]) == EXIT_INTERNAL
    assert "[not_a_unit]" in capsys.readouterr().err


def test_invalid_environment_order(monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]) -> None:
    monkeypatch.setenv("QTHETA_ORDER", "zero")

    assert cli.main(["list"]) == EXIT_USAGE
    assert "QTHETA_ORDER" in capsys.readouterr().err
