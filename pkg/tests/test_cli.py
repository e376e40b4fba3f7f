"""End-to-end tests for the command-line interface."""

from __future__ import annotations

import csv
import json
import re

import pytest

from zetakms import cli


# ---------------------------------------------------------------------------
# Exit codes
# ---------------------------------------------------------------------------


def test_arith_identity_exits_zero(capsys):
    code = cli.main(["arith", "--identity", "mobius", "--beta", "2", "--N", "20000"])
    assert code == 0
    out = capsys.readouterr().out
    assert "mobius" in out


def test_bc_gibbs_exits_zero(capsys):
    code = cli.main(["bc", "gibbs", "--r", "1/2", "--beta", "2", "--N", "5000"])
    assert code == 0
    assert "-0.5" in capsys.readouterr().out


def test_cantor_zeta_exits_zero(capsys):
    code = cli.main(["cantor", "zeta", "--g", "2", "--depth", "40", "--s", "2"])
    assert code == 0


def test_boundary_rn_exits_zero(capsys):
    code = cli.main(["boundary", "rn", "--g", "2", "--gamma", "ab", "--depth", "4"])
    assert code == 0


def test_failed_check_exits_two(capsys):
    code = cli.main(["suite", "--criteria", "5"])
    assert code == 2
    assert re.search(r"criterion\s+5\s+FAIL", capsys.readouterr().out)


def test_capacity_error_exits_three(capsys):
    code = cli.main(["cantor", "grading", "--g", "2", "--depth", "9"])
    assert code == 3


def test_usage_errors_exit_sixty_four(capsys):
    assert cli.main(["no-such-command"]) == 64
    # malformed word: 'aA' is not reduced
    assert (
        cli.main(
            ["cantor", "gibbs", "--g", "2", "--depth", "4", "--beta", "2",
             "--word", "aA"]
        )
        == 64
    )
    # rank-2 tree has letters a/b only
    assert (
        cli.main(
            ["boundary", "rn", "--g", "2", "--gamma", "cc", "--depth", "4"]
        )
        == 64
    )


def test_domain_errors_exit_sixty_four():
    # beta below the convergence abscissa is a usage-level error
    assert cli.main(["bc", "gibbs", "--r", "0", "--beta", "1", "--N", "100"]) == 64
    assert cli.main(["cantor", "zeta", "--g", "2", "--depth", "40", "--s", "0.33"]) == 64


def test_strict_profile_is_accepted():
    code = cli.main(
        ["--profile", "strict", "arith", "--identity", "liouville",
         "--beta", "2", "--N", "20000"]
    )
    assert code == 0


# ---------------------------------------------------------------------------
# JSON envelope
# ---------------------------------------------------------------------------


def test_json_envelope_shape(tmp_path):
    out = tmp_path / "result.json"
    code = cli.main(
        ["--json", str(out), "arith", "--identity", "abs-mobius",
         "--beta", "3", "--N", "10000"]
    )
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["schema"] == 1
    assert payload["command"] == "arith"
    assert payload["status"] == "ok"
    assert "generated_at" in payload
    assert isinstance(payload["params"], dict)
    assert isinstance(payload["results"], dict)
    assert payload["params"]["identity"] == "abs-mobius"


def test_json_records_failure_status(tmp_path):
    out = tmp_path / "suite.json"
    code = cli.main(["--json", str(out), "suite", "--criteria", "5"])
    assert code == 2
    payload = json.loads(out.read_text())
    assert payload["status"] == "fail"
    assert payload["schema"] == 1


def test_json_is_deterministic_modulo_timestamp(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert (
            cli.main(
                ["--json", str(p), "bc", "kms", "--n", "2", "--beta", "2",
                 "--r", "1/2", "--N", "2000"]
            )
            == 0
        )
    payloads = [json.loads(p.read_text()) for p in paths]
    for payload in payloads:
        payload.pop("generated_at")
    assert payloads[0] == payloads[1]


def test_boundary_type3_json_results(tmp_path):
    out = tmp_path / "t3.json"
    code = cli.main(
        ["--json", str(out), "boundary", "type3", "--g", "2",
         "--gamma", "a", "--caps", "1,2,3"]
    )
    assert code == 0
    payload = json.loads(out.read_text())
    results = payload["results"]
    assert results["twisted_norms"] == [1.0, 1.0, 1.0]
    assert results["untwisted_norms"] == [1.0, 3.0, 5.0]


# ---------------------------------------------------------------------------
# CSV output
# ---------------------------------------------------------------------------


def test_csv_flattens_results(tmp_path):
    out = tmp_path / "rows.csv"
    code = cli.main(
        ["--csv", str(out), "gas", "witten", "--beta", "2", "--N", "3000"]
    )
    assert code == 0
    with out.open() as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["key", "value"]
    keys = {row[0] for row in rows[1:]}
    assert any("witten" in k or "value" in k for k in keys)


# ---------------------------------------------------------------------------
# Acceptance suite front-end
# ---------------------------------------------------------------------------


def test_suite_prints_one_line_per_criterion(capsys):
    code = cli.main(["suite", "--criteria", "4"])
    assert code == 0
    out = capsys.readouterr().out
    assert re.search(r"criterion\s+4\s+PASS", out)


def test_suite_rejects_unknown_criteria():
    assert cli.main(["suite", "--criteria", "11"]) == 64
    assert cli.main(["suite", "--criteria", "zero"]) == 64
