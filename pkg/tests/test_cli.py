import json

import pytest

from kloverify import services
from kloverify.cli import main
from kloverify.transports import MomentReport, Verdict


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def json_lines(text):
    return [json.loads(line) for line in text.splitlines()]


def test_moments_command(capsys):
    code, out, _ = run_cli(capsys, "moments", "--p", "7", "--nmax", "4")
    rows = json_lines(out)
    assert code == 0
    assert [row["value"] for row in rows] == ["41", "64", "517"]
    assert all(row["agrees"] for row in rows)


def test_moments_rejects_composite(capsys):
    code, out, err = run_cli(capsys, "moments", "--p", "9")
    assert code == 2
    assert out == ""
    assert json.loads(err.splitlines()[-1])["error"] == "ConfigError"


def test_missing_required_flag_exits_through_argparse(capsys):
    with pytest.raises(SystemExit) as error:
        main(["verify"])
    assert error.value.code == 2


def test_verify_is_deterministic(capsys):
    first = run_cli(capsys, "verify", "--pmin", "5", "--pmax", "13")
    second = run_cli(capsys, "verify", "--pmin", "5", "--pmax", "13")
    assert first[0] == 0
    assert first[1] == second[1]
    rows = json_lines(first[1])
    assert [row["p"] for row in rows] == [5, 7, 11, 13]
    assert "timings_ms" not in rows[0]


def test_verify_pmin_is_clamped(capsys):
    code, out, _ = run_cli(capsys, "verify", "--pmin", "2", "--pmax", "7")
    assert code == 0
    assert [row["p"] for row in json_lines(out)] == [5, 7]


def test_verify_reuses_cache(capsys, tmp_path):
    cache = tmp_path / "results.jsonl"
    first = run_cli(capsys, "verify", "--pmin", "5", "--pmax", "11", "--cache", str(cache))
    lines_after_first = cache.read_text(encoding="utf-8").splitlines()
    second = run_cli(capsys, "verify", "--pmin", "5", "--pmax", "11", "--cache", str(cache))

    assert first[0] == second[0] == 0
    assert first[1] == second[1]
    assert len(lines_after_first) == 3
    assert cache.read_text(encoding="utf-8").splitlines() == lines_after_first


def test_verify_transform_samples_flag(capsys):
    code, out, _ = run_cli(capsys, "verify", "--pmin", "7", "--pmax", "7", "--transform-samples", "5")
    (row,) = json_lines(out)
    (verdict,) = [v for v in row["verdicts"] if v["check"] == "transform"]
    assert code == 0
    assert verdict["detail"] == "5 quádruplas"

    code, out, err = run_cli(capsys, "verify", "--pmax", "7", "--transform-samples", "0")
    assert code == 2
    assert json.loads(err.splitlines()[-1])["error"] == "ConfigError"


def test_verify_csv(capsys):
    code, out, _ = run_cli(capsys, "verify", "--pmin", "11", "--pmax", "13", "--format", "csv")
    header, *rows = out.splitlines()
    assert code == 0
    assert header == "p,passed,V2,V3,V4,V5,V6,a_p_residual,b_p_residual,failed"
    assert [row.split(",")[0] for row in rows] == ["11", "13"]


def test_verification_failure_sets_exit_code(capsys, monkeypatch):
    def failing(p, **kwargs):
        return MomentReport(p=p, verdicts=[Verdict(check="moments", passed=False, detail="forced")])

    monkeypatch.setattr(services, "verify_prime", failing)
    code, out, err = run_cli(capsys, "verify", "--pmin", "5", "--pmax", "7")

    assert code == 1
    assert len(out.splitlines()) == 2
    report = json.loads(err.splitlines()[-1])
    assert report["error"] == "VerificationFailure"
    assert report["errors"][0]["p"] == 5
    assert report["errors"][0]["check"] == "moments"


def test_unexpected_error_exits_with_one(capsys, monkeypatch):
    def broken(p, **kwargs):
        raise RuntimeError("boom")

    monkeypatch.setattr(services, "verify_prime", broken)
    code, out, err = run_cli(capsys, "verify", "--pmin", "5", "--pmax", "5")

    assert code == 1
    assert out == ""
    assert json.loads(err.splitlines()[-1])["errors"] == [{"message": "boom"}]


def test_traces_csv(capsys):
    code, out, _ = run_cli(capsys, "traces", "--p", "11", "--format", "csv")
    header, *rows = out.splitlines()
    assert code == 0
    assert header == "p,k,point_count,trace,epsilon,hasse_margin"
    assert len(rows) == 8


def test_table_command(capsys):
    code, out, _ = run_cli(capsys, "table", "--p", "5", "--format", "csv")
    header, *rows = out.splitlines()
    assert code == 0
    assert header == "section,row,c1,c2,c3,c4,c5,c6,c7"
    assert rows[6] == "sigma,7,1,1,1,1,1,1,1"
    assert len(rows) == 21


def test_table_rejects_large_prime(capsys):
    code, _, err = run_cli(capsys, "table", "--p", "103")
    assert code == 2


def test_mixed_command(capsys):
    code, out, _ = run_cli(capsys, "mixed", "--p", "7", "2", "3", "--with-oracle")
    (row,) = json_lines(out)
    assert code == 0
    assert row["completed"] == "-35"
    assert row["oracle"] == row["value"]
    assert row["multipliers"] == [2, 3]


def test_mixed_cost_guard_is_a_usage_error(capsys):
    code, _, err = run_cli(capsys, "mixed", "--p", "67", "2", "3", "5")
    assert code == 2
    assert json.loads(err.splitlines()[-1])["error"] == "CostGuardExceeded"


def test_bounds_command(capsys):
    code, out, _ = run_cli(capsys, "bounds", "--pmax", "13")
    rows = json_lines(out)
    assert code == 0
    assert [row["p"] for row in rows] == [2, 3, 5, 7, 11, 13]
    assert all(row["passed"] for row in rows)


def test_version(capsys):
    with pytest.raises(SystemExit) as error:
        main(["--version"])
    assert error.value.code == 0
    assert "kloverify" in capsys.readouterr().out


@pytest.mark.slow
def test_verify_to_101_in_parallel(capsys):
    code, out, _ = run_cli(capsys, "verify", "--pmin", "5", "--pmax", "101", "--jobs", "2")
    assert code == 0
    assert len(out.splitlines()) == 24
