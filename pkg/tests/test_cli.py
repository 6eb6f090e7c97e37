import json
import math

import pytest

from xpv.cli import json_dumps, run


def _run(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, out


# ---------------------------------------------------------------------------
# serializer


def test_json_dumps_sorted_and_fixed_width():
    s = json_dumps({"b": 1.0, "a": [True, None, "x"], "c": 2})
    assert s == '{"a":[true,null,"x"],"b":1,"c":2}'


def test_json_dumps_seventeen_digits():
    s = json_dumps(0.1)
    assert s == "0.10000000000000001"
    assert json_dumps(1e6) == "1000000"
    assert json_dumps(6.449454251627669e15) == "6449454251627669"


def test_json_dumps_non_finite_as_strings():
    assert json_dumps(math.inf) == '"inf"'
    assert json_dumps(-math.inf) == '"-inf"'
    assert json_dumps(math.nan) == '"nan"'


def test_json_dumps_escapes():
    assert json_dumps('a"b\\c\n') == '"a\\"b\\\\c\\u000a"'


# ---------------------------------------------------------------------------
# exit codes


def test_exit_zero_on_pass(capsys):
    code, out = _run(capsys, "verify", "--check", "mertens-bracket",
                     "--from", "2", "--to", "10000")
    assert code == 0
    rep = json.loads(out)
    assert rep["pass"] is True
    assert rep["command"] == "verify"
    assert rep["version"] == "0.1.0"


def test_exit_one_on_failed_check(capsys):
    code, out = _run(capsys, "verify", "--check", "pi-li-1",
                     "--from", "2", "--to", "100")
    assert code == 1
    rep = json.loads(out)
    assert rep["pass"] is False
    assert rep["discrepancies"]
    assert rep["discrepancies"][0]["kind"] == "check-not-passed"


def test_exit_two_on_usage(capsys):
    assert run(["verify", "--check", "nope", "--from", "2", "--to", "3"]) == 2
    assert run(["verify", "--check", "pnt-lower", "--from", "2", "--to", "9"]) == 2
    assert run(["constants", "--format", "csv"]) == 2
    capsys.readouterr()


def test_argparse_error_is_exit_two():
    with pytest.raises(SystemExit) as exc:
        run(["verify", "--check"])
    assert exc.value.code == 2


# ---------------------------------------------------------------------------
# determinism and schema


def test_byte_identical_reruns(capsys):
    argv = ["verify", "--check", "log2p-plain", "--from", "2", "--to", "5000"]
    _, first = _run(capsys, *argv)
    _, second = _run(capsys, *argv)
    assert first == second
    argv2 = ["charsum", "--q", "3,7,11,101", "--pv-ratio"]
    _, a = _run(capsys, *argv2)
    _, b = _run(capsys, *argv2)
    assert a == b


def test_schema_keys(capsys):
    _, out = _run(capsys, "charsum", "--q", "7")
    rep = json.loads(out)
    assert sorted(rep.keys()) == [
        "command", "config", "discrepancies", "pass", "results",
        "stamps", "version",
    ]
    assert rep["config"]["q"] == [7]
    assert rep["stamps"]
    assert rep["results"][0]["provenance"] == "computed"


def test_config_echo_includes_flags(capsys):
    _, out = _run(capsys, "verify", "--check", "tail-power",
                  "--from", "0.5", "--to", "1", "--partitions", "1",
                  "--safety-margin", "1e-9")
    rep = json.loads(out)
    cfg = rep["config"]
    assert cfg["check"] == "tail-power"
    assert cfg["x_from"] == 0.5 and cfg["x_to"] == 1
    assert cfg["sieve_cap"] == 10 ** 9


def test_out_writes_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out = _run(capsys, "charsum", "--q", "7", "--out", str(target))
    assert code == 0
    assert out == ""
    rep = json.loads(target.read_text())
    assert rep["results"][0]["q"] == 7


# ---------------------------------------------------------------------------
# subcommand behavior


def test_verify_partitions_match_single(capsys):
    base = ["verify", "--check", "mertens-remainder", "--from", "2", "--to", "20000"]
    _, single = _run(capsys, *base)
    _, split = _run(capsys, *base, "--partitions", "5")
    a = json.loads(single)["results"][0]
    b = json.loads(split)["results"][0]
    assert a["worst_margin"] == b["worst_margin"]
    assert a["arg_min"] == b["arg_min"]
    assert a["verdict"] == b["verdict"]


def test_dickman_csv_grid(capsys):
    code, out = _run(capsys, "dickman", "--xmax", "4", "--format", "csv")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "x,log_rho,err"
    assert len(lines) == 2 + 3 * 1024  # header plus the [1,4] grid
    first = lines[1].split(",")
    assert float(first[0]) == 1.0 and float(first[1]) == 0.0


def test_dickman_exponent_check_flag(capsys):
    code, out = _run(capsys, "dickman", "--xmax", "8",
                     "--exponent-check", "1,8,1.15,table")
    assert code == 0
    rep = json.loads(out)
    assert rep["results"][1]["check_id"] == "rho-exponent-table"
    assert rep["results"][1]["verdict"] == "pass"
    assert run(["dickman", "--xmax", "8", "--exponent-check", "oops"]) == 2
    capsys.readouterr()


def test_mfunc_csv(capsys):
    code, out = _run(capsys, "mfunc", "--kind", "liouville", "--x", "100,1000",
                     "--format", "csv")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "x,M,L,u,Lambda,conv_mean"
    assert len(lines) == 3
    assert float(lines[1].split(",")[1]) == -0.02


def test_mfunc_kind_parsing(capsys):
    assert run(["mfunc", "--kind", "qchar", "--x", "100"]) == 2
    assert run(["mfunc", "--kind", "martian", "--x", "100"]) == 2
    code, out = _run(capsys, "mfunc", "--kind", "random:9", "--x", "100")
    assert code in (0, 1)
    rep = json.loads(out)
    assert "random" in rep["results"][0]["function"]


def test_table_subcommand_published_slice(capsys):
    code, out = _run(capsys, "table", "--c1", "1", "--c", "0.99", "--delta-paper")
    assert code == 0
    rep = json.loads(out)
    res = rep["results"][0]
    assert res["ratios"][0][0] == pytest.approx(1.4187, abs=1e-3)
    factors = [d for d in rep["discrepancies"] if d["kind"] == "global-factor"]
    assert len(factors) == 1


def test_table_csv(capsys):
    code, out = _run(capsys, "table", "--c1", "1,2", "--c", "0.99,0.5",
                     "--delta-paper", "--format", "csv")
    assert code == 0
    lines = out.strip().split("\n")
    assert len(lines) == 3
    assert lines[1].startswith("1,")


def test_charsum_rows(capsys):
    code, out = _run(capsys, "charsum", "--q", "7,15", "--pv-ratio")
    # 15 is not prime, so the ratio path must refuse it
    assert code == 2
    code, out = _run(capsys, "charsum", "--q", "7,15")
    assert code == 0
    rep = json.loads(out)
    assert [r["full_period_sum"] for r in rep["results"]] == [0, 0]
    assert rep["results"][0]["max_abs_partial"] == 2


def test_sieve_limit_flag_blocks_large_builds(capsys):
    code = run(["verify", "--check", "pnt-lower", "--from", "59",
                "--to", "100000", "--sieve-limit", "1000"])
    assert code == 2
    capsys.readouterr()


def test_sieve_limit_env(monkeypatch, capsys):
    monkeypatch.setenv("XPV_SIEVE_LIMIT", "1000")
    code = run(["verify", "--check", "pnt-lower", "--from", "59", "--to", "100000"])
    assert code == 2
    monkeypatch.setenv("XPV_SIEVE_LIMIT", "200000")
    code = run(["verify", "--check", "pnt-lower", "--from", "59", "--to", "100000"])
    assert code == 0
    capsys.readouterr()


def test_text_format(capsys):
    code, out = _run(capsys, "charsum", "--q", "7", "--format", "text")
    assert code == 0
    assert "full_period_sum: 0" in out
    assert "version: 0.1.0" in out
