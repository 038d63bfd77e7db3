import csv
import io
import json
import math

import pytest

from adcmem import capacity, cli, oracle
from adcmem.channels import DampingParams


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_empty_argv_prints_usage(capsys):
    code, _, err = run(capsys)
    assert code == 2
    assert "usage" in err


@pytest.mark.parametrize("argv", [
    ["two-use", "--chi", "pi/4", "--mode", "fixed-p"],
    ["two-use", "--chi", "pi/4", "--mode", "fixed-p", "--p", "1.5"],
    ["two-use", "--mu-min", "0.2"],
    ["two-use", "--chi", "0.3", "--steps", "1"],
    ["two-use", "--chi", "0.3", "--mu-max", "1.4"],
    ["two-use", "--chi", "2.0"],
    ["two-use", "--chi", "tau/2"],
    ["oscillator", "--chi", "0.3", "--tau-d", "0"],
    ["oscillator", "--chi", "0.3", "--tau-d", "2", "--tau-min", "-1"],
    ["n-use", "--n", "13", "--chi-max", "0.5"],
    ["n-use", "--n", "1", "--memory", "perfect"],
    ["coherence", "--chi", "0.5", "--mu", "0.5", "--p-steps", "1"],
    ["bogus"],
])
def test_usage_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_two_use_csv_rows(capsys):
    code, out, _ = run(capsys, "two-use", "--chi", "pi/8", "--steps", "6")
    assert code == 0
    rows = csv_rows(out)
    assert len(rows) == 6
    assert list(rows[0]) == ["chi", "mu", "p_star", "q_value", "q_per_use"]
    for r in rows:
        assert 0.0 <= float(r["p_star"]) <= 1.0
        assert 0.0 <= float(r["q_per_use"]) <= 1.0


def test_noiseless_rows_are_one(capsys):
    _, out, _ = run(capsys, "two-use", "--chi", "0", "--steps", "5")
    for r in csv_rows(out):
        assert float(r["q_per_use"]) == pytest.approx(1.0, abs=1e-10)


def test_memoryless_pi_over_4_is_zero(capsys):
    _, out, _ = run(capsys, "two-use", "--chi", "pi/4", "--mu-max", "0", "--steps", "2")
    assert all(float(r["q_value"]) <= 1e-9 for r in csv_rows(out))


def test_fixed_p_mode_matches_library(capsys):
    _, out, _ = run(capsys, "two-use", "--chi", "0.4", "--mode", "fixed-p", "--p", "0.45",
                    "--steps", "3")
    rows = csv_rows(out)
    assert list(rows[0]) == ["chi", "mu", "p", "q_value", "q_per_use"]
    for r in rows:
        expected = capacity.two_use_ic_at(DampingParams(0.4, float(r["mu"])), 0.45)
        assert float(r["q_value"]) == pytest.approx(max(expected, 0.0), abs=1e-11)


def test_json_output(capsys):
    code, out, _ = run(capsys, "n-use", "--n", "3", "--memory", "perfect", "--steps", "4",
                       "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["meta"]["command"] == "n-use"
    assert doc["meta"]["parameters"]["n"] == 3
    assert "command" not in doc["meta"]["parameters"]
    assert len(doc["rows"]) == 4
    assert all(r["memory"] == "perfect" for r in doc["rows"])


def test_coherence_rows_on_the_incoherent_edge(capsys):
    _, out, _ = run(capsys, "coherence", "--chi", "0.7", "--mu", "0.3", "--p-steps", "5",
                    "--r2-steps", "3")
    rows = csv_rows(out)
    assert len(rows) == 15
    params = DampingParams(0.7, 0.3)
    for r in rows:
        p = float(r["p"])
        if float(r["r2"]) == 0.0 and p <= 0.5:
            assert float(r["q_value"]) == pytest.approx(
                max(capacity.two_use_ic_at(params, p), 0.0), abs=1e-11)


def test_oscillator_limits(capsys):
    _, out, _ = run(capsys, "oscillator", "--chi", "0.225", "--tau-d", "2", "--tau-max", "2e6",
                    "--steps", "2", "--mode", "fixed-p", "--p", "0.486")
    first, last = csv_rows(out)
    assert float(first["mu"]) == 1.0
    assert float(last["mu"]) == pytest.approx(0.0, abs=1e-6)


def test_out_file_and_determinism(tmp_path, capsys, monkeypatch):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    monkeypatch.setenv("ADCMEM_THREADS", "1")
    assert cli.main(["n-use", "--preset", "fig4", "--steps", "7", "--out", str(a)]) == 0
    monkeypatch.setenv("ADCMEM_THREADS", "4")
    assert cli.main(["n-use", "--preset", "fig4", "--steps", "7", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(csv_rows(a.read_text())) == 6 * 7
    assert capsys.readouterr().out == ""


def test_bad_thread_count(capsys, monkeypatch):
    monkeypatch.setenv("ADCMEM_THREADS", "many")
    assert run(capsys, "two-use", "--chi", "0.3", "--steps", "2")[0] == 2


def test_angle_literals():
    assert cli.parse_angle("pi/3") == math.pi / 3
    assert cli.parse_angle(" PI/8 ") == math.pi / 8
    assert cli.parse_angle("0.685") == 0.685


def test_verify_exit_codes(capsys, monkeypatch):
    good = oracle.OracleReport("ok", 0.0, 1, 1e-10)
    bad = oracle.OracleReport("broken", 1e-3, 1, 1e-10)
    monkeypatch.setattr(oracle, "run_all", lambda: [good])
    code, out, _ = run(capsys, "verify")
    assert code == 0 and out.startswith("PASS ok")
    monkeypatch.setattr(oracle, "run_all", lambda: [good, bad])
    code, out, _ = run(capsys, "verify")
    assert code == 1 and "FAIL broken" in out
