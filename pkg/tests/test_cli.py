import csv
import io
import json
import math
import subprocess
import sys

import pytest

from spectra.cli import ConfigError, main, parse_grid


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def csv_rows(text):
    body = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


def meta(text):
    out = {}
    for line in text.splitlines():
        if line.startswith("# ") and " = " in line:
            key, val = line[2:].split(" = ", 1)
            out[key] = json.loads(val)
    return out


def test_density_csv(capsys):
    code, out, _ = run(capsys, "density", "--ensemble", "ft", "--beta", "1", "--N", "9", "--nu", "3",
                       "--grid", "0:0.111:200", "--workers", "1")
    assert code == 0
    rows = csv_rows(out)
    assert len(rows) == 200
    assert all(float(r["p"]) >= 0 for r in rows)
    assert out.startswith("# spectra ")
    assert meta(out)["config.grid"] == {"min": 0.0, "max": 0.111, "points": 200, "scale": "lin"}


def test_density_n2_value(capsys):
    code, out, _ = run(capsys, "density", "--N", "2", "--nu", "0", "--grid", "0.05:0.45:9", "--workers", "1")
    rows = {round(float(r["x"]), 10): r for r in csv_rows(out)}
    assert float(rows[0.25]["p"]) == pytest.approx(2 / math.sqrt(3), rel=1e-9)
    # gap probability from the antiderivative 2 sqrt(x(1-x))
    assert float(rows[0.25]["q"]) == pytest.approx(1 - 2 * math.sqrt(0.25 * 0.75), abs=1e-9)


def test_density_is_byte_identical(tmp_path):
    argv = ["density", "--N", "4", "--nu", "1", "--grid", "0:0.25:40", "--workers", "1"]
    target = tmp_path / "d.csv"
    assert main(argv + ["-o", str(target)]) == 0
    first = target.read_bytes()
    assert main(argv + ["-o", str(target)]) == 0
    assert target.read_bytes() == first


def test_density_json_schema(capsys):
    code, out, _ = run(capsys, "density", "--ensemble", "wl", "--N", "3", "--nu", "2",
                       "--grid", "0.1:2:5", "--format", "json", "--workers", "1")
    obj = json.loads(out)
    assert set(obj) == {"config", "rows", "suite_results", "version"}
    assert obj["config"]["ensemble"] == "wl"
    assert len(obj["rows"]) == 5
    assert all({"x", "p", "q", "source"} <= set(r) for r in obj["rows"])
    assert obj["rows"][0]["source"] == "wl.tricomi"


def test_micro(capsys):
    code, out, _ = run(capsys, "micro", "--beta", "2", "--nu", "2", "--grid", "0:4:5")
    rows = csv_rows(out)
    assert float(rows[1]["q"]) == pytest.approx(0.999604818799712, rel=1e-12)
    qs = [float(r["q"]) for r in rows]
    assert all(b <= a for a, b in zip(qs, qs[1:]))
    code, out, _ = run(capsys, "micro", "--beta", "1", "--nu", "0", "--picture", "s", "--grid", "0:3:4")
    assert float(csv_rows(out)[0]["p"]) == 0.5


def test_moments(capsys):
    code, out, _ = run(capsys, "moments", "--beta", "1", "--nu", "1", "--N", "2", "--ell", "1")
    assert code == 0
    assert float(csv_rows(out)[0]["value"]) == pytest.approx(1 / 6, rel=1e-14)
    code, out, _ = run(capsys, "moments", "--nu", "1", "--ell", "1")
    row = csv_rows(out)[0]
    assert row["N"] == "inf" and float(row["value"]) == pytest.approx(8.0, rel=1e-9)


def test_equiv(capsys):
    code, out, _ = run(capsys, "equiv", "--beta", "2", "--nu", "2", "--format", "json")
    obj = json.loads(out)
    assert code == 0
    assert obj["suite_results"]["max_diff"] < 1e-8
    assert obj["config"]["tol"] == 1e-8


def test_converge(capsys):
    code, out, _ = run(capsys, "converge", "--nu", "0", "--N", "4,8", "--route", "wl")
    m = meta(out)
    assert code == 0 and m["suite.monotone_WL"] is True and m["suite.passed"] is True


def test_mc_gate_and_failure(capsys, tmp_path):
    code, out, _ = run(capsys, "mc", "--N", "3", "--nu", "1", "--n", "20000", "--seed", "1", "--workers", "1")
    assert code == 0
    assert meta(out)["suite.ks"] < 0.01
    # an impossible tolerance trips the gate but still writes the report
    target = tmp_path / "mc.json"
    code, _, err = run(capsys, "mc", "--N", "3", "--nu", "1", "--n", "2000", "--tol", "1e-9",
                       "--workers", "1", "--format", "json", "-o", str(target))
    assert code == 4 and "gate failed" in err
    assert json.loads(target.read_text())["suite_results"]["passed"] is False


def test_exit_codes(capsys):
    assert run(capsys, "equiv", "--beta", "1", "--nu", "2")[0] == 3
    assert run(capsys, "micro", "--beta", "1", "--nu", "4")[0] == 3
    assert run(capsys, "density", "--N", "3", "--beta", "2")[0] == 3
    assert run(capsys, "micro", "--grid", "5:1:10")[0] == 2
    assert run(capsys, "density", "--N", "0")[0] == 2
    assert run(capsys, "moments", "--N", "a,b")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["micro", "--beta", "3"])
    assert exc.value.code == 2


def test_env_precedence(capsys, monkeypatch):
    monkeypatch.setenv("SPECTRA_SEED", "17")
    monkeypatch.setenv("SPECTRA_WORKERS", "1")
    monkeypatch.setenv("SPECTRA_TOL", "0.5")
    _, out, _ = run(capsys, "mc", "--N", "2", "--nu", "1", "--n", "500")
    m = meta(out)
    assert m["config.seed"] == 17 and m["config.workers"] == 1 and m["config.tol"] == 0.5
    _, out, _ = run(capsys, "mc", "--N", "2", "--nu", "1", "--n", "500", "--seed", "3", "--tol", "0.4")
    m = meta(out)
    assert m["config.seed"] == 3 and m["config.tol"] == 0.4
    monkeypatch.setenv("SPECTRA_SEED", "x")
    assert run(capsys, "mc", "--N", "2", "--nu", "1", "--n", "500")[0] == 2


def test_parse_grid():
    assert parse_grid("1:10:5:log")["scale"] == "log"
    for bad in ("1:2", "1:2:1", "0:1:5:log", "a:1:3", "1:2:3:cubic"):
        with pytest.raises(ConfigError):
            parse_grid(bad)


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "spectra", "moments", "--nu", "1", "--N", "3"],
                         capture_output=True, text=True, check=True)
    assert float(csv_rows(res.stdout)[0]["value"]) == pytest.approx(2 / 36, rel=1e-14)
