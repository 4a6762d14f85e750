import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from qutrit_contextuality import cli
from qutrit_contextuality.core import random_state

s2 = math.sqrt(2)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    assert code == 0, err
    return json.loads(out)


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


# ----------------------------------------------------------------- witness


def test_witness_pps1_table(capsys):
    code, out, _ = run(capsys, "witness", "--state", "PPS1")
    assert code == 0
    assert "witness_value      -2.000000" in out
    assert "contextual         true" in out


@pytest.mark.parametrize(
    "name,value,contextual",
    [("PPS1", -2.0, True), ("MIXED", 0.0, False), ("SIGMA_X", 2 * s2 - 4 / 3, False), ("THERMAL", -2.0, True)],
)
def test_witness_named_states(capsys, name, value, contextual):
    rep = run_json(capsys, "witness", "--state", name)
    assert rep["witness_value"] == pytest.approx(value, abs=1e-12)
    assert rep["contextual"] is contextual
    assert set(rep) == {"projector_sum", "dichotomous_sum", "correlation_value", "witness_value", "contextual"}


def test_witness_state_json_forms(capsys, tmp_path):
    rep = run_json(capsys, "witness", "--state-json", '{"name": "PPS2"}')
    assert rep["witness_value"] == pytest.approx(-1, abs=1e-12)
    rep = run_json(capsys, "witness", "--state-json", '{"diagonal": {"theta_p_deg": 0, "theta_q_deg": 90}}')
    assert rep["witness_value"] == pytest.approx(-2, abs=1e-12)
    dev = np.diag([2, -1, -1]) / 6
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"matrix": [[float(x), 0.0] for x in dev.reshape(-1)], "deviation": True}))
    rep = run_json(capsys, "witness", "--state-json", str(path))
    assert rep["witness_value"] == pytest.approx(-2, abs=1e-12)


def test_dump_state_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "witness", "--random", "17", "--dump-state")
    assert code == 0
    obj = json.loads(out)
    assert obj["deviation"] is False and len(obj["matrix"]) == 9
    parsed = cli.state_from_json(obj, cli.spin_system(1.0))
    np.testing.assert_allclose(parsed.rho, random_state(17).rho, atol=1e-12, rtol=0)
    path = tmp_path / "state.json"
    path.write_text(out)
    code, out2, _ = run(capsys, "witness", "--state-json", str(path), "--dump-state")
    assert out2 == out


@pytest.mark.parametrize(
    "argv",
    [
        ["witness", "--state", "PPS9"],
        ["witness", "--state-json", "{not json"],
        ["witness", "--state-json", '{"matrix": [[1, 0]]}'],
        ["witness", "--state-json", '{"foo": 1}'],
        ["witness", "--state-json", "/nonexistent/file.json"],
        ["witness"],
        ["witness", "--diagonal", "200", "0"],
        ["witness", "--state", "PPS1", "--polarization", "2"],
        ["bogus"],
        ["single-shot", "--theta-p", "0"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    # argparse reports structural errors through SystemExit, the rest come back as codes
    try:
        code = cli.main(argv)
    except SystemExit as e:
        code = e.code
    assert code == 2
    assert capsys.readouterr().out == ""


def test_invalid_physical_state_exit_3(capsys):
    bad = {"matrix": [[1.2, 0], [0, 0], [0, 0], [0, 0], [-0.2, 0], [0, 0], [0, 0], [0, 0], [0, 0]]}
    code, _, err = run(capsys, "witness", "--state-json", json.dumps(bad))
    assert code == 3
    assert "invalid state" in err
    nonherm = {"matrix": [[0.5, 0], [0.3, 0], [0, 0], [0, 0], [0.5, 0], [0, 0], [0, 0], [0, 0], [0, 0]]}
    assert run(capsys, "witness", "--state-json", json.dumps(nonherm))[0] == 3


# ---------------------------------------------------------------- protocol


def test_protocol_pps3(capsys):
    rec = run_json(capsys, "protocol", "--state", "PPS3")
    assert rec["l3"] == pytest.approx(0, abs=1e-12)
    assert rec["l8"] == pytest.approx(1 / math.sqrt(3), abs=1e-12)
    assert rec["witness"] == pytest.approx(-1, abs=1e-12)


def test_protocol_thermal(capsys):
    rec = run_json(capsys, "protocol", "--state", "THERMAL")
    assert rec["witness"] == pytest.approx(-2, abs=1e-12)


def test_protocol_random_oracle_deltas(capsys):
    rec = run_json(capsys, "protocol", "--random", "42")
    deltas = [v for k, v in rec.items() if k.startswith("delta_")]
    assert len(deltas) == 6
    assert max(deltas) < 1e-9


# ------------------------------------------------------------- single shot


def test_single_shot(capsys):
    rec = run_json(capsys, "single-shot", "--theta-p", "0", "--theta-q", "0")
    assert rec["score"] == pytest.approx(-2, abs=1e-12)
    assert rec["contextual"] is True
    rec = run_json(capsys, "single-shot", "--theta-p", "0", "--theta-q", "90")
    assert rec["score"] == pytest.approx(-2, abs=1e-12)
    rec = run_json(capsys, "single-shot", "--theta-p", "135.9", "--theta-q", "78.4")
    assert rec["score_unscaled"] == pytest.approx(-0.85, abs=0.01)
    assert rec["p_unscaled"] == pytest.approx(3 * rec["p_scaled"])


def test_single_shot_out_of_range(capsys):
    assert run(capsys, "single-shot", "--theta-p", "181", "--theta-q", "0")[0] == 2
    assert run(capsys, "single-shot", "--theta-p", "10", "--theta-q", "-1")[0] == 2


def test_single_shot_table_rounds_to_two_decimals(capsys):
    _, out, _ = run(capsys, "single-shot", "--theta-p", "0", "--theta-q", "0")
    assert "score           -2.00" in out


# ------------------------------------------------------------------ table1


def test_table1_csv(capsys):
    code, out, _ = run(capsys, "table1")
    assert code == 0
    assert "\r" not in out
    data = rows(out)
    assert len(data) == 5
    assert max(float(r["delta_printed"]) for r in data) <= 0.03 + 1e-12
    best = min(float(data[0]["delta_scaled"]), float(data[0]["delta_unscaled"]))
    assert best <= 0.005
    # full precision
    assert len(data[2]["score_unscaled"].replace("-", "").replace(".", "")) >= 15


def test_table1_json_and_table(capsys):
    data = run_json(capsys, "table1")
    assert [r["row"] for r in data] == [1, 2, 3, 4, 5]
    code, out, _ = run(capsys, "table1", "--format", "table")
    assert code == 0 and "-0.85" in out


def test_table1_output_file(capsys, tmp_path):
    path = tmp_path / "t.csv"
    assert run(capsys, "table1", "--output", str(path))[0] == 0
    assert len(rows(path.read_text())) == 5


# ------------------------------------------------------------------ evolve


def _series(capsys, *argv):
    code, out, err = run(capsys, "evolve", *argv)
    assert code == 0, err
    data = rows(out)
    assert list(data[0]) == ["time_s", "witness", "contextual"]
    return [float(r["time_s"]) for r in data], [float(r["witness"]) for r in data], [r["contextual"] for r in data]


@pytest.mark.parametrize("t1,t2", [(1.0, 1.0), (2.0, 0.5), (0.3, 0.3)])
@pytest.mark.parametrize("name", ["PPS1", "PPS2", "PPS3"])
def test_evolve_pps_stays_contextual(capsys, name, t1, t2):
    _, w, flags = _series(capsys, "--state", name, "--t1", str(t1), "--t2", str(t2))
    assert max(w) < 0
    assert set(flags) == {"true"}


def test_evolve_sigma_x(capsys):
    t, w, _ = _series(capsys, "--state", "SIGMA_X")
    assert len(t) == 101 and t[0] == 0 and t[-1] == 5
    assert w[0] == pytest.approx(2 * s2 - 4 / 3, abs=1e-12)
    signs = np.sign(w)
    assert np.count_nonzero(np.diff(signs)) == 1
    assert w[-1] == pytest.approx(-2, abs=0.05)


@pytest.mark.parametrize("name", ["PPS1", "PPS2", "PPS3", "SIGMA_X"])
def test_evolve_limit(capsys, name):
    _, w, _ = _series(capsys, "--state", name, "--t-max", "40", "--steps", "3", "--t1", "1.5", "--t2", "1.0")
    assert w[-1] == pytest.approx(-2, abs=1e-6)


def test_evolve_deterministic(capsys):
    a = run(capsys, "evolve", "--random", "3", "--steps", "7")[1]
    b = run(capsys, "evolve", "--random", "3", "--steps", "7")[1]
    assert a == b


@pytest.mark.parametrize("extra", [["--steps", "1"], ["--t-max", "0"], ["--t1", "-1"]])
def test_evolve_bad_config(capsys, extra):
    assert run(capsys, "evolve", "--state", "PPS1", *extra)[0] == 2


def test_evolve_json(capsys):
    data = run_json(capsys, "evolve", "--state", "PPS1", "--steps", "4")
    assert len(data) == 4 and data[0]["contextual"] is True


# ------------------------------------------------------------------ verify


def test_verify(capsys):
    rep = run_json(capsys, "verify")
    assert rep["bounds"] == {
        "projector_max": 3,
        "dichotomous_min": 3,
        "correlation_min": -4,
        "correlation_min_unconstrained": -8,
    }
    assert {(d["term"], d["component"]) for d in rep["discrepancies"]} >= {("A3A6", "L1")}
    assert rep["correlation_vs_witness"]["slope"] == pytest.approx(0.25, abs=1e-10)
    code, out, _ = run(capsys, "verify")
    assert code == 0 and "A3A6" in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qutrit_contextuality", "witness", "--state", "MIXED", "--format", "json"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["contextual"] is False
