import csv
import json
import math

import pytest

from spectral_rkhs import cli


def run(tmp_path, *argv, name="out"):
    out = tmp_path / name
    code = cli.main(list(argv) + ["--out", str(out)])
    return code, out


def rows(path):
    with open(path) as fh:
        return list(csv.DictReader(line for line in fh if not line.startswith("#")))


def test_eval_with_closed_form_check(tmp_path):
    code, out = run(
        tmp_path, "eval", "--manifold", "circle", "--kernel", "sobolev:1", "--weighting", "riesz",
        "--trunc", "levels:200000", "--points", "grid:8", "--check-closed",
    )
    assert code == 0
    table = rows(out)
    assert len(table) == 8
    assert max(float(r["abs_diff"]) for r in table) < 1e-5
    assert float(table[0]["closed"]) == pytest.approx(1 + math.pi / 6)


def test_header_records_sources(tmp_path):
    code, out = run(tmp_path, "eval", "--manifold", "sphere:3", "--kernel", "sobolev:2", "--points", "grid:4")
    assert code == 0
    head = [l for l in out.read_text().splitlines() if l.startswith("#")]
    assert "# manifold=sphere:3 (flag)" in head
    assert "# trunc=eps:1e-8 (default)" in head


def test_json_output(tmp_path):
    code, out = run(
        tmp_path, "eval", "--manifold", "sphere:3", "--kernel", "sobolev:2", "--pairs", "diagonal",
        "--points", "grid:3", "--format", "json",
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["command"] == "eval"
    assert len(doc["records"]) == 3
    assert doc["records"][0]["tail"] <= 1e-8
    vals = {r["value"] for r in doc["records"]}
    assert len({round(v, 12) for v in vals}) == 1


def test_deterministic_reruns(tmp_path):
    args = ["gram", "--manifold", "sphere:3", "--kernel", "sobolev:2", "--points", "random:12,5"]
    c1, out = run(tmp_path, *args)
    first = out.read_text()
    c2, out = run(tmp_path, *args)
    assert c1 == c2 == 0
    assert out.read_text() == first


def test_config_precedence(tmp_path):
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(json.dumps({"manifold": "sphere:3", "kernel": "sobolev:3", "points": "grid:3"}))
    code, out = run(tmp_path, "eval", "--config", str(cfgfile), "--kernel", "sobolev:2.5")
    assert code == 0
    head = out.read_text()
    assert "# kernel=sobolev:2.5 (flag)" in head
    assert "# manifold=sphere:3 (config)" in head
    assert "# seed=0 (default)" in head or "(default)" in head


def test_unknown_config_key_is_config_error(tmp_path):
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(json.dumps({"manfold": "circle"}))
    code, _ = run(tmp_path, "eval", "--config", str(cfgfile))
    assert code == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "--manifold", "sphere:2"],
        ["eval", "--manifold", "torus"],
        ["eval", "--kernel", "sobolev:-1"],
        ["eval", "--trunc", "levels:x"],
        ["nonsense"],
        ["heat", "--kernel", "sobolev:2"],
        ["verify", "--suite", "nosuch"],
    ],
)
def test_config_errors_exit_2(tmp_path, argv):
    code, _ = run(tmp_path, *argv)
    assert code == 2


def test_numeric_failure_exit_3_with_diagnostic(tmp_path):
    code, out = run(
        tmp_path, "eval", "--manifold", "circle", "--kernel", "sobolev:0.4", "--pairs", "diagonal", "--points", "grid:2"
    )
    assert code == 3
    diag = json.loads(out.read_text())
    assert diag["error"] == "DivergenceError"


def test_abel_flag_below_threshold(tmp_path):
    code, out = run(
        tmp_path, "eval", "--manifold", "sphere:3", "--kernel", "sobolev:0.5", "--weighting", "inverse-power",
        "--abel", "--points", "grid:5",
    )
    # grid point 0 is the pole: the first pair is diagonal and diverges
    assert code == 3
    code, out = run(
        tmp_path, "eval", "--manifold", "sphere:3", "--kernel", "sobolev:0.5", "--weighting", "inverse-power",
        "--abel", "--points", "grid:3", "--pairs", "offdiagonal", "--format", "json",
    )
    assert code == 0
    rec = json.loads(out.read_text())["records"]
    assert len(rec) == 3
    # pole to equator
    assert rec[0]["value"] == pytest.approx(0.0481677231, abs=1e-6)
    assert rec[0]["tail"] <= 1e-6


def test_interp(tmp_path):
    code, out = run(
        tmp_path, "interp", "--manifold", "circle", "--kernel", "sobolev:1.5", "--points", "grid:20", "--format", "json"
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["meta"]["max_error"] < 0.05


def test_heat_and_profile(tmp_path):
    code, out = run(tmp_path, "heat", "--manifold", "circle", "--kernel", "heat:0.5", "--points", "grid:6")
    assert code == 0
    vals = [float(r["value"]) for r in rows(out)]
    assert vals[0] == max(vals)
    code, out = run(tmp_path, "profile", "--manifold", "sphere:4", "--kernel", "sobolev:3", "--points", "grid:6")
    assert code == 0
    assert len(rows(out)) == 6


def test_curve_command(tmp_path):
    code, out = run(tmp_path, "curve", "--curve", "ellipse:2,1", "--points", "grid:8", "--format", "json")
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["meta"]["length"] == pytest.approx(9.688448220547675, rel=1e-13)


def test_verify_single_suite(tmp_path):
    code, out = run(tmp_path, "verify", "--suite", "addition,mass", "--format", "json")
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["meta"]["all_passed"] is True


def test_converge_circle_rate(tmp_path):
    code, out = run(tmp_path, "converge", "--study", "circle-rate", "--format", "json")
    assert code == 0
    assert json.loads(out.read_text())["meta"]["fitted_rate"] == pytest.approx(-1.0, abs=0.05)
