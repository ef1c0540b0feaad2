import csv
import io
import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from lusinlp import cli


def run(argv, tmp_path, name="out.csv"):
    path = tmp_path / name
    code = cli.main(argv + ["--out", str(path)])
    text = path.read_text() if path.exists() else ""
    return code, text


def blocks(text):
    return [list(csv.reader(io.StringIO(b))) for b in text.strip("\n").split("\n\n")]


def config(tmp_path, data, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def test_pathology_example(tmp_path):
    code, text = run(["pathology", "--n", "10", "--x", "1/2", "--p", "1", "--s", "1/5,3/10"],
                     tmp_path)
    assert code == 0
    rate, sep, pre, summary = blocks(text)
    row = dict(zip(rate[0], rate[1]))
    assert row["value_pow_p"] == "1/10" and row["bound_2_over_n"] == "1/5"
    assert row["pass"] == "true" and row["error_bound"] == "0"
    assert sep[1] == ["1/5", "", "1"] and sep[2] == ["3/10", "1", ""]
    kinds = {r[1]: r[2] for r in pre[1:] if r[0] == "1/5"}
    assert kinds["(1/2 2)"] == "finite" and kinds["(-1/2 1/2)"] == "cofinite"
    assert all(r[-1] == "true" for r in summary[1:])


def test_pathology_default_grid(tmp_path):
    code, text = run(["pathology", "--n", "1-16"], tmp_path)
    assert code == 0
    rate = blocks(text)[0]
    assert len(rate) == 1 + 16 * 9 * 3


def test_dyadic(tmp_path):
    code, text = run(["dyadic", "--levels", "0-4"], tmp_path)
    assert code == 0
    (tab,) = blocks(text)
    errs = [r[4] for r in tab[1:]]
    assert errs == ["1/4", "1/8", "1/16", "1/32", "1/64"]
    assert [r[6] for r in tab[1:]] == ["2", "2", "2", "2", ""]
    cfg = config(tmp_path, {"curve": {"const": {"coords": [3]}}})
    code, text = run(["dyadic", "--levels", "0-3", "--config", cfg], tmp_path)
    assert code == 0 and all(r[4] == "0" for r in blocks(text)[0][1:])


def test_density(tmp_path):
    code, text = run(["density", "--eps", "1/10,1/100", "--p", "2"], tmp_path)
    assert code == 0
    rows = blocks(text)[0][1:]
    final = [r for r in rows if r[0] == "lp_simple"]
    assert len(final) == 2 and all(float(r[5]) < float(F(r[3])) for r in final)


def test_urysohn(tmp_path):
    code, text = run(["urysohn", "--set", "[1/5,3/5)", "--n", "5", "--p", "1"], tmp_path)
    assert code == 0
    row = blocks(text)[0][1]
    assert row[4] == "1/5" and row[-1] == "true"


def test_cover(tmp_path):
    code, text = run(["cover", "--set", "[0,1/3)", "--eps", "1/100"], tmp_path)
    assert code == 0
    row = blocks(text)[0][1]
    assert row[2:] == ["6", "0-20", "1/192", "true"]


def test_integrate(tmp_path):
    cfg = config(tmp_path, {"space": {"pointwise": ["1/2"]}, "curve": {"hat_path": 10}})
    code, text = run(["integrate", "--p", "2", "--config", cfg], tmp_path)
    assert code == 0
    norms, weak, hb = blocks(text)
    assert abs(float(norms[1][3]) - (1 / 15) ** 0.5) < 1e-10
    assert weak[1] == ["0", "1/10"]
    assert hb[1][1] == hb[1][2] == "1/10"


def test_limit_failure_witness(tmp_path):
    code, text = run(["limit"], tmp_path)
    assert code == 1
    rep, witness = blocks(text)
    assert rep[-1][-1] == "false"
    row = dict(zip(witness[0], witness[1]))
    assert F(row["gap"]) >= F(1, 2)
    assert int(row["n"]) == int(row["m"]) + 1


def test_limit_geometric_passes(tmp_path):
    cfg = config(tmp_path, {"sequence": {"geometric": {"count": 12}}})
    code, text = run(["limit", "--depth", "6", "--config", cfg], tmp_path)
    assert code == 0
    summary = blocks(text)[-1]
    assert summary[1][0] == "6" and summary[1][-1] == "true"


@pytest.mark.parametrize("argv", [
    ["cover", "--set", "[0,1/3)", "--eps", "1/100"],
    ["pathology", "--n", "1-8", "--seed", "3"],
    ["limit"],
])
def test_byte_identical(tmp_path, argv):
    _, a = run(argv, tmp_path, "a.csv")
    _, b = run(argv, tmp_path, "b.csv")
    assert a == b and a


def test_config_errors(tmp_path, capsys):
    assert cli.main(["cover", "--config", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli.main(["dyadic", "--config", str(bad)]) == 2
    assert cli.main(["dyadic", "--config", config(tmp_path, {"curve": {"nope": 1}})]) == 2
    assert cli.main(["pathology", "--n", "0"]) == 2
    assert cli.main(["cover", "--eps", "0"]) == 2
    assert cli.main(["cover", "--set", "[1/2, 1/3)"]) == 2
    assert "config error" in capsys.readouterr().err
    with pytest.raises(SystemExit) as info:
        cli.main(["bogus"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        cli.main(["limit", "--depth", "0"])
    assert info.value.code == 2


def test_stdin_config_and_module_entry(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "lusinlp", "cover", "--config", "-"],
                          input=json.dumps({"set": "[0,1/3)", "eps": "1/100"}),
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1].endswith("1/192,true")


def test_dyadic_step_curve_has_no_lipschitz_bound(tmp_path):
    cfg = config(tmp_path, {"curve": {"simple": [[{"coords": [1]}, [["0", "1/4"]]]]}})
    code, text = run(["dyadic", "--levels", "0-3", "--config", cfg], tmp_path)
    assert code == 0
    rows = blocks(text)[0][1:]
    assert [r[4] for r in rows] == ["3/8", "1/4", "0", "0"]
    assert all(r[7] == "" for r in rows)
