import csv
import json
import math

import pytest

from llzeta.cli import main

ZETA2 = 1.6449340668482264


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def records(out):
    return [json.loads(line) for line in out.splitlines()]


def test_eval_zeta2(capsys):
    code, out, err = run(capsys, "eval", "--k", "1", "--a", "0", "--z", "0", "--s", "2", "--tol", "1e-12")
    assert code == 0
    (r,) = records(out)
    assert abs(r["re"] - ZETA2) < 1e-12 and abs(r["im"]) < 1e-15 and r["method"] == "series" and r["err"] >= 0
    manifest = json.loads(err.strip().splitlines()[-1])
    assert manifest["records"] == 1 and manifest["config"]["k"] == 1 and "wall_time_s" in manifest


def test_eval_pole_record(capsys):
    code, out, _ = run(capsys, "eval", "--k", "1", "--a", "0", "--z", "0", "--s", "1")
    (r,) = records(out)
    assert code == 0 and r["pole"] is True and r["re"] is None and r["re_residue"] == pytest.approx(1.0)


def test_eval_entire_negative(capsys):
    code, out, _ = run(capsys, "eval", "--k", "2", "--a", "0.3,0.7i", "--z", "0,0", "--s", "-1")
    (r,) = records(out)
    assert code == 0 and r["method"] == "contour" and not r["pole"] and math.isfinite(r["re"])


def _grid(capsys, tmp_path, a, name):
    out = tmp_path / name
    code, _, _ = run(capsys, "grid", "--k", "1", "--a", a, "--z", "0", "--s-grid=-2:3:11,-5:5:11",
                     "--format", "csv", "--out", str(out), "--jobs", "4")
    assert code == 0
    return out


def test_grid_shape_and_poles(capsys, tmp_path):
    path = _grid(capsys, tmp_path, "0", "zeta.csv")
    rows = list(csv.DictReader(path.open()))
    assert len(rows) == 121
    poles = [(float(r["re_s"]), float(r["im_s"])) for r in rows if r["pole"] == "True"]
    assert poles == [(1.0, 0.0)]
    # row-major with Re s outer
    assert [float(r["re_s"]) for r in rows[:11]] == [-2.0] * 11
    assert json.loads((tmp_path / "zeta.csv.manifest.json").read_text())["poles"] == 1
    path = _grid(capsys, tmp_path, "0.3+0.1i", "entire.csv")
    assert not any(r["pole"] == "True" for r in csv.DictReader(path.open()))


def test_grid_deterministic(capsys, tmp_path):
    one = _grid(capsys, tmp_path, "0", "one.csv").read_bytes()
    two = _grid(capsys, tmp_path, "0", "two.csv").read_bytes()
    assert one == two


def test_config_file_and_flag_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"k": 1, "a": [0], "z": [0.5], "s": "2", "tol": 1e-12}))
    _, out, _ = run(capsys, "eval", "--config", str(cfg))
    assert records(out)[0]["re"] == pytest.approx(0.9348022005446793, abs=1e-12)
    _, out, _ = run(capsys, "eval", "--config", str(cfg), "--z", "0")
    assert records(out)[0]["re"] == pytest.approx(ZETA2, abs=1e-12)


def test_rational_a_from_flags(capsys):
    _, out, _ = run(capsys, "residue", "--k", "2", "--a", "1/2,0.37", "--z", "0,0")
    (r,) = records(out)
    assert r["re"] == pytest.approx(-0.5, abs=1e-7) and r["re_formula"] == -0.5


def test_monodromy_command(capsys):
    _, out, _ = run(capsys, "monodromy", "--k", "2", "--a", "0.2,0.1i", "--z", "0,0.3", "--s", "0.7+0.4i",
                    "--variable", "z", "--j", "2", "--p-block", "1")
    (r,) = records(out)
    assert r["err"] < 1e-6 and r["method"]


def test_a_monodromy_command(capsys):
    _, out, _ = run(capsys, "monodromy", "--k", "1", "--a", "0.02-0.05i", "--z", "0", "--s", "2", "--variable", "a")
    (r,) = records(out)
    assert r["err"] < 1e-6
    assert complex(r["re"], r["im"]) == pytest.approx(2j * math.pi * complex(r["re_formula"], r["im_formula"]))


def test_abscissa_command(capsys):
    _, out, _ = run(capsys, "abscissa", "--coef", "ones", "--lam", "log", "--trunc-N", "100000")
    (r,) = records(out)
    assert abs(r["sigma"] - 1) < 0.05 and r["branch"] == "divergent"


@pytest.mark.parametrize("argv, field", [
    (["eval", "--k", "2", "--a", "0,0.1,0.2", "--z", "0", "--s", "2"], "a"),
    (["eval", "--k", "1", "--a", "0", "--z", "0"], "s"),
    (["eval", "--k", "1", "--a", "0", "--z", "0", "--s", "2", "--tol", "-1"], "tol"),
    (["grid", "--k", "1", "--a", "0", "--z", "0", "--s-grid", "1:2"], "s_grid"),
    (["eval", "--k", "1", "--a", "0", "--z", "0", "--s", "two"], "s"),
])
def test_usage_errors_name_the_field(capsys, argv, field):
    with pytest.raises(SystemExit) as e:
        main(argv)
    assert e.value.code == 2
    assert field in capsys.readouterr().err


def test_unknown_config_field(capsys, tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"kk": 1}))
    with pytest.raises(SystemExit) as e:
        main(["eval", "--config", str(cfg)])
    assert e.value.code == 2 and "kk" in capsys.readouterr().err


def test_verify_unknown_suite(capsys):
    with pytest.raises(SystemExit) as e:
        main(["verify", "unknown"])
    assert e.value.code == 2


def test_library_error_exit_code(capsys):
    code, _, err = run(capsys, "eval", "--k", "1", "--a", "0", "--z", "-1", "--s", "2")
    assert code == 3 and "DomainError" in err


def test_verify_residues(capsys):
    code, out, _ = run(capsys, "verify", "residues", "--seed", "7")
    assert code == 0
    assert out.strip().splitlines()[-1].startswith("residues seed=7: PASS")
