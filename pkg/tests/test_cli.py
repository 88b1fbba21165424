import json
import os
import subprocess
import sys

import numpy as np
import pytest

from ncball import cli
from ncball.opcore import matrix_to_json, tuple_to_json
from ncball.series import FreeSeries

from conftest import rand_tuple


@pytest.fixture
def points(tmp_path):
    r = np.random.default_rng(4)
    x, y = tmp_path / "x.json", tmp_path / "y.json"
    x.write_text(json.dumps(tuple_to_json(rand_tuple(r, 2, 2, 0.5))))
    y.write_text(json.dumps(tuple_to_json(rand_tuple(r, 2, 2, 0.3))))
    return str(x), str(y)


def test_fock_prints_dim(capsys):
    assert cli.main(["fock", "--n", "2", "--degree", "2"]) == 0
    assert "dim = 7" in capsys.readouterr().out


def test_fock_export(tmp_path):
    out = tmp_path / "s.json"
    assert cli.main(["fock", "--n", "2", "--degree", "2", "--export", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["n"] == 2 and doc["blocks"][0]["rows"] == 7


def test_metric_same_point(points, capsys):
    x, _ = points
    assert cli.main(["metric", "--x", x, "--y", x, "--degree", "64"]) == 0
    assert "d = 0\n" in capsys.readouterr().out


def test_metric_json(points, tmp_path):
    x, y = points
    out = tmp_path / "m.json"
    assert cli.main(["metric", "--x", x, "--y", y, "--degree", "256", "--ladder", "32,64",
                     "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert abs(doc["d"] - np.tanh(doc["delta"])) < 1e-14
    assert [r["degree"] for r in doc["ladder"]] == [32, 64]
    assert doc["config"]["degree"] == 256


def test_eval_and_synth_roundtrip(points, tmp_path, capsys):
    x, _ = points
    s = tmp_path / "s.json"
    assert cli.main(["synth", "schur", "--seed", "3", "--n", "2", "--out", str(s)]) == 0
    F = FreeSeries.from_json(json.loads(s.read_text()))
    assert F.declared_sup_norm == 1.0
    out = tmp_path / "v.json"
    assert cli.main(["eval", "--series", str(s), "--point", x, "--out", str(out)]) == 0
    v = json.loads(out.read_text())["value"]
    assert v["rows"] == 2 and v["cols"] == 2
    s2 = tmp_path / "s2.json"
    cli.main(["synth", "schur", "--seed", "3", "--n", "2", "--out", str(s2)])
    assert s.read_bytes() == s2.read_bytes()


def test_synth_herglotz_constant_term(tmp_path):
    s = tmp_path / "g.json"
    assert cli.main(["synth", "herglotz", "--seed", "1", "--e", "2", "--out", str(s)]) == 0
    G = FreeSeries.from_json(json.loads(s.read_text()))
    assert np.array_equal(G.constant_term(), np.eye(2))


def test_transform(points, tmp_path):
    x, _ = points
    out = tmp_path / "t.json"
    assert cli.main(["transform", "auto", "--lambda", "0.3,0.1+0.2j", "--input", x,
                     "--out", str(out)]) == 0
    assert json.loads(out.read_text())["value"]["n"] == 2
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    a.write_text(json.dumps(matrix_to_json(np.array([[0.5]]))))
    b.write_text(json.dumps(matrix_to_json(np.array([[-0.5]]))))
    assert cli.main(["transform", "frac", "--a", str(a), "--input", str(b),
                     "--out", str(out)]) == 0
    assert abs(json.loads(out.read_text())["value"]["re"][0] - 0.8) < 1e-15


def test_check_json_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(["check", "pick", "--trials", "8", "--seed", "7", "--json", str(a)]) == 0
    assert cli.main(["check", "pick", "--trials", "8", "--seed", "7", "--jobs", "2",
                     "--json", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["config"]["seed"] == 7
    assert "config:" in capsys.readouterr().out


def test_seed_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("NCBALL_SEED", "123")
    out = tmp_path / "r.json"
    assert cli.main(["check", "korany_member", "--trials", "2", "--json", str(out)]) == 0
    assert json.loads(out.read_text())["config"]["seed"] == 123


def test_input_errors(tmp_path, points, capsys):
    x, _ = points
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert cli.main(["metric", "--x", str(bad), "--y", x]) == 2
    assert cli.main(["metric", "--x", str(tmp_path / "missing.json"), "--y", x]) == 2
    assert cli.main(["check", "nope"]) == 2
    assert cli.main(["check", "pick", "--jobs", "0"]) == 2
    assert cli.main(["check", "pick", "--trials", "0"]) == 2
    far = tmp_path / "far.json"
    far.write_text(json.dumps(tuple_to_json(rand_tuple(np.random.default_rng(0), 2, 2, 1.2))))
    assert cli.main(["metric", "--x", str(far), "--y", x]) == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["check", "pick", "--bogus"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2


def test_no_partial_write_on_error(tmp_path, points):
    x, _ = points
    out = tmp_path / "m.json"
    out.write_text("old")
    far = tmp_path / "far.json"
    far.write_text(json.dumps(tuple_to_json(rand_tuple(np.random.default_rng(0), 2, 2, 1.2))))
    assert cli.main(["metric", "--x", str(far), "--y", x, "--out", str(out)]) == 2
    assert out.read_text() == "old"
    assert [p.name for p in tmp_path.iterdir() if p.name.startswith(".tmp")] == []


def test_violation_exit_code(monkeypatch, tmp_path):
    from ncball.verify import checks as ck
    from ncball.verify import generators as gen

    def broken(rng, s, cfg):
        X = gen.contraction(rng, 1, 1, 0.5)
        return ck.Outcome({}, -1.0, [X], {"X": X})

    monkeypatch.setitem(ck.CHECKS, "broken", (broken, ck.IDENTITY))
    assert cli.main(["check", "broken", "--trials", "2", "--artifacts", str(tmp_path)]) == 1
    assert len(list(tmp_path.iterdir())) == 2


@pytest.mark.slow
def test_check_all_console_script(tmp_path):
    out = tmp_path / "all.json"
    env = dict(os.environ)
    r = subprocess.run([sys.executable, "-m", "ncball.cli", "check", "all", "--trials", "50",
                        "--seed", "7", "--json", str(out)], capture_output=True, text=True,
                       env=env, timeout=600)
    assert r.returncode == 0, r.stdout + r.stderr
    doc = json.loads(out.read_text())
    assert doc["status"] == "pass" and len(doc["checks"]) == 24
