import json
import subprocess
import sys

import pytest

from foldgate.cli import SCHEMA, run
from foldgate.constructors import hypergraph_product, repetition_code
from foldgate.css import code_to_dict


def build(tmp_path, *args):
    out = tmp_path / "code.json"
    assert run(["build", *args, "--out", str(out)]) == 0
    return out


def analyze(path, *flags, out=None):
    argv = ["analyze", str(path), *flags]
    if out:
        argv += ["--out", str(out)]
    return run(argv)


def test_build_and_analyze_surface(tmp_path, capsys):
    path = build(tmp_path, "surface", "--d", "3")
    obj = json.loads(path.read_text())
    assert obj["n"] == 13 and len(obj["zbasis"]) == 1
    capsys.readouterr()
    assert analyze(path, "--dualities", "--gates", "--group", "--distance", "4") == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["schema"] == SCHEMA
    assert rep["code"]["distance"] == {"w_max": 4, "d": 3}
    assert rep["dualities"]["zx_dualities"] == 4
    assert rep["group"]["generators"]["hadamard"] >= 1


def test_analysis_is_deterministic(tmp_path):
    path = build(tmp_path, "hgp")
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    flags = ("--dualities", "--gates", "--group", "--invariants")
    assert analyze(path, *flags, out=a) == 0
    assert analyze(path, *flags, out=b) == 0
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["code"]["k"] == 4
    assert rep["dualities"]["automorphisms"] == 36


def test_bring_with_reference_basis(tmp_path, capsys):
    path = build(tmp_path, "bring")
    capsys.readouterr()
    assert analyze(path, "--dualities", "--basis", "paper") == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["basis"] == "paper"
    assert rep["dualities"]["self_inverse"] == 20


def test_stack(tmp_path, capsys):
    single = build(tmp_path, "surface", "--d", "2")
    out = tmp_path / "stack.json"
    assert run(["build", "stack", "--code", str(single), "--out", str(out)]) == 0
    obj = json.loads(out.read_text())
    assert obj["n"] == 10 and len(obj["zbasis"]) == 2


def test_usage_errors_exit_1(tmp_path, capsys):
    assert run(["analyze", str(tmp_path / "missing.json")]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["analyze", str(bad)]) == 1
    assert run(["build", "surface", "--bogus"]) == 1
    assert run(["frobnicate"]) == 1
    assert run(["build", "stack"]) == 1
    assert "foldgate:" in capsys.readouterr().err


def test_precondition_failures_exit_2(tmp_path):
    lopsided = hypergraph_product(repetition_code(2), repetition_code(3))
    path = tmp_path / "lopsided.json"
    path.write_text(json.dumps(code_to_dict(lopsided)))
    assert analyze(path, "--gates") == 2
    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps({"n": 2, "hx": [[0]], "hz": [[0]]}))
    assert analyze(broken, "--dualities") == 2
    assert analyze(path, "--basis", "file", "--group") == 2


def test_cap_exceeded_exits_3(tmp_path, monkeypatch):
    path = build(tmp_path, "bring")
    monkeypatch.setenv("FOLDGATE_CAP", "10")
    assert analyze(path, "--dualities") == 3


def test_oracles(tmp_path, capsys):
    path = build(tmp_path, "surface", "--d", "3")
    capsys.readouterr()
    assert run(["oracle", "distance", str(path), "--w", "4"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["agree"] and rep["distance"] == 3
    group = tmp_path / "g.json"
    group.write_text(json.dumps({"dimension": 2, "generators": [["01", "10"], ["10", "11"]]}))
    assert run(["oracle", "group", str(group)]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep == {"schema": SCHEMA, "naive": "6", "chain": "6", "agree": True}


def test_version_and_entry_point():
    with pytest.raises(SystemExit) as exc:
        run(["--version"])
    assert exc.value.code == 0
    proc = subprocess.run(
        [sys.executable, "-m", "foldgate.cli", "build", "nonsense"], capture_output=True, text=True
    )
    assert proc.returncode == 1


def test_primed_basis_uses_tau0(tmp_path, capsys):
    from foldgate.fixtures import bring

    path = build(tmp_path, "bring")
    capsys.readouterr()
    assert analyze(path, "--gates", "--basis", "primed") == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["taus"] == "tau0"
    assert rep["gates"][0]["hadamard"] == bring().raw["hadamard"]["primed"]
