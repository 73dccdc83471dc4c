import json
import subprocess
import sys

import numpy as np
import pytest

from tkk import CartanI, build_tkk
from tkk.algebra import element_to_json
from tkk.cli import main
from tkk.functor import identity_map, linear_map, transpose_map

V = CartanI(2, 2)


def write(path, data):
    path.write_text(json.dumps(data))
    return str(path)


@pytest.fixture
def inputs(tmp_path):
    alg = build_tkk(V)
    E11, E22 = V.from_matrix(np.diag([1, 0])), V.from_matrix(np.diag([0, 1]))
    A = np.eye(4, dtype=complex)
    A[0, 1] = 1e-3
    files = {
        "space": write(tmp_path / "space.json", V.config()),
        "diamond": write(
            tmp_path / "diamond.json",
            [element_to_json(z) for z in (alg.zero(), alg.element(x=E11), alg.element(x=E22), alg.element(x=E11 + E22))],
        ),
        "bad_tripotents": write(tmp_path / "bad.json", [element_to_json(alg.element(x=E11)), element_to_json(alg.element(x=2 * E11))]),
        "empty": write(tmp_path / "empty.json", []),
        "identity": write(tmp_path / "id.json", identity_map(V).to_json()),
        "transpose": write(tmp_path / "t.json", transpose_map(CartanI(2, 3)).to_json()),
        "tampered": write(tmp_path / "tampered.json", linear_map(V, V, A).to_json()),
        "singular": write(tmp_path / "singular.json", linear_map(V, V, np.diag([0, 1, 1, 1])).to_json()),
    }
    (tmp_path / "broken.json").write_text('{"type": "cartan1", ')
    files["broken"] = str(tmp_path / "broken.json")
    files["dir"] = tmp_path
    return files


def load_report(path):
    doc = json.loads(open(path).read())
    doc.pop("timestamp")
    return doc


def test_verify_passes_and_writes_report(inputs):
    out = inputs["dir"] / "r.json"
    code = main(["verify", "--space", inputs["space"], "--suites", "jordan,tkk", "--samples", "20", "--seed", "42", "--report", str(out)])
    assert code == 0
    doc = load_report(out)
    assert doc["pass"] is True
    assert doc["config"]["suites"] == ["jordan", "tkk"] and doc["config"]["seed"] == 42
    assert {"check", "anchor", "samples", "max_residual", "pass"} <= set(doc["checks"][0])


def test_verify_is_byte_identical_apart_from_timestamp(inputs):
    runs = []
    for k in range(2):
        out = inputs["dir"] / f"r{k}.json"
        assert main(["verify", "--space", inputs["space"], "--suites", "tkk,lie", "--samples", "5", "--seed", "3", "--report", str(out)]) == 0
        text = out.read_text().splitlines()
        runs.append([line for line in text if '"timestamp"' not in line])
    assert runs[0] == runs[1]


def test_verify_accepts_a_run_config(inputs):
    run = write(inputs["dir"] / "run.json", {"space": V.config(), "suites": "jordan", "samples": 5, "seed": 1})
    out = inputs["dir"] / "r.json"
    assert main(["verify", "--space", run, "--report", str(out)]) == 0
    assert load_report(out)["config"]["samples"] == 5
    assert main(["verify", "--space", run, "--samples", "7", "--report", str(out)]) == 0
    assert load_report(out)["config"]["samples"] == 7


def test_verify_fails_on_tampered_morphism(inputs):
    out = inputs["dir"] / "r.json"
    code = main(["verify", "--space", inputs["space"], "--suites", "functor", "--samples", "5", "--phi", inputs["tampered"], "--report", str(out)])
    assert code == 1
    failing = [c["check"] for c in load_report(out)["checks"] if not c["pass"]]
    assert failing == ["functor.supplied.preserves_triple_product"]


@pytest.mark.parametrize(
    "extra",
    [
        ["--space", "BROKEN"],
        ["--space", "MISSING"],
        ["--space", "SPACE", "--suites", "jordan,bogus"],
        ["--space", "SPACE", "--suites", ""],
        ["--space", "SPACE", "--samples", "0"],
        ["--space", "SPACE", "--tol", "2"],
        ["--space", "SPACE", "--samples", "many"],
        [],
    ],
)
def test_verify_parse_errors_exit_2(inputs, extra, capsys):
    sub = {"BROKEN": inputs["broken"], "MISSING": str(inputs["dir"] / "nope.json"), "SPACE": inputs["space"]}
    assert main(["verify", *[sub.get(a, a) for a in extra]]) == 2
    assert "tkk: error" in capsys.readouterr().err


def test_bad_space_config_exits_2(inputs):
    cfg = write(inputs["dir"] / "bad_space.json", {"type": "cartan7"})
    assert main(["verify", "--space", cfg]) == 2


def test_poset_diamond(inputs, capsys):
    out = inputs["dir"] / "h.dot"
    assert main(["poset", "--space", inputs["space"], "--tripotents", inputs["diamond"], "--out", str(out)]) == 0
    dot = out.read_text()
    assert dot.splitlines()[0] == "digraph hasse {"
    assert sum(line.strip().endswith(";") and "->" not in line for line in dot.splitlines()) == 4
    assert dot.count("->") == 4


def test_poset_empty(inputs, capsys):
    assert main(["poset", "--space", inputs["space"], "--tripotents", inputs["empty"]]) == 0
    assert capsys.readouterr().out == "digraph hasse {\n}\n"


def test_poset_reports_witness(inputs, capsys):
    assert main(["poset", "--space", inputs["space"], "--tripotents", inputs["bad_tripotents"]]) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["witness"] == 1


def test_poset_parse_errors(inputs):
    assert main(["poset", "--space", inputs["space"], "--tripotents", inputs["space"]]) == 2
    bad = write(inputs["dir"] / "badel.json", [{"x": [1, 2, 3]}])
    assert main(["poset", "--space", inputs["space"], "--tripotents", bad]) == 2


def test_transport_exit_codes(inputs):
    out = inputs["dir"] / "r.json"
    assert main(["transport", "--phi", inputs["transpose"], "--report", str(out)]) == 0
    assert main(["transport", "--phi", inputs["identity"], "--samples", "10", "--report", str(out)]) == 0
    doc = load_report(out)
    assert all(c["max_residual"] == 0.0 for c in doc["checks"])
    assert {"isometry", "composition", "identity", "recovery"} <= {c["check"] for c in doc["checks"]}
    assert main(["transport", "--phi", inputs["singular"], "--report", str(out)]) == 1
    assert main(["transport", "--phi", inputs["broken"]]) == 2


def test_log_level_env(inputs, monkeypatch, capsys):
    monkeypatch.setenv("TKK_LOG", "debug")
    assert main(["transport", "--phi", inputs["identity"], "--samples", "2", "--report", str(inputs["dir"] / "r.json")]) == 0
    monkeypatch.setenv("TKK_LOG", "loud")
    assert main(["transport", "--phi", inputs["identity"]]) == 2


def test_module_entry_point(inputs):
    proc = subprocess.run(
        [sys.executable, "-m", "tkk", "poset", "--space", inputs["space"], "--tripotents", inputs["diamond"]],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and proc.stdout.count("->") == 4
