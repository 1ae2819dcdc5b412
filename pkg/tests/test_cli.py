import json
import shutil
import subprocess
import sys

import pytest

from fewnomial.cli import EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, main, run

from helpers import FNR_EXPONENTS, SHARP_EXPONENTS

SHARP = {
    "name": "sharp",
    "exponents": [list(p) for p in SHARP_EXPONENTS],
    "coefficients": [1, 1, -1, -1, "19/25"],
}


@pytest.fixture
def docs(tmp_path):
    def write(name, data):
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(data))
        return str(path)

    return {
        "sharp": write("sharp", SHARP),
        "sharp_h": write("sharp_h", dict(SHARP, heights=[0, 0, 1, 1, 0])),
        "fnr": write("fnr", {"exponents": [list(p) for p in FNR_EXPONENTS], "signs": ["+", "-", "+", "-", "+"]}),
        "circ": write("circ", {"exponents": [0, 1, 2], "coefficients": [1, -1, 1], "heights": [0, 1, 0]}),
        "bad": write("bad", {"exponents": [0, 1, 2], "coefficients": [1, "1.5", 1]}),
        "dir": tmp_path,
    }


def values(lines):
    out = {}
    for line in lines:
        for part in line.split():
            if "=" in part:
                k, v = part.split("=", 1)
                out.setdefault(k, v)
    return out


def test_analyze(docs):
    code, lines, err = run(["analyze", docs["fnr"]])
    assert code == EXIT_OK and not err
    v = values(lines)
    assert (v["k"], v["circuits"], v["pyramid"]) == ("2", "3", "false")
    assert "# faces" in lines and "# non-defective faces" in lines


def test_critical(docs):
    code, lines, _ = run(["critical", docs["circ"]])
    assert code == EXIT_OK
    assert any(line.startswith("0 1 2,1,critical-values,1,2,") for line in lines)
    assert any(line.startswith("face=0 1 2 t=2 x=1 residual=0") for line in lines)
    code, lines, _ = run(["critical", docs["circ"], "--face", "0,1,2"])
    assert code == EXIT_OK
    code, _, err = run(["critical", docs["sharp"]])
    assert code == EXIT_PRECONDITION and "heights" in err


def test_bound_table_and_files(docs):
    csv, png = docs["dir"] / "b.csv", docs["dir"] / "b.png"
    code, lines, _ = run(["bound", "--dim", "2", "--codim", "2", "--csv", str(csv), "--png", str(png)])
    assert code == EXIT_OK
    assert any(line.startswith("general_simple") and line.split()[1] == "24" for line in lines)
    assert any(line.startswith("codim2_circuit") and line.split()[1] == "3" for line in lines)
    assert csv.read_text().startswith("name,value,exact,formula")
    assert png.read_bytes()[:4] == b"\x89PNG"
    code, lines, _ = run(["bound", "--dim", "1", "--codim", "1"])
    assert any(line.startswith("codim1_circuit") and line.split()[1] == "2" for line in lines)
    assert run(["bound", "--dim", "2"])[0] == EXIT_PARSE


def test_certified_bound(docs):
    code, lines, _ = run(["--seed", "0", "bound", docs["sharp"]])
    assert code == EXIT_OK
    v = values(lines)
    assert v["upper"] == "3" and v["flag"] == "certified"
    assert v["codim2_circuit_bound"] == "3"


def test_trace_outputs(docs):
    d = docs["dir"]
    code, lines, _ = run(["trace", docs["sharp"], "--svg", str(d / "t.svg"), "--csv", str(d / "t.csv"), "--png", str(d / "t.png")])
    assert code == EXIT_OK
    v = values(lines)
    assert v["components"] == "3" and v["stabilized"] == "true"
    assert (d / "t.svg").read_text().count('<g id="component-') == 3
    assert (d / "t.png").read_bytes()[:4] == b"\x89PNG"
    assert run(["trace", docs["sharp"], "--grid", "16"])[0] == EXIT_PRECONDITION


def test_patchwork_and_edgewise(docs):
    d = docs["dir"]
    code, lines, _ = run(["patchwork", docs["fnr"], "--svg", str(d / "p.svg"), "--png", str(d / "p.png")])
    assert code == EXIT_OK
    v = values(lines)
    assert v["bound_ok"] == "true" and v["dual_graph_tree"] == "true"
    code, lines, _ = run(["edgewise", "--n", "2", "--p", "3"])
    v = values(lines)
    assert code == EXIT_OK and v["b0"] == "9" and v["points"] == str(10 + 9)
    assert run(["patchwork", docs["fnr"], "--heights", "given"])[0] == EXIT_PRECONDITION


def test_lawrence():
    code, lines, _ = run(["lawrence", "--m", "1", "--k", "2"])
    assert code == EXIT_OK
    assert values(lines)["circuit_faces"] == "4"
    assert all(line.endswith(",true,true") for line in lines if line[:1].isdigit() and line.count(",") == 2)


def test_exit_codes(docs, capsys):
    assert main(["analyze", docs["bad"]]) == EXIT_PARSE
    assert "coefficients[1]" in capsys.readouterr().err
    assert main(["analyze", str(docs["dir"] / "nope.json")]) == EXIT_PARSE
    assert main(["frobnicate"]) == EXIT_PARSE
    assert main(["edgewise", "--n", "0", "--p", "1"]) == EXIT_PRECONDITION


def test_seed_determinism(docs, monkeypatch):
    a = run(["--seed", "5", "patchwork", docs["fnr"]])
    b = run(["--seed", "5", "patchwork", docs["fnr"]])
    assert a == b
    monkeypatch.setenv("FEWNOMIAL_SEED", "5")
    assert run(["patchwork", docs["fnr"]]) == a
    monkeypatch.setenv("FEWNOMIAL_SEED", "five")
    assert run(["patchwork", docs["fnr"]])[0] == EXIT_PARSE


def test_png_is_reproducible(docs):
    d = docs["dir"]
    run(["trace", docs["sharp"], "--png", str(d / "1.png")])
    run(["trace", docs["sharp"], "--png", str(d / "2.png")])
    assert (d / "1.png").read_bytes() == (d / "2.png").read_bytes()


def test_console_script(docs):
    exe = shutil.which("fewnomial")
    cmd = [exe] if exe else [sys.executable, "-m", "fewnomial.cli"]
    proc = subprocess.run(cmd + ["analyze", docs["circ"]], capture_output=True, text=True)
    assert proc.returncode == 0 and "k=1" in proc.stdout
    proc = subprocess.run(cmd + ["analyze", docs["bad"]], capture_output=True, text=True)
    assert proc.returncode == 2 and proc.stderr.startswith("parse error")
