import io
import json
import subprocess
import sys
from importlib import resources

import pytest

from crnhomeo import example_text
from crnhomeo.cli import run


def example_path(name):
    return str(resources.files("crnhomeo") / "data" / f"{name}.crn")


def invoke(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_analyze_text():
    code, text = invoke("analyze", example_path("g1"))
    assert code == 0
    assert "verdict: NO_INFINITESIMAL_HOMEOSTASIS" in text
    assert "X4 -> X1" in text


def test_analyze_json_is_byte_identical():
    argv = ("analyze", example_path("g2"), "--json", "--numeric", "--zeta", "0.25:1:8", "--seed", "4")
    a, b = invoke(*argv), invoke(*argv)
    assert a == b and a[0] == 0
    doc = json.loads(a[1])
    assert doc["structural"]["verdict"] == "UNDETERMINED"
    (point,) = doc["numeric"]["points"]
    assert point["zeta_star"] == pytest.approx(0.5, abs=1e-6)
    witnesses = doc["structural"]["injectivity"]["witnesses"]
    assert all("det_source" in w and "reactions" in w for w in witnesses)


def test_transform():
    code, text = invoke("transform", example_path("g3"))
    assert code == 0
    assert "X3 -> X1" in text and "zeta" not in text


def test_injectivity_json():
    code, text = invoke("injectivity", example_path("enzyme"), "--json")
    doc = json.loads(text)
    assert code == 0 and doc["verdict"] == "INJECTIVE"
    assert len(doc["products"]) == 15


def test_dsr_dot():
    code, text = invoke("dsr", example_path("enzyme"), "--dot")
    assert code == 0 and text.startswith("digraph")


def test_sweep_csv():
    code, text = invoke("sweep", example_path("g3"), "--csv", "--zeta", "0.5:2:4")
    lines = text.strip().splitlines()
    assert code == 0
    assert lines[0] == "zeta,x_1,x_2,x_3,detB,detJ,dxn_dzeta,stable"
    assert len(lines) == 5


def test_rate_bindings_change_the_answer():
    _, default = invoke("sweep", example_path("g3"), "--csv", "--zeta", "0.5:1:2")
    _, bound = invoke("sweep", example_path("g3"), "--csv", "--zeta", "0.5:1:2", "--rates", "k=2")
    _, one = invoke("sweep", example_path("g3"), "--csv", "--zeta", "0.5:1:2", "--rate", "k1=3")
    assert len({default, bound, one}) == 3


def test_odes():
    code, text = invoke("odes", example_path("g3"))
    assert code == 0 and text.startswith("dX1/dt = zeta")


def test_input_output_override():
    code, text = invoke("analyze", example_path("g1"), "--input", "X2", "--output", "X3", "--json")
    assert code == 0
    assert json.loads(text)["structural"]["species_order"][0] == "X2"


def test_exit_codes(tmp_path):
    assert invoke("analyze", str(tmp_path / "missing.crn"))[0] == 2
    bad = tmp_path / "bad.crn"
    bad.write_text("A => B\n")
    assert invoke("analyze", str(bad))[0] == 2
    assert invoke("analyze", example_path("g1"), "--bogus")[0] == 2
    assert invoke("injectivity", example_path("g1"), "--cap-subsets", "3")[0] == 1
    assert invoke("analyze", example_path("g1"), "--zeta", "nope")[0] == 2


def test_cycle_cap_degrades_to_undetermined():
    code, text = invoke("analyze", example_path("g2"), "--cap-cycles", "1", "--json")
    doc = json.loads(text)
    assert code == 0
    assert doc["structural"]["verdict"] == "UNDETERMINED"
    assert any("aborted" in d for d in doc["structural"]["diagnostics"])


def test_stdin_and_console_entry():
    proc = subprocess.run(
        [sys.executable, "-m", "crnhomeo", "transform", "-"],
        input=example_text("g2"), capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert "X3 -> X1" in proc.stdout
