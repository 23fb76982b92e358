import json
import shutil
import subprocess

import pytest

from epalg.cli import main
from epalg.spec import build, dumps_system

SWAP = '''
schema_version = 1
name = "swap"

[group]
kind = "cyclic"
order = 2

[graph]
vertices = ["u", "w"]
edges = [{name = "e", range = "u", source = "u"},
         {name = "f", range = "w", source = "w"}]

[[action.generator]]
element = "1"
vertices = {u = "w", w = "u"}
edges = {e = "f", f = "e"}

[cocycle]
kind = "generators"

[[cocycle.generator]]
element = "1"
values = {e = "0", f = "0"}
'''


@pytest.fixture
def files(tmp_path):
    out = {}
    for key, name, params in [("e21", "epk", {"a": 2, "b": 1}), ("e23", "epk", {"a": 2, "b": 3}),
                              ("e42", "epk", {"a": 4, "b": 2}), ("str", "strings", {"order": 2}),
                              ("s3", "strings", {"order": 3})]:
        p = tmp_path / f"{key}.toml"
        p.write_text(dumps_system(build(name, params)))
        out[key] = str(p)
    (tmp_path / "swap.toml").write_text(SWAP)
    (tmp_path / "bad.toml").write_text("schema_version = [")
    out["swap"], out["bad"] = str(tmp_path / "swap.toml"), str(tmp_path / "bad.toml")
    return out


def run(capsys, *argv):
    code = main(list(argv) + ["--json"])
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def test_validate_pass(files, capsys):
    code, rep = run(capsys, "validate", files["e21"])
    assert code == 0 and rep["valid"] and rep["system"]["name"] == "epk(2,1)"
    assert rep["schema_version"] == 1 and len(rep["system"]["fingerprint"]) == 64


def test_validate_constant_cocycle_fails_with_witness(files, capsys):
    code, rep = run(capsys, "validate", files["swap"])
    assert code == 1 and not rep["fixes_sources"]
    assert rep["violations"][0] == {"kind": "vertex_condition", "g": "1", "edge": "e"}


def test_malformed_toml_exit_2(files, capsys):
    code, rep = run(capsys, "validate", files["bad"])
    assert code == 2 and "TOML" in rep["error"]


def test_missing_file_exit_2(capsys, tmp_path):
    assert main(["classify", str(tmp_path / "none.toml")]) == 2


def test_classify_epk(files, capsys):
    code, rep = run(capsys, "classify", files["e42"])
    assert code == 0
    text = json.dumps(rep)
    assert '"signature": 2' in text


def test_classify_signature_non_abelian_errors(files, capsys):
    code, rep = run(capsys, "classify", files["s3"], "--signature")
    assert code == 2 and "error" in rep


def test_compare(files, capsys):
    code, rep = run(capsys, "compare", files["e21"], files["e23"])
    assert code == 1 and "signature" in json.dumps(rep)
    code, rep = run(capsys, "compare", files["e42"], files["e21"], "--orbit-a", "0")
    assert code == 0


def test_decompose(capsys):
    code, rep = run(capsys, "decompose", "--a", "6", "--b", "4")
    assert code == 0 and len(rep["epk"]["components"]) == 2
    assert all(c["verified"] for c in rep["epk"]["components"])


def test_extend(files, capsys):
    code, rep = run(capsys, "extend", files["e21"], "--length", "3")
    assert code == 0


def test_normalize(files, capsys):
    assert main(["normalize", files["e21"], "u(1) s(1)"]) == 0
    assert capsys.readouterr().out.strip().endswith("s(0) u(1)")
    code, _ = run(capsys, "normalize", files["e21"], "q(1)")
    assert code == 2


def test_fock(files, capsys):
    code, rep = run(capsys, "fock", files["e21"], "s*(0) u(3) s(1) s(0)", "-L", "4")
    assert code == 0


def test_checkmatrices(files, capsys, tmp_path):
    code, rep = run(capsys, "checkmatrices", files["str"], "m3")
    assert code == 0
    code, rep = run(capsys, "checkmatrices", files["str"], "m3", "--perturb", "1e-3")
    assert code == 1
    zero = [[[0, 0], [0, 0], [0, 0]]] * 3
    fam = {"P": {v: zero for v in ("0", "1", "omega")}, "S": {"0": zero, "1": zero},
           "U": {"1": zero}}
    path = tmp_path / "zero.json"
    path.write_text(json.dumps(fam))
    code, rep = run(capsys, "checkmatrices", files["str"], str(path), "--mode", "toeplitz")
    assert code == 1 and "unit" in json.dumps(rep)


def test_selftest(files, capsys):
    code, rep = run(capsys, "selftest", files["e21"], "--trials", "10", "--radius", "2", "-L", "4")
    assert code == 0


def test_build_list_and_output(capsys, tmp_path):
    assert main(["build", "list"]) == 0
    assert "epk" in capsys.readouterr().out
    out = tmp_path / "o.toml"
    assert main(["build", "epk", "a=3", "b=2", "-o", str(out)]) == 0
    assert 'name = "epk(3,2)"' in out.read_text()


@pytest.mark.skipif(shutil.which("epalg") is None, reason="console script not installed")
def test_console_script(files):
    res = subprocess.run(["epalg", "validate", files["e21"]], capture_output=True, text=True)
    assert res.returncode == 0 and "PASS" in res.stdout
