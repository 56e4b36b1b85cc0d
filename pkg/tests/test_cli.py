import json
import subprocess
import sys
from pathlib import Path

import pytest

from hodgeforge.cli import main

FIX = Path(__file__).resolve().parent.parent / "fixtures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_hst(capsys):
    assert run(capsys, "hst", FIX / "qp1.json") == (0, "h_st = [0, 2, 1]\n", "")


def test_hst_json(capsys):
    code, out, _ = run(capsys, "hst", "--json", FIX / "tate_curve.json")
    assert code == 0 and json.loads(out) == {"h_st": [1, 1, 0]}


def test_ext(capsys):
    code, out, _ = run(capsys, "ext", FIX / "unit.json", FIX / "qp1.json")
    assert (code, out) == (0, "Ext = [0, 2, 1]\n")


def test_adm(capsys):
    assert run(capsys, "adm", FIX / "tate_curve.json")[:2] == (0, "Admissible: t_N=t_H=1\n")
    code, out, _ = run(capsys, "adm", FIX / "bad_jump.json")
    assert (code, out) == (0, "NotAdmissible: t_N=0 < t_H=1\n")


def test_adm_json_witness(capsys):
    code, out, _ = run(capsys, "adm", "--json", FIX / "bad_jump.json")
    body = json.loads(out)
    assert body["status"] == "NotAdmissible" and body["witness"] == [["1"]]


def test_adm_seed_echo(capsys):
    code, out, _ = run(capsys, "adm", "--json", "--probabilistic-seed", "9", FIX / "lefschetz_surface_complex.json")
    body = json.loads(out)
    assert code == 0 and body["admissible"] and body["seed"] == 9
    assert body["cohomology"]["2"]["status"] == "ProbablyAdmissible"


def test_syn(capsys):
    assert run(capsys, "syn", "--r", "1", FIX / "unit.json")[:2] == (0, "H_syn(r=1) = [0, 2, 1]\n")
    assert run(capsys, "syn", FIX / "padded_tate.json")[:2] == (0, "H_syn(r=0) = [1, 1, 0, 0]\n")


@pytest.mark.parametrize("name", ["tate_curve", "elliptic_complex", "sign_character"])
def test_twist_zero_is_identity(capsys, name):
    path = FIX / f"{name}.json"
    code, out, _ = run(capsys, "twist", "--r", "0", path)
    assert code == 0 and out == path.read_text(encoding="utf-8")


def test_twist_and_tensor_outputs_load(capsys, tmp_path):
    code, out, _ = run(capsys, "twist", "--r", "1", FIX / "unit.json")
    (tmp_path / "t.json").write_text(out)
    assert run(capsys, "hst", tmp_path / "t.json")[1] == "h_st = [0, 2, 1]\n"
    code, out, _ = run(capsys, "tensor", FIX / "qp1.json", FIX / "qp_m1.json")
    (tmp_path / "u.json").write_text(out)
    assert run(capsys, "hst", tmp_path / "u.json")[1] == "h_st = [1, 1, 0]\n"


def test_ss(capsys):
    code, out, _ = run(capsys, "ss", FIX / "nonzero_d2.json")
    assert code == 0 and out.endswith("converged at E_3\n")
    code, out, _ = run(capsys, "ss", "--json", FIX / "unit.json")
    assert json.loads(out)["converged_at"] == 2


def test_degen(capsys):
    code, out, _ = run(capsys, "degen", FIX / "elliptic_complex.json")
    assert code == 0 and out.startswith("degenerate at E_2: yes")
    code, out, _ = run(capsys, "degen", "--json", FIX / "nonzero_d2.json")
    assert json.loads(out)["degenerate"] is False


def test_exp_bk(capsys):
    code, out, _ = run(capsys, "exp-bk", FIX / "qp1.json")
    assert code == 0 and "rank 1, injective" in out


def test_invalid_exit_1(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"p": 5, "dim": 2, "phi": [[1, 0], [0, 1]], "n": [[0, 1], [0, 0]],
                               "filtration": [{"jump": 0, "basis": [[1, 0], [0, 1]]}]}))
    code, out, err = run(capsys, "validate", bad)
    assert code == 1 and "/n: Nφ ≠ pφN" in err
    code, out, _ = run(capsys, "validate", "--json", bad)
    assert code == 1 and json.loads(out)["diagnostics"][0]["pointer"] == "/n"


def test_domain_error_exit_1(capsys):
    code, _, err = run(capsys, "degen", FIX / "unit.json")
    assert code == 1 and "lefschetz" in err


def test_malformed_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"p": 5, "dim": 1, "phi": [[1.5]], "filtration": []}')
    code, _, err = run(capsys, "hst", bad)
    assert code == 2 and "/phi/0/0" in err


def test_usage_exit_2(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "hst")[0] == 2
    assert run(capsys, "hst", FIX / "missing.json")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hodgeforge", "hst", str(FIX / "unit.json")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "h_st = [1, 1, 0]\n"
