import io
import json
import subprocess
import sys

import pytest

from detideals.cli import main
from detideals.exact_poly import Poly
from detideals.pfaffian import sub_pfaffian
from detideals.straightening import symbolic_det

from conftest import xmat

DET2 = "x[1,1]*x[2,2] - x[1,2]*x[2,1]"
PF4 = "x[1,2]*x[3,4] - x[1,3]*x[2,4] + x[1,4]*x[2,3]"


def run(capsys, monkeypatch, argv, stdin=""):
    monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


@pytest.fixture
def cli(capsys, monkeypatch):
    return lambda argv, stdin="": run(capsys, monkeypatch, argv, stdin)


def test_ideal_member(cli):
    assert cli(["ideal-member", "--r", "2"], DET2) == (0, {"member": True, "min_width": 2}, "")
    code, out, _ = cli(["ideal-member", "--r", "2"], "x[1,1]*x[2,2]")
    assert out == {"member": False, "min_width": 1}


def test_json_input_is_accepted(cli):
    body = json.dumps({"terms": [{"coef": 1, "mono": {"x[1,1]": 1, "x[2,2]": 1}},
                                 {"coef": "-1", "mono": {"x[1,2]": 1, "x[2,1]": 1}}]})
    assert cli(["ideal-member", "--r", "2"], body)[1]["member"]


def test_straighten_output(cli):
    code, out, _ = cli(["straighten"], DET2)
    assert code == 0 and out["terms"] == [{"shape": [2], "left": [[1, 2]], "right": [[1, 2]], "coef": {"0": "1/1"}}]


def test_reduce(cli):
    code, out, _ = cli(["reduce", "--r", "2"], DET2)
    assert code == 0 and out["sigma"] == [2]
    assert "forms" in out["subst"] and out["slice"] is not None


def test_exit_codes(cli):
    assert cli(["reduce", "--r", "2"], "x[1,1]*x[2,2]")[0] == 3
    assert cli(["reduce", "--r", "2"], "x[1,1]*(")[0] == 2
    assert cli(["reduce", "--r", "2", "--budget", "3"], f"({DET2})**3")[0] == 4
    assert cli(["reduce"], DET2)[0] == 2
    code, _, err = cli(["pit", "condenser", "--n", "3", "--r", "2", "--omega", "1"])
    assert code == 3 and json.loads(err)["error"] == "BadOmega"


def test_file_input_after_flags(cli, tmp_path):
    f = tmp_path / "pf.txt"
    f.write_text(PF4)
    code, out, _ = cli(["pfaffian", "reduce", "--r", "2", str(f)])
    assert code == 0 and out["sigma"] == [4]
    assert cli(["pfaffian", "reduce", str(tmp_path / "missing")])[0] == 2


def test_output_file(cli, tmp_path):
    target = tmp_path / "out.json"
    cli(["derivative-dim", "--order", "1", "--output", str(target)], DET2)
    assert json.loads(target.read_text()) == {"dim": 5, "order": 1}


def test_pfaffian_commands(cli):
    skew = json.dumps({"size": 4, "entries": [[1, 2, "y[1]"], [3, 4, 2], [1, 3, "1/2"]]})
    assert Poly.from_json(cli(["pfaffian", "eval"], skew)[1]["pfaffian"]) == Poly.from_json(
        {"terms": [{"coef": 2, "mono": {"y[1]": 1}}]})
    assert cli(["pfaffian", "eval"], json.dumps({"size": 4, "entries": [[2, 1, 1]]}))[0] == 2
    code, out, _ = cli(["pfaffian", "embed"], "[[1, 2], [3, 4]]")
    assert out["size"] == 4 and all(i < j for i, j, _ in out["entries"])
    code, out, _ = cli(["pfaffian", "straighten"], PF4)
    assert out["terms"][0]["rows"] == [[1, 2, 3, 4]]
    pf6 = sub_pfaffian(tuple(range(1, 7))).dumps()
    code, out, _ = cli(["pfaffian", "compose", "--r", "3", "--target-order", "2"], pf6)
    assert code == 0 and out["output"] == {"terms": [{"coef": {"0": "1/1"}, "mono": {"y[1,2]": 1}}]}


def test_compose_oracle(cli, tmp_path):
    prog = tmp_path / "g.json"
    prog.write_text(json.dumps({"layers": [["s"], ["a"], ["t"]], "edges": [
        {"from": "s", "to": "a", "label": "y[1] + 1"}, {"from": "a", "to": "t", "label": "y[2]"}]}))
    det3 = symbolic_det(xmat(3)).dumps()
    code, out, _ = cli(["compose-oracle", "--r", "3", "--abp", str(prog)], det3)
    assert code == 0
    assert set(out["transcript"]) == {"q", "t", "N", "sigma", "alpha"}
    assert Poly.from_json(out["output"]) == Poly.from_json(
        {"terms": [{"coef": 1, "mono": {"y[1]": 1, "y[2]": 1}}, {"coef": 1, "mono": {"y[2]": 1}}]})
    assert cli(["compose-oracle", "--r", "2", "--abp", str(prog)], det3)[0] == 3


def test_pit_commands(cli, monkeypatch):
    code, out, _ = cli(["pit", "gen", "--n", "2", "--r", "1"])
    assert out["seed_variables"] == ["y[1,1]", "y[2,1]", "z[1,1]", "z[1,2]"]
    assert cli(["pit", "apply", "--r", "1"], DET2)[1]["vanishes"]
    code, out, _ = cli(["pit", "recursive", "--n", "16", "--k", "2", "--schedule", "2,2"])
    assert out["degree"] == 4
    assert cli(["pit", "recursive", "--n", "15", "--k", "1", "--schedule", "2"])[0] == 3
    monkeypatch.setenv("DETIDEALS_SEED", "11")
    a = cli(["pit", "condenser", "--n", "3", "--r", "2"])[1]
    b = cli(["pit", "condenser", "--n", "3", "--r", "2", "--seed", "11"])[1]
    assert a == b and len(a["matrices"]) == 5
    assert cli(["pit", "sz"], DET2)[1]["nonzero"]


def test_ips_round_trip(cli, tmp_path):
    code, refutation, _ = cli(["ips", "refute", "--n", "2"])
    path = tmp_path / "ref.json"
    path.write_text(json.dumps(refutation))
    assert cli(["ips", "verify", str(path)])[1] == {"verified": True}
    code, out, _ = cli(["ips", "extract", str(path)])
    assert out["witness_value"] == "1" and out["width_at_least_r"]
    code, system, _ = cli(["ips", "build-instance", "--n", "3", "--r", "2"])
    assert system["r"] == 2 and sum(a["role"] == "hard" for a in system["axioms"]) == 5


def test_abp_commands(cli, tmp_path):
    code, prog, _ = cli(["abp", "det", "--t", "2"])
    path = tmp_path / "det2.json"
    path.write_text(json.dumps(prog))
    out = cli(["abp", "eval", str(path)])[1]
    assert len(out["polynomial"]["terms"]) == 2
    assert len(cli(["abp", "valiant", str(path)])[1]["matrix"]) == out["vertices"]
    assert cli(["abp", "pfaffian", "--order", "4"])[0] == 0
    assert cli(["abp", "pfaffian", "--order", "3"])[0] == 3


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "detideals", "ideal-member", "--r", "2"], input=DET2,
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == {"member": True, "min_width": 2}


def test_outputs_are_byte_identical():
    args = [sys.executable, "-m", "detideals", "pit", "condenser", "--n", "4", "--r", "2", "--seed", "5"]
    first = subprocess.run(args, capture_output=True, text=True).stdout
    second = subprocess.run(args, capture_output=True, text=True).stdout
    assert first == second and first
