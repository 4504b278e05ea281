import io
import json
import subprocess
import sys

import pytest

from posmc.cli import FAILED, OK, PARSE, SEMANTIC, main

K2_TEXT = "universe 2\nrel E 2\n0 1\n1 0\nend\n"


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture
def k2_file(tmp_path):
    p = tmp_path / "K2.struct"
    p.write_text(K2_TEXT)
    return str(p)


def test_eval(k2_file):
    assert run("eval", k2_file, "forall x. exists y. E(x,y)") == (OK, "true\n")
    assert run("eval", k2_file, "exists x. E(x,x)") == (OK, "false\n")


def test_eval_formula_file(k2_file, tmp_path):
    f = tmp_path / "phi.txt"
    f.write_text("# comment\nforall x. exists y. E(y,x)\n")
    assert run("eval", k2_file, "--formula-file", str(f)) == (OK, "true\n")


def test_eval_errors(k2_file, tmp_path, capsys):
    code, _ = run("eval", k2_file, "exists x. F(x,x)")
    assert code == SEMANTIC and "'F'" in capsys.readouterr().err
    assert run("eval", k2_file, "exists x. E(x,")[0] == PARSE
    assert run("eval", k2_file, "exists x. ~E(x,x)")[0] == SEMANTIC
    assert run("eval", k2_file, "--negation", "exists x. ~E(x,x)") == (OK, "true\n")
    assert run("eval", str(tmp_path / "missing"), "exists x. E(x,x)")[0] == PARSE
    bad = tmp_path / "bad.struct"
    bad.write_text("universe 2\nrel E 2\n0 5\nend\n")
    assert run("eval", str(bad), "exists x. E(x,x)")[0] == PARSE
    assert run("eval", "catalog:Nope", "exists x. E(x,x)")[0] == SEMANTIC


def test_eval_exclusive_sources(k2_file, capsys):
    assert run("eval", k2_file, "exists x. E(x,x)", "--formula-file", k2_file)[0] == PARSE
    assert "not both" in capsys.readouterr().err
    assert run("eval", k2_file)[0] == PARSE


def test_classify():
    code, out = run("classify", "digraph", "catalog:DP010_3")
    assert code == OK and out.startswith("coNP-complete\n")
    assert "exists_canon" in out and "DP010bar-defines-K1K2-corrected" in out
    assert run("classify", "boolean", "catalog:B1")[1].startswith("Logspace")
    code, out = run("classify", "digraph", "catalog:H8", "--json")
    assert json.loads(out)["verdict"] == "coNP-complete"


def test_classify_out_of_scope(tmp_path):
    p = tmp_path / "four.struct"
    p.write_text("universe 4\nrel E 2\n0 1\nend\n")
    assert run("classify", "digraph", str(p))[0] == SEMANTIC
    assert run("classify", "boolean", "catalog:K3")[0] == SEMANTIC


def test_reduce():
    code, out = run("reduce", "--rule", "dual", "forall x. exists y. E(x,y) & E(y,x)")
    assert (code, out) == (OK, "exists x. forall y. E(x,y) | E(y,x)\n")
    out = run("reduce", "--rule", "nae_to_k2", "forall v. exists v'. exists v''. NAE(v,v',v'')")[1]
    assert out == "forall v. exists v'. exists v''. E(v,v') | E(v',v'') | E(v,v'')\n"
    assert run("reduce", "--rule", "bogus", "exists x. E(x,x)")[0] == SEMANTIC
    assert run("reduce", "--rule", "gadget:nope", "exists x. E(x,x)")[0] == SEMANTIC


def test_define():
    code, out = run("define", "catalog:~H8", "--gadget", "H8bar-defines-K1K2")
    assert code == OK
    lines = out.splitlines()
    assert lines[0] == "# H8bar-defines-K1K2: isomorphic to K1+K2: yes"
    assert lines[1] == "universe 3"


def test_define_from_file(tmp_path):
    g = tmp_path / "conv.gadget"
    g.write_text("host -\nvars u v\nE(v,u)\n")
    code, out = run("define", "catalog:DP000_3", "--gadget-file", str(g))
    assert code == OK and out == "universe 3\nrel E 2\n1 0\n2 1\nend\n"


def test_canons():
    code, out = run("canons", "catalog:K1+K2")
    assert code == OK and out.splitlines()[0] == "forall-canons: 0"
    d = json.loads(run("canons", "catalog:DP010_3", "--json")[1])
    assert d["exists_canons"] == [1]


def test_table():
    code, out = run("table", "--size", "2")
    lines = out.splitlines()
    assert code == OK and lines[0] == "code,edges,class,rule" and len(lines) == 17
    assert {ln.split(",")[2] for ln in lines[1:]} <= {"Logspace", "PSPACE-complete"}
    out3 = run("table", "--size", "3")[1].splitlines()
    assert len(out3) == 513
    assert {ln.split(",")[2] for ln in out3[1:]} == {"Logspace", "NP-complete", "coNP-complete", "PSPACE-complete"}
    assert len(run("table", "--size", "3", "--up-to-iso")[1].splitlines()) == 105
    rows = json.loads(run("table", "--size", "1", "--format", "json")[1])
    assert [r["class"] for r in rows] == ["Logspace", "Logspace"]


def test_table_is_deterministic():
    assert run("table", "--size", "3")[1] == run("table", "--size", "3")[1]


def test_verify_quick():
    code, out = run("verify", "--quick", "--suite", "good-pair")
    assert code == OK and out.splitlines()[-1].endswith("properties passed")
    code, out = run("verify", "--quick", "--suite", "twins", "--json")
    assert code == OK and all(r["passed"] for r in json.loads(out))


def test_verify_unknown_suite():
    with pytest.raises(SystemExit) as e:
        main(["verify", "--suite", "nope"])
    assert e.value.code == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "posmc", "eval", "catalog:K2", "exists x. E(x,x)"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == "false\n"
