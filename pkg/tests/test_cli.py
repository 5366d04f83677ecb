import json
import shutil
import subprocess
import sys
from importlib import resources
from pathlib import Path

import jsonschema
import pytest

from linkwb import cli
from linkwb.dsl import parse_script
from linkwb.runner import Options, run_script

SCHEMA = json.loads(resources.files("linkwb").joinpath("report_schema.json").read_text())
SCEN = resources.files("linkwb").joinpath("scenarios")

PASSING = "ring R = poly(vars x,y);\nideal I = (x);\nzero(quotient((1)));\ngrade(I) == 1;\n"
FAILING = "ring R = poly(vars x,y);\nzero(residue_field());\npd(residue_field()) == 2;\n"
MALFORMED = "ring R = poly(vars x,y);\nideal I = (x, ;\n"
ENGINE = "ring R = poly(vars x,y) / ideal(x^2, x*y);\nzero(canonical());\n"


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return str(p)


def _scenario(name):
    return str(SCEN.joinpath(name))


@pytest.mark.parametrize("text,code", [(PASSING, 0), (FAILING, 1), (MALFORMED, 2), (ENGINE, 3),
                                       ("", 0)])
def test_exit_code_matrix(tmp_path, capsys, text, code):
    assert cli.main(["run", _write(tmp_path, "s.lk", text)]) == code


def test_missing_file_and_usage(capsys):
    assert cli.main(["run", "definitely-missing.lk"]) == 2
    assert cli.main([]) == 2
    assert cli.main(["run"]) == 2
    assert cli.main(["gb", "--ring", "poly(vars x)"]) == 2
    assert cli.main(["run", "x.lk", "--order", "bogus"]) == 2


def test_engine_error_names_operation(tmp_path, capsys):
    path = _write(tmp_path, "e.lk", ENGINE)
    out = tmp_path / "r.json"
    assert cli.main(["run", path, "--json", str(out)]) == 3
    rep = json.loads(out.read_text())
    chk = rep["checks"][0]
    assert chk["status"] == "error"
    assert "canonical" in chk["operation"]
    assert "requires CM" in chk["error"]


def test_declaration_engine_error(tmp_path, capsys):
    text = "ring R = poly(vars x);\nmodule M = coker [[x + x^2]];\nzero(M);\n"
    assert cli.main(["run", _write(tmp_path, "d.lk", text)]) == 3
    assert "ModuleDecl M" in capsys.readouterr().err


def test_failures_do_not_abort_later_checks(tmp_path, capsys):
    out = tmp_path / "r.json"
    cli.main(["run", _write(tmp_path, "f.lk", FAILING), "--json", str(out)])
    rep = json.loads(out.read_text())
    assert [c["status"] for c in rep["checks"]] == ["fail", "pass"]
    cli.main(["run", _write(tmp_path, "f.lk", FAILING), "--fail-fast", "--json", str(out)])
    rep = json.loads(out.read_text())
    assert [c["status"] for c in rep["checks"]] == ["fail", "skipped"]


@pytest.mark.parametrize("name", ["example_4_3.lk", "sum_theorem.lk", "depth_suite.lk",
                                  "duality.lk"])
def test_bundled_scenarios_pass(name, capsys):
    assert cli.main(["run", _scenario(name)]) == 0
    out = capsys.readouterr().out
    assert "0 failed, 0 errors" in out


def test_example_report_verdicts(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert cli.main(["run", _scenario("example_4_3.lk"), "--json", str(out)]) == 0
    rep = json.loads(out.read_text())
    vals = [c["value"] for c in rep["checks"]]
    assert vals == ["true", "true", "true", "(y)"]
    geo = rep["checks"][1]["report"]
    assert [v["status"] for v in geo["verdicts"][:5]] == ["true"] * 5
    assert geo["consistency"] is True


def test_depth_suite_inf(tmp_path, capsys):
    out = tmp_path / "r.json"
    cli.main(["run", _scenario("depth_suite.lk"), "--json", str(out)])
    rep = json.loads(out.read_text())
    scans = [c for c in rep["checks"] if c["check"] == "depth_scan"]
    assert [c["value"] for c in scans] == [1, 0, "hypothesis_failed"]


def _strip_timing(text):
    d = json.loads(text)
    d.pop("timing")
    return json.dumps(d, sort_keys=True)


@pytest.mark.parametrize("name", ["example_4_3.lk", "depth_suite.lk"])
def test_json_is_deterministic_and_schema_valid(tmp_path, capsys, name):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    cli.main(["run", _scenario(name), "--json", str(a)])
    cli.main(["run", _scenario(name), "--json", str(b)])
    ta, tb = a.read_text(), b.read_text()
    assert _strip_timing(ta) == _strip_timing(tb)
    # outside the timing section the bytes themselves agree
    da, db = json.loads(ta), json.loads(tb)
    da.pop("timing"), db.pop("timing")
    assert json.dumps(da, indent=2, sort_keys=True) == json.dumps(db, indent=2, sort_keys=True)
    jsonschema.Draft202012Validator(SCHEMA).validate(json.loads(ta))


def test_report_records_engine_prime_and_order(tmp_path, capsys):
    out = tmp_path / "r.json"
    cli.main(["run", _scenario("example_4_3.lk"), "--json", str(out), "--prime", "101",
              "--order", "lex"])
    rep = json.loads(out.read_text())
    assert rep["engine"]["name"] == "linkwb"
    ring = rep["declarations"]["rings"][0]
    assert (ring["p"], ring["order"]) == (101, "lex")
    assert rep["options"]["prime"] == 101
    jsonschema.Draft202012Validator(SCHEMA).validate(rep)


def test_json_to_stdout(capsys):
    assert cli.main(["gb", "--ring", "poly(vars x,y)", "--ideal", "x*y, x^2", "--json", "-"]) == 0
    out = capsys.readouterr().out
    rep = json.loads(out[out.index("{"):])
    assert rep["checks"][0]["value"] == ["x*y", "x^2"]


@pytest.mark.parametrize("argv,needle", [
    (["gb", "--ring", "poly(vars x,y)", "--ideal", "x*y, x^2"], "['x*y', 'x^2']"),
    (["res", "--ring", "poly(vars x,y,z)", "--module", "residue_field()"], "[1, 3, 3, 1]"),
    (["ext", "--ring", "poly(vars x,y)/ideal(x*y)", "--i", "2", "--M", "quotient((x))",
      "--N", "quotient((x))"], "-> 1"),
    (["tor", "--ring", "poly(vars x,y)/ideal(x*y)", "--i", "2", "--M", "quotient((x))",
      "--N", "quotient((y))"], "-> 1"),
    (["link", "--ring", "poly(vars x,y)", "--I", "x", "--J", "y", "--c", "x*y"], "-> true"),
    (["geolink", "--ring", "poly(vars x,y)/ideal(x*y)", "--I", "x", "--J", "y"], "-> true"),
    (["gorenstein", "--ring", "poly(vars x,y)", "--ideal", "x, y"], "-> true"),
    (["depth-scan", "--ring", "poly(vars x,y)/ideal(x^2)"], "-> 1"),
    (["depth-scan", "--ring", "poly(vars x,y)/ideal(x^2,x*y)", "--hdim", "gdim",
      "--nmax", "2"], "-> 0"),
])
def test_one_shot_commands(capsys, argv, needle):
    assert cli.main(argv) == 0
    assert needle in capsys.readouterr().out


def test_one_shot_false_result(capsys):
    argv = ["gorenstein", "--ring", "poly(vars x,y)", "--ideal", "x^2, x*y, y^2"]
    assert cli.main(argv) == 1


def test_par_block_preserves_order(monkeypatch):
    monkeypatch.setenv("LK_THREADS", "4")
    text = ("ring R = poly(vars x,y) / ideal(x*y);\n"
            "par { length(ext(2, quotient((x)), quotient((x)))) == 1; "
            "length(tor(2, quotient((x)), quotient((y)))) == 1; zero(residue_field()); }\n")
    rep = run_script(parse_script(text), Options())
    assert [c.index for c in rep.checks] == [0, 1, 2]
    assert [c.status for c in rep.checks] == ["pass", "pass", "fail"]
    assert rep.exit_code == 1


def test_seed_flag_reaches_suites(tmp_path, capsys):
    out = tmp_path / "r.json"
    cli.main(["run", _write(tmp_path, "b.lk", "battery(3);\n"), "--seed", "11",
              "--json", str(out)])
    rep = json.loads(out.read_text())
    assert rep["options"]["seed"] == 11
    assert rep["checks"][0]["status"] == "pass"


@pytest.mark.skipif(shutil.which("lk") is None, reason="console script not installed")
def test_console_script_entry_point():
    res = subprocess.run(["lk", "run", _scenario("example_4_3.lk")], capture_output=True,
                         text=True)
    assert res.returncode == 0
    res = subprocess.run(["lk", "run", "missing.lk"], capture_output=True, text=True)
    assert res.returncode == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "linkwb", "run", _scenario("sum_theorem.lk")],
                         capture_output=True, text=True)
    assert res.returncode == 0


def test_documented_schema_matches_packaged_copy():
    doc = Path(__file__).resolve().parents[1] / "docs" / "report_schema.json"
    assert json.loads(doc.read_text()) == SCHEMA
