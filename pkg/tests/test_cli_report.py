import json
from importlib import resources

import pytest

from tangentcone.cli import exit_code, main
from tangentcone.parsing import ParseError
from tangentcone.report import emit_json, repro_example, to_jsonable
from tangentcone.script import RunConfig, parse_script, run_script

CUSP = """
# the cusp and the x-axis
vars x,y;
set C = x^3 - y^2 = 0;
set L = y = 0;
"""


def test_cone_exact_command():
    rep = json.loads(emit_json(run_script(CUSP + "cone-exact C;")))
    (cmd,) = rep["commands"]
    assert cmd["status"] == "ok"
    assert cmd["result"]["formula"] == "x >= 0 && y = 0"
    assert cmd["result"]["cone"]["rays"] == [["1", "0"]]


def test_cone_command_certifies_unsupported():
    rep = json.loads(emit_json(run_script(CUSP + "cone C p=0 y=(0,1);")))
    res = rep["commands"][0]["result"]["combined"]
    assert res["status"] == "unsupported" and res["certified"]


def test_empty_script():
    rep = run_script("")
    assert rep["commands"] == [] and rep["schema"] == 1
    data = json.loads(emit_json({"commands": []}))
    assert data == {"commands": [], "schema": 1}


def test_errors_are_recorded_and_strict_stops():
    text = CUSP + "cone D y=(1,0); cone C y=(1,0);"
    rep = run_script(text)
    assert [c["status"] for c in rep["commands"]] == ["error", "ok"]
    rep = run_script(text, RunConfig(strict=True))
    assert [c["status"] for c in rep["commands"]] == ["error"]


def test_parse_error_has_location():
    with pytest.raises(ParseError, match="line"):
        run_script("vars x,y;\nset C = x^3 - = 0;")


def test_unknown_command():
    with pytest.raises(ParseError):
        parse_script("frobnicate C;")


def test_script_commands_cover_strata_and_maps():
    text = CUSP + """
    map phi = (x, y + x^2);
    set Q = y - x^2 = 0;
    strat T { S0: x = 0 && y = 0; S1: y = 0 && x != 0; S2: y != 0; }
    induced-strata T grid=8;
    whitney T 0 1 seeds=(0);
    dims T;
    risometry none C L grid=8;
    lift phi L Q grid=8 pairs=40;
    cone-scan C grid=8 engines=(puiseux,plane);
    """
    rep = run_script(text)
    statuses = {c["command"]: c["status"] for c in rep["commands"]}
    assert statuses == {
        "induced-strata": "ok",
        "whitney": "ok",
        "dims": "ok",
        "risometry": "ok",
        "lift": "ok",
        "cone-scan": "ok",
    }


def test_emit_json_writes_and_round_trips(tmp_path):
    rep = run_script(CUSP + "cone C y=(1,0);")
    path = tmp_path / "out.json"
    text = emit_json(rep, path)
    assert path.read_text() == text
    assert json.loads(text)["commands"][0]["result"]["combined"]["witness"]["curve"] == "(t, t^(3/2))"
    with pytest.raises(OSError, match="cannot write report"):
        emit_json(rep, tmp_path / "missing" / "out.json")


def test_floats_are_fixed_precision():
    assert to_jsonable({"a": 0.1 + 0.2, "b": float("nan")}) == {"a": 0.3, "b": "nan"}


def test_indeterminate_verdicts_carry_reasons():
    text = CUSP + "cone C y=(-1,0) engines=(initial);"
    rep = run_script(text)
    cmd = rep["commands"][0]
    assert cmd["status"] == "indeterminate"
    assert cmd["result"]["combined"]["reason"]


def test_exit_codes():
    assert exit_code({"commands": [{"status": "ok"}]}) == 0
    assert exit_code({"commands": [{"status": "indeterminate"}, {"status": "violation"}]}) == 2
    assert exit_code({"commands": [{"status": "indeterminate"}]}) == 3
    assert exit_code({"commands": [{"status": "error"}, {"status": "indeterminate"}]}) == 1


def test_cli_script_and_json(tmp_path, capsys):
    script = tmp_path / "cusp.tc"
    script.write_text(CUSP + "cone-exact C; cone C y=(0,1);")
    out = tmp_path / "r.json"
    assert main(["--script", str(script), "--json", str(out), "--seed", "3", "--grid", "8"]) == 0
    data = json.loads(out.read_text())
    assert data["config"]["seed"] == 3 and len(data["commands"]) == 2
    assert "[ok] cone-exact C" in capsys.readouterr().out


def test_cli_usage_errors(tmp_path, capsys):
    assert main([]) == 1
    bad = tmp_path / "bad.tc"
    bad.write_text("set C = x^3 - = 0;")
    assert main(["--script", str(bad)]) == 1
    assert "parse error" in capsys.readouterr().err
    assert main(["--script", str(tmp_path / "nope.tc")]) == 1
    with pytest.raises(SystemExit):
        main(["--script", str(bad), "--eps-schedule", "0.1,0.5"])
    with pytest.raises(SystemExit):
        main(["--script", str(bad), "--engines", "magic"])


def test_cli_violation_exit(tmp_path):
    script = tmp_path / "w.tc"
    script.write_text(
        "vars x,y; strat W { S0: 1 = 0; S1: y = 0; S2: y - x^2 = 0 && x != 0; S3: y != 0 && y - x^2 != 0; }"
        " whitney W 1 2 index=off;"
    )
    assert main(["--script", str(script)]) == 2


def test_repro_unknown():
    with pytest.raises(ValueError):
        repro_example("torus")


def _fixture(name):
    return resources.files("tangentcone").joinpath("fixtures", f"repro_{name}.json").read_text()


@pytest.mark.parametrize("which", ["cusp", "surface3d"])
def test_golden_repro(which):
    assert emit_json(repro_example(which)) == _fixture(which)


def test_repro_contents():
    cusp = json.loads(_fixture("cusp"))
    assert cusp["rays"]["rays"] == [["1", "0"]]
    assert cusp["puiseux"]["(1, 0)"]["witness"]["curve"] == "(t, t^(3/2))"
    surf = json.loads(_fixture("surface3d"))
    assert surf["cone"] == "x >= 0 && y = 0 && z = 0"
    f, s = surf["first_stratification"], surf["second_stratification"]
    assert f["induced"][2] == "x > 0 && y = 0 && z = 0" and f["diagnostics"][0]["index"] == 2
    assert s["induced"][1] == "x > 0 && y = 0 && z = 0" and s["induced"][2] == "1 = 0"
    assert all(w["verdict"] in ("no violation found", "vacuous") for w in s["whitney"].values())


def test_cli_repro_matches_fixture(capsys):
    assert main(["--repro", "cusp", "--json", "-"]) == 0
    data = json.loads(capsys.readouterr().out)
    want = json.loads(_fixture("cusp"))
    want.pop("schema")
    assert data["commands"][0]["result"] == want
