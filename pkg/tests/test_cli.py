import io
import json

import pytest

import config
from cli import EXIT_FAILED, EXIT_INPUT_ERROR, EXIT_OK, RunConfig, main, run

EX_R_SUBST = "l1=1,l2=2,l3=-1,l4=3,m1=1,m2=-2"


def _run(**kwargs):
    stream = io.StringIO()
    code = run(RunConfig(**kwargs), stream)
    return code, stream.getvalue()


def test_validate_fixture():
    code, out = _run(command="validate", input="ex_l")
    assert code == EXIT_OK
    assert out.startswith("structure: ")


def test_validate_broken_instance(tmp_path):
    doc = json.loads((config.FIXTURES_DIR / "ex_l.json").read_text(encoding="utf-8"))
    doc["phi"]["e1"] = {"e2": "1"}
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    code, out = _run(command="validate", input=str(path), fmt="json")
    assert code == EXIT_FAILED
    assert json.loads(out)["ok"] is False

    code, _ = _run(command="classify", input=str(path))
    assert code == EXIT_FAILED


def test_missing_file_is_an_input_error():
    code, out = _run(command="report", input="no_such_instance.json")
    assert code == EXIT_INPUT_ERROR
    assert out.startswith("error: ")


def test_malformed_json_is_an_input_error(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json", encoding="utf-8")
    code, _ = _run(command="validate", input=str(path))
    assert code == EXIT_INPUT_ERROR


def test_classify_text():
    code, out = _run(command="classify", input="ex_l")
    assert code == EXIT_OK
    assert "F7: True" in out.splitlines()


def test_report_ends_with_class():
    code, out = _run(command="report", input="ex_4")
    assert code == EXIT_OK
    assert out.endswith("class: F4\n")


def test_check_suite():
    code, out = _run(command="check", input="ex_l", suite="forms", fmt="json")
    assert code == EXIT_OK
    assert json.loads(out)["ok"] is True


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(command="explode", input="ex_l")
    with pytest.raises(ValueError):
        RunConfig(command="tensor", input="ex_l")
    with pytest.raises(ValueError):
        RunConfig(command="report", input="ex_l", fmt="xml")


def test_main_tensor_with_substitution(capsys):
    code = main(["tensor", "ex_l", "--which", "T2", "--subst", EX_R_SUBST, "--format", "json"])
    assert code == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert {"index": [2, 1, 0], "value": "2"} in data["T2"]
    assert data["T2.t"] == []


def test_main_subst_file_matches_inline_bindings(capsys):
    main(["tensor", "ex_l", "--which", "F", "--subst-file", "ex_r", "--format", "json"])
    from_file = capsys.readouterr().out
    main(["tensor", "ex_l", "--which", "F", "--subst", EX_R_SUBST, "--format", "json"])
    assert capsys.readouterr().out == from_file


def test_main_rejects_bad_bindings(capsys):
    assert main(["classify", "ex_l", "--subst", "m1"]) == EXIT_INPUT_ERROR
    assert main(["classify", "ex_l", "--subst", "zz=1"]) == EXIT_INPUT_ERROR
    assert "error:" in capsys.readouterr().out


def test_output_is_deterministic(capsys):
    main(["report", "ex_l", "--format", "json"])
    first = capsys.readouterr().out
    main(["report", "ex_l", "--format", "json"])
    assert capsys.readouterr().out == first
