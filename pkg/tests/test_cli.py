import json

import pytest

from tsplit.cli import main


def write_problem(tmp_path, tasks):
    doc = {
        "ring": {"vars": ["x", "y"], "ideal": ["x^2"]},
        "modules": {
            "A": {"generators": ["e"]},
            "Mx": {"generators": ["e"], "relations": [["x"]]},
        },
        "extensions": {
            "chi": {"N": "Mx", "E": "A", "M": "Mx",
                    "iota": [["x"]], "pi": [["1"]]},
        },
        "tasks": tasks,
    }
    path = tmp_path / "problem.json"
    path.write_text(json.dumps(doc))
    return path


def run_cli(args):
    with pytest.raises(SystemExit) as exc:
        main(args)
    return exc.value.code


def test_run_success(tmp_path, capsys):
    path = write_problem(tmp_path, ["etor Mx"])
    out = tmp_path / "bundle.json"
    code = run_cli(["run", str(path), "--out", str(out)])
    assert code == 0
    bundle = json.loads(out.read_text())
    assert bundle["reports"][0]["report"]["e_formula"] == 1


def test_run_prints_bundle_to_stdout(tmp_path, capsys):
    path = write_problem(tmp_path, ["tsplit chi"])
    code = run_cli(["run", str(path)])
    assert code == 0
    bundle = json.loads(capsys.readouterr().out)
    assert bundle["reports"][0]["report"]["e_class"] == 2


def test_run_task_error_exit_1(tmp_path):
    path = write_problem(tmp_path, ["ladder chi 1 2"])
    assert run_cli(["run", str(path)]) == 1


def test_run_missing_file_exit_2(tmp_path, capsys):
    assert run_cli(["run", str(tmp_path / "none.json")]) == 2
    assert "cannot read" in capsys.readouterr().err


def test_run_bad_json_exit_2(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{nope")
    assert run_cli(["run", str(path)]) == 2
    assert "not valid JSON" in capsys.readouterr().err


def test_run_malformed_problem_exit_2(tmp_path, capsys):
    path = write_problem(tmp_path, ["hilbert nosuch"])
    assert run_cli(["run", str(path)]) == 2
    assert "problem rejected" in capsys.readouterr().err


def test_policy_override_applies(tmp_path, capsys):
    path = write_problem(tmp_path, ["etor Mx"])
    code = run_cli(["run", str(path), "--window", "3", "--seed", "11"])
    assert code == 0
    bundle = json.loads(capsys.readouterr().out)
    assert bundle["policy"]["window"] == 3
    assert bundle["policy"]["seed"] == 11


def test_bad_policy_override_exit_2(tmp_path, capsys):
    path = write_problem(tmp_path, ["etor Mx"])
    assert run_cli(["run", str(path), "--window", "0"]) == 2


def test_fixture_command(tmp_path):
    out = tmp_path / "fixture.json"
    code = run_cli(["fixture", "hypersurface-sci",
                    "--param", "g=x", "--param", "i=2", "--param", "h=1",
                    "--param", "n_range=[0, 1]", "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert "s1" in doc["extensions"]
    # fixture output feeds straight back into run
    assert run_cli(["run", str(out)]) == 0


def test_fixture_bad_param_exit_2(capsys):
    assert run_cli(["fixture", "ulrich-dim1", "--param", "noequals"]) == 2
    assert "bad --param" in capsys.readouterr().err


def test_fixture_rci_rejected(capsys):
    assert run_cli(["fixture", "rci", "--param", "r=2",
                    "--param", "l=1"]) == 2


def test_health_command(capsys):
    assert run_cli(["health"]) == 0
    assert "ok" in capsys.readouterr().out


def test_deterministic_output(tmp_path):
    path = write_problem(tmp_path, ["etor Mx", "tsplit chi", "cm Mx"])
    out1 = tmp_path / "b1.json"
    out2 = tmp_path / "b2.json"
    assert run_cli(["run", str(path), "--out", str(out1)]) == 0
    assert run_cli(["run", str(path), "--out", str(out2)]) == 0
    assert out1.read_text() == out2.read_text()
