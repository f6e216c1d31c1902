import json

import pytest

from orbithull import __version__
from orbithull.cli import EXIT_FAILED, EXIT_INCONCLUSIVE, EXIT_INVALID, EXIT_OK, main
from orbithull.lib.report import ReportEnvelope

CIRCLE = """
[group]
kind = "torus"

[action]
weights = [[1], [-1]]

[vector]
re = [1, 1]
"""


@pytest.fixture
def circle(tmp_path):
    path = tmp_path / "circle.toml"
    path.write_text(CIRCLE, encoding="utf-8")
    return path


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_torus_analyze_json_to_stdout(circle, capsys):
    assert main(["torus-analyze", "--config", str(circle), "--json", "-"]) == EXIT_OK

    captured = capsys.readouterr()
    doc = json.loads(captured.out)
    verdict = doc["verdicts"]["torus_orbit"]
    assert doc["command"] == "torus-analyze"
    assert verdict["antisymmetric"] is False
    assert verdict["nilpotent"] is False
    assert verdict["invariant_witness"] == [1, 1]
    assert "antisymmetric: False" in captured.err


def test_summary_goes_to_stdout_without_json(circle, capsys):
    assert main(["torus-analyze", "--config", str(circle)]) == EXIT_OK
    assert "nilpotent: False" in capsys.readouterr().out


def test_report_file(circle, tmp_path):
    out = tmp_path / "report.json"
    assert main(["orbit-flow", "--config", str(circle), "--json", str(out)]) == EXIT_OK

    env = ReportEnvelope.from_json(out.read_text(encoding="utf-8"))
    assert env.verdicts["kempf_ness"]["outcome"] == "stalled"
    assert env.verdicts["kempf_ness"]["invariant_residuals"] == [
        {"name": "z^(1,1)", "value": 0.0, "tolerance": 1e-6}
    ]
    assert env.provenance["threads"] == 2
    assert env.provenance["wall_time_s"] >= 0


def test_orbit_defect_is_deterministic(tmp_path):
    config = write(
        tmp_path,
        "so3.toml",
        '[group]\nkind = "special_orthogonal"\nn = 3\n\n[vector]\nre = [1, 0, 0]\n',
    )
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    args = ["orbit-defect", "--config", config, "--samples", "2000", "--degree-bound", "1", "--seed", "9"]

    assert main([*args, "--json", str(first)]) in (EXIT_OK, EXIT_FAILED, EXIT_INCONCLUSIVE)
    assert main([*args, "--json", str(second)]) in (EXIT_OK, EXIT_FAILED, EXIT_INCONCLUSIVE)

    a = ReportEnvelope.from_json(first.read_text(encoding="utf-8"))
    b = ReportEnvelope.from_json(second.read_text(encoding="utf-8"))
    assert a.to_json(exclude_wall_time=True) == b.to_json(exclude_wall_time=True)
    assert a.provenance["seed"] == 9
    assert a.config["estimation"]["samples"] == 2000


def test_inconclusive_exits_three_under_strict(tmp_path):
    config = write(tmp_path, "gray.toml", CIRCLE + "\n[tolerances]\nconsistent = 0.9\nrefuted = 2.0\n")

    assert main(["orbit-defect", "--config", config, "--samples", "100"]) == EXIT_OK
    assert main(["orbit-defect", "--config", config, "--samples", "100", "--strict"]) == EXIT_INCONCLUSIVE


def test_invalid_input_exits_two(tmp_path, circle):
    bad = write(tmp_path, "bad.toml", "[estimation]\nsamples = 5\n")
    no_weights = write(tmp_path, "empty.toml", "[vector]\nre = [1]\n")

    assert main(["torus-analyze", "--config", bad]) == EXIT_INVALID
    assert main(["torus-analyze", "--config", no_weights]) == EXIT_INVALID
    assert main(["torus-analyze", "--config", str(tmp_path / "missing.toml")]) == EXIT_INVALID
    assert main(["torus-analyze", "--config", str(circle), "--seed", "-3"]) == EXIT_INVALID
    assert main(["no-such-command"]) == EXIT_INVALID
    assert main(["torus-analyze"]) == EXIT_INVALID


def test_resource_limit_exits_one(tmp_path):
    config = write(tmp_path, "capped.toml", CIRCLE + "\n[estimation]\nmonomial_cap = 1\n")

    assert main(["orbit-defect", "--config", config]) == EXIT_FAILED


def test_group_check_f(tmp_path, capsys):
    config = write(tmp_path, "pair.toml", '[pair]\nalgebra = "so3"\nsubalgebra = "so2"\n')

    assert main(["group-check-f", "--config", config, "--json", "-"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    normalizer = doc["verdicts"]["group_structure"]["normalizer"]
    assert normalizer["condition_F_infinitesimal"] is True
    assert normalizer["dim_normalizer"] == 1
    assert any("Lie algebras only" in w for w in doc["warnings"])


def test_group_gelfand(tmp_path, capsys):
    config = write(tmp_path, "gelfand.toml", '[gelfand]\nfamily = "su2"\ndegrees = [0, 1]\nsubgroup = "center"\n')

    assert main(["group-gelfand", "--config", config, "--samples", "2000", "--json", "-"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    gelfand = doc["verdicts"]["group_structure"]["gelfand"]
    assert gelfand["multiplicity_free"] is False
    assert gelfand["violators"] == ["su2:j=1"]


def test_version(capsys):
    assert main(["--version"]) == EXIT_OK
    assert __version__ in capsys.readouterr().out


def test_torus_analyze_base_point(tmp_path, capsys):
    config = write(tmp_path, "line.toml", CIRCLE.replace("[[1], [-1]]", "[[1], [2]]"))

    assert main(["torus-analyze", "--config", config, "--json", "-"]) == EXIT_OK
    verdict = json.loads(capsys.readouterr().out)["verdicts"]["torus_orbit"]
    assert verdict["antisymmetric"] is True
    assert verdict["v_tilde"]["value"] == [[0.0, 0.0], [0.0, 0.0]]


def test_empty_weights_exit_two(tmp_path):
    config = write(tmp_path, "empty.toml", CIRCLE.replace("[[1], [-1]]", "[]"))

    assert main(["torus-analyze", "--config", config]) == EXIT_INVALID


def test_orbit_defect_agrees_with_exact_torus(circle, capsys):
    assert main(["orbit-defect", "--config", str(circle), "--json", "-"]) == EXIT_OK

    doc = json.loads(capsys.readouterr().out)
    mult = doc["verdicts"]["measure_mult"]
    assert mult["verdict"] == "refuted"
    assert mult["cross_check"] == {"exact_antisymmetric": False, "agree": True}
    assert doc["warnings"] == []
