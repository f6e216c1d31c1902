import json
from fractions import Fraction

import pytest

from orbithull.lib.error import ValidationError
from orbithull.lib.gaussian import GaussianRational
from orbithull.lib.report import (
    SCHEMA_VERSION,
    ReportEnvelope,
    complex_json,
    estimate_json,
    rational_json,
    tolerance_json,
)


def envelope() -> ReportEnvelope:
    env = ReportEnvelope.new("orbit-defect", {"action": {"weights": [[1], [2]]}}, seed=3, samples=1000)
    env.verdicts["measure_mult"] = {
        "verdict": "antisymmetric-consistent",
        "defect": estimate_json(0.001, 0.0005),
        "fixed_point": estimate_json([0.5 + 0.25j], [0.01]),
        "threshold": tolerance_json(0.05, 0.0),
        "xi": [rational_json(Fraction(-1, 2))],
    }
    env.provenance["wall_time_s"] = 0.125
    env.warn("inconclusive; increase samples")
    env.warn("inconclusive; increase samples")

    return env


def test_value_helpers():
    assert rational_json(Fraction(6, 4)) == "3/2"
    assert rational_json(2) == "2"
    assert complex_json(1 - 2j) == [1.0, -2.0]
    assert complex_json(GaussianRational(Fraction(1, 3), Fraction(-1))) == ["1/3", "-1"]
    assert estimate_json(1 + 1j, 0.1) == {"value": [1.0, 1.0], "standard_error": 0.1}
    assert tolerance_json(2, 1e-6) == {"value": 2.0, "tolerance": 1e-6}


def test_round_trip():
    env = envelope()
    text = env.to_json()

    assert ReportEnvelope.from_json(text) == env
    assert env.warnings == ["inconclusive; increase samples"]
    assert json.loads(text)["schema_version"] == SCHEMA_VERSION


def test_wall_time_can_be_excluded():
    doc = json.loads(envelope().to_json(exclude_wall_time=True))

    assert "wall_time_s" not in doc["provenance"]
    assert doc["provenance"]["seed"] == 3


def test_bare_floats_are_rejected():
    env = envelope()
    env.verdicts["measure_mult"]["defect"] = 0.001
    with pytest.raises(ValidationError):
        env.to_json()

    env.verdicts["measure_mult"]["defect"] = [{"nested": 1.5}]
    with pytest.raises(ValidationError, match=r"verdicts\.measure_mult\.defect\[0\]\.nested"):
        env.to_json()


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.pop("warnings"),
        lambda d: d.update(schema_version="one"),
        lambda d: d.update(verdicts=[]),
        lambda d: d.update(command=3),
        lambda d: d.update(warnings=[1]),
        lambda d: d["verdicts"].update(bare=0.5),
    ],
)
def test_from_json_rejections(mutate):
    doc = envelope().to_dict()
    mutate(doc)

    with pytest.raises(ValidationError):
        ReportEnvelope.from_json(json.dumps(doc))


def test_from_json_rejects_non_objects():
    with pytest.raises(ValidationError):
        ReportEnvelope.from_json("[]")
    with pytest.raises(ValidationError):
        ReportEnvelope.from_json("{")
