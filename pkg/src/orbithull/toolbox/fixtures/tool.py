"""
Fixture Gallery
"""

import logging
from typing import Any

from orbithull.lib import tool
from orbithull.lib.config import ExperimentConfig
from orbithull.lib.error import fallible

from .lib import GALLERY, FixtureOutcome, run_fixture

logger = logging.getLogger(__name__)


def outcome_json(outcome: FixtureOutcome) -> dict[str, Any]:
    return {
        "name": outcome.name,
        "observed": outcome.observed,
        "expected": outcome.expected,
        "passed": outcome.passed,
        "mismatches": list(outcome.mismatches),
    }


class Fixtures(tool.Tool):
    name = "fixtures"
    category = tool.Category.Gallery.value
    label = "Run Fixture Gallery"
    description = "Runs the worked sphere, adjoint and torus orbits and compares every verdict with its expectation."

    @fallible
    def execute(self, config: ExperimentConfig) -> tool.ToolResult:
        est = config.estimation
        outcomes = [
            run_fixture(f, est.samples, est.seed, est.degree_bound, config.tolerances, config.max_iter)
            for f in GALLERY
        ]

        result = tool.ToolResult(
            verdicts={"fixtures": [outcome_json(o) for o in outcomes]},
            failed=not all(o.passed for o in outcomes),
        )
        for o in outcomes:
            if o.passed:
                result.summary.append(f"{o.name}: ok")
            else:
                result.summary.append(f"{o.name}: MISMATCH {', '.join(o.mismatches)}")
                result.warnings.append(f"fixture {o.name} did not reproduce {', '.join(o.mismatches)}")
        for line in result.summary:
            logger.info(line)

        return result
