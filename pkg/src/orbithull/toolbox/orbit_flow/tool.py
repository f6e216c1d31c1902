"""
Orbit Norm Flow
"""

import logging
from typing import Any

from orbithull.lib import tool
from orbithull.lib.config import ExperimentConfig
from orbithull.lib.error import fallible
from orbithull.lib.report import rational_json, tolerance_json, vector_json
from orbithull.toolbox.orbit_defect.lib import default_invariants

from .lib import FlowOutcome, FlowReport, flow_minimize, witness_invariants

logger = logging.getLogger(__name__)


def flow_json(report: FlowReport, zero_tol: float, grad_tol: float, invariant_tol: float) -> dict[str, Any]:
    return {
        "outcome": report.outcome.value,
        "converged_to_zero": report.converged_to_zero,
        "stalled": report.stalled,
        # evidence for 0 in the closure of the complex orbit, not a single-direction limit
        "evidence": "0 in closure of G^C v" if report.converged_to_zero else None,
        "iterations": report.iterations,
        "initial_norm_sq": tolerance_json(report.initial_norm_sq, zero_tol),
        "final_norm_sq": tolerance_json(report.final_norm_sq, zero_tol),
        "gradient_norm": tolerance_json(report.final.gradient_norm, grad_tol),
        "final_w": {"value": vector_json(list(report.final.w)), "tolerance": zero_tol},
        "invariant_residuals": [
            {"name": k, **tolerance_json(r, invariant_tol)} for k, r in report.invariant_residuals.items()
        ],
        "diagnostic": report.diagnostic,
        "single_direction_certificate": [rational_json(x) for x in report.certificate]
        if report.certificate is not None
        else None,
    }


class OrbitFlow(tool.Tool):
    name = "orbit-flow"
    category = tool.Category.Numeric.value
    label = "Orbit Norm Flow"
    description = "Minimizes the norm along the complexified orbit and monitors invariants."

    @fallible
    def execute(self, config: ExperimentConfig) -> tool.ToolResult:
        group = config.build_group()
        v = config.require_vector().to_array()
        tol = config.tolerances

        report = flow_minimize(
            group,
            v,
            max_iter=config.max_iter,
            zero_tol=tol.zero,
            grad_tol=tol.gradient,
            invariants={**default_invariants(group), **witness_invariants(group, v)},
        )

        result = tool.ToolResult(
            verdicts={"kempf_ness": flow_json(report, tol.zero, tol.gradient, tol.invariant)},
            inconclusive=report.outcome is FlowOutcome.IterationLimit,
        )
        drift = {k: r for k, r in report.invariant_residuals.items() if r > tol.invariant}
        if drift:
            result.warnings.append(f"invariants drifted beyond {tol.invariant:g}: {sorted(drift)}")
        if report.diagnostic:
            result.warnings.append(report.diagnostic)
        if report.outcome is FlowOutcome.IterationLimit:
            result.warnings.append("iteration limit reached; raise [flow] max_iter")

        result.summary += [
            f"outcome: {report.outcome.value} after {report.iterations} iterations",
            f"final norm^2: {report.final_norm_sq:.6g}",
        ]
        result.summary += [f"invariant residual {k}: {r:.2g}" for k, r in report.invariant_residuals.items()]
        for line in result.summary:
            logger.info(line)

        return result
