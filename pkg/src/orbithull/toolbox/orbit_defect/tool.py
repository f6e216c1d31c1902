"""
Orbit Multiplicativity Defect
"""

import logging
from typing import Any

from orbithull.lib import tool
from orbithull.lib.config import ExperimentConfig
from orbithull.lib.error import fallible
from orbithull.lib.haar import GroupKind, SamplerState
from orbithull.lib.report import estimate_json, tolerance_json
from orbithull.toolbox.torus_analyze.lib import TorusAction, analyze

from .lib import (
    ConsistencyReport,
    DefectReport,
    Estimate,
    NilconeNumericReport,
    Verdict,
    classify,
    default_invariants,
    fixed_point_consistency,
    multiplicativity_defect,
    nilcone_test_numeric,
)

logger = logging.getLogger(__name__)


def _est(e: Estimate) -> dict[str, Any]:
    return estimate_json(e.value, e.standard_error)


def defect_json(report: DefectReport, verdict: Verdict) -> dict[str, Any]:
    return {
        "verdict": verdict.value,
        "defect": estimate_json(report.defect, report.defect_standard_error),
        "defect_pair": [list(c) for c in report.defect_pair] if report.defect_pair else None,
        "averages": [{"exponent": list(c), **_est(e)} for c, e in report.averages.items()],
        "fixed_point": estimate_json(
            [e.value for e in report.fixed_point], [e.standard_error for e in report.fixed_point]
        ),
        "samples": report.samples,
        "degree_bound": report.degree_bound,
        "closed_form": report.samples == 0,
        "approximate_haar": report.approximate_haar,
    }


def consistency_json(report: ConsistencyReport) -> dict[str, Any]:
    return {
        "residual": estimate_json(report.residual, report.residual_standard_error),
        "worst": list(report.worst) if report.worst else None,
    }


def nilcone_json(report: NilconeNumericReport, tolerance: float) -> dict[str, Any]:
    worst = report.worst
    return {
        "consistent_with_nilcone": report.consistent,
        "threshold": tolerance_json(tolerance, 0.0),
        "worst": list(worst) if isinstance(worst, tuple) else worst,
        "worst_average": _est(report.worst_estimate) if report.worst_estimate else None,
        "invariants": [
            {
                "name": name,
                "average": _est(est),
                "sample_variance": estimate_json(report.invariant_variances[name], 0.0),
            }
            for name, est in report.invariant_averages.items()
        ],
    }


class OrbitDefect(tool.Tool):
    name = "orbit-defect"
    category = tool.Category.Numeric.value
    label = "Orbit Multiplicativity Defect"
    description = "Estimates whether the invariant measure of a group orbit is multiplicative on polynomials."

    @fallible
    def execute(self, config: ExperimentConfig) -> tool.ToolResult:
        group = config.build_group()
        v = config.require_vector().to_array()
        est = config.estimation
        tol = config.tolerances
        state = SamplerState(est.seed)

        if group.approximate_haar:
            logger.warning("custom groups are sampled approximately (word length %d)", group.word_length)

        defect = multiplicativity_defect(group, v, est.degree_bound, est.samples, state, est.monomial_cap)
        verdict = classify(defect.defect, tol.consistent, tol.refuted)
        consistency = fixed_point_consistency(group, v, est.degree_bound, est.samples, state, est.monomial_cap)
        nilcone = nilcone_test_numeric(
            group,
            v,
            est.degree_bound,
            est.samples,
            tol.nilcone,
            state,
            default_invariants(group),
            est.monomial_cap,
        )

        verdicts: dict[str, Any] = {
            "measure_mult": {
                **defect_json(defect, verdict),
                "fixed_point_consistency": consistency_json(consistency),
                "nilcone": nilcone_json(nilcone, tol.nilcone),
            }
        }
        result = tool.ToolResult(verdicts=verdicts, inconclusive=verdict is Verdict.Inconclusive)

        if group.kind is GroupKind.Torus:
            exact = analyze(TorusAction.of(config.weights), config.require_vector())
            agree = exact.antisymmetric == (verdict is Verdict.Consistent)
            verdicts["measure_mult"]["cross_check"] = {
                "exact_antisymmetric": exact.antisymmetric,
                "agree": agree,
            }
            if not agree and verdict is not Verdict.Inconclusive:
                result.warnings.append("numeric defect verdict disagrees with the exact torus verdict")
        if group.approximate_haar:
            result.warnings.append("approximate_haar: custom group samples are random words, not exact Haar")
        if verdict is Verdict.Inconclusive:
            result.warnings.append("inconclusive; increase samples")

        result.summary += [
            f"verdict: {verdict.value}",
            f"defect: {defect.defect:.3g} ± {defect.defect_standard_error:.2g} at {defect.defect_pair}",
            f"fixed point residual: {consistency.residual:.3g}",
            f"consistent with nilcone: {nilcone.consistent}",
        ]
        for line in result.summary:
            logger.info(line)

        return result
