"""
Torus Orbit Analysis
"""

import logging
from typing import Any

from orbithull.lib import tool
from orbithull.lib.config import ExperimentConfig
from orbithull.lib.error import ValidationError, fallible
from orbithull.lib.lattice import cone_is_pointed
from orbithull.lib.report import complex_json, rational_json, vector_json

from .lib import FibrationReport, TorusAction, analyze

logger = logging.getLogger(__name__)


def report_json(report: FibrationReport) -> dict[str, Any]:
    """
    Serializes a fibration report; exact values only, so no tolerances are needed.
    """
    certificate = cone_is_pointed(report.spectrum)
    nilcone = report.nilcone

    return {
        "spectrum_generators": [list(g) for g in report.spectrum.generators],
        "stripped_zero_weight": report.spectrum.has_zero,
        "antisymmetric": report.antisymmetric,
        "antisymmetry_certificate": {
            "functional": [rational_json(x) for x in certificate.functional]
            if certificate.functional is not None
            else None,
            "zero_combination": [rational_json(x) for x in certificate.zero_combination]
            if certificate.zero_combination is not None
            else None,
        },
        "nilpotent": report.nilpotent,
        "destabilizing_xi": [rational_json(x) for x in nilcone.xi] if nilcone.xi else None,
        "invariant_witness": list(nilcone.witness) if nilcone.witness else None,
        "lineality": [list(b) for b in report.lineality.vectors],
        "lineality_rank": report.lineality.rank,
        "xi_star": [rational_json(x) for x in report.xi_star],
        # each coordinate is v_j or 0, hence the zero tolerance
        "v_tilde": {"value": vector_json(report.v_tilde.coords), "tolerance": 0.0},
        "base_coords": list(report.base_coords),
        "fiber_coords": list(report.fiber_coords),
        "null_coords": list(report.null_coords),
        "fixed_coords": list(report.fixed_coords),
        "hull_relations": [[list(a), list(b)] for a, b in report.hull_relations],
        "closed_complex_orbit": report.closed_complex_orbit,
        "self_conjugate": report.self_conjugate,
    }


class TorusAnalyze(tool.Tool):
    name = "torus-analyze"
    category = tool.Category.Exact.value
    label = "Analyze Torus Orbit"
    description = "Exact antisymmetry, nilcone and hull fibration verdicts for a torus orbit."

    @fallible
    def execute(self, config: ExperimentConfig) -> tool.ToolResult:
        if not config.weights:
            raise ValidationError("torus-analyze needs a nonempty [action] weights matrix", source=config.source)

        action = TorusAction.of(config.weights)
        v = config.require_vector()
        report = analyze(action, v)

        result = tool.ToolResult(verdicts={"torus_orbit": report_json(report)})
        if report.fixed_coords:
            result.warnings.append(
                "v has nonzero coordinates of weight zero; antisymmetry and nilcone verdicts are independent"
            )

        result.summary += [
            f"antisymmetric: {report.antisymmetric}",
            f"nilpotent: {report.nilpotent}",
            f"lineality rank: {report.lineality.rank}",
            f"v_tilde: {[complex_json(x) for x in report.v_tilde.coords]}",
            f"fiber coordinates: {list(report.fiber_coords)}",
        ]
        for line in result.summary:
            logger.info(line)

        return result
