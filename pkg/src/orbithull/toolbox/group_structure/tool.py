"""
Group Structure Checks
"""

import logging
from fractions import Fraction
from typing import Any

from orbithull.lib import tool
from orbithull.lib.config import ExperimentConfig, GelfandSpec, PairSpec
from orbithull.lib.error import ValidationError, fallible
from orbithull.lib.haar import CompactMatrixGroup, SamplerState
from orbithull.lib.report import estimate_json, rational_json, tolerance_json

from .lib.gelfand import (
    GelfandReport,
    MultiplicityEstimate,
    RepresentationCharacter,
    SubgroupSampler,
    center,
    circle_in_so3,
    circle_in_su2,
    full_group,
    gelfand_check,
    so3_character,
    su2_character,
)
from .lib.normalizer import (
    BRACKET_TOLERANCE,
    LieSubalgebraPair,
    NormalizerReport,
    builtin_pair,
    normalizer_subalgebra,
)

logger = logging.getLogger(__name__)

INFINITESIMAL_ONLY = "condition (F) is checked on Lie algebras only; components of N/H are not examined"

_DEFAULT_DEGREES = {
    "so3": tuple(Fraction(k) for k in range(5)),
    "su2": tuple(Fraction(k, 2) for k in range(5)),
}


def pair_from_spec(spec: PairSpec, source: str = "<config>") -> LieSubalgebraPair:
    """
    Raises:
        ValidationError: The ``[pair]`` section names no algebra or an invalid pair.
    """
    if spec.g_basis:
        return LieSubalgebraPair.of(spec.g_basis, spec.h_basis)
    if spec.algebra is None:
        raise ValidationError("group-check-f needs [pair] algebra or g_basis", source=source)

    return builtin_pair(spec.algebra, spec.subalgebra or "zero", spec.rank)


def family_from_spec(spec: GelfandSpec) -> tuple[list[RepresentationCharacter], SubgroupSampler, SubgroupSampler]:
    """
    Returns the representation family, the subgroup sampler and the full group sampler.

    Raises:
        ValidationError: An ``so3`` degree is not an integer, or the subgroup does not belong to the family.
    """
    degrees = spec.degrees or _DEFAULT_DEGREES[spec.family]

    if spec.family == "so3":
        if any(d.denominator != 1 for d in degrees):
            raise ValidationError("so3 degrees must be integers")
        family = [so3_character(int(d)) for d in degrees]
        group = full_group(CompactMatrixGroup.special_orthogonal(3))
        subgroups = {"so2": circle_in_so3, "center": lambda: center(3, 1)}
        circle = "so2"
    else:
        family = [su2_character(d) for d in degrees]
        group = full_group(CompactMatrixGroup.special_unitary(2))
        subgroups = {"u1": circle_in_su2, "center": lambda: center(2, 2)}
        circle = "u1"

    name = spec.subgroup or circle
    if name == "full":
        return family, group, group
    if name not in subgroups:
        raise ValidationError(f"subgroup {name} does not fit the {spec.family} family")
    sampler = subgroups[name]()

    return family, sampler, group


def normalizer_json(pair: LieSubalgebraPair, report: NormalizerReport) -> dict[str, Any]:
    return {
        "dim_g": report.dim_g,
        "dim_h": report.dim_h,
        "dim_normalizer": report.dim_normalizer,
        "condition_F_infinitesimal": report.condition_F_infinitesimal,
        "infinitesimal_only": True,
        "residual": tolerance_json(report.residual, BRACKET_TOLERANCE),
        "closure_residual_g": tolerance_json(pair.closure_residual_g, BRACKET_TOLERANCE),
        "closure_residual_h": tolerance_json(pair.closure_residual_h, BRACKET_TOLERANCE),
        "normalizer_basis": {"value": [list(map(float, a)) for a in report.basis], "tolerance": BRACKET_TOLERANCE},
    }


def _mult(est: MultiplicityEstimate) -> dict[str, Any]:
    return {
        **estimate_json(est.value, est.standard_error),
        "imaginary_residual": estimate_json(est.imaginary_residual, est.standard_error),
        "nearest_integer": est.nearest_integer,
        "exact": est.samples == 0,
    }


def gelfand_json(report: GelfandReport, degrees: dict[str, Fraction]) -> dict[str, Any]:
    return {
        "subgroup": report.subgroup,
        "threshold": tolerance_json(report.threshold, 0.0),
        "verdict": "multiplicity-free up to the tested family" if report.multiplicity_free else "not multiplicity-free",
        "multiplicity_free": report.multiplicity_free,
        "estimates": [
            {"representation": name, "degree": rational_json(degrees[name]), **_mult(est)}
            for name, est in report.estimates.items()
        ],
        "violators": list(report.violators),
        "character_norms": [
            {"representation": name, **estimate_json(est.value, est.standard_error)}
            for name, est in report.character_norms.items()
        ],
    }


class GroupCheckF(tool.Tool):
    name = "group-check-f"
    category = tool.Category.Structure.value
    label = "Check Finite Normalizer Quotient"
    description = "Compares the normalizer of a Lie subalgebra with the subalgebra."

    @fallible
    def execute(self, config: ExperimentConfig) -> tool.ToolResult:
        pair = pair_from_spec(config.pair, config.source)
        report = normalizer_subalgebra(pair)

        result = tool.ToolResult(verdicts={"group_structure": {"normalizer": normalizer_json(pair, report)}})
        result.warnings.append(INFINITESIMAL_ONLY)

        result.summary += [
            f"dim g = {report.dim_g}, dim h = {report.dim_h}, dim n = {report.dim_normalizer}",
            f"condition (F), infinitesimal: {report.condition_F_infinitesimal}",
            f"residual: {report.residual:.2g}",
        ]
        for line in result.summary:
            logger.info(line)

        return result


class GroupGelfand(tool.Tool):
    name = "group-gelfand"
    category = tool.Category.Structure.value
    label = "Check Gelfand Pair"
    description = "Estimates H-fixed multiplicities of irreducible representations of G."

    @fallible
    def execute(self, config: ExperimentConfig) -> tool.ToolResult:
        spec = config.gelfand
        family, sampler, group = family_from_spec(spec)
        degrees = dict(zip((rep.name for rep in family), spec.degrees or _DEFAULT_DEGREES[spec.family]))

        report = gelfand_check(
            family,
            sampler,
            config.estimation.samples,
            config.tolerances.gelfand,
            SamplerState(config.estimation.seed),
            group,
        )

        result = tool.ToolResult(verdicts={"group_structure": {"gelfand": gelfand_json(report, degrees)}})
        result.warnings.extend(report.warnings)
        result.warnings.append("multiplicity-freeness is tested on a finite family of representations only")

        result.summary.append(f"{spec.family} over {report.subgroup}: multiplicity free {report.multiplicity_free}")
        result.summary += [
            f"{name}: {est.value:.4f} ± {est.standard_error:.2g}" for name, est in report.estimates.items()
        ]
        for line in result.summary:
            logger.info(line)

        return result
