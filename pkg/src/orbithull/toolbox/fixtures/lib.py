"""
The gallery of worked orbits with their expected verdicts.

Every fixture is run through the numeric estimators and the norm flow; tori
also go through the exact analysis. A fixture passes when every observed
verdict matches its expectation.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any, Optional

from orbithull.lib.config import Tolerances
from orbithull.lib.haar import CompactMatrixGroup, GroupKind, Representation, SamplerState
from orbithull.lib.point import OrbitPoint
from orbithull.toolbox.orbit_defect.lib import (
    classify,
    default_invariants,
    multiplicativity_defect,
    nilcone_test_numeric,
)
from orbithull.toolbox.orbit_flow.lib import flow_minimize
from orbithull.toolbox.torus_analyze.lib import TorusAction, analyze

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Fixture:
    """
    ``expected`` maps a check name to its expected outcome. Checks are
    ``antisymmetric`` and ``nilpotent`` (exact, tori only), ``defect``,
    ``nilcone_numeric`` and ``flow``.
    """

    name: str
    description: str
    group: Callable[[], CompactMatrixGroup] = field(repr=False)
    vector: tuple[complex, ...]
    expected: dict[str, Any]
    weights: Optional[tuple[tuple[int, ...], ...]] = None


@dataclass(frozen=True)
class FixtureOutcome:
    name: str
    observed: dict[str, Any]
    expected: dict[str, Any]

    @property
    def mismatches(self) -> tuple[str, ...]:
        return tuple(k for k, v in self.expected.items() if self.observed.get(k) != v)

    @property
    def passed(self) -> bool:
        return not self.mismatches


def _torus(
    name: str, weights: tuple[tuple[int, ...], ...], antisymmetric: bool, nilpotent: bool
) -> Fixture:
    return Fixture(
        name=name,
        description=f"torus with weights {list(map(list, weights))}",
        group=lambda: CompactMatrixGroup.torus(weights),
        vector=(1,) * len(weights),
        weights=weights,
        expected={
            "antisymmetric": antisymmetric,
            "nilpotent": nilpotent,
            "defect": "antisymmetric-consistent" if antisymmetric else "refuted",
            "flow": "converged_to_zero" if nilpotent else "stalled",
        },
    )


GALLERY: tuple[Fixture, ...] = (
    Fixture(
        name="u2-sphere",
        description="U(2) on C², the unit sphere through (1, 0)",
        group=lambda: CompactMatrixGroup.unitary(2),
        vector=(1, 0),
        expected={"defect": "antisymmetric-consistent", "nilcone_numeric": True, "flow": "converged_to_zero"},
    ),
    Fixture(
        name="su2-adjoint",
        description="SU(2) on sl(2, C) by conjugation, v = ih + e",
        group=lambda: CompactMatrixGroup.special_unitary(2, Representation.Adjoint),
        vector=(1j, 1, 0, -1j),
        expected={"defect": "refuted", "nilcone_numeric": False, "flow": "stalled"},
    ),
    _torus("torus-1-2", ((1,), (2,)), True, True),
    _torus("torus-1-neg1", ((1,), (-1,)), False, False),
    _torus("torus-line-plus-axis", ((1, 0), (-1, 0), (0, 1)), False, False),
    _torus("torus-1-1-1-neg1", ((1, 1), (1, -1)), True, True),
    _torus("torus-cartan-a2", ((2, -1), (-1, 2)), True, True),
)


def find(name: str) -> Fixture:
    """
    Raises:
        KeyError: No fixture has this name.
    """
    for f in GALLERY:
        if f.name == name:
            return f

    raise KeyError(name)


def run_fixture(
    fixture: Fixture,
    samples: int = 100_000,
    seed: int = 0,
    degree_bound: int = 2,
    tolerances: Tolerances = Tolerances(),
    max_iter: int = 10_000,
) -> FixtureOutcome:
    """
    Runs every check of a fixture.

    Arguments:
        fixture (Fixture): The fixture.
        samples (int): Haar samples for the numeric checks.
        seed (int): The random seed.
        degree_bound (int): The largest monomial degree.
        tolerances (Tolerances): Verdict thresholds.
        max_iter (int): The flow iteration budget.

    Returns:
        FixtureOutcome: Observed and expected verdicts.
    """
    group = fixture.group()
    state = SamplerState(seed)
    observed: dict[str, Any] = {}

    if group.kind is GroupKind.Torus and fixture.weights is not None:
        report = analyze(TorusAction.of(fixture.weights), OrbitPoint.of(fixture.vector))
        observed["antisymmetric"] = report.antisymmetric
        observed["nilpotent"] = report.nilpotent

    defect = multiplicativity_defect(group, fixture.vector, degree_bound, samples, state)
    observed["defect"] = classify(defect.defect, tolerances.consistent, tolerances.refuted).value

    if "nilcone_numeric" in fixture.expected:
        nilcone = nilcone_test_numeric(
            group, fixture.vector, degree_bound, samples, tolerances.nilcone, state, default_invariants(group)
        )
        observed["nilcone_numeric"] = nilcone.consistent

    flow = flow_minimize(
        group,
        fixture.vector,
        max_iter=max_iter,
        zero_tol=tolerances.zero,
        grad_tol=tolerances.gradient,
        invariants=default_invariants(group),
    )
    observed["flow"] = flow.outcome.value

    outcome = FixtureOutcome(fixture.name, observed, dict(fixture.expected))
    if outcome.passed:
        logger.info("fixture %s passed", fixture.name)
    else:
        logger.error("fixture %s mismatched on %s", fixture.name, ", ".join(outcome.mismatches))

    return outcome
