import numpy as np
import pytest

from conftest import TORUS_FIXTURES
from orbithull.lib.error import DomainError, ResourceLimitError
from orbithull.lib.haar import CompactMatrixGroup, Representation, SamplerState
from orbithull.lib.polynomial import Polynomial
from orbithull.toolbox.orbit_defect.lib import (
    Verdict,
    classify,
    default_invariants,
    fixed_point_consistency,
    multiplicativity_defect,
    nilcone_test_numeric,
    orbit_average,
)

SU2_ADJOINT_POINT = (1j, 1, 0, -1j)


def test_classify():
    assert classify(0.0) is Verdict.Consistent
    assert classify(5e-3) is Verdict.Consistent
    assert classify(0.02) is Verdict.Inconclusive
    assert classify(0.05) is Verdict.Refuted
    assert classify(0.3, consistent=0.5) is Verdict.Consistent


def test_sphere_is_multiplicative(state):
    group = CompactMatrixGroup.unitary(2)
    report = multiplicativity_defect(group, [1, 0], 3, 100_000, state)

    assert report.samples == 100_000
    assert report.defect <= 5e-3
    assert classify(report.defect) is Verdict.Consistent
    assert np.linalg.norm([e.value for e in report.fixed_point]) <= 5e-3


def test_sphere_is_in_nilcone(state):
    group = CompactMatrixGroup.unitary(2)
    report = nilcone_test_numeric(group, [1, 0], 2, 20_000, 0.05, state, default_invariants(group))

    assert report.consistent
    assert report.samples == 20_000


def test_su2_adjoint_is_refuted(state):
    group = CompactMatrixGroup.special_unitary(2, Representation.Adjoint)
    report = multiplicativity_defect(group, SU2_ADJOINT_POINT, 2, 100_000, state)

    assert report.defect >= 0.05
    assert classify(report.defect) is Verdict.Refuted


def test_su2_adjoint_invariant_average(state):
    group = CompactMatrixGroup.special_unitary(2, Representation.Adjoint)
    invariants = default_invariants(group)
    report = nilcone_test_numeric(group, SU2_ADJOINT_POINT, 2, 20_000, 0.05, state, invariants)

    assert "tr(Z^2)" in invariants
    assert abs(report.invariant_averages["tr(Z^2)"].value + 2) <= 0.02
    assert report.invariant_variances["tr(Z^2)"] <= 1e-20
    assert not report.consistent


@pytest.mark.parametrize("weights, antisymmetric, nilpotent", TORUS_FIXTURES)
def test_torus_closed_form_verdicts(weights, antisymmetric, nilpotent, state):
    group = CompactMatrixGroup.torus(weights)
    v = [1] * len(weights)

    defect = multiplicativity_defect(group, v, 2, 1000, state)
    assert defect.samples == 0
    assert (classify(defect.defect) is Verdict.Consistent) == antisymmetric

    nilcone = nilcone_test_numeric(group, v, 2, 1000, 1e-9, state)
    assert nilcone.consistent == nilpotent


def test_circle_pair(state):
    group = CompactMatrixGroup.torus([(1,), (-1,)])
    z1z2 = Polynomial.monomial((1, 1))

    assert orbit_average(group, [1, 1], z1z2, 1000, state).value == 1
    sampled = orbit_average(group, [1, 1], z1z2, 1000, state, exact_torus=False)
    assert abs(sampled.value - 1) <= 1e-12
    assert sampled.standard_error <= 1e-12

    defect = multiplicativity_defect(group, [1, 1], 1, 1000, state)
    assert defect.defect == pytest.approx(1.0)
    assert sorted(defect.defect_pair) == [(0, 1), (1, 0)]

    consistency = fixed_point_consistency(group, [1, 1], 2, 1000, state)
    assert consistency.residual >= 0.9
    assert consistency.worst == (1, 1)


def test_sampled_torus_agrees_with_closed_form(state):
    group = CompactMatrixGroup.torus([(1,), (2,)])
    report = multiplicativity_defect(group, [1, 1], 1, 50_000, state, exact_torus=False)

    assert report.samples == 50_000
    assert report.defect <= 0.05


def test_zero_vector_is_in_nilcone(state):
    group = CompactMatrixGroup.special_orthogonal(3)
    assert nilcone_test_numeric(group, [0, 0, 0], 2, 1000, 1e-3, state).consistent


def test_estimates_are_deterministic():
    group = CompactMatrixGroup.special_orthogonal(3)
    p = Polynomial.monomial((1, 1, 0))
    first = orbit_average(group, [1, 0, 0], p, 10_000, SamplerState(5))
    second = orbit_average(group, [1, 0, 0], p, 10_000, SamplerState(5))

    assert first == second


def test_rejections(state):
    group = CompactMatrixGroup.unitary(2)
    with pytest.raises(DomainError):
        multiplicativity_defect(group, [1, 0], 2, 10, state)
    with pytest.raises(DomainError):
        multiplicativity_defect(group, [1, 0, 0], 2, 1000, state)
    with pytest.raises(DomainError):
        nilcone_test_numeric(group, [1, 0], 0, 1000, 0.05, state)
    with pytest.raises(DomainError):
        orbit_average(group, [1, 0], Polynomial.monomial((1, 0, 0)), 1000, state)
    with pytest.raises(ResourceLimitError):
        multiplicativity_defect(CompactMatrixGroup.unitary(4), [1, 0, 0, 0], 4, 1000, state, monomial_cap=100)


def test_so3_quadratic_invariant_is_constant(state):
    group = CompactMatrixGroup.special_orthogonal(3)
    report = nilcone_test_numeric(group, [1, 2j, 0], 1, 20_000, 0.05, state, default_invariants(group))

    assert report.invariant_averages["sum(z_j^2)"].value == pytest.approx(-3, abs=1e-12)
    assert report.invariant_variances["sum(z_j^2)"] <= 1e-20
    assert not report.consistent


@pytest.mark.parametrize(
    "group, v, degree_bound",
    [
        (CompactMatrixGroup.unitary(2), (1, 0), 2),
        (CompactMatrixGroup.special_unitary(2, Representation.Adjoint), SU2_ADJOINT_POINT, 1),
    ],
)
def test_independent_seeds_agree(group, v, degree_bound):
    a = multiplicativity_defect(group, v, degree_bound, 20_000, SamplerState(101))
    b = multiplicativity_defect(group, v, degree_bound, 20_000, SamplerState(202))

    combined = np.hypot(a.defect_standard_error, b.defect_standard_error)
    assert a.defect != b.defect
    assert abs(a.defect - b.defect) <= 6 * combined


@pytest.mark.parametrize(
    "group, v",
    [
        (CompactMatrixGroup.special_orthogonal(3), (1, 0, 0)),
        (CompactMatrixGroup.special_unitary(2, Representation.Adjoint), SU2_ADJOINT_POINT),
    ],
)
def test_defect_grows_with_degree_bound(group, v, state):
    defects = [multiplicativity_defect(group, v, d, 5_000, state).defect for d in (1, 2, 3)]

    assert all(lo <= hi + 1e-12 for lo, hi in zip(defects, defects[1:]))


def test_estimates_ignore_thread_count(monkeypatch):
    group = CompactMatrixGroup.special_unitary(3)
    runs = []
    for threads in ("1", "4"):
        monkeypatch.setenv("ORBITHULL_THREADS", threads)
        runs.append(multiplicativity_defect(group, [1, 0, 0], 2, 40_000, SamplerState(8)))

    single, pooled = runs
    assert single.averages == pooled.averages
    assert single.defect == pooled.defect
    assert single.fixed_point == pooled.fixed_point
