import numpy as np
import pytest
import scipy.linalg

from conftest import TORUS_FIXTURES
from orbithull.lib.error import DomainError
from orbithull.lib.haar import CompactMatrixGroup, Representation
from orbithull.lib.point import OrbitPoint
from orbithull.toolbox.orbit_defect.lib import default_invariants
from orbithull.toolbox.orbit_flow.lib import (
    FlowOutcome,
    flow_many,
    flow_minimize,
    moment_gradient,
    witness_invariants,
)
from orbithull.toolbox.torus_analyze.lib import TorusAction, nilcone_member_exact


def test_moment_gradient_on_torus():
    group = CompactMatrixGroup.torus([(1,), (2,)])
    assert np.allclose(moment_gradient(group, [1, 1]), [-6])


def test_moment_gradient_matches_finite_differences():
    group = CompactMatrixGroup.special_unitary(3)
    rng = np.random.default_rng(11)
    w = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    grad = moment_gradient(group, w)

    h = 1e-6
    for x, g in zip(group.represented_basis(), grad):
        plus = np.linalg.norm(scipy.linalg.expm(1j * h * x) @ w) ** 2
        minus = np.linalg.norm(scipy.linalg.expm(-1j * h * x) @ w) ** 2
        assert (plus - minus) / (2 * h) == pytest.approx(g, abs=1e-5)


def test_zero_vector_converges_at_once():
    report = flow_minimize(CompactMatrixGroup.unitary(2), [0, 0])

    assert report.converged_to_zero
    assert report.iterations == 0
    assert report.norm_history == (0.0,)


@pytest.mark.parametrize("weights, antisymmetric, nilpotent", TORUS_FIXTURES)
def test_torus_flows(weights, antisymmetric, nilpotent):
    group = CompactMatrixGroup.torus(weights)
    report = flow_minimize(group, [1] * len(weights))

    assert report.converged_to_zero == nilpotent
    assert report.stalled == (not nilpotent)
    assert (report.certificate is not None) == nilpotent
    assert all(b <= a + 1e-12 for a, b in zip(report.norm_history, report.norm_history[1:]))
    if not nilpotent:
        assert report.final_norm_sq >= 1.0


def test_circle_pair_stalls_at_start():
    report = flow_minimize(CompactMatrixGroup.torus([(1,), (-1,)]), [1, 1])

    assert report.outcome is FlowOutcome.Stalled
    assert report.iterations == 0
    assert report.final_norm_sq >= 2


def test_su2_adjoint_stalls_on_closed_orbit():
    group = CompactMatrixGroup.special_unitary(2, Representation.Adjoint)
    report = flow_minimize(group, [1j, 1, 0, -1j], invariants=default_invariants(group))

    assert report.stalled
    assert report.final_norm_sq >= 2 - 1e-6
    assert report.invariant_residuals["tr(Z^2)"] <= 1e-6


def test_sphere_converges():
    report = flow_minimize(CompactMatrixGroup.unitary(2), [1, 0])

    assert report.converged_to_zero
    assert report.final_norm_sq <= 1e-6


def test_iteration_limit():
    report = flow_minimize(CompactMatrixGroup.torus([(1,), (2,)]), [1, 1], max_iter=1)

    assert report.outcome is FlowOutcome.IterationLimit
    assert report.iterations == 1


def test_rejections():
    group = CompactMatrixGroup.unitary(2)
    with pytest.raises(DomainError):
        flow_minimize(group, [1, 0], max_iter=0)
    with pytest.raises(DomainError):
        flow_minimize(group, [1, 0, 0])
    with pytest.raises(DomainError):
        moment_gradient(group, [1])


def test_flow_agrees_with_exact_nilcone_on_random_tori():
    rng = np.random.default_rng(20240602)
    cases = []
    for _ in range(50):
        n = int(rng.integers(1, 3))
        m = int(rng.integers(1, 5))
        weights = tuple(tuple(int(x) for x in rng.integers(-2, 3, n)) for _ in range(m))
        cases.append(weights)

    conclusive = 0
    for weights in cases:
        report = flow_minimize(CompactMatrixGroup.torus(weights), [1] * len(weights), max_iter=10_000)
        if report.outcome is FlowOutcome.IterationLimit:
            continue
        conclusive += 1
        exact = nilcone_member_exact(TorusAction.of(weights), OrbitPoint.of([1] * len(weights)))
        assert report.converged_to_zero == exact.member, weights

    assert conclusive >= 45


def test_flow_many_keeps_order():
    group = CompactMatrixGroup.torus([(1,), (-1,)])
    reports = flow_many(group, [[1, 1], [1, 0], [0, 0]])

    assert [r.outcome for r in reports] == [
        FlowOutcome.Stalled,
        FlowOutcome.ConvergedToZero,
        FlowOutcome.ConvergedToZero,
    ]


@pytest.mark.parametrize(
    "weights, limit",
    [
        (((-2, -2), (-2, -1), (2, 2)), 2.0),
        (((0, 1), (1, -1), (2, -2), (-1, 1)), None),
        (((0, -1), (-1, 0), (-1, -2), (0, 2)), None),
    ],
)
def test_semistable_tori_stall_quickly(weights, limit):
    v = [1] * len(weights)
    group = CompactMatrixGroup.torus(weights)
    report = flow_minimize(group, v, invariants=witness_invariants(group, v))

    assert not nilcone_member_exact(TorusAction.of(weights), OrbitPoint.of(v)).member
    assert report.stalled
    assert report.iterations < 1_000
    assert all(r <= 1e-6 for r in report.invariant_residuals.values())
    if limit is not None:
        assert report.final_norm_sq == pytest.approx(limit, abs=1e-6)


def test_witness_invariants():
    circle = CompactMatrixGroup.torus([(1,), (-1,)])
    (name, poly), = witness_invariants(circle, [1, 1]).items()
    assert name == "z^(1,1)"
    assert complex(poly.evaluate([2, 3])) == pytest.approx(6)

    assert witness_invariants(CompactMatrixGroup.torus([(1,), (2,)]), [1, 1]) == {}
    assert witness_invariants(circle, [0, 0]) == {}
    assert witness_invariants(CompactMatrixGroup.unitary(2), [1, 0]) == {}


def test_circle_witness_is_conserved_along_the_flow():
    group = CompactMatrixGroup.torus([(1,), (-1,)])
    report = flow_minimize(group, [3, 1], invariants=witness_invariants(group, [3, 1]))

    assert report.stalled
    assert report.final_norm_sq == pytest.approx(6, abs=1e-6)
    assert report.invariant_residuals["z^(1,1)"] <= 1e-9
