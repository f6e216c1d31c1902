from fractions import Fraction
from itertools import product
from math import prod

import numpy as np
import pytest

from conftest import TORUS_FIXTURES
from orbithull.lib.error import DomainError, ValidationError
from orbithull.lib.gaussian import ZERO, GaussianRational
from orbithull.lib.point import OrbitPoint
from orbithull.lib.polynomial import monomials
from orbithull.toolbox.torus_analyze.lib import (
    Divergence,
    TorusAction,
    alpha_on_monomial,
    analyze,
    exact_point,
    hull_inner_sample,
    hull_outer_membership,
    hull_projection,
    nilcone_member_exact,
    orbit_average_exact,
    orbit_fixed_point_exact,
    orbit_spectrum,
    reachable_limit,
)

LINE_PLUS_AXIS = TorusAction.of([(1, 0), (-1, 0), (0, 1)])


def ones(m: int) -> OrbitPoint:
    return exact_point([(1, 0)] * m)


def test_action_validation():
    with pytest.raises(ValidationError):
        TorusAction.of([])
    with pytest.raises(DomainError):
        TorusAction.of([(1, 0), (1,)])


def test_orbit_spectrum():
    action = TorusAction.of([(1,), (2,)])

    assert orbit_spectrum(action, ones(2)).generators == ((1,), (2,))
    assert orbit_spectrum(action, exact_point([(1, 0), (0, 0)])).generators == ((1,),)
    assert orbit_spectrum(LINE_PLUS_AXIS, ones(3)).generators == ((1, 0), (-1, 0), (0, 1))

    with pytest.raises(DomainError, match="empty orbit spectrum"):
        orbit_spectrum(action, OrbitPoint.zeros(2))
    with pytest.raises(DomainError, match="does not match"):
        orbit_spectrum(action, ones(3))


def test_reachable_limit():
    action = TorusAction.of([(1,), (2,)])

    assert reachable_limit(action, ones(2), [1]) == OrbitPoint.zeros(2, exact=True)
    assert reachable_limit(TorusAction.of([(1,), (-1,)]), ones(2), [1]) == Divergence((1,))
    assert reachable_limit(LINE_PLUS_AXIS, ones(3), [0, 1]) == exact_point([(1, 0), (1, 0), (0, 0)])
    assert reachable_limit(action, ones(2), [0]) == ones(2)


def test_analyze_examples():
    report = analyze(TorusAction.of([(1,), (2,)]), ones(2))
    assert report.antisymmetric and report.nilpotent
    assert report.v_tilde == OrbitPoint.zeros(2, exact=True)
    assert report.fiber_coords == (0, 1)

    report = analyze(TorusAction.of([(1,), (-1,)]), ones(2))
    assert not report.antisymmetric and not report.nilpotent
    assert report.v_tilde == ones(2)
    assert report.fiber_coords == ()
    assert report.closed_complex_orbit and report.self_conjugate

    report = analyze(LINE_PLUS_AXIS, ones(3))
    assert report.v_tilde == exact_point([(1, 0), (1, 0), (0, 0)])
    assert report.fiber_coords == (2,)
    assert report.base_coords == (0, 1)
    assert report.xi_star == (Fraction(0), Fraction(1))
    assert report.lineality.rank == 1
    assert not report.closed_complex_orbit


def test_analyze_null_and_fixed_coordinates():
    report = analyze(TorusAction.of([(1,), (2,), (3,)]), exact_point([(1, 0), (0, 0), (1, 0)]))
    assert report.null_coords == (1,)
    assert report.v_tilde == OrbitPoint.zeros(3, exact=True)

    action = TorusAction.of([(0,), (1,)])
    report = analyze(action, ones(2))
    assert report.fixed_coords == (0,)
    # the zero weight is stripped, so the spectrum is still pointed
    assert report.antisymmetric
    assert not report.nilpotent
    assert report.nilcone.witness == (1, 0)

    with pytest.raises(DomainError):
        analyze(action, ones(2), nilcone_semantics=True)


@pytest.mark.parametrize("weights, antisymmetric, nilpotent", TORUS_FIXTURES)
def test_fixture_verdicts(weights, antisymmetric, nilpotent):
    action = TorusAction.of(weights)
    report = analyze(action, ones(action.m))

    assert report.antisymmetric == antisymmetric
    assert report.nilpotent == nilpotent
    assert report.lineality.rank == 0 or not antisymmetric


def test_nilcone_member_exact():
    verdict = nilcone_member_exact(TorusAction.of([(1,), (2,)]), ones(2))
    assert verdict.member and verdict.xi == (Fraction(1),)

    verdict = nilcone_member_exact(TorusAction.of([(1, 1), (1, -1)]), ones(2))
    assert verdict.member and verdict.xi == (Fraction(1), Fraction(0))

    action = TorusAction.of([(1,), (-1,)])
    verdict = nilcone_member_exact(action, ones(2))
    assert not verdict.member
    assert verdict.witness == (1, 1)
    assert orbit_average_exact(action, ones(2), verdict.witness) == GaussianRational.of(1)


@pytest.mark.parametrize("weights, antisymmetric, nilpotent", TORUS_FIXTURES)
def test_witness_is_invariant(weights, antisymmetric, nilpotent):
    action = TorusAction.of(weights)
    verdict = nilcone_member_exact(action, ones(action.m))
    if verdict.member:
        assert all(action.pairing(j, verdict.xi) >= 1 for j in range(action.m))
    else:
        c = verdict.witness
        assert any(c) and all(x >= 0 for x in c)
        assert all(sum(x * w[k] for x, w in zip(c, weights)) == 0 for k in range(action.n))


def test_hull_outer_membership():
    action = TorusAction.of([(1,), (2,)])
    v = ones(2)

    assert hull_outer_membership(action, v, exact_point([("1/2", 0), ("1/4", 0)])).outer_member
    verdict = hull_outer_membership(action, v, exact_point([("1/2", 0), ("1/3", 0)]))
    assert not verdict.outer_member
    assert verdict.violated_constraint is not None and "z^" in verdict.violated_constraint

    verdict = hull_outer_membership(action, v, exact_point([(2, 0), (4, 0)]))
    assert not verdict.outer_member and verdict.violated_constraint == "|z_0| > |v_0|"

    for weights, _, _ in TORUS_FIXTURES:
        action = TorusAction.of(weights)
        assert hull_outer_membership(action, ones(action.m), ones(action.m)).outer_member


def test_hull_inner_sample():
    action = TorusAction.of([(1,), (2,)])
    z = hull_inner_sample(action, ones(2), [0.0], [np.log(2)])

    assert np.allclose(z.to_array(), [0.5, 0.25])
    assert hull_inner_sample(action, ones(2), [0.0], [0.0]) == OrbitPoint.of([1, 1])

    z = hull_inner_sample(LINE_PLUS_AXIS, ones(3), [0.0, 0.0], [0.0, np.log(2)])
    assert np.allclose(z.to_array(), [1, 1, 0.5])

    with pytest.raises(DomainError):
        hull_inner_sample(action, ones(2), [0.0], [-1.0])


@pytest.mark.parametrize("weights, antisymmetric, nilpotent", TORUS_FIXTURES)
def test_inner_samples_pass_outer_test(weights, antisymmetric, nilpotent):
    rng = np.random.default_rng(11)
    action = TorusAction.of(weights)
    v = OrbitPoint.of([1] * action.m)
    xi_star = np.array([float(x) for x in analyze(action, v).xi_star])

    for _ in range(1000):
        theta = rng.uniform(0, 2 * np.pi, action.n)
        z = hull_inner_sample(action, v, theta, rng.uniform(0, 3) * xi_star)
        assert hull_outer_membership(action, v, z, tol=1e-10).outer_member


def test_alpha_on_monomial():
    report = analyze(LINE_PLUS_AXIS, ones(3))

    assert alpha_on_monomial(report, (1, 1, 0)) == (1, 1, 0)
    assert alpha_on_monomial(report, (0, 0, 1)) is None
    assert alpha_on_monomial(report, (1, 0, 1)) is None

    with pytest.raises(DomainError):
        alpha_on_monomial(report, (1, -1, 0))

    report = analyze(TorusAction.of([(1,), (2,), (3,)]), exact_point([(1, 0), (0, 0), (1, 0)]))
    with pytest.raises(DomainError):
        alpha_on_monomial(report, (0, 1, 0))


@pytest.mark.parametrize("weights, antisymmetric, nilpotent", TORUS_FIXTURES)
def test_alpha_homomorphism(weights, antisymmetric, nilpotent):
    action = TorusAction.of(weights)
    report = analyze(action, ones(action.m))
    exps = list(monomials(action.m, 0, 4))

    for a, b in product(exps, exps):
        fa, fb = alpha_on_monomial(report, a), alpha_on_monomial(report, b)
        if fa is not None and fb is not None:
            ab = tuple(x + y for x, y in zip(a, b))
            assert alpha_on_monomial(report, ab) == ab


@pytest.mark.parametrize("weights, antisymmetric, nilpotent", TORUS_FIXTURES)
def test_average_matches_distinguished_orbit(weights, antisymmetric, nilpotent):
    action = TorusAction.of(weights)
    v = ones(action.m)
    v_tilde = analyze(action, v).v_tilde

    for c in monomials(action.m, 0, 6):
        assert orbit_average_exact(action, v, c) == orbit_average_exact(action, v_tilde, c)


def test_orbit_average_exact():
    action = TorusAction.of([(1,), (-1,)])

    assert orbit_average_exact(action, ones(2), (1, 1)) == GaussianRational.of(1)
    assert orbit_average_exact(action, ones(2), (1, 0)) == ZERO
    assert orbit_average_exact(action, OrbitPoint.of([2, 3]), (1, 1)) == 6
    assert orbit_average_exact(action, OrbitPoint.of([2, 3]), (2, 0)) == 0j


def test_orbit_fixed_point_exact():
    action = TorusAction.of([(0,), (1,)])

    assert orbit_fixed_point_exact(action, ones(2)) == exact_point([(1, 0), (0, 0)])


def test_hull_projection():
    report = analyze(LINE_PLUS_AXIS, ones(3))
    z = exact_point([("1/2", 0), (2, 0), ("1/3", "1/3")])

    assert hull_projection(report, z) == exact_point([("1/2", 0), (2, 0), (0, 0)])
    assert hull_projection(report, report.v) == report.v_tilde

    report = analyze(TorusAction.of([(1,), (2,), (3,)]), exact_point([(1, 0), (0, 0), (1, 0)]))
    with pytest.raises(DomainError):
        hull_projection(report, ones(3))


@pytest.mark.parametrize(
    "weights, point",
    [
        *[(w, [(1, 0)] * len(w)) for w, antisymmetric, _ in TORUS_FIXTURES if antisymmetric],
        (((0,), (1,)), [(2, 1), (1, 0)]),
        (((1, 0), (0, 1), (0, 0)), [(1, 0), ("1/2", -1), (3, 0)]),
    ],
)
def test_averages_are_evaluation_at_v_tilde(weights, point):
    action = TorusAction.of(weights)
    v = exact_point(point)
    report = analyze(action, v)
    assert report.antisymmetric

    for c in monomials(action.m, 0, 6):
        at_v_tilde = prod((x**k for x, k in zip(report.v_tilde.coords, c)), start=GaussianRational.of(1))
        assert orbit_average_exact(action, v, c) == at_v_tilde, c


def test_v_tilde_does_not_depend_on_the_direction():
    action = TorusAction.of([(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, 0, 1)])
    v = ones(4)
    report = analyze(action, v)
    expected = exact_point([(1, 0), (1, 0), (0, 0), (0, 0)])

    assert report.v_tilde == expected
    for xi in (report.xi_star, (0, 1, 1), (0, 1, 3), (0, Fraction(5, 2), 1)):
        assert reachable_limit(action, v, xi) == expected
        assert reachable_limit(action, expected, xi) == expected

    assert reachable_limit(LINE_PLUS_AXIS, ones(3), (0, 2)) == analyze(LINE_PLUS_AXIS, ones(3)).v_tilde


@pytest.mark.parametrize(
    "weights, point",
    [
        *[(w, [(1, 0)] * len(w)) for w, _, nilpotent in TORUS_FIXTURES if nilpotent],
        (((1,), (-1,), (2,)), [(1, 0), (0, 0), (1, 0)]),
        (((1, 0), (-1, 0), (0, 1)), [(1, 0), (0, 0), (1, 0)]),
    ],
)
def test_member_invariants_vanish_at_v(weights, point):
    action = TorusAction.of(weights)
    v = exact_point(point)
    assert nilcone_member_exact(action, v).member

    outside = set(range(action.m)) - set(v.support)
    invariant = [
        c
        for c in monomials(action.m, 1, 6)
        if all(sum(x * w[k] for x, w in zip(c, weights)) == 0 for k in range(action.n))
    ]
    assert bool(invariant) == bool(outside)
    for c in invariant:
        assert any(c[j] for j in outside), c
        assert orbit_average_exact(action, v, c) == ZERO
