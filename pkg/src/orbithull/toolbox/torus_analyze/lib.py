"""
Exact analysis of torus orbits ``M = T v`` in ``Cᵐ``.

Coordinate ``z_j`` transforms by the character ``w_j``, so a point ``e^{itξ} v``
of the complexified orbit scales ``v_j`` by ``e^{-t⟨w_j, ξ⟩}``. Everything in
this module follows from that formula and the cone machinery in
:mod:`orbithull.lib.lattice`.

Coordinates are indexed from zero.

Examples:
    .. code-block:: python

        action = TorusAction.of([(1, 0), (-1, 0), (0, 1)])
        report = analyze(action, OrbitPoint.of([1, 1, 1]))
        report.base_coords    # (0, 1)
        report.fiber_coords   # (2,)
        report.v_tilde        # OrbitPoint((1, 1, 0))
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from orbithull.lib.error import DomainError, ValidationError
from orbithull.lib.gaussian import ZERO, GaussianRational
from orbithull.lib.haar import CompactMatrixGroup
from orbithull.lib.lattice import (
    LatticeBasis,
    WeightSemigroup,
    WeightVector,
    cone_is_pointed,
    integer_kernel,
    integer_scaling,
    lineality_lattice,
    relint_dual_point,
    strict_positive_functional,
    zero_combination,
)
from orbithull.lib.point import Coordinate, OrbitPoint
from orbithull.lib.polynomial import Exponent

logger = logging.getLogger(__name__)

Real = Union[int, float, Fraction]
Relation = tuple[Exponent, Exponent]


@dataclass(frozen=True)
class TorusAction:
    """
    ``T = (S¹)ⁿ`` acting on ``Cᵐ`` with weight ``weights[j]`` on coordinate ``j``.
    """

    weights: tuple[WeightVector, ...]

    @classmethod
    def of(cls, weights: Sequence[Sequence[int]]) -> "TorusAction":
        """
        Raises:
            ValidationError: There are no weights, or their lengths differ.
        """
        if not weights:
            raise ValidationError("a torus action needs at least one weight")
        # rejects ragged or non-integer weights
        WeightSemigroup.of(weights)

        return cls(tuple(tuple(int(x) for x in w) for w in weights))

    @property
    def n(self) -> int:
        return len(self.weights[0])

    @property
    def m(self) -> int:
        return len(self.weights)

    def pairing(self, j: int, xi: Sequence[Real]) -> Real:
        return sum((w * x for w, x in zip(self.weights[j], xi)), Fraction(0))

    def group(self) -> CompactMatrixGroup:
        return CompactMatrixGroup.torus(self.weights)


@dataclass(frozen=True)
class Divergence:
    """
    ``lim e^{itξ} v`` does not exist because these coordinates pair negatively with ``ξ``.
    """

    coords: tuple[int, ...]


@dataclass(frozen=True)
class NilconeVerdict:
    """
    ``member`` comes with a destabilizing ``xi``; non-membership with an
    invariant monomial exponent ``witness`` that does not vanish at ``v``.
    """

    member: bool
    xi: Optional[tuple[Fraction, ...]] = None
    witness: Optional[Exponent] = None


@dataclass(frozen=True)
class HullVerdict:
    point: OrbitPoint
    outer_member: bool
    violated_constraint: Optional[str] = None


@dataclass(frozen=True)
class FibrationReport:
    """
    Exact structure of the hull of a torus orbit.

    ``base_coords`` and ``fiber_coords`` partition the support of ``v``:
    ``xi_star`` pairs to zero with the weights of the former and positively
    with those of the latter. ``null_coords`` are the coordinates where ``v``
    vanishes. ``v_tilde`` is ``v`` with the fiber coordinates zeroed.
    """

    action: TorusAction
    v: OrbitPoint
    spectrum: WeightSemigroup
    antisymmetric: bool
    nilpotent: bool
    lineality: LatticeBasis
    xi_star: tuple[Fraction, ...]
    v_tilde: OrbitPoint
    base_coords: tuple[int, ...]
    fiber_coords: tuple[int, ...]
    null_coords: tuple[int, ...]
    fixed_coords: tuple[int, ...]
    hull_relations: tuple[Relation, ...]
    nilcone: NilconeVerdict

    @property
    def closed_complex_orbit(self) -> bool:
        return not self.fiber_coords

    @property
    def self_conjugate(self) -> bool:
        """
        Polynomials on a closed complex torus orbit are dense in its continuous functions.
        """
        return self.closed_complex_orbit


def _checked_point(action: TorusAction, v: OrbitPoint) -> None:
    if len(v) != action.m:
        raise DomainError(
            f"vector of length {len(v)} does not match representation dimension {action.m}"
        )


def orbit_spectrum(action: TorusAction, v: OrbitPoint) -> WeightSemigroup:
    """
    Returns the weights of the coordinates where ``v`` does not vanish.

    They generate the semigroup of weights of the polynomial algebra on the orbit.

    Arguments:
        action (TorusAction): The action.
        v (OrbitPoint): The base point.

    Returns:
        WeightSemigroup: The generators.

    Raises:
        DomainError: ``v`` is zero or has the wrong length.
    """
    _checked_point(action, v)
    if v.is_zero:
        raise DomainError("empty orbit spectrum")

    return WeightSemigroup.of((action.weights[j] for j in v.support), action.n)


def reachable_limit(
    action: TorusAction, v: OrbitPoint, xi: Sequence[Real]
) -> Union[OrbitPoint, Divergence]:
    """
    Computes ``lim_{t→+∞} e^{itξ} v``.

    Arguments:
        action (TorusAction): The action.
        v (OrbitPoint): The starting point.
        xi (Sequence[Real]): The direction, exact or floating.

    Returns:
        Union[OrbitPoint, Divergence]: The limit, or the coordinates that blow up.
    """
    _checked_point(action, v)
    pairings = {j: action.pairing(j, xi) for j in v.support}

    negative = tuple(j for j, p in pairings.items() if p < 0)
    if negative:
        return Divergence(negative)

    return v.with_zeros(j for j, p in pairings.items() if p > 0)


def _first_coordinates(action: TorusAction, v: OrbitPoint) -> dict[WeightVector, int]:
    first: dict[WeightVector, int] = {}
    for j in v.support:
        first.setdefault(action.weights[j], j)

    return first


def nilcone_member_exact(action: TorusAction, v: OrbitPoint) -> NilconeVerdict:
    """
    Decides whether every nonconstant invariant polynomial vanishes at ``v``.

    Members get a direction ``ξ`` with ``⟨w_j, ξ⟩ >= 1`` on the support, so
    ``e^{itξ} v → 0``. Non-members get an exponent ``c >= 0`` supported on
    ``supp v`` with ``Σ c_j w_j = 0``; the invariant ``z^c`` is nonzero at ``v``.

    Arguments:
        action (TorusAction): The action.
        v (OrbitPoint): The point.

    Returns:
        NilconeVerdict: The verdict with its certificate.
    """
    gens = orbit_spectrum(action, v)
    xi = strict_positive_functional(gens)
    if xi is not None:
        return NilconeVerdict(True, xi=xi)

    witness = [0] * action.m
    zero_weight = [j for j in v.support if not any(action.weights[j])]
    if zero_weight:
        witness[zero_weight[0]] = 1
    else:
        y = zero_combination(gens)
        if y is None:
            raise DomainError(f"no destabilizing direction and no invariant for {gens}")
        first = _first_coordinates(action, v)
        for g, k in zip(gens.generators, integer_scaling(y)):
            witness[first[g]] += k

    return NilconeVerdict(False, witness=tuple(witness))


def _hull_relations(action: TorusAction, v: OrbitPoint) -> tuple[Relation, ...]:
    support = v.support
    kernel = integer_kernel([action.weights[j] for j in support])

    relations = []
    for k in kernel.vectors:
        a, b = [0] * action.m, [0] * action.m
        for j, x in zip(support, k):
            if x > 0:
                a[j] = x
            else:
                b[j] = -x
        relations.append((tuple(a), tuple(b)))

    return tuple(relations)


def analyze(action: TorusAction, v: OrbitPoint, nilcone_semantics: bool = False) -> FibrationReport:
    """
    Computes the fibration of the hull of ``T v`` over its polynomially convex orbit.

    Arguments:
        action (TorusAction): The action.
        v (OrbitPoint): The base point.
        nilcone_semantics (bool): Refuse points with a nonzero coordinate of weight zero.

    Returns:
        FibrationReport: The exact report.

    Raises:
        DomainError: ``v`` is zero, or ``nilcone_semantics`` is set and ``v`` has a fixed coordinate.
    """
    gens = orbit_spectrum(action, v)
    fixed = tuple(j for j in v.support if not any(action.weights[j]))
    if fixed and nilcone_semantics:
        raise DomainError(
            f"coordinates {list(fixed)} carry weight zero, so the orbit has nonzero fixed points"
        )
    if fixed:
        logger.warning("coordinates %s have weight zero; verdicts are reported separately", list(fixed))

    pointed = cone_is_pointed(gens)
    lineality = lineality_lattice(gens)
    xi_star = relint_dual_point(gens)
    nilcone = nilcone_member_exact(action, v)

    base = tuple(j for j in v.support if action.pairing(j, xi_star) == 0)
    fiber = tuple(j for j in v.support if action.pairing(j, xi_star) > 0)
    null = tuple(j for j in range(action.m) if j not in v.support)

    v_tilde = reachable_limit(action, v, xi_star)
    if isinstance(v_tilde, Divergence):
        raise DomainError(f"relative interior direction diverges on {v_tilde.coords}")

    report = FibrationReport(
        action=action,
        v=v,
        spectrum=gens,
        antisymmetric=pointed.pointed,
        nilpotent=nilcone.member,
        lineality=lineality,
        xi_star=xi_star,
        v_tilde=v_tilde,
        base_coords=base,
        fiber_coords=fiber,
        null_coords=null,
        fixed_coords=fixed,
        hull_relations=_hull_relations(action, v),
        nilcone=nilcone,
    )
    logger.info(
        "antisymmetric=%s nilpotent=%s lineality rank=%d",
        report.antisymmetric,
        report.nilpotent,
        lineality.rank,
    )

    return report


def _exact_pair(v: OrbitPoint, z: OrbitPoint) -> bool:
    return v.is_exact and z.is_exact


def hull_outer_membership(
    action: TorusAction, v: OrbitPoint, z: OrbitPoint, tol: float = 1e-10
) -> HullVerdict:
    """
    Tests necessary conditions for ``z`` to lie in the polynomial hull of ``T v``.

    The moduli must satisfy ``|z_j| <= |v_j|`` and every binomial relation
    ``z^a v^b = z^b v^a`` from the integer kernel of the support weights must
    hold. Exact points are compared exactly; otherwise moduli get absolute
    slack ``tol`` and relations relative slack ``tol · max(1, |lhs|, |rhs|)``.

    Arguments:
        action (TorusAction): The action.
        v (OrbitPoint): The base point.
        z (OrbitPoint): The candidate point.
        tol (float): The floating point tolerance.

    Returns:
        HullVerdict: The verdict, naming the first violated constraint.
    """
    _checked_point(action, v)
    _checked_point(action, z)
    exact = _exact_pair(v, z)

    for j, (vj, zj) in enumerate(zip(v.coords, z.coords)):
        if exact:
            ok = zj.abs_sq() <= vj.abs_sq()  # type: ignore[union-attr]
        else:
            ok = abs(complex(zj)) <= abs(complex(vj)) + tol
        if not ok:
            return HullVerdict(z, False, f"|z_{j}| > |v_{j}|")

    for a, b in _hull_relations(action, v):
        lhs: Coordinate
        rhs: Coordinate
        if exact:
            lhs = z.monomial(a) * v.monomial(b)  # type: ignore[operator]
            rhs = z.monomial(b) * v.monomial(a)  # type: ignore[operator]
            ok = lhs == rhs
        else:
            lhs = complex(z.monomial(a)) * complex(v.monomial(b))
            rhs = complex(z.monomial(b)) * complex(v.monomial(a))
            ok = abs(lhs - rhs) <= tol * max(1.0, abs(lhs), abs(rhs))
        if not ok:
            return HullVerdict(z, False, f"z^{a} v^{b} != z^{b} v^{a}")

    return HullVerdict(z, True)


def hull_inner_sample(
    action: TorusAction, v: OrbitPoint, theta: Sequence[float], xi: Sequence[float]
) -> OrbitPoint:
    """
    Returns ``z_j = v_j exp(i⟨w_j, θ⟩ - ⟨w_j, ξ⟩)``, a point of an analytic disc in the hull.

    Arguments:
        action (TorusAction): The action.
        v (OrbitPoint): The base point.
        theta (Sequence[float]): The angles.
        xi (Sequence[float]): A direction pairing nonnegatively with the support weights.

    Returns:
        OrbitPoint: The floating hull point.

    Raises:
        DomainError: ``ξ`` pairs negatively with a support weight.
    """
    _checked_point(action, v)
    w = np.array(action.weights, dtype=np.float64)
    pair_xi = w @ np.asarray(xi, dtype=np.float64)
    pair_theta = w @ np.asarray(theta, dtype=np.float64)

    bad = [j for j in v.support if pair_xi[j] < 0]
    if bad:
        raise DomainError(f"direction pairs negatively with the weights of coordinates {bad}")

    z = v.to_array() * np.exp(1j * pair_theta - pair_xi)

    return OrbitPoint.of(z)


def alpha_on_monomial(report: FibrationReport, c: Sequence[int]) -> Optional[Exponent]:
    """
    Averages ``z^c`` over the fibers of the orbit over the distinguished orbit.

    The fibers are orbits of the stabilizer of ``ṽ``, whose characters are
    trivial exactly on the lattice spanned by the base weights.

    Arguments:
        report (FibrationReport): The fibration.
        c (Sequence[int]): The exponent.

    Returns:
        Optional[Exponent]: ``c`` itself when ``z^c`` is constant on fibers, ``None`` for zero.

    Raises:
        DomainError: ``c`` is negative, of the wrong length, or not supported on ``supp v``.
    """
    exp = tuple(int(x) for x in c)
    action = report.action
    if len(exp) != action.m or any(x < 0 for x in exp):
        raise DomainError(f"exponent {exp} is not a nonnegative vector of length {action.m}")
    if any(x and j in report.null_coords for j, x in enumerate(exp)):
        raise DomainError(f"exponent {exp} is not supported on the support of v")

    weight = [sum(x * w[k] for x, w in zip(exp, action.weights)) for k in range(action.n)]

    return exp if report.lineality.contains(weight) else None


def orbit_average_exact(action: TorusAction, v: OrbitPoint, c: Sequence[int]) -> Coordinate:
    """
    Returns the Haar average of ``z^c`` over ``T v``: ``v^c`` if ``Σ c_j w_j = 0``, else zero.
    """
    _checked_point(action, v)
    weight = [sum(x * w[k] for x, w in zip(c, action.weights)) for k in range(action.n)]
    if any(weight):
        return ZERO if v.is_exact else 0j

    return v.monomial(c)


def orbit_fixed_point_exact(action: TorusAction, v: OrbitPoint) -> OrbitPoint:
    """
    Returns the Haar average of ``g v``, which keeps only the weight zero coordinates.
    """
    _checked_point(action, v)

    return v.with_zeros(j for j in range(action.m) if any(action.weights[j]))


def hull_projection(report: FibrationReport, z: OrbitPoint) -> OrbitPoint:
    """
    Maps a hull point onto the distinguished orbit along ``ξ*``.

    Arguments:
        report (FibrationReport): The fibration.
        z (OrbitPoint): A point of the hull.

    Returns:
        OrbitPoint: ``lim e^{itξ*} z``; for ``z`` in the fiber of ``v`` this is ``ṽ``.

    Raises:
        DomainError: ``z`` is nonzero where ``v`` vanishes.
    """
    _checked_point(report.action, z)
    stray = [j for j in z.support if j in report.null_coords]
    if stray:
        raise DomainError(f"point is nonzero on coordinates {stray} where v vanishes")

    return z.with_zeros(report.fiber_coords)


def exact_point(pairs: Sequence[tuple[Union[int, str, Fraction], Union[int, str, Fraction]]]) -> OrbitPoint:
    """
    Builds an exact point from ``(re, im)`` rational pairs such as ``("1/2", 0)``.
    """
    return OrbitPoint.exact(GaussianRational.of(re, im) for re, im in pairs)
