"""
Haar averages of holomorphic polynomials over an orbit ``M = G v``.

The invariant measure of the orbit is multiplicative on polynomials exactly
when the polynomial algebra of ``M`` is antisymmetric, and then the unique
``G``-fixed character is evaluation at the mean ``∫ g v dν``. This module
estimates both sides.

Estimates are sharded: shard ``i`` draws its samples from
``state.advance(i)``, and shard sums are combined with ``math.fsum`` in shard
order, so results do not depend on the thread count. Every function is
shifted by its value at ``v`` before summing, which keeps the variance of a
function that is constant on the orbit at rounding level.

Tori default to the closed form: the Haar average of ``z^c`` over ``T v`` is
``v^c`` when ``Σ c_j w_j = 0`` and zero otherwise.

Examples:
    .. code-block:: python

        group = CompactMatrixGroup.unitary(2)
        report = multiplicativity_defect(group, [1, 0], 3, 100_000, SamplerState(1))
        classify(report.defect)  # Verdict.Consistent
"""

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum, unique
from math import fsum, prod, sqrt
from typing import Optional, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from orbithull.lib import mp
from orbithull.lib.error import DomainError, ResourceLimitError
from orbithull.lib.haar import (
    CompactMatrixGroup,
    GroupKind,
    Representation,
    SamplerState,
    act_batch,
    haar_batch,
)
from orbithull.lib.point import OrbitPoint
from orbithull.lib.polynomial import (
    Exponent,
    Polynomial,
    count_monomials,
    monomial_values,
    monomials,
    trace_power,
)
from orbithull.toolbox.torus_analyze.lib import TorusAction, orbit_average_exact

logger = logging.getLogger(__name__)

SHARD_SIZE: int = 8192
MONOMIAL_CHUNK: int = 64
MONOMIAL_CAP: int = 5000
MIN_SAMPLES: int = 100


@unique
class Verdict(Enum):
    Consistent = "antisymmetric-consistent"
    Refuted = "refuted"
    Inconclusive = "inconclusive"


@dataclass(frozen=True)
class Estimate:
    value: complex
    standard_error: float


@dataclass(frozen=True)
class DefectReport:
    """
    Monomial averages up to ``degree_bound`` and the worst multiplicativity violation.

    ``samples`` is zero when the closed torus form was used.
    """

    averages: dict[Exponent, Estimate]
    defect: float
    defect_standard_error: float
    defect_pair: Optional[tuple[Exponent, Exponent]]
    fixed_point: tuple[Estimate, ...]
    samples: int
    degree_bound: int
    approximate_haar: bool = False


@dataclass(frozen=True)
class NilconeNumericReport:
    consistent: bool
    worst: Optional[Union[Exponent, str]]
    worst_estimate: Optional[Estimate]
    averages: dict[Exponent, Estimate] = field(default_factory=dict)
    invariant_averages: dict[str, Estimate] = field(default_factory=dict)
    invariant_variances: dict[str, float] = field(default_factory=dict)
    samples: int = 0


@dataclass(frozen=True)
class ConsistencyReport:
    residual: float
    residual_standard_error: float
    worst: Optional[Exponent]
    fixed_point: tuple[Estimate, ...]
    samples: int


def classify(defect: float, consistent: float = 5e-3, refuted: float = 0.05) -> Verdict:
    """
    Maps a defect to a verdict; the band between the thresholds is inconclusive.
    """
    if defect <= consistent:
        return Verdict.Consistent
    if defect >= refuted:
        return Verdict.Refuted

    return Verdict.Inconclusive


def _uses_closed_form(group: CompactMatrixGroup, exact_torus: bool) -> bool:
    return exact_torus and group.kind is GroupKind.Torus


def _checked(group: CompactMatrixGroup, v: ArrayLike, samples: int) -> NDArray[np.complex128]:
    vec = np.asarray(v, dtype=np.complex128).reshape(-1)
    if vec.shape[0] != group.dimension:
        raise DomainError(
            f"vector of length {vec.shape[0]} does not match representation dimension {group.dimension}"
        )
    if samples < MIN_SAMPLES:
        raise DomainError(f"samples must be >= {MIN_SAMPLES}, got {samples}")

    return vec


def _shard(
    group: CompactMatrixGroup,
    v: NDArray[np.complex128],
    exponents: NDArray[np.int64],
    polys: Sequence[Polynomial],
    base: NDArray[np.complex128],
    state: SamplerState,
    size: int,
) -> tuple[NDArray[np.complex128], NDArray[np.float64]]:
    images = act_batch(group, haar_batch(group, size, state.generator()), v)

    columns = []
    for lo in range(0, exponents.shape[0], MONOMIAL_CHUNK):
        columns.append(monomial_values(images, exponents[lo : lo + MONOMIAL_CHUNK]))
    columns.extend(p.evaluate(images)[:, None] for p in polys)

    vals = np.concatenate(columns, axis=1) - base[None, :]

    return vals.sum(axis=0), (np.abs(vals) ** 2).sum(axis=0)


def _moments(
    group: CompactMatrixGroup,
    v: NDArray[np.complex128],
    exponents: Sequence[Exponent],
    samples: int,
    state: SamplerState,
    polys: Sequence[Polynomial] = (),
) -> tuple[list[Estimate], list[float]]:
    exps = np.array(exponents, dtype=np.int64).reshape(-1, group.dimension)
    base = np.concatenate(
        [monomial_values(v[None, :], exps)[0], [p.evaluate(v[None, :])[0] for p in polys]]
    ).astype(np.complex128)

    sizes = [min(SHARD_SIZE, samples - lo) for lo in range(0, samples, SHARD_SIZE)]
    arguments = [
        (group, v, exps, polys, base, state.advance(i), size) for i, size in enumerate(sizes)
    ]
    logger.debug("estimating %d functions over %d shards", base.shape[0], len(sizes))
    shards = mp.starmap(_shard, arguments)

    estimates, variances = [], []
    for i, f0 in enumerate(base):
        re = fsum(float(s1[i].real) for s1, _ in shards)
        im = fsum(float(s1[i].imag) for s1, _ in shards)
        sq = fsum(float(s2[i]) for _, s2 in shards)

        shift = complex(re, im) / samples
        var = max(sq / samples - abs(shift) ** 2, 0.0) * samples / (samples - 1)
        estimates.append(Estimate(complex(f0) + shift, sqrt(var / samples)))
        variances.append(var)

    return estimates, variances


def _closed_form(group: CompactMatrixGroup, v: NDArray[np.complex128], c: Exponent) -> complex:
    return complex(orbit_average_exact(TorusAction(group.weights), OrbitPoint.of(v), c))


def _closed_form_poly(group: CompactMatrixGroup, v: NDArray[np.complex128], p: Polynomial) -> complex:
    return sum((a * _closed_form(group, v, c) for c, a in p.terms), 0j)


def _estimate_all(
    group: CompactMatrixGroup,
    v: NDArray[np.complex128],
    exponents: Sequence[Exponent],
    samples: int,
    state: SamplerState,
    exact_torus: bool,
    polys: Sequence[Polynomial] = (),
) -> tuple[list[Estimate], list[float], int]:
    if _uses_closed_form(group, exact_torus):
        ests = [Estimate(_closed_form(group, v, c), 0.0) for c in exponents]
        ests += [Estimate(_closed_form_poly(group, v, p), 0.0) for p in polys]
        return ests, [0.0] * len(ests), 0

    ests, variances = _moments(group, v, exponents, samples, state, polys)

    return ests, variances, samples


def orbit_average(
    group: CompactMatrixGroup,
    v: ArrayLike,
    p: Polynomial,
    samples: int,
    state: SamplerState,
    exact_torus: bool = True,
) -> Estimate:
    """
    Estimates ``∫ p(g v) dν(g)``.

    Arguments:
        group (CompactMatrixGroup): The group.
        v (ArrayLike): The base point.
        p (Polynomial): The integrand.
        samples (int): Haar samples, at least 100.
        state (SamplerState): The random stream.
        exact_torus (bool): Use the closed form on tori.

    Returns:
        Estimate: The mean and its standard error; zero error for the closed form.

    Raises:
        DomainError: Dimensions disagree or ``samples`` is too small.
    """
    vec = _checked(group, v, samples)
    if p.nvars != group.dimension:
        raise DomainError(f"polynomial in {p.nvars} variables on a space of dimension {group.dimension}")

    ests, _, _ = _estimate_all(group, vec, [], samples, state, exact_torus, [p])

    return ests[0]


def _sweep(m: int, low: int, high: int, cap: int) -> list[Exponent]:
    count = count_monomials(m, low, high)
    if count > cap:
        raise ResourceLimitError(
            f"{count} monomials of degree {low}..{high} in {m} variables exceed the cap of {cap}"
        )

    return list(monomials(m, low, high))


def nilcone_test_numeric(
    group: CompactMatrixGroup,
    v: ArrayLike,
    degree_bound: int,
    samples: int,
    tolerance: float,
    state: SamplerState,
    invariants: Optional[Mapping[str, Polynomial]] = None,
    monomial_cap: int = MONOMIAL_CAP,
    exact_torus: bool = True,
) -> NilconeNumericReport:
    """
    Tests whether the orbit averages of all monomials ``1 <= |c| <= degree_bound`` vanish.

    Averaging a monomial over ``G`` projects it onto the invariants, so a
    nonzero average is a nonconstant invariant that does not vanish at ``v``.
    An average counts as zero when its modulus is at most
    ``max(tolerance, 4 · standard_error)``. Named ``invariants`` are averaged
    on the same samples and also decide the verdict; their sample variances
    are reported as a sampler sanity check.

    Arguments:
        group (CompactMatrixGroup): The group.
        v (ArrayLike): The point.
        degree_bound (int): The largest monomial degree.
        samples (int): Haar samples.
        tolerance (float): The absolute floor of the zero test.
        state (SamplerState): The random stream.
        invariants (Optional[Mapping[str, Polynomial]]): Named invariant polynomials.
        monomial_cap (int): The largest number of monomials to estimate.
        exact_torus (bool): Use the closed form on tori.

    Returns:
        NilconeNumericReport: The verdict and the worst offender.

    Raises:
        DomainError: ``degree_bound < 1`` or a dimension mismatch.
        ResourceLimitError: Too many monomials.
    """
    vec = _checked(group, v, samples)
    if degree_bound < 1:
        raise DomainError("degree_bound must be >= 1")
    if not np.any(vec):
        return NilconeNumericReport(True, None, None)

    named = dict(invariants or {})
    exps = _sweep(group.dimension, 1, degree_bound, monomial_cap)
    ests, variances, used = _estimate_all(group, vec, exps, samples, state, exact_torus, list(named.values()))

    keys: list[object] = [*exps, *named]
    margins = [abs(e.value) - max(tolerance, 4 * e.standard_error) for e in ests]
    worst_idx = int(np.argmax(margins))
    consistent = margins[worst_idx] <= 0
    worst = keys[worst_idx]

    report = NilconeNumericReport(
        consistent=consistent,
        worst=worst,  # type: ignore[arg-type]
        worst_estimate=ests[worst_idx],
        averages=dict(zip(exps, ests)),
        invariant_averages=dict(zip(named, ests[len(exps) :])),
        invariant_variances=dict(zip(named, variances[len(exps) :])),
        samples=used,
    )
    logger.info("nilcone consistent=%s worst=%s", consistent, worst)

    return report


def multiplicativity_defect(
    group: CompactMatrixGroup,
    v: ArrayLike,
    degree_bound: int,
    samples: int,
    state: SamplerState,
    monomial_cap: int = MONOMIAL_CAP,
    exact_torus: bool = True,
) -> DefectReport:
    """
    Estimates ``max |μ(z^{a+b}) - μ(z^a) μ(z^b)|`` over ``1 <= |a|, |b| <= degree_bound``.

    All averages share one sample stream.

    Arguments:
        group (CompactMatrixGroup): The group.
        v (ArrayLike): The point.
        degree_bound (int): The largest factor degree.
        samples (int): Haar samples.
        state (SamplerState): The random stream.
        monomial_cap (int): The largest number of monomials to estimate.
        exact_torus (bool): Use the closed form on tori.

    Returns:
        DefectReport: The defect, its maximizing pair and the fixed point estimate.

    Raises:
        DomainError: ``degree_bound < 1`` or a dimension mismatch.
        ResourceLimitError: Too many monomials.
    """
    vec = _checked(group, v, samples)
    if degree_bound < 1:
        raise DomainError("degree_bound must be >= 1")

    m = group.dimension
    exps = _sweep(m, 1, 2 * degree_bound, monomial_cap)
    ests, _, used = _estimate_all(group, vec, exps, samples, state, exact_torus)
    mu = dict(zip(exps, ests))

    factors = [c for c in exps if sum(c) <= degree_bound]
    defect, defect_se, pair = 0.0, 0.0, None
    for i, a in enumerate(factors):
        for b in factors[i:]:
            ab = tuple(x + y for x, y in zip(a, b))
            ea, eb, eab = mu[a], mu[b], mu[ab]
            gap = abs(eab.value - ea.value * eb.value)
            if pair is None or gap > defect:
                defect, pair = gap, (a, b)
                defect_se = (
                    eab.standard_error
                    + abs(ea.value) * eb.standard_error
                    + abs(eb.value) * ea.standard_error
                )

    unit = [tuple(int(k == j) for k in range(m)) for j in range(m)]
    logger.info("defect %.3g at %s from %d samples", defect, pair, used)

    return DefectReport(
        averages={c: mu[c] for c in factors},
        defect=defect,
        defect_standard_error=defect_se,
        defect_pair=pair,
        fixed_point=tuple(mu[c] for c in unit),
        samples=used,
        degree_bound=degree_bound,
        approximate_haar=group.approximate_haar and used > 0,
    )


def _propagated_error(point: Sequence[complex], errors: Sequence[float], c: Exponent) -> float:
    # first order error of z^c at an estimated point
    total = 0.0
    for j, k in enumerate(c):
        if k:
            others = prod(abs(point[i]) ** c[i] for i in range(len(c)) if i != j)
            total += k * abs(point[j]) ** (k - 1) * others * errors[j]

    return total


def fixed_point_consistency(
    group: CompactMatrixGroup,
    v: ArrayLike,
    degree_bound: int,
    samples: int,
    state: SamplerState,
    monomial_cap: int = MONOMIAL_CAP,
    exact_torus: bool = True,
) -> ConsistencyReport:
    """
    Compares each monomial average with the monomial evaluated at the mean point ``v̂``.

    A small residual means evaluation at ``v̂`` reproduces the orbit averages,
    as it must when they form a character.

    Arguments:
        group (CompactMatrixGroup): The group.
        v (ArrayLike): The point.
        degree_bound (int): The largest monomial degree.
        samples (int): Haar samples.
        state (SamplerState): The random stream.
        monomial_cap (int): The largest number of monomials to estimate.
        exact_torus (bool): Use the closed form on tori.

    Returns:
        ConsistencyReport: ``max |μ(z^c) - v̂^c|`` and its maximizer.
    """
    vec = _checked(group, v, samples)
    if degree_bound < 1:
        raise DomainError("degree_bound must be >= 1")

    m = group.dimension
    exps = _sweep(m, 1, degree_bound, monomial_cap)
    ests, _, used = _estimate_all(group, vec, exps, samples, state, exact_torus)
    mu = dict(zip(exps, ests))

    unit = [tuple(int(k == j) for k in range(m)) for j in range(m)]
    fixed = [mu[c].value for c in unit]
    fixed_se = [mu[c].standard_error for c in unit]

    residual, residual_se, worst = 0.0, 0.0, None
    for c in exps:
        at_fixed = prod((x**k for x, k in zip(fixed, c) if k), start=1 + 0j)
        gap = abs(mu[c].value - at_fixed)
        if worst is None or gap > residual:
            residual, worst = gap, c
            residual_se = mu[c].standard_error + _propagated_error(fixed, fixed_se, c)

    return ConsistencyReport(
        residual=residual,
        residual_standard_error=float(residual_se),
        worst=worst,
        fixed_point=tuple(mu[c] for c in unit),
        samples=used,
    )


def default_invariants(group: CompactMatrixGroup) -> dict[str, Polynomial]:
    """
    Known invariant polynomials of a built-in action, by display name.

    Adjoint actions get the traces of powers; the defining action of
    ``SO(n)`` gets the complex quadratic form ``Σ z_j²``.
    """
    if group.representation is Representation.Adjoint:
        return {f"tr(Z^{k})": trace_power(group.n, k) for k in range(2, max(group.n, 2) + 1)}
    if group.kind is GroupKind.SpecialOrthogonal:
        square = {tuple(2 * int(k == j) for k in range(group.n)): 1 for j in range(group.n)}
        return {"sum(z_j^2)": Polynomial.of(square, group.n)}

    return {}
