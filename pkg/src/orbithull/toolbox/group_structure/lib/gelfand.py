"""
Multiplicities of ``H``-fixed vectors and multiplicity-free checks.

The dimension of the ``H``-fixed subspace of a representation ``π`` is the
Haar average ``∫_H χ_π(h) dh`` of its character. ``(G, H)`` is a Gelfand pair
when this is at most one for every irreducible ``π``, so a finite family of
irreducibles gives evidence, never a proof.

Finite subgroups are averaged exactly over their elements; everything else is
estimated by sharded Monte Carlo in the same way as orbit averages.

Examples:
    .. code-block:: python

        family = [so3_character(l) for l in range(5)]
        report = gelfand_check(family, circle_in_so3(), 100_000, 0.05, SamplerState(3))
        assert report.multiplicity_free
"""

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from math import fsum, sqrt
from typing import Optional, Union

import numpy as np
from numpy.typing import NDArray

from orbithull.lib import mp
from orbithull.lib.error import DomainError
from orbithull.lib.haar import CompactMatrixGroup, ComplexArray, SamplerState, haar_batch

logger = logging.getLogger(__name__)

SHARD_SIZE: int = 8192

Evaluator = Callable[[ComplexArray], NDArray[np.complexfloating]]


@dataclass(frozen=True)
class RepresentationCharacter:
    """
    A representation given by an evaluator on batches of group elements.

    ``evaluate`` maps an array of shape ``(k, n, n)`` either to the characters,
    shape ``(k,)``, or to the representation matrices, shape ``(k, d, d)``.
    Irreducibility is trusted.
    """

    name: str
    dimension: int
    evaluate: Evaluator = field(repr=False)

    def character(self, elements: ComplexArray) -> NDArray[np.complex128]:
        values = np.asarray(self.evaluate(elements), dtype=np.complex128)
        if values.ndim == 3:
            return np.trace(values, axis1=-2, axis2=-1)

        return values.reshape(-1)


def _rotation_angle(r: ComplexArray) -> NDArray[np.float64]:
    cos = (np.trace(r, axis1=-2, axis2=-1).real - 1) / 2
    return np.arccos(np.clip(cos, -1.0, 1.0))


def so3_character(ell: int) -> RepresentationCharacter:
    """
    Returns the character ``1 + 2 Σ_{k ≤ ℓ} cos kθ`` of the spherical harmonics of degree ``ℓ`` on ``SO(3)``.

    Raises:
        DomainError: ``ℓ`` is negative.
    """
    if ell < 0:
        raise DomainError(f"degree {ell} must be >= 0")

    def evaluate(r: ComplexArray) -> NDArray[np.complexfloating]:
        theta = _rotation_angle(r)
        k = np.arange(1, ell + 1)
        return (1 + 2 * np.cos(theta[:, None] * k[None, :]).sum(axis=1)).astype(np.complex128)

    return RepresentationCharacter(f"so3:l={ell}", 2 * ell + 1, evaluate)


def su2_character(spin: Union[int, Fraction]) -> RepresentationCharacter:
    """
    Returns the character ``Σ_{m=-j}^{j} cos 2mφ`` of the spin ``j`` representation of ``SU(2)``,
    where ``±φ`` are the eigenvalue angles.

    Raises:
        DomainError: ``j`` is negative or not a half-integer.
    """
    j = Fraction(spin)
    if j < 0 or (2 * j).denominator != 1:
        raise DomainError(f"spin {j} must be a nonnegative half-integer")

    ms = np.array([float(-j + k) for k in range(int(2 * j) + 1)])

    def evaluate(u: ComplexArray) -> NDArray[np.complexfloating]:
        half = np.clip(np.trace(u, axis1=-2, axis2=-1).real / 2, -1.0, 1.0)
        phi = np.arccos(half)
        return np.cos(2 * phi[:, None] * ms[None, :]).sum(axis=1).astype(np.complex128)

    return RepresentationCharacter(f"su2:j={j}", int(2 * j) + 1, evaluate)


def trivial_character() -> RepresentationCharacter:
    return RepresentationCharacter("trivial", 1, lambda g: np.ones(g.shape[0], dtype=np.complex128))


@dataclass(frozen=True)
class SubgroupSampler:
    """
    Haar measure on a closed subgroup.

    ``elements`` lists a finite subgroup, which is then averaged exactly;
    otherwise ``draw(size, rng)`` returns ``size`` Haar distributed elements.
    """

    name: str
    draw: Callable[[int, np.random.Generator], ComplexArray] = field(repr=False)
    elements: Optional[ComplexArray] = field(default=None, repr=False)

    @property
    def finite(self) -> bool:
        return self.elements is not None


def finite_subgroup(name: str, elements: Sequence[ComplexArray]) -> SubgroupSampler:
    """
    Raises:
        DomainError: No elements are given.
    """
    if not elements:
        raise DomainError("a finite subgroup needs at least one element")
    stack = np.stack([np.asarray(g, dtype=np.complex128) for g in elements])

    return SubgroupSampler(name, lambda k, rng: stack[rng.integers(0, len(stack), k)], stack)


def circle_in_so3() -> SubgroupSampler:
    """
    Rotations about the last coordinate axis.
    """

    def draw(k: int, rng: np.random.Generator) -> ComplexArray:
        theta = rng.uniform(0, 2 * np.pi, k)
        r = np.zeros((k, 3, 3), dtype=np.complex128)
        r[:, 0, 0] = r[:, 1, 1] = np.cos(theta)
        r[:, 0, 1], r[:, 1, 0] = -np.sin(theta), np.sin(theta)
        r[:, 2, 2] = 1
        return r

    return SubgroupSampler("so2", draw)


def circle_in_su2() -> SubgroupSampler:
    """
    The diagonal circle ``diag(e^{iφ}, e^{-iφ})``.
    """

    def draw(k: int, rng: np.random.Generator) -> ComplexArray:
        phi = rng.uniform(0, 2 * np.pi, k)
        u = np.zeros((k, 2, 2), dtype=np.complex128)
        u[:, 0, 0], u[:, 1, 1] = np.exp(1j * phi), np.exp(-1j * phi)
        return u

    return SubgroupSampler("u1", draw)


def center(n: int, order: int) -> SubgroupSampler:
    """
    The scalar matrices ``ζ I`` with ``ζ^order = 1``; ``center(2, 2)`` is ``{±1} ⊂ SU(2)``.
    """
    eye = np.eye(n, dtype=np.complex128)
    return finite_subgroup("center", [np.exp(2j * np.pi * k / order) * eye for k in range(order)])


def full_group(group: CompactMatrixGroup) -> SubgroupSampler:
    return SubgroupSampler("full", lambda k, rng: haar_batch(group, k, rng))


@dataclass(frozen=True)
class MultiplicityEstimate:
    """
    The real part of a character average, its standard error, and the
    absolute imaginary part as a sanity residual. ``samples`` is zero for an
    exact average over a finite subgroup.
    """

    value: float
    standard_error: float
    imaginary_residual: float
    samples: int

    @property
    def nearest_integer(self) -> int:
        return round(self.value)

    @property
    def integrality_gap(self) -> float:
        return abs(self.value - self.nearest_integer)


def _shard(
    f: Callable[[ComplexArray], NDArray[np.complex128]], sampler: SubgroupSampler, state: SamplerState, size: int
) -> tuple[float, float, float]:
    vals = f(sampler.draw(size, state.generator()))
    return float(vals.real.sum()), float(vals.imag.sum()), float((vals.real**2).sum())


def _average(
    f: Callable[[ComplexArray], NDArray[np.complex128]],
    sampler: SubgroupSampler,
    samples: int,
    state: SamplerState,
) -> MultiplicityEstimate:
    if sampler.elements is not None:
        vals = f(sampler.elements)
        mean = complex(vals.mean())
        return MultiplicityEstimate(mean.real, 0.0, abs(mean.imag), 0)
    if samples < 2:
        raise DomainError("at least two samples are needed")

    sizes = [min(SHARD_SIZE, samples - lo) for lo in range(0, samples, SHARD_SIZE)]
    shards = mp.starmap(_shard, [(f, sampler, state.advance(i), size) for i, size in enumerate(sizes)])

    re = fsum(s[0] for s in shards) / samples
    im = fsum(s[1] for s in shards) / samples
    sq = fsum(s[2] for s in shards) / samples
    var = max(sq - re**2, 0.0) * samples / (samples - 1)

    return MultiplicityEstimate(re, sqrt(var / samples), abs(im), samples)


def fixed_multiplicity(
    rep: RepresentationCharacter, sampler: SubgroupSampler, samples: int, state: SamplerState
) -> MultiplicityEstimate:
    """
    Estimates ``dim π^H = ∫_H χ_π(h) dh``.

    Arguments:
        rep (RepresentationCharacter): The representation.
        sampler (SubgroupSampler): Haar measure on ``H``.
        samples (int): The Monte Carlo sample count, ignored for finite ``H``.
        state (SamplerState): The stream position.

    Returns:
        MultiplicityEstimate: The estimate.
    """
    return _average(rep.character, sampler, samples, state)


def character_norm(
    rep: RepresentationCharacter, group_sampler: SubgroupSampler, samples: int, state: SamplerState
) -> MultiplicityEstimate:
    """
    Estimates ``∫_G |χ_π|²``, which is one exactly when ``π`` is irreducible.
    """
    return _average(lambda g: np.abs(rep.character(g)) ** 2 + 0j, group_sampler, samples, state)


@dataclass(frozen=True)
class GelfandReport:
    subgroup: str
    threshold: float
    estimates: dict[str, MultiplicityEstimate]
    violators: tuple[str, ...]
    character_norms: dict[str, MultiplicityEstimate] = field(default_factory=dict)
    warnings: tuple[str, ...] = ()

    @property
    def multiplicity_free(self) -> bool:
        return not self.violators


def gelfand_check(
    family: Sequence[RepresentationCharacter],
    sampler: SubgroupSampler,
    samples: int,
    threshold: float = 0.05,
    state: SamplerState = SamplerState(),
    group_sampler: Optional[SubgroupSampler] = None,
) -> GelfandReport:
    """
    Checks that every representation in ``family`` has at most one ``H``-fixed dimension.

    A representation violates when its estimate exceeds ``1 + threshold``.
    With ``group_sampler`` the character norms are estimated too and a
    warning is recorded for any that is not one.

    Arguments:
        family (Sequence[RepresentationCharacter]): Irreducible representations of ``G``.
        sampler (SubgroupSampler): Haar measure on ``H``.
        samples (int): The Monte Carlo sample count.
        threshold (float): The allowance above one.
        state (SamplerState): The stream position, shared by every representation.
        group_sampler (Optional[SubgroupSampler]): Haar measure on ``G``.

    Returns:
        GelfandReport: Estimates, violators and warnings.

    Raises:
        DomainError: ``family`` is empty.
    """
    if not family:
        raise DomainError("the representation family is empty")

    estimates = {rep.name: fixed_multiplicity(rep, sampler, samples, state) for rep in family}
    violators = tuple(name for name, est in estimates.items() if est.value > 1 + threshold)

    norms: dict[str, MultiplicityEstimate] = {}
    warnings: list[str] = []
    if group_sampler is not None:
        for rep in family:
            norm = character_norm(rep, group_sampler, samples, state)
            norms[rep.name] = norm
            if abs(norm.value - 1) > max(threshold, 4 * norm.standard_error):
                warnings.append(f"{rep.name}: character norm {norm.value:.3g} is not 1; it may be reducible")

    for name in violators:
        logger.info("%s has %.3g fixed dimensions", name, estimates[name].value)

    return GelfandReport(sampler.name, threshold, estimates, violators, norms, tuple(warnings))
