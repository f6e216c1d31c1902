"""
Exact lattice and cone machinery for weight semigroups of torus actions.

A finitely generated semigroup ``S ⊆ Zⁿ`` has no units besides zero exactly
when the rational cone spanned by its nonzero generators is pointed:

* if ``s ≠ 0`` and ``-s`` both lie in ``S`` then ``s + (-s) = 0`` is a nonzero
  nonnegative combination of generators, so the cone contains a line;
* conversely, a nonzero combination ``Σ kᵢ gᵢ = 0`` with integers ``kᵢ >= 0``
  and ``kⱼ > 0`` gives the unit ``gⱼ``, because
  ``-gⱼ = (kⱼ - 1) gⱼ + Σ_{i≠j} kᵢ gᵢ ∈ S``.

So antisymmetry is decided by linear programming, never integer programming.

Examples:
    .. code-block:: python

        gens = WeightSemigroup.of([(2, -1), (-1, 2)])
        cert = cone_is_pointed(gens)        # cert.functional == (1, 1)
        basis = integer_kernel([(1,), (2,)])  # lattice spanned by ±(2, -1)
"""

import logging
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Optional

import numpy as np
from numpy.typing import NDArray
from sympy import Matrix
from sympy.matrices.normalforms import hermite_normal_form

from orbithull.lib.error import DomainError, OrbitHullError, ResourceLimitError
from orbithull.lib.simplex import RationalVector, minimize_l1, nonnegative_combination

logger = logging.getLogger(__name__)

WeightVector = tuple[int, ...]
"""
A character of an n-torus, identified with a point of the lattice ``Zⁿ``.
"""

ENUMERATION_CAP: int = 10**6
"""
Default cardinality cap of :func:`semigroup_enumerate`.
"""

_BOX_CAP: int = 10**8


@dataclass(frozen=True)
class WeightSemigroup:
    """
    The semigroup generated by finitely many weights.

    ``generators`` are deduplicated and nonzero, in first-seen order; a zero
    generator is the identity character and only sets ``has_zero``.
    """

    generators: tuple[WeightVector, ...]
    dimension: int
    has_zero: bool = False

    @classmethod
    def of(
        cls, vectors: Iterable[Sequence[int]], dimension: Optional[int] = None
    ) -> "WeightSemigroup":
        """
        Builds a semigroup from generator vectors.

        Arguments:
            vectors (Iterable[Sequence[int]]): The generators.
            dimension (Optional[int]): The lattice rank, required when ``vectors`` is empty.

        Returns:
            WeightSemigroup: The semigroup.

        Raises:
            DomainError: Lengths disagree, an entry is not an integer, or the dimension is unknown.
        """
        gens: list[WeightVector] = []
        has_zero = False

        for vec in vectors:
            if any(isinstance(x, bool) or int(x) != x for x in vec):
                raise DomainError(f"weight {tuple(vec)} has non-integer entries")
            w = tuple(int(x) for x in vec)
            if dimension is None:
                dimension = len(w)
            if len(w) != dimension or not w:
                raise DomainError(f"weight {w} does not have length {dimension}")
            if not any(w):
                has_zero = True
            elif w not in gens:
                gens.append(w)

        if dimension is None or dimension < 1:
            raise DomainError("cannot infer the lattice dimension of an empty generator list")

        return cls(tuple(gens), dimension, has_zero)


@dataclass(frozen=True)
class LatticeBasis:
    """
    A basis of a sublattice of ``Zⁿ`` in column Hermite normal form, so equal
    lattices have byte-identical bases.
    """

    vectors: tuple[WeightVector, ...]
    dimension: int

    @property
    def rank(self) -> int:
        return len(self.vectors)

    @classmethod
    def spanned_by(cls, vectors: Sequence[Sequence[int]], dimension: int) -> "LatticeBasis":
        """
        Returns the canonical basis of the lattice generated by ``vectors``.

        Arguments:
            vectors (Sequence[Sequence[int]]): Generators of the lattice.
            dimension (int): The ambient rank.

        Returns:
            LatticeBasis: The Hermite-reduced basis.
        """
        nonzero = [tuple(int(x) for x in v) for v in vectors if any(v)]
        if not nonzero:
            return cls((), dimension)

        mat = Matrix(dimension, len(nonzero), lambda i, j: nonzero[j][i])
        hnf = hermite_normal_form(mat)
        basis = (
            tuple(int(hnf[i, j]) for i in range(hnf.rows)) for j in range(hnf.cols)
        )

        return cls(tuple(b for b in basis if any(b)), dimension)

    def contains(self, vector: Sequence[int]) -> bool:
        """
        Returns whether an integer vector lies in the lattice.

        Arguments:
            vector (Sequence[int]): The vector.

        Returns:
            bool: Whether ``vector`` is an integer combination of the basis.
        """
        if not any(vector):
            return True
        if not self.vectors:
            return False

        basis = Matrix(self.dimension, self.rank, lambda i, j: self.vectors[j][i])
        try:
            coeffs, _ = basis.gauss_jordan_solve(Matrix(list(vector)))
        except ValueError:
            return False

        return all(c.is_integer for c in coeffs)


@dataclass(frozen=True)
class PointednessCertificate:
    """
    Outcome of :func:`cone_is_pointed`.

    When pointed, ``functional`` pairs to at least one with every generator;
    otherwise ``zero_combination`` is a nonnegative combination of the
    generators with coefficient sum one that adds up to zero.
    """

    pointed: bool
    functional: Optional[RationalVector] = None
    zero_combination: Optional[RationalVector] = None
    trivial: bool = False
    stripped_zero: bool = False

    def validates(self, gens: WeightSemigroup) -> bool:
        """
        Re-checks the carried certificate in exact arithmetic.

        Arguments:
            gens (WeightSemigroup): The semigroup the certificate was issued for.

        Returns:
            bool: Whether the certificate proves the verdict.
        """
        if self.trivial:
            return self.pointed and not gens.generators
        if self.pointed and self.functional is not None:
            return all(_pair(g, self.functional) >= 1 for g in gens.generators)
        if not self.pointed and self.zero_combination is not None:
            y = self.zero_combination
            return (
                all(c >= 0 for c in y)
                and sum(y) == 1
                and all(
                    sum(c * g[k] for c, g in zip(y, gens.generators)) == 0
                    for k in range(gens.dimension)
                )
            )
        return False


def _pair(w: Sequence[int], xi: Sequence[Fraction]) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(w, xi)), Fraction(0))


def zero_combination(gens: WeightSemigroup) -> Optional[RationalVector]:
    """
    Finds ``y >= 0`` with ``Σ yᵢ = 1`` and ``Σ yᵢ gᵢ = 0`` over the nonzero generators.

    Arguments:
        gens (WeightSemigroup): The semigroup.

    Returns:
        Optional[RationalVector]: The coefficients, or ``None`` when the cone is pointed.
    """
    return nonnegative_combination(
        gens.generators, [0] * gens.dimension, normalized=True
    )


def strict_positive_functional(gens: WeightSemigroup) -> Optional[RationalVector]:
    """
    Returns ``ξ`` with ``⟨g, ξ⟩ >= 1`` for every listed generator, or ``None``.

    A recorded zero generator can never pair to one, so it makes the answer ``None``.
    Among the solutions, one of least L1 norm is returned.

    Arguments:
        gens (WeightSemigroup): The generators on the support of a point.

    Returns:
        Optional[RationalVector]: The functional, if one exists.
    """
    if gens.has_zero:
        return None

    return minimize_l1(gens.generators, [], gens.dimension)


def cone_is_pointed(gens: WeightSemigroup) -> PointednessCertificate:
    """
    Decides whether the cone spanned by the nonzero generators contains no line.

    Zero generators are stripped and reported; an empty list after stripping is
    the trivial semigroup and counts as pointed.

    Arguments:
        gens (WeightSemigroup): The semigroup.

    Returns:
        PointednessCertificate: The verdict with its exact certificate.
    """
    if not gens.generators:
        return PointednessCertificate(True, trivial=True, stripped_zero=gens.has_zero)

    functional = minimize_l1(gens.generators, [], gens.dimension)
    if functional is not None:
        return PointednessCertificate(True, functional, stripped_zero=gens.has_zero)

    combination = zero_combination(gens)
    if combination is None:
        raise OrbitHullError(f"neither pointedness certificate exists for {gens}")

    return PointednessCertificate(
        False, zero_combination=combination, stripped_zero=gens.has_zero
    )


def is_antisymmetric_semigroup(gens: WeightSemigroup) -> bool:
    """
    Returns whether the generated semigroup meets its negative only in zero.

    Arguments:
        gens (WeightSemigroup): The semigroup.

    Returns:
        bool: Whether ``S ∩ (-S) = {0}``.
    """
    return cone_is_pointed(gens).pointed


def lineality_generators(gens: WeightSemigroup) -> tuple[WeightVector, ...]:
    """
    Returns the generators ``g`` whose negative lies in the rational cone of all generators.

    Arguments:
        gens (WeightSemigroup): The semigroup.

    Returns:
        tuple[WeightVector, ...]: The generators spanning the lineality space, in input order.
    """
    return tuple(
        g
        for g in gens.generators
        if nonnegative_combination(gens.generators, [-x for x in g]) is not None
    )


def lineality_lattice(gens: WeightSemigroup) -> LatticeBasis:
    """
    Returns a basis of the lattice generated by the lineality generators.

    Its rank is zero exactly when the semigroup is antisymmetric.

    Arguments:
        gens (WeightSemigroup): The semigroup.

    Returns:
        LatticeBasis: The canonical basis.
    """
    return LatticeBasis.spanned_by(lineality_generators(gens), gens.dimension)


def relint_dual_point(gens: WeightSemigroup) -> RationalVector:
    """
    Returns ``ξ`` vanishing on the lineality generators and pairing to at least
    one with every other generator.

    Arguments:
        gens (WeightSemigroup): The semigroup.

    Returns:
        RationalVector: The functional of least L1 norm with those properties.

    Raises:
        OrbitHullError: No such functional exists, which would contradict cone duality.
    """
    lineal = lineality_generators(gens)
    rest = [g for g in gens.generators if g not in lineal]
    xi = minimize_l1(rest, lineal, gens.dimension)

    if xi is None:
        raise OrbitHullError(f"no relative interior dual point for {gens}")

    return xi


def integer_kernel(weights: Sequence[Sequence[int]]) -> LatticeBasis:
    """
    Returns a basis of ``{c ∈ Zᵐ : Wᵀc = 0}`` for the ``m × n`` weight matrix ``W``.

    Column Hermite reduction of ``[I; Wᵀ]`` is a unimodular column operation,
    so the identity part of the columns whose ``Wᵀ`` part vanishes generates
    the whole integer kernel, not a finite index sublattice of it.

    Arguments:
        weights (Sequence[Sequence[int]]): The rows of ``W``, one weight per coordinate.

    Returns:
        LatticeBasis: The canonical kernel basis in ``Zᵐ``.
    """
    m = len(weights)
    if m == 0:
        return LatticeBasis((), 0)
    n = len(weights[0])

    stacked = Matrix(
        m + n,
        m,
        lambda i, j: (1 if i == j else 0) if i < m else int(weights[j][i - m]),
    )
    hnf = hermite_normal_form(stacked)

    kernel = [
        tuple(int(hnf[i, j]) for i in range(m))
        for j in range(hnf.cols)
        if all(hnf[i, j] == 0 for i in range(m, m + n))
    ]

    return LatticeBasis.spanned_by(kernel, m)


def integer_scaling(y: Sequence[Fraction]) -> tuple[int, ...]:
    """
    Scales a rational vector by the least common denominator.

    Arguments:
        y (Sequence[Fraction]): The vector.

    Returns:
        tuple[int, ...]: The primitive-denominator integer multiple.
    """
    den = lcm(*(Fraction(c).denominator for c in y)) if y else 1
    return tuple(int(Fraction(c) * den) for c in y)


def _closure(
    gens: WeightSemigroup, bound: int, cap: int
) -> Iterator[tuple[NDArray[np.int64], NDArray[np.int64], NDArray[np.bool_]]]:
    n = gens.dimension
    side = 2 * bound + 1
    size = side**n
    if size > _BOX_CAP:
        raise ResourceLimitError(f"enumeration box of {size} points exceeds {_BOX_CAP}")

    strides = side ** np.arange(n - 1, -1, -1, dtype=np.int64)
    steps = np.array(gens.generators, dtype=np.int64).reshape(-1, n)
    reached = np.zeros(size, dtype=bool)

    frontier = np.zeros((1, n), dtype=np.int64)
    idx = (frontier + bound) @ strides
    reached[idx] = True
    count = 1
    yield frontier, idx, reached

    while frontier.size:
        cand = (frontier[:, None, :] + steps[None, :, :]).reshape(-1, n)
        cand = cand[np.all(np.abs(cand) <= bound, axis=1)]
        idx, first = np.unique((cand + bound) @ strides, return_index=True)
        fresh = ~reached[idx]
        idx, frontier = idx[fresh], cand[first[fresh]]
        reached[idx] = True

        count += len(idx)
        if count > cap:
            raise ResourceLimitError(
                f"semigroup enumeration exceeded {cap} elements at bound {bound}"
            )
        yield frontier, idx, reached


def _check_bound(gens: WeightSemigroup, norm_bound: int) -> None:
    widest = max((max(abs(x) for x in g) for g in gens.generators), default=0)
    if norm_bound < widest:
        raise DomainError(f"norm bound {norm_bound} is below the generator norm {widest}")


def semigroup_enumerate(
    gens: WeightSemigroup, norm_bound: int, cap: int = ENUMERATION_CAP
) -> frozenset[WeightVector]:
    """
    Enumerates the semigroup elements of sup-norm at most ``norm_bound``.

    Breadth-first closure under adding generators, pruning anything that
    leaves the box; zero is always included.

    Arguments:
        gens (WeightSemigroup): The semigroup.
        norm_bound (int): The sup-norm bound, at least the largest generator norm.
        cap (int): The cardinality cap.

    Returns:
        frozenset[WeightVector]: The elements found.

    Raises:
        DomainError: ``norm_bound`` is below a generator norm.
        ResourceLimitError: More than ``cap`` elements were found.
    """
    _check_bound(gens, norm_bound)

    reached: NDArray[np.bool_] = np.zeros(0, dtype=bool)
    for _, _, reached in _closure(gens, norm_bound, cap):
        pass

    side = 2 * norm_bound + 1
    coords = np.unravel_index(np.flatnonzero(reached), (side,) * gens.dimension)
    points = np.stack(coords, axis=1) - norm_bound

    return frozenset(tuple(int(x) for x in p) for p in points)


def find_opposite_pair(
    gens: WeightSemigroup, norm_bound: int, cap: int = ENUMERATION_CAP
) -> Optional[tuple[WeightVector, WeightVector]]:
    """
    Brute-force search for ``s ≠ 0`` with ``s`` and ``-s`` both reachable inside the box.

    Stops at the first breadth-first layer that produces a pair.

    Arguments:
        gens (WeightSemigroup): The semigroup.
        norm_bound (int): The sup-norm bound.
        cap (int): The cardinality cap.

    Returns:
        Optional[tuple[WeightVector, WeightVector]]: A pair ``(s, -s)``, or ``None``.
    """
    _check_bound(gens, norm_bound)
    size = (2 * norm_bound + 1) ** gens.dimension
    centre = (size - 1) // 2

    for frontier, idx, reached in _closure(gens, norm_bound, cap):
        # the box is symmetric, so -p has flat index size - 1 - idx(p)
        hits = np.flatnonzero(reached[size - 1 - idx] & (idx != centre))
        if hits.size:
            s = tuple(int(x) for x in frontier[hits[0]])
            return s, tuple(-x for x in s)

    return None
