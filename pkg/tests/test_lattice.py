from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from orbithull.lib.error import DomainError, ResourceLimitError
from orbithull.lib.lattice import (
    LatticeBasis,
    WeightSemigroup,
    cone_is_pointed,
    find_opposite_pair,
    integer_kernel,
    integer_scaling,
    is_antisymmetric_semigroup,
    lineality_generators,
    lineality_lattice,
    relint_dual_point,
    semigroup_enumerate,
    strict_positive_functional,
    zero_combination,
)


def test_semigroup_of_dedupes_and_strips_zero():
    gens = WeightSemigroup.of([(1, 0), (0, 0), (1, 0), (0, 1)])

    assert gens.generators == ((1, 0), (0, 1))
    assert gens.has_zero
    assert gens.dimension == 2

    with pytest.raises(DomainError):
        WeightSemigroup.of([(1, 0), (1,)])
    with pytest.raises(DomainError):
        WeightSemigroup.of([(Fraction(1, 2),)])
    with pytest.raises(DomainError):
        WeightSemigroup.of([])


def test_pointed_examples():
    assert cone_is_pointed(WeightSemigroup.of([(1,), (2,)])).pointed
    assert cone_is_pointed(WeightSemigroup.of([(1, 1), (1, -1)])).pointed
    assert not cone_is_pointed(WeightSemigroup.of([(1,), (-1,)])).pointed
    assert not cone_is_pointed(WeightSemigroup.of([(1, 0), (-1, 0), (0, 1)])).pointed


def test_certificates_validate():
    for vectors in ([(2, -1), (-1, 2)], [(1,), (-2,)], [(1, 0), (0, 1), (-1, -1)], [(3, 1)]):
        gens = WeightSemigroup.of(vectors)
        cert = cone_is_pointed(gens)
        assert cert.validates(gens)

    cert = cone_is_pointed(WeightSemigroup.of([(2, -1), (-1, 2)]))
    assert cert.functional == (Fraction(1), Fraction(1))


def test_trivial_semigroup():
    gens = WeightSemigroup.of([(0, 0)])
    cert = cone_is_pointed(gens)

    assert cert.pointed and cert.trivial and cert.stripped_zero
    assert cert.validates(gens)
    assert is_antisymmetric_semigroup(gens)
    assert strict_positive_functional(gens) is None


def test_strict_positive_functional():
    assert strict_positive_functional(WeightSemigroup.of([(1,), (2,)])) == (Fraction(1),)
    assert strict_positive_functional(WeightSemigroup.of([(1,), (-1,)])) is None
    assert strict_positive_functional(WeightSemigroup.of([(1, 1), (1, -1)])) == (Fraction(1), Fraction(0))


def test_zero_combination():
    y = zero_combination(WeightSemigroup.of([(1,), (-1,)]))

    assert y == (Fraction(1, 2), Fraction(1, 2))
    assert zero_combination(WeightSemigroup.of([(1,), (2,)])) is None


def test_lineality():
    gens = WeightSemigroup.of([(1, 0), (-1, 0), (0, 1)])

    assert lineality_generators(gens) == ((1, 0), (-1, 0))
    basis = lineality_lattice(gens)
    assert basis.rank == 1
    assert basis.contains((5, 0))
    assert not basis.contains((0, 1))
    assert relint_dual_point(gens) == (Fraction(0), Fraction(1))

    assert lineality_lattice(WeightSemigroup.of([(1,), (2,)])).rank == 0


def test_lineality_lattice_index():
    # the lineality lattice of ±2 is 2Z, not Z
    basis = lineality_lattice(WeightSemigroup.of([(2,), (-2,)]))

    assert basis.contains((4,))
    assert not basis.contains((1,))


def test_lattice_basis_canonical():
    a = LatticeBasis.spanned_by([(2, 0), (0, 3)], 2)
    b = LatticeBasis.spanned_by([(2, 3), (2, 0), (4, 3)], 2)

    assert a == b
    assert LatticeBasis.spanned_by([(0, 0)], 2).rank == 0


def test_integer_kernel():
    basis = integer_kernel([(1,), (2,)])

    assert basis.rank == 1
    assert basis.contains((2, -1))
    assert not basis.contains((1, 0))

    # full kernel, not a finite index sublattice
    basis = integer_kernel([(2,), (2,)])
    assert basis.contains((1, -1))

    assert integer_kernel([(1, 0), (0, 1)]).rank == 0
    assert integer_kernel([(1,), (-1,), (0,)]).rank == 2


def test_integer_scaling():
    assert integer_scaling([Fraction(1, 2), Fraction(1, 3)]) == (3, 2)
    assert integer_scaling([]) == ()


def test_semigroup_enumerate():
    elements = semigroup_enumerate(WeightSemigroup.of([(1,), (2,)]), 3)

    assert elements == frozenset({(0,), (1,), (2,), (3,)})

    elements = semigroup_enumerate(WeightSemigroup.of([(2,), (-3,)]), 3)
    assert (1,) in elements and (-1,) in elements

    with pytest.raises(DomainError):
        semigroup_enumerate(WeightSemigroup.of([(5,)]), 2)
    with pytest.raises(ResourceLimitError):
        semigroup_enumerate(WeightSemigroup.of([(1, 0), (0, 1), (-1, -1)]), 10, cap=50)


def test_find_opposite_pair():
    assert find_opposite_pair(WeightSemigroup.of([(1,), (2,)]), 4) is None

    pair = find_opposite_pair(WeightSemigroup.of([(2, -1), (-4, 2)]), 4)
    assert pair is not None
    s, t = pair
    assert any(s) and t == tuple(-x for x in s)


def test_exact_agrees_with_enumeration():
    rng = np.random.default_rng(20240601)

    for _ in range(100):
        n = int(rng.integers(1, 5))
        k = int(rng.integers(1, 7))
        vectors = rng.integers(-5, 6, (k, n)).tolist()
        gens = WeightSemigroup.of(vectors, dimension=n)

        widest = max((max(abs(x) for x in g) for g in gens.generators), default=1)
        bound = max(4, n + 1) * widest
        brute = find_opposite_pair(gens, bound, cap=10**7) is None

        assert is_antisymmetric_semigroup(gens) == brute, vectors
        assert cone_is_pointed(gens).validates(gens)


def kernel_of(weights, c):
    return all(sum(x * w[k] for x, w in zip(c, weights)) == 0 for k in range(len(weights[0])))


def test_integer_kernel_of_three_planar_weights():
    weights = [(1, 1), (1, -1), (2, 0)]
    basis = integer_kernel(weights)

    assert basis.rank == 1
    assert basis.contains((1, 1, -1))
    assert all(kernel_of(weights, c) for c in basis.vectors)


@pytest.mark.parametrize("seed", range(5))
def test_integer_kernel_contains_every_small_solution(seed):
    rng = np.random.default_rng(seed)
    weights = [tuple(int(x) for x in rng.integers(-3, 4, 2)) for _ in range(4)]
    basis = integer_kernel(weights)

    assert all(kernel_of(weights, c) for c in basis.vectors)
    found = [c for c in product(range(-3, 4), repeat=4) if any(c) and kernel_of(weights, c)]
    for c in found:
        assert basis.contains(c), (weights, c)
