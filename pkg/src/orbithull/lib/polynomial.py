"""
Sparse holomorphic polynomials on ``Cᵐ``.

Only holomorphic monomials ``z^c`` exist here; there is no way to spell a
conjugated variable.

Examples:
    .. code-block:: python

        p = Polynomial.monomial((1, 1)) + Polynomial.constant(2, nvars=2)
        p.evaluate(np.array([[2j, 3]]))  # array([2.+6.j])
        list(monomials(2, 1, 2))         # [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
"""

from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass
from itertools import combinations_with_replacement
from math import comb
from typing import Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from orbithull.lib.error import DomainError

Exponent = tuple[int, ...]
Coefficient = Union[int, float, complex]


@dataclass(frozen=True)
class Polynomial:
    """
    A finite map from exponents ``c >= 0`` of length ``nvars`` to complex coefficients.
    """

    terms: tuple[tuple[Exponent, complex], ...]
    nvars: int

    @classmethod
    def of(cls, terms: Mapping[Sequence[int], Coefficient], nvars: int) -> "Polynomial":
        """
        Builds a polynomial, dropping zero coefficients.

        Raises:
            DomainError: An exponent is negative or has the wrong length.
        """
        collected: dict[Exponent, complex] = {}
        for exp, coeff in terms.items():
            c = tuple(int(x) for x in exp)
            if len(c) != nvars or any(x < 0 for x in c):
                raise DomainError(f"exponent {c} is not a nonnegative vector of length {nvars}")
            collected[c] = collected.get(c, 0j) + complex(coeff)

        return cls(tuple(sorted((c, a) for c, a in collected.items() if a != 0)), nvars)

    @classmethod
    def monomial(cls, exponent: Sequence[int], coeff: Coefficient = 1) -> "Polynomial":
        return cls.of({tuple(exponent): coeff}, len(exponent))

    @classmethod
    def constant(cls, value: Coefficient, nvars: int) -> "Polynomial":
        return cls.of({(0,) * nvars: value}, nvars)

    @property
    def degree(self) -> int:
        return max((sum(c) for c, _ in self.terms), default=0)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        merged = dict(self.terms)
        for c, a in other.terms:
            merged[c] = merged.get(c, 0j) + a

        return Polynomial.of(merged, self.nvars)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        prod: dict[Exponent, complex] = {}
        for c1, a1 in self.terms:
            for c2, a2 in other.terms:
                c = tuple(x + y for x, y in zip(c1, c2))
                prod[c] = prod.get(c, 0j) + a1 * a2

        return Polynomial.of(prod, self.nvars)

    def evaluate(self, points: ArrayLike) -> NDArray[np.complex128]:
        """
        Evaluates at each row of ``points``.

        Arguments:
            points (ArrayLike): Shape ``(k, nvars)`` or ``(nvars,)``.

        Returns:
            NDArray[np.complex128]: The values, shape ``(k,)`` (or a 0-d array).
        """
        z = np.asarray(points, dtype=np.complex128)
        flat = z.reshape(-1, self.nvars)
        if not self.terms:
            return np.zeros(flat.shape[0], dtype=np.complex128).reshape(z.shape[:-1])

        exps = np.array([c for c, _ in self.terms], dtype=np.int64)
        coeffs = np.array([a for _, a in self.terms], dtype=np.complex128)

        return (monomial_values(flat, exps) @ coeffs).reshape(z.shape[:-1])


def power_table(points: NDArray[np.complex128], degree: int) -> NDArray[np.complex128]:
    """
    Returns ``table[k, j, e] = points[k, j] ** e`` for ``0 <= e <= degree``.
    """
    table = np.ones((*points.shape, degree + 1), dtype=np.complex128)
    for e in range(1, degree + 1):
        table[..., e] = table[..., e - 1] * points

    return table


def monomial_values(
    points: NDArray[np.complex128], exponents: NDArray[np.int64]
) -> NDArray[np.complex128]:
    """
    Evaluates every monomial at every point.

    Arguments:
        points (NDArray[np.complex128]): Shape ``(k, m)``.
        exponents (NDArray[np.int64]): Shape ``(M, m)``.

    Returns:
        NDArray[np.complex128]: Shape ``(k, M)``.
    """
    if exponents.size == 0:
        return np.ones((points.shape[0], exponents.shape[0]), dtype=np.complex128)

    table = power_table(points, int(exponents.max()))
    cols = np.arange(points.shape[1])[None, :]

    return np.prod(table[:, cols, exponents], axis=2)


def count_monomials(nvars: int, low: int, high: int) -> int:
    """
    Number of exponents with ``low <= |c| <= high``.
    """
    return sum(comb(d + nvars - 1, nvars - 1) for d in range(max(low, 0), high + 1))


def monomials(nvars: int, low: int, high: int) -> Iterator[Exponent]:
    """
    Yields every exponent with ``low <= |c| <= high``, by degree and then
    in decreasing lexicographic order within a degree.
    """
    for d in range(max(low, 0), high + 1):
        for idx in combinations_with_replacement(range(nvars), d):
            c = [0] * nvars
            for j in idx:
                c[j] += 1
            yield tuple(c)


def trace_power(n: int, k: int) -> Polynomial:
    """
    Returns ``tr(Zᵏ)`` as a polynomial in the row-major entries of an ``n × n`` matrix.

    ``trace_power(2, 2)`` is ``z₀² + 2 z₁ z₂ + z₃²``.
    """
    terms: dict[Exponent, complex] = {}

    def walk(path: list[int]) -> None:
        if len(path) == k:
            c = [0] * (n * n)
            for a, b in zip(path, path[1:] + path[:1]):
                c[a * n + b] += 1
            key = tuple(c)
            terms[key] = terms.get(key, 0j) + 1
            return
        for i in range(n):
            walk(path + [i])

    walk([])

    return Polynomial.of(terms, n * n)
