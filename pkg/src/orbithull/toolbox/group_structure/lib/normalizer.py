"""
Normalizers of Lie subalgebras.

For ``𝔥 ⊆ 𝔤`` the normalizer ``𝔫 = {x ∈ 𝔤 : [x, 𝔥] ⊆ 𝔥}`` is the Lie algebra
of ``N_G(H)``. When ``𝔫 = 𝔥`` the quotient ``N/H`` is discrete, hence finite
for compact ``G``, which is the infinitesimal form of the finiteness
condition on the centralizer of the action. Components of ``N/H`` are not
seen at this level.

Matrices are compared as real vectors ``(Re X, Im X)`` since Lie algebras of
compact groups are real spans of skew-Hermitian matrices.

Examples:
    .. code-block:: python

        pair = builtin_pair("so3", "so2")
        report = normalizer_subalgebra(pair)
        assert report.condition_F_infinitesimal
"""

import logging
import re
from collections.abc import Sequence
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
import scipy.linalg
from numpy.typing import NDArray

from orbithull.lib.error import ValidationError
from orbithull.lib.haar import CompactMatrixGroup, ComplexArray

logger = logging.getLogger(__name__)

SPAN_TOLERANCE: float = 1e-10
BRACKET_TOLERANCE: float = 1e-8
RANK_THRESHOLD: float = 1e-8

_CLASSICAL = re.compile(r"^(u|su|so)(\d+)$")


def bracket(x: ComplexArray, y: ComplexArray) -> ComplexArray:
    return x @ y - y @ x


def _realify(x: ComplexArray) -> NDArray[np.float64]:
    return np.concatenate([x.real.ravel(), x.imag.ravel()])


def _span(basis: Sequence[ComplexArray], size: int) -> NDArray[np.float64]:
    """
    Returns an orthonormal basis of the real span as columns.
    """
    if not basis:
        return np.zeros((2 * size * size, 0))

    return scipy.linalg.orth(np.column_stack([_realify(x) for x in basis]))


def _distance(q: NDArray[np.float64], x: ComplexArray) -> float:
    y = _realify(x)
    return float(np.linalg.norm(y - q @ (q.T @ y)))


def _rank(basis: Sequence[ComplexArray]) -> int:
    if not basis:
        return 0
    s = scipy.linalg.svdvals(np.column_stack([_realify(x) for x in basis]))
    return int(np.sum(s > RANK_THRESHOLD * max(1.0, float(s[0]))))


def _closure_residual(basis: Sequence[ComplexArray], q: NDArray[np.float64]) -> float:
    return max(
        (
            _distance(q, bracket(x, y)) / max(1.0, float(np.linalg.norm(bracket(x, y))))
            for x, y in combinations(basis, 2)
        ),
        default=0.0,
    )


@dataclass(frozen=True)
class LieSubalgebraPair:
    """
    A Lie algebra ``𝔤`` with a subalgebra ``𝔥``, both given by bases of matrices.

    Build with :meth:`of`, which validates and records the bracket closure residuals.
    """

    g_basis: tuple[ComplexArray, ...] = field(repr=False)
    h_basis: tuple[ComplexArray, ...] = field(repr=False)
    size: int
    closure_residual_g: float = 0.0
    closure_residual_h: float = 0.0

    @property
    def dim_g(self) -> int:
        return len(self.g_basis)

    @property
    def dim_h(self) -> int:
        return len(self.h_basis)

    @classmethod
    def of(cls, g_basis: Sequence[ComplexArray], h_basis: Sequence[ComplexArray]) -> "LieSubalgebraPair":
        """
        Validates a pair.

        Arguments:
            g_basis (Sequence[ComplexArray]): A basis of ``𝔤``.
            h_basis (Sequence[ComplexArray]): A basis of ``𝔥``, possibly empty.

        Returns:
            LieSubalgebraPair: The pair.

        Raises:
            ValidationError: Shapes disagree, a basis is dependent, ``𝔥 ⊄ 𝔤``,
                or a span is not closed under the bracket.
        """
        g = tuple(np.asarray(x, dtype=np.complex128) for x in g_basis)
        h = tuple(np.asarray(x, dtype=np.complex128) for x in h_basis)
        if not g:
            raise ValidationError("g_basis must not be empty")

        size = g[0].shape[0]
        for x in (*g, *h):
            if x.shape != (size, size):
                raise ValidationError(f"basis matrix of shape {x.shape} where {(size, size)} is expected")
        if _rank(g) != len(g):
            raise ValidationError("g_basis is linearly dependent")
        if _rank(h) != len(h):
            raise ValidationError("h_basis is linearly dependent")

        qg, qh = _span(g, size), _span(h, size)
        for i, x in enumerate(h):
            if _distance(qg, x) > SPAN_TOLERANCE * max(1.0, float(np.linalg.norm(x))):
                raise ValidationError(f"h_basis[{i}] is not in the span of g_basis")

        closure_g, closure_h = _closure_residual(g, qg), _closure_residual(h, qh)
        if closure_g > BRACKET_TOLERANCE:
            raise ValidationError(f"g_basis is not closed under the bracket (residual {closure_g:.2g})")
        if closure_h > BRACKET_TOLERANCE:
            raise ValidationError(f"h_basis is not closed under the bracket (residual {closure_h:.2g})")

        return cls(g, h, size, closure_g, closure_h)


@dataclass(frozen=True)
class NormalizerReport:
    """
    ``basis`` holds coefficient vectors over ``g_basis``; ``residual`` is the
    largest ``dist([x, h_j], 𝔥)`` over them.
    """

    dim_g: int
    dim_h: int
    dim_normalizer: int
    residual: float
    basis: tuple[NDArray[np.float64], ...] = field(repr=False)
    singular_values: tuple[float, ...] = ()

    @property
    def condition_F_infinitesimal(self) -> bool:
        return self.dim_normalizer == self.dim_h


def normalizer_subalgebra(pair: LieSubalgebraPair) -> NormalizerReport:
    """
    Computes the normalizer of ``𝔥`` in ``𝔤``.

    The coefficients ``a`` of ``x = Σ a_i g_i`` solve ``P [x, h_j] = 0`` for
    every ``j``, where ``P`` projects onto the complement of ``𝔥``; the kernel
    comes from singular values below ``10⁻⁸ · max(1, s_max)``.

    Arguments:
        pair (LieSubalgebraPair): The validated pair.

    Returns:
        NormalizerReport: The dimensions, a basis and the system residual.
    """
    qh = _span(pair.h_basis, pair.size)

    def outside(x: ComplexArray) -> NDArray[np.float64]:
        y = _realify(x)
        return y - qh @ (qh.T @ y)

    if pair.h_basis:
        system = np.vstack(
            [np.column_stack([outside(bracket(g, h)) for g in pair.g_basis]) for h in pair.h_basis]
        )
        _, s, vt = scipy.linalg.svd(system)
        rank = int(np.sum(s > RANK_THRESHOLD * max(1.0, float(s[0]) if s.size else 0.0)))
        kernel = vt[rank:]
        singular = tuple(float(x) for x in s)
    else:
        kernel = np.eye(pair.dim_g)
        singular = ()

    residual = 0.0
    for a in kernel:
        x = sum((c * g for c, g in zip(a, pair.g_basis)), np.zeros((pair.size, pair.size), dtype=np.complex128))
        for h in pair.h_basis:
            residual = max(residual, _distance(qh, bracket(x, h)))

    report = NormalizerReport(
        dim_g=pair.dim_g,
        dim_h=pair.dim_h,
        dim_normalizer=len(kernel),
        residual=residual,
        basis=tuple(kernel),
        singular_values=singular,
    )
    logger.info(
        "normalizer dimension %d (dim g %d, dim h %d), residual %.2g",
        report.dim_normalizer,
        report.dim_g,
        report.dim_h,
        residual,
    )

    return report


def _unit(n: int, j: int, k: int) -> ComplexArray:
    e = np.zeros((n, n), dtype=np.complex128)
    e[j, k] = 1
    return e


def builtin_algebra(name: str, rank: int = 1) -> tuple[ComplexArray, ...]:
    """
    Returns a basis of a named compact Lie algebra.

    Names are ``torus`` (diagonal, of the given rank) and ``u<n>``, ``su<n>``,
    ``so<n>``.

    Raises:
        ValidationError: The name is unknown.
    """
    if name == "torus":
        if rank < 1:
            raise ValidationError("torus rank must be >= 1")
        return tuple(1j * _unit(rank, k, k) for k in range(rank))

    match = _CLASSICAL.match(name)
    if match is None:
        raise ValidationError(f"unknown Lie algebra {name!r}")

    family, n = match.group(1), int(match.group(2))
    if family == "u":
        group = CompactMatrixGroup.unitary(n)
    elif family == "su":
        group = CompactMatrixGroup.special_unitary(n)
    else:
        group = CompactMatrixGroup.special_orthogonal(n)

    return group.lie_basis()


def builtin_subalgebra(algebra: str, name: str, rank: int = 1) -> tuple[ComplexArray, ...]:
    """
    Returns a basis of a named subalgebra of :func:`builtin_algebra` ``(algebra, rank)``.

    ``zero`` is trivial and ``full`` (or the algebra's own name) is all of it.
    ``so2`` is the rotations of the first coordinate plane in an ``so<n>``,
    ``u1`` the circle ``diag(e^{iφ}, e^{-iφ}, 1, ...)`` in the unitary and torus
    algebras, and ``diagonal`` a maximal torus.

    Raises:
        ValidationError: The name is unknown or does not fit the algebra.
    """
    g = builtin_algebra(algebra, rank)
    if name == "zero":
        return ()
    if name in ("full", algebra):
        return g

    n = g[0].shape[0]
    orthogonal = algebra.startswith("so")
    if name in ("so2", "u1"):
        if n < 2 or orthogonal != (name == "so2"):
            raise ValidationError(f"{name} does not embed in {algebra}")
        if orthogonal:
            return (_unit(n, 0, 1) - _unit(n, 1, 0),)
        return (1j * (_unit(n, 0, 0) - _unit(n, 1, 1)),)
    if name == "diagonal":
        if algebra == "torus" or algebra.startswith("u"):
            return tuple(1j * _unit(n, k, k) for k in range(n))
        if algebra.startswith("su"):
            return tuple(1j * (_unit(n, k, k) - _unit(n, k + 1, k + 1)) for k in range(n - 1))
        return tuple(_unit(n, 2 * a, 2 * a + 1) - _unit(n, 2 * a + 1, 2 * a) for a in range(n // 2))

    raise ValidationError(f"unknown subalgebra {name!r}")


def builtin_pair(algebra: str, subalgebra: str, rank: int = 1) -> LieSubalgebraPair:
    """
    Returns the validated pair of named algebras, for example ``("so3", "so2")``.
    """
    return LieSubalgebraPair.of(builtin_algebra(algebra, rank), builtin_subalgebra(algebra, subalgebra, rank))
