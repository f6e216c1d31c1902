"""
Exact rational linear programming.

Dense tableau simplex over ``fractions.Fraction`` with Bland's rule, so it
cannot cycle and every answer is an exact certificate: an optimal point, or a
Farkas vector proving infeasibility.

Examples:
    .. code-block:: python

        lp = RationalLP.of([[1, 1]], [1], [1, 2])  # min x + 2y s.t. x + y = 1, x, y >= 0
        res = solve(lp)                           # res.x == (1, 0)
        assert certificate_holds(lp, res)
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import Enum, unique
from fractions import Fraction
from typing import Optional, Union

Rational = Union[int, Fraction]
RationalVector = tuple[Fraction, ...]


@unique
class LPStatus(Enum):
    Optimal = "optimal"
    Infeasible = "infeasible"
    Unbounded = "unbounded"


@dataclass(frozen=True)
class RationalLP:
    """
    ``min c·x`` subject to ``A x = b`` and ``x >= 0``, all entries exact rationals.
    """

    a_eq: tuple[RationalVector, ...]
    b_eq: RationalVector
    c: RationalVector

    @classmethod
    def of(
        cls,
        a_eq: Iterable[Iterable[Rational]],
        b_eq: Iterable[Rational],
        c: Iterable[Rational],
    ) -> "RationalLP":
        """
        Builds a problem, converting every entry to ``Fraction``.

        Arguments:
            a_eq (Iterable[Iterable[Rational]]): The constraint rows.
            b_eq (Iterable[Rational]): The right hand side.
            c (Iterable[Rational]): The objective.

        Returns:
            RationalLP: The problem.

        Raises:
            ValueError: The shapes do not agree.
        """
        rows = tuple(tuple(Fraction(a) for a in row) for row in a_eq)
        rhs = tuple(Fraction(b) for b in b_eq)
        cost = tuple(Fraction(x) for x in c)

        if len(rows) != len(rhs) or any(len(row) != len(cost) for row in rows):
            raise ValueError("constraint matrix, bounds and objective disagree in shape")

        return cls(rows, rhs, cost)


@dataclass(frozen=True)
class LPResult:
    """
    Outcome of :func:`solve`.

    ``x`` and ``objective`` are set when optimal; ``farkas`` is set when
    infeasible and satisfies ``Aᵀy <= 0`` and ``b·y > 0``.
    """

    status: LPStatus
    x: Optional[RationalVector] = None
    objective: Optional[Fraction] = None
    farkas: Optional[RationalVector] = None


def _pivot(rows: list[list[Fraction]], basis: list[int], r: int, c: int) -> None:
    piv = rows[r][c]
    rows[r] = [v / piv for v in rows[r]]
    for i, row in enumerate(rows):
        f = row[c]
        if i != r and f:
            rows[i] = [a - f * b for a, b in zip(row, rows[r])]
    basis[r] = c


def _optimize(
    rows: list[list[Fraction]],
    basis: list[int],
    cost: Sequence[Fraction],
    allowed: range,
) -> LPStatus:
    while True:
        in_basis = set(basis)
        entering = None
        # Bland: lowest index with a negative reduced cost enters
        for j in allowed:
            if j in in_basis:
                continue
            reduced = cost[j] - sum(cost[b] * row[j] for b, row in zip(basis, rows))
            if reduced < 0:
                entering = j
                break

        if entering is None:
            return LPStatus.Optimal

        ratios = [
            (row[-1] / row[entering], basis[i], i)
            for i, row in enumerate(rows)
            if row[entering] > 0
        ]
        if not ratios:
            return LPStatus.Unbounded

        # ties go to the lowest basic variable index
        _, _, leaving = min(ratios)
        _pivot(rows, basis, leaving, entering)


def solve(lp: RationalLP) -> LPResult:
    """
    Solves a standard form problem with the two-phase simplex method.

    Phase one minimizes the sum of artificial variables; when that minimum is
    positive, the simplex multipliers of the final tableau are a Farkas vector.

    Arguments:
        lp (RationalLP): The problem.

    Returns:
        LPResult: An optimal vertex, an infeasibility certificate, or the unbounded verdict.
    """
    m, n = len(lp.b_eq), len(lp.c)
    zero, one = Fraction(0), Fraction(1)
    signs = [1 if b >= 0 else -1 for b in lp.b_eq]

    rows = [
        [s * a for a in row] + [one if k == i else zero for k in range(m)] + [s * b]
        for i, (row, b, s) in enumerate(zip(lp.a_eq, lp.b_eq, signs))
    ]
    basis = [n + i for i in range(m)]
    phase_one = [zero] * n + [one] * m

    _optimize(rows, basis, phase_one, range(n + m))

    infeasibility = sum((phase_one[b] * row[-1] for b, row in zip(basis, rows)), zero)
    if infeasibility > 0:
        # y_k = c_B B⁻¹ e_k, and B⁻¹ sits in the artificial columns
        duals = [
            sum((phase_one[b] * row[n + k] for b, row in zip(basis, rows)), zero)
            for k in range(m)
        ]
        return LPResult(
            LPStatus.Infeasible,
            farkas=tuple(s * y for s, y in zip(signs, duals)),
        )

    for i in range(m):
        if basis[i] < n:
            continue
        for j in range(n):
            if rows[i][j] != 0:
                _pivot(rows, basis, i, j)
                break
        # otherwise the row is redundant and its artificial stays at zero

    cost = list(lp.c) + [zero] * m
    if _optimize(rows, basis, cost, range(n)) is LPStatus.Unbounded:
        return LPResult(LPStatus.Unbounded)

    x = [zero] * n
    for b, row in zip(basis, rows):
        if b < n:
            x[b] = row[-1]

    return LPResult(
        LPStatus.Optimal,
        x=tuple(x),
        objective=sum((c * v for c, v in zip(lp.c, x)), zero),
    )


def certificate_holds(lp: RationalLP, result: LPResult) -> bool:
    """
    Re-checks a result against its problem using exact arithmetic only.

    Arguments:
        lp (RationalLP): The problem.
        result (LPResult): The claimed outcome.

    Returns:
        bool: Whether the feasible point or the Farkas vector validates.
    """
    if result.status is LPStatus.Optimal and result.x is not None:
        return all(v >= 0 for v in result.x) and all(
            sum(a * v for a, v in zip(row, result.x)) == b
            for row, b in zip(lp.a_eq, lp.b_eq)
        )

    if result.status is LPStatus.Infeasible and result.farkas is not None:
        y = result.farkas
        columns_ok = all(
            sum(row[j] * yi for row, yi in zip(lp.a_eq, y)) <= 0
            for j in range(len(lp.c))
        )
        return columns_ok and sum(b * yi for b, yi in zip(lp.b_eq, y)) > 0

    return result.status is LPStatus.Unbounded


def minimize_l1(
    geq_rows: Sequence[Sequence[Rational]],
    eq_rows: Sequence[Sequence[Rational]],
    dimension: int,
) -> Optional[RationalVector]:
    """
    Finds a free vector ``ξ`` of least L1 norm with ``⟨g, ξ⟩ >= 1`` for every
    ``g`` in ``geq_rows`` and ``⟨e, ξ⟩ = 0`` for every ``e`` in ``eq_rows``.

    ``ξ`` is split as ``ξ⁺ - ξ⁻`` and each inequality gets a surplus variable.

    Arguments:
        geq_rows (Sequence[Sequence[Rational]]): Rows that must pair to at least one.
        eq_rows (Sequence[Sequence[Rational]]): Rows that must pair to zero.
        dimension (int): The length of ``ξ``.

    Returns:
        Optional[RationalVector]: The vector, or ``None`` if the system is infeasible.
    """
    k = len(geq_rows)
    a_eq: list[list[Rational]] = []
    b_eq: list[Rational] = []

    for i, g in enumerate(geq_rows):
        surplus = [-1 if j == i else 0 for j in range(k)]
        a_eq.append([*g, *(-x for x in g), *surplus])
        b_eq.append(1)
    for e in eq_rows:
        a_eq.append([*e, *(-x for x in e), *([0] * k)])
        b_eq.append(0)

    if not a_eq:
        return tuple(Fraction(0) for _ in range(dimension))

    res = solve(RationalLP.of(a_eq, b_eq, [1] * (2 * dimension) + [0] * k))
    if res.status is not LPStatus.Optimal or res.x is None:
        return None

    return tuple(res.x[j] - res.x[dimension + j] for j in range(dimension))


def nonnegative_combination(
    vectors: Sequence[Sequence[Rational]],
    target: Sequence[Rational],
    normalized: bool = False,
) -> Optional[RationalVector]:
    """
    Finds ``y >= 0`` with ``Σ yᵢ vectorsᵢ = target``.

    Arguments:
        vectors (Sequence[Sequence[Rational]]): The vectors to combine.
        target (Sequence[Rational]): The vector to reach.
        normalized (bool): Additionally require ``Σ yᵢ = 1``.

    Returns:
        Optional[RationalVector]: The coefficients, or ``None`` if there are none.
    """
    if not vectors:
        return () if all(t == 0 for t in target) and not normalized else None

    a_eq: list[list[Rational]] = [
        [v[j] for v in vectors] for j in range(len(target))
    ]
    b_eq: list[Rational] = list(target)
    if normalized:
        a_eq.append([1] * len(vectors))
        b_eq.append(1)

    res = solve(RationalLP.of(a_eq, b_eq, [0] * len(vectors)))

    return res.x if res.status is LPStatus.Optimal else None
