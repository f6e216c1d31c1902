"""
Norm minimization along the complexified orbit ``G^C v``.

Damped Newton descent on ``‖w‖²`` over the non-compact directions ``e^{itξ}``,
``ξ ∈ 𝔤``: reaching zero is evidence that ``0`` lies in the closure of
``G^C v`` (the nilcone), a stall at positive norm is evidence of a minimal
vector. Steps only ever move along ``G^C``, so holomorphic invariants stay
constant and their drift measures the numerical error of the run.
"""

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum, unique
from fractions import Fraction
from typing import Optional

import numpy as np
import scipy.linalg
from numpy.typing import ArrayLike, NDArray

from orbithull.lib import mp
from orbithull.lib.error import DomainError
from orbithull.lib.haar import CompactMatrixGroup, ComplexArray, GroupKind
from orbithull.lib.point import OrbitPoint
from orbithull.lib.polynomial import Polynomial
from orbithull.toolbox.torus_analyze.lib import TorusAction, nilcone_member_exact

logger = logging.getLogger(__name__)


@unique
class FlowOutcome(Enum):
    ConvergedToZero = "converged_to_zero"
    Stalled = "stalled"
    IterationLimit = "iteration_limit"


@dataclass(frozen=True)
class StepRule:
    """
    Backtracking line search: start at ``initial``, multiply by ``shrink``
    until the Armijo condition with constant ``armijo`` holds. Search
    directions longer than ``max_length`` are scaled down to it.
    """

    armijo: float = 1e-4
    shrink: float = 0.5
    initial: float = 1.0
    min_step: float = 1e-16
    max_length: float = 16.0


@dataclass(frozen=True)
class FlowState:
    w: ComplexArray = field(repr=False)
    iteration: int
    norm_sq: float
    gradient_norm: float


@dataclass(frozen=True)
class FlowReport:
    """
    Outcome of :func:`flow_minimize`.

    ``norm_history`` holds ``‖w‖²`` after every accepted step, starting with
    ``‖v‖²``. ``certificate`` is an exact destabilizing direction when the
    group is a torus and one exists.
    """

    outcome: FlowOutcome
    initial_norm_sq: float
    final: FlowState
    norm_history: tuple[float, ...]
    invariant_residuals: dict[str, float]
    diagnostic: Optional[str] = None
    certificate: Optional[tuple[Fraction, ...]] = None

    @property
    def converged_to_zero(self) -> bool:
        return self.outcome is FlowOutcome.ConvergedToZero

    @property
    def stalled(self) -> bool:
        return self.outcome is FlowOutcome.Stalled

    @property
    def iterations(self) -> int:
        return self.final.iteration

    @property
    def final_norm_sq(self) -> float:
        return self.final.norm_sq


def _norm_sq(w: ComplexArray) -> float:
    return float(np.vdot(w, w).real)


def moment_gradient(group: CompactMatrixGroup, w: ArrayLike) -> NDArray[np.float64]:
    """
    Returns ``d/dt|₀ ‖e^{itX} w‖² = 2 Re(i ⟨X w, w⟩)`` for each Lie algebra basis element ``X``.

    Arguments:
        group (CompactMatrixGroup): The group.
        w (ArrayLike): The point.

    Returns:
        NDArray[np.float64]: One component per basis element.

    Raises:
        DomainError: ``w`` does not match the representation dimension.
    """
    vec = np.asarray(w, dtype=np.complex128).reshape(-1)
    if vec.shape[0] != group.dimension:
        raise DomainError(
            f"vector of length {vec.shape[0]} does not match representation dimension {group.dimension}"
        )

    return np.array([2 * (1j * np.vdot(vec, x @ vec)).real for x in group.represented_basis()])


def _hermitian_direction(
    basis: Sequence[ComplexArray], xi: NDArray[np.float64]
) -> tuple[NDArray[np.float64], ComplexArray]:
    # i Ξ is Hermitian for skew-Hermitian Ξ
    h = 1j * sum((c * x for c, x in zip(xi, basis)), np.zeros_like(basis[0]))
    vals, vecs = np.linalg.eigh(h)

    return vals, vecs


def _newton_direction(
    basis: Sequence[ComplexArray], w: ComplexArray, grad: NDArray[np.float64], max_length: float
) -> tuple[NDArray[np.float64], float]:
    # Hessian of ξ ↦ ‖e^{iξ} w‖² at 0 is 4 Re⟨i X_a w, i X_b w⟩; the gradient lies in its range
    ys = np.stack([1j * (x @ w) for x in basis], axis=1)
    hess = 4 * (ys.conj().T @ ys).real
    direction = scipy.linalg.lstsq(hess, -grad, lapack_driver="gelsd")[0]
    slope = float(grad @ direction)
    if not np.all(np.isfinite(direction)) or slope >= 0:
        direction = -grad
        slope = -float(grad @ grad)

    length = float(np.linalg.norm(direction))
    if length > max_length:
        direction, slope = direction * (max_length / length), slope * (max_length / length)

    return direction, slope


def flow_minimize(
    group: CompactMatrixGroup,
    v: ArrayLike,
    max_iter: int = 10_000,
    zero_tol: float = 1e-6,
    grad_tol: float = 1e-8,
    invariants: Optional[Mapping[str, Polynomial]] = None,
    step_rule: StepRule = StepRule(),
) -> FlowReport:
    """
    Runs damped Newton descent ``w ← exp(i t ξ) w``.

    ``ξ`` solves ``H ξ = -∇`` in the least squares sense, with ``H`` the Hessian
    of the norm along the chart ``ξ ↦ e^{iξ} w``; it falls back to ``-∇`` when
    that is not a descent direction. Convergence towards a limit at infinity is
    linear instead of sublinear, so semistable points stall well within the
    iteration limit.

    Arguments:
        group (CompactMatrixGroup): The group.
        v (ArrayLike): The starting point.
        max_iter (int): The iteration budget.
        zero_tol (float): ``‖w‖²`` at or below this counts as reaching zero.
        grad_tol (float): A gradient norm at or below this counts as a stall.
        invariants (Optional[Mapping[str, Polynomial]]): Invariants to monitor.
        step_rule (StepRule): The line search parameters.

    Returns:
        FlowReport: The outcome; exactly one of converged, stalled or out of iterations.

    Raises:
        DomainError: ``max_iter < 1`` or a dimension mismatch.
    """
    if max_iter < 1:
        raise DomainError("max_iter must be >= 1")

    start = np.asarray(v, dtype=np.complex128).reshape(-1)
    if start.shape[0] != group.dimension:
        raise DomainError(
            f"vector of length {start.shape[0]} does not match representation dimension {group.dimension}"
        )
    w = start.copy()
    basis = group.represented_basis()
    named = dict(invariants or {})
    start_values = {k: complex(p.evaluate(w)) for k, p in named.items()}
    residuals = {k: 0.0 for k in named}

    norm_sq = _norm_sq(w)
    history = [norm_sq]
    outcome, diagnostic = FlowOutcome.IterationLimit, None
    grad_norm = float(np.linalg.norm(moment_gradient(group, w)))
    iteration = 0

    while True:
        if norm_sq <= zero_tol:
            outcome = FlowOutcome.ConvergedToZero
            break
        grad = moment_gradient(group, w)
        grad_norm = float(np.linalg.norm(grad))
        if grad_norm <= grad_tol:
            outcome = FlowOutcome.Stalled
            break
        if iteration >= max_iter:
            break

        direction, slope = _newton_direction(basis, w, grad, step_rule.max_length)
        vals, vecs = _hermitian_direction(basis, direction)
        coords = vecs.conj().T @ w
        t = step_rule.initial
        while True:
            trial = vecs @ (np.exp(t * vals) * coords)
            trial_sq = _norm_sq(trial)
            if trial_sq <= norm_sq + step_rule.armijo * t * slope:
                break
            t *= step_rule.shrink
            if t < step_rule.min_step:
                break
        if t < step_rule.min_step:
            outcome = FlowOutcome.Stalled
            diagnostic = f"step underflow at iteration {iteration} with gradient norm {grad_norm:.3g}"
            break

        w, iteration = trial, iteration + 1
        norm_sq = _norm_sq(w)
        history.append(norm_sq)
        for k, p in named.items():
            residuals[k] = max(residuals[k], abs(complex(p.evaluate(w)) - start_values[k]))

    certificate = None
    if group.kind is GroupKind.Torus and np.any(start):
        verdict = nilcone_member_exact(TorusAction(group.weights), OrbitPoint.of(start))
        certificate = verdict.xi

    logger.info("flow %s after %d iterations, norm^2 %.3g", outcome.value, iteration, norm_sq)

    return FlowReport(
        outcome=outcome,
        initial_norm_sq=history[0],
        final=FlowState(w, iteration, norm_sq, grad_norm),
        norm_history=tuple(history),
        invariant_residuals=residuals,
        diagnostic=diagnostic,
        certificate=certificate,
    )


def flow_many(
    group: CompactMatrixGroup, starts: Sequence[ArrayLike], **kwargs: object
) -> list[FlowReport]:
    """
    Runs independent trajectories concurrently, results in input order.
    """
    return mp.starmap(
        lambda v: flow_minimize(group, v, **kwargs),  # type: ignore[arg-type]
        [(v,) for v in starts],
    )


def witness_invariants(group: CompactMatrixGroup, v: ArrayLike) -> dict[str, Polynomial]:
    """
    The invariant monomial ``z^c`` proving ``v`` outside the nilcone of a torus action.

    Empty for other groups, for the zero vector, and for nilcone members,
    where every invariant monomial vanishes at ``v``.
    """
    start = np.asarray(v, dtype=np.complex128).reshape(-1)
    if group.kind is not GroupKind.Torus or not np.any(start):
        return {}
    verdict = nilcone_member_exact(TorusAction(group.weights), OrbitPoint.of(start))
    if verdict.witness is None:
        return {}

    name = "z^(" + ",".join(str(c) for c in verdict.witness) + ")"
    return {name: Polynomial.monomial(verdict.witness)}
