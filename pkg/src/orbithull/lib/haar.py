"""
Compact matrix groups, Haar sampling and the matrix calculus the estimators need.

Built-in kinds are sampled exactly from Haar measure by QR decomposition of a
Gaussian matrix with the phase (or sign) of ``R``'s diagonal pushed into ``Q``.
Custom groups, given by a basis of skew-Hermitian matrices, are sampled by
random words of one-parameter subgroups, which is only approximately Haar.

Samples come from counter-based streams: a ``SamplerState(seed, counter)``
always yields the same numbers, so sharded estimation is reproducible no
matter how the shards are scheduled.

Examples:
    .. code-block:: python

        group = CompactMatrixGroup.unitary(2)
        g = haar_sample(group, SamplerState(seed=7))
        w = act(group, g, np.array([1, 0], dtype=complex))
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum, unique
from typing import Optional

import numpy as np
import scipy.linalg
from numpy.typing import ArrayLike, NDArray

from orbithull.lib.error import DomainError, ValidationError
from orbithull.lib.lattice import WeightVector

logger = logging.getLogger(__name__)

ComplexArray = NDArray[np.complex128]

SKEW_TOLERANCE: float = 1e-12
U64_MAX: int = 2**64 - 1


@unique
class GroupKind(Enum):
    Torus = "torus"
    Unitary = "unitary"
    SpecialUnitary = "special_unitary"
    SpecialOrthogonal = "special_orthogonal"
    Custom = "custom"


@unique
class Representation(Enum):
    """
    How group elements act on the ambient vector space.

    ``Defining`` multiplies vectors by the group matrices themselves, which
    also covers user representations: a custom group whose basis is already
    written in the representation. ``Adjoint`` conjugates ``n × n`` matrices
    flattened row-major to vectors of length ``n²``.
    """

    Defining = "defining"
    Adjoint = "adjoint"


@dataclass(frozen=True)
class SamplerState:
    """
    A point in a counter-based random stream.

    Distinct counters give independent streams of the same seed.
    """

    seed: int = 0
    counter: int = 0

    def __post_init__(self) -> None:
        for name, value in (("seed", self.seed), ("counter", self.counter)):
            if not 0 <= value <= U64_MAX:
                raise ValidationError(f"{name} {value} is not an unsigned 64-bit integer")

    def advance(self, k: int) -> "SamplerState":
        return SamplerState(self.seed, (self.counter + k) & U64_MAX)

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(key=self.seed).jumped(self.counter))


@dataclass(frozen=True, eq=False)
class CompactMatrixGroup:
    """
    A compact matrix group together with its action on ``Cᵈ``.

    Use the constructors rather than building instances directly.

    Arguments:
        kind (GroupKind): The group family.
        n (int): The matrix size of the defining representation.
        representation (Representation): The action on the ambient space.
        weights (tuple[WeightVector, ...]): Torus only; one weight per coordinate.
        basis (tuple[ComplexArray, ...]): Custom only; skew-Hermitian Lie algebra basis.
        word_length (int): Custom only; factors per approximate Haar sample.
    """

    kind: GroupKind
    n: int
    representation: Representation = Representation.Defining
    weights: tuple[WeightVector, ...] = ()
    basis: tuple[ComplexArray, ...] = field(default=(), repr=False)
    word_length: int = 20

    @classmethod
    def torus(cls, weights: Sequence[Sequence[int]]) -> "CompactMatrixGroup":
        """
        The torus ``Tʳ`` acting diagonally on ``Cᵐ`` by the given weights.

        Raises:
            ValidationError: No weights, or weights of different lengths.
        """
        rows = tuple(tuple(int(x) for x in w) for w in weights)
        if not rows or not rows[0]:
            raise ValidationError("a torus action needs at least one nonempty weight")
        if any(len(w) != len(rows[0]) for w in rows):
            raise ValidationError("torus weights must all have the same length")

        return cls(GroupKind.Torus, len(rows), weights=rows)

    @classmethod
    def unitary(
        cls, n: int, representation: Representation = Representation.Defining
    ) -> "CompactMatrixGroup":
        return cls(GroupKind.Unitary, _checked_size(n), representation)

    @classmethod
    def special_unitary(
        cls, n: int, representation: Representation = Representation.Defining
    ) -> "CompactMatrixGroup":
        return cls(GroupKind.SpecialUnitary, _checked_size(n), representation)

    @classmethod
    def special_orthogonal(
        cls, n: int, representation: Representation = Representation.Defining
    ) -> "CompactMatrixGroup":
        return cls(GroupKind.SpecialOrthogonal, _checked_size(n), representation)

    @classmethod
    def custom(
        cls,
        basis: Sequence[ArrayLike],
        word_length: int = 20,
        representation: Representation = Representation.Defining,
    ) -> "CompactMatrixGroup":
        """
        The connected group generated by ``exp`` of the span of ``basis``.

        Raises:
            ValidationError: The basis is empty, not square, of mixed sizes, or not skew-Hermitian.
        """
        mats = tuple(np.asarray(x, dtype=np.complex128) for x in basis)
        if not mats:
            raise ValidationError("a custom group needs a nonempty Lie algebra basis")
        n = mats[0].shape[0]
        for k, x in enumerate(mats):
            if x.shape != (n, n):
                raise ValidationError(f"basis matrix {k} has shape {x.shape}, expected {(n, n)}")
            if np.max(np.abs(x + x.conj().T)) > SKEW_TOLERANCE:
                raise ValidationError(f"basis matrix {k} is not skew-Hermitian")
        if word_length < 1:
            raise ValidationError("word_length must be >= 1")

        return cls(GroupKind.Custom, n, representation, basis=mats, word_length=word_length)

    def __post_init__(self) -> None:
        if self.kind is GroupKind.Torus and self.representation is Representation.Adjoint:
            raise ValidationError("the adjoint action of a torus is trivial; use weights instead")

    @property
    def rank(self) -> int:
        """
        Dimension of the Lie algebra basis.
        """
        return len(self.lie_basis())

    @property
    def dimension(self) -> int:
        """
        Dimension of the space the group acts on.
        """
        return self.n * self.n if self.representation is Representation.Adjoint else self.n

    @property
    def approximate_haar(self) -> bool:
        return self.kind is GroupKind.Custom

    def weight_matrix(self) -> NDArray[np.int64]:
        return np.array(self.weights, dtype=np.int64)

    def lie_basis(self) -> tuple[ComplexArray, ...]:
        """
        Returns a basis of the Lie algebra as skew-Hermitian ``n × n`` matrices.
        """
        n = self.n
        if self.kind is GroupKind.Torus:
            w = self.weight_matrix()
            return tuple(np.diag(1j * w[:, k]).astype(np.complex128) for k in range(w.shape[1]))
        if self.kind is GroupKind.Custom:
            return self.basis

        def unit(j: int, k: int) -> ComplexArray:
            e = np.zeros((n, n), dtype=np.complex128)
            e[j, k] = 1
            return e

        rotations = [unit(j, k) - unit(k, j) for j in range(n) for k in range(j + 1, n)]
        if self.kind is GroupKind.SpecialOrthogonal:
            return tuple(rotations)

        symmetric = [1j * (unit(j, k) + unit(k, j)) for j in range(n) for k in range(j + 1, n)]
        if self.kind is GroupKind.Unitary:
            diagonal = [1j * unit(j, j) for j in range(n)]
        else:
            diagonal = [1j * (unit(j, j) - unit(j + 1, j + 1)) for j in range(n - 1)]

        return (*diagonal, *rotations, *symmetric)

    def represented_basis(self) -> tuple[ComplexArray, ...]:
        """
        Returns the Lie algebra basis as operators on the ambient space.

        The adjoint action on row-major flattened matrices is ``X ⊗ I - I ⊗ Xᵀ``.
        """
        basis = self.lie_basis()
        if self.representation is Representation.Defining:
            return basis

        eye = np.eye(self.n, dtype=np.complex128)
        return tuple(np.kron(x, eye) - np.kron(eye, x.T) for x in basis)


def _checked_size(n: int) -> int:
    if n < 1:
        raise ValidationError(f"matrix size {n} must be >= 1")

    return n


def _ginibre(rng: np.random.Generator, k: int, n: int) -> ComplexArray:
    re = rng.standard_normal((k, n, n))
    im = rng.standard_normal((k, n, n))

    return (re + 1j * im) / np.sqrt(2)


def _haar_unitary(rng: np.random.Generator, k: int, n: int) -> ComplexArray:
    q, r = np.linalg.qr(_ginibre(rng, k, n))
    d = np.diagonal(r, axis1=-2, axis2=-1)

    return q * (d / np.abs(d))[:, None, :]


def _haar_orthogonal(rng: np.random.Generator, k: int, n: int) -> NDArray[np.float64]:
    q, r = np.linalg.qr(rng.standard_normal((k, n, n)))
    q = q * np.sign(np.diagonal(r, axis1=-2, axis2=-1))[:, None, :]
    # right multiplication by diag(-1, 1, ..., 1) maps O(n) \ SO(n) onto SO(n)
    q[np.linalg.det(q) < 0, :, 0] *= -1

    return q


def _random_word(group: CompactMatrixGroup, rng: np.random.Generator) -> ComplexArray:
    basis = group.lie_basis()
    order: list[int] = []
    while len(order) < group.word_length:
        order.extend(int(i) for i in rng.permutation(len(basis)))

    g = np.eye(group.n, dtype=np.complex128)
    for i in order[: group.word_length]:
        g = exp_skew(basis[i], rng.uniform(0, 2 * np.pi)) @ g

    return g


def torus_element(group: CompactMatrixGroup, angles: ArrayLike) -> ComplexArray:
    """
    Returns the diagonal matrix of the torus element with the given angles.

    Arguments:
        group (CompactMatrixGroup): A torus.
        angles (ArrayLike): Angles of shape ``(r,)`` or ``(k, r)``.

    Returns:
        ComplexArray: ``diag(exp(i W θ))`` of shape ``(m, m)`` or ``(k, m, m)``.
    """
    phases = np.exp(1j * (np.asarray(angles, dtype=np.float64) @ group.weight_matrix().T))

    return phases[..., :, None] * np.eye(group.n)


def haar_batch(group: CompactMatrixGroup, size: int, rng: np.random.Generator) -> ComplexArray:
    """
    Draws ``size`` Haar distributed elements of the group.

    Arguments:
        group (CompactMatrixGroup): The group.
        size (int): The number of samples.
        rng (np.random.Generator): The source of randomness.

    Returns:
        ComplexArray: The elements, shape ``(size, n, n)``.
    """
    n = group.n
    if group.kind is GroupKind.Torus:
        angles = rng.uniform(0, 2 * np.pi, (size, group.weight_matrix().shape[1]))
        return torus_element(group, angles)
    if group.kind is GroupKind.Unitary:
        return _haar_unitary(rng, size, n)
    if group.kind is GroupKind.SpecialUnitary:
        u = _haar_unitary(rng, size, n)
        return u / (np.linalg.det(u) ** (1 / n))[:, None, None]
    if group.kind is GroupKind.SpecialOrthogonal:
        return _haar_orthogonal(rng, size, n).astype(np.complex128)

    return np.stack([_random_word(group, rng) for _ in range(size)])


def haar_sample(group: CompactMatrixGroup, state: SamplerState) -> ComplexArray:
    """
    Draws the Haar distributed element determined by ``state``.

    Arguments:
        group (CompactMatrixGroup): The group.
        state (SamplerState): The stream position.

    Returns:
        ComplexArray: The element, an ``n × n`` matrix.
    """
    return haar_batch(group, 1, state.generator())[0]


def _checked_vector(group: CompactMatrixGroup, v: ArrayLike) -> ComplexArray:
    vec = np.asarray(v, dtype=np.complex128).reshape(-1)
    if vec.shape[0] != group.dimension:
        raise DomainError(
            f"vector of length {vec.shape[0]} does not match representation dimension {group.dimension}"
        )

    return vec


def act(group: CompactMatrixGroup, element: ArrayLike, v: ArrayLike) -> ComplexArray:
    """
    Applies a group element to a vector through the configured representation.

    Raises:
        DomainError: The vector length differs from the representation dimension.
    """
    return act_batch(group, np.asarray(element)[None], v)[0]


def act_batch(group: CompactMatrixGroup, elements: ArrayLike, v: ArrayLike) -> ComplexArray:
    """
    Applies each of ``k`` group elements to one vector.

    Arguments:
        group (CompactMatrixGroup): The group.
        elements (ArrayLike): The elements, shape ``(k, n, n)``.
        v (ArrayLike): The vector, length ``group.dimension``.

    Returns:
        ComplexArray: The images, shape ``(k, group.dimension)``.

    Raises:
        DomainError: The vector length differs from the representation dimension.
    """
    g = np.asarray(elements, dtype=np.complex128)
    vec = _checked_vector(group, v)

    if group.representation is Representation.Defining:
        return np.einsum("kij,j->ki", g, vec)

    mat = vec.reshape(group.n, group.n)
    conj = g @ mat @ np.conj(np.swapaxes(g, -1, -2))

    return conj.reshape(g.shape[0], -1)


def exp_skew(x: ArrayLike, t: float = 1.0) -> NDArray[np.complexfloating]:
    """
    Returns ``exp(t X)``.

    Skew-Hermitian and Hermitian inputs go through a unitary eigendecomposition,
    anything else through scaling and squaring with a Padé approximant.

    Arguments:
        x (ArrayLike): A square matrix.
        t (float): The scale.

    Returns:
        NDArray[np.complexfloating]: The exponential, real when ``X`` is real.

    Raises:
        DomainError: ``X`` is not square.
    """
    mat = np.asarray(x)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DomainError(f"cannot exponentiate a matrix of shape {mat.shape}")

    a = t * mat.astype(np.complex128)
    scale = max(1.0, float(np.max(np.abs(a), initial=0.0)))
    out: Optional[ComplexArray] = None

    if np.max(np.abs(a + a.conj().T), initial=0.0) <= SKEW_TOLERANCE * scale:
        vals, vecs = np.linalg.eigh(-1j * a)
        out = (vecs * np.exp(1j * vals)) @ vecs.conj().T
    elif np.max(np.abs(a - a.conj().T), initial=0.0) <= SKEW_TOLERANCE * scale:
        vals, vecs = np.linalg.eigh(a)
        out = (vecs * np.exp(vals)) @ vecs.conj().T
    else:
        out = scipy.linalg.expm(a)

    return out.real if np.isrealobj(mat) else out
