"""
Points of the ambient space ``Cᵐ``, either floating or exact Gaussian-rational.
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Union

import numpy as np
from numpy.typing import NDArray

from orbithull.lib.error import DomainError
from orbithull.lib.gaussian import ZERO, GaussianRational

Coordinate = Union[complex, GaussianRational]


@dataclass(frozen=True)
class OrbitPoint:
    """
    A vector ``v ∈ Cᵐ``. Exact points carry only ``GaussianRational`` coordinates.
    """

    coords: tuple[Coordinate, ...]

    @classmethod
    def of(cls, values: Iterable[Union[complex, float, int]]) -> "OrbitPoint":
        return cls(tuple(complex(x) for x in values))

    @classmethod
    def exact(cls, values: Iterable[GaussianRational]) -> "OrbitPoint":
        coords = tuple(values)
        if not all(isinstance(x, GaussianRational) for x in coords):
            raise DomainError("exact points need Gaussian-rational coordinates")

        return cls(coords)

    @classmethod
    def zeros(cls, m: int, exact: bool = False) -> "OrbitPoint":
        return cls((ZERO,) * m) if exact else cls((0j,) * m)

    def __len__(self) -> int:
        return len(self.coords)

    @property
    def is_exact(self) -> bool:
        return bool(self.coords) and all(isinstance(x, GaussianRational) for x in self.coords)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(j for j, x in enumerate(self.coords) if x)

    @property
    def is_zero(self) -> bool:
        return not self.support

    def with_zeros(self, indices: Iterable[int]) -> "OrbitPoint":
        """
        Returns a copy with the given coordinates set to zero.
        """
        drop = set(indices)
        zero: Coordinate = ZERO if self.is_exact else 0j

        return OrbitPoint(tuple(zero if j in drop else x for j, x in enumerate(self.coords)))

    def to_array(self) -> NDArray[np.complex128]:
        return np.array([complex(x) for x in self.coords], dtype=np.complex128)

    def monomial(self, exponent: Sequence[int]) -> Coordinate:
        """
        Evaluates ``z^c`` at this point, exactly when the point is exact.
        """
        if self.is_exact:
            out = GaussianRational.of(1)
            for x, e in zip(self.coords, exponent):
                if e:
                    out = out * x**e  # type: ignore[operator]
            return out

        val = 1 + 0j
        for x, e in zip(self.coords, exponent):
            if e:
                val *= complex(x) ** e

        return val
