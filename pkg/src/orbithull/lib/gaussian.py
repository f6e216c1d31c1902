"""
Exact Gaussian-rational numbers ``a + bi`` with ``a, b ∈ Q``.

Examples:
    .. code-block:: python

        z = GaussianRational.of("1/2", 1)
        w = z * z.conjugate()   # GaussianRational(Fraction(5, 4), Fraction(0))
        complex(w)              # (1.25+0j)
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Scalar = Union[int, Fraction, str]


@dataclass(frozen=True)
class GaussianRational:
    re: Fraction
    im: Fraction = Fraction(0)

    @classmethod
    def of(cls, re: Scalar, im: Scalar = 0) -> "GaussianRational":
        """
        Builds a number from integers, fractions or strings like ``"-3/4"``.

        Raises:
            ValueError: A part is not a rational literal.
        """
        return cls(Fraction(re), Fraction(im))

    def __add__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __mul__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __pow__(self, k: int) -> "GaussianRational":
        if k < 0:
            raise ValueError("negative powers are not supported")

        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1

        return out

    def __bool__(self) -> bool:
        return bool(self.re or self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs_sq(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def to_strings(self) -> tuple[str, str]:
        return str(self.re), str(self.im)


ZERO = GaussianRational(Fraction(0))
ONE = GaussianRational(Fraction(1))
