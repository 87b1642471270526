"""Exact arithmetic on 2x2 integer matrices and integer points of R^3.

Points of R^3 are plain tuples ``(x0, x1, x2)``; a point is identified with
the symmetric matrix ``[[x0, x1], [x1, x2]]``. Everything here is exact:
Python ints and :class:`fractions.Fraction`, never floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Tuple

Point = Tuple[int, int, int]


@dataclass(frozen=True)
class Mat2:
    e11: int
    e12: int
    e21: int
    e22: int

    @classmethod
    def of(cls, rows) -> "Mat2":
        (a, b), (c, d) = rows
        return cls(int(a), int(b), int(c), int(d))

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(1, 0, 0, 1)

    def rows(self):
        return ((self.e11, self.e12), (self.e21, self.e22))

    def entries(self):
        return (self.e11, self.e12, self.e21, self.e22)

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return mat_mul(self, other)

    def __mul__(self, k: int) -> "Mat2":
        return Mat2(k * self.e11, k * self.e12, k * self.e21, k * self.e22)

    __rmul__ = __mul__

    def __neg__(self) -> "Mat2":
        return self * -1

    @property
    def det(self) -> int:
        return self.e11 * self.e22 - self.e12 * self.e21

    @property
    def trace(self) -> int:
        return self.e11 + self.e22

    @property
    def T(self) -> "Mat2":
        return Mat2(self.e11, self.e21, self.e12, self.e22)

    def norm(self) -> int:
        return max(abs(e) for e in self.entries())

    def content(self) -> int:
        return content(self.entries())

    def is_symmetric(self) -> bool:
        return self.e12 == self.e21

    def adjugate(self) -> "Mat2":
        return Mat2(self.e22, -self.e12, -self.e21, self.e11)

    def to_point(self) -> Point:
        if not self.is_symmetric():
            raise ValueError(f"matrix is not symmetric: {self.rows()}")
        return (self.e11, self.e12, self.e22)

    def __str__(self):
        return f"[[{self.e11}, {self.e12}], [{self.e21}, {self.e22}]]"


J = Mat2(0, 1, -1, 0)


def mat_mul(a: Mat2, b: Mat2) -> Mat2:
    return Mat2(
        a.e11 * b.e11 + a.e12 * b.e21,
        a.e11 * b.e12 + a.e12 * b.e22,
        a.e21 * b.e11 + a.e22 * b.e21,
        a.e21 * b.e12 + a.e22 * b.e22,
    )


def sym(x) -> Mat2:
    """The symmetric matrix attached to the point ``x``."""
    x0, x1, x2 = x
    return Mat2(x0, x1, x1, x2)


def point_det(x) -> int:
    x0, x1, x2 = x
    return x0 * x2 - x1 * x1


def wedge(x, y):
    return (
        x[1] * y[2] - x[2] * y[1],
        x[2] * y[0] - x[0] * y[2],
        x[0] * y[1] - x[1] * y[0],
    )


def scalar(x, y):
    return x[0] * y[0] + x[1] * y[1] + x[2] * y[2]


def det3(x, y, z):
    return scalar(x, wedge(y, z))


def norm(x):
    return max(abs(t) for t in x)


def add(x, y):
    return tuple(s + t for s, t in zip(x, y))


def sub(x, y):
    return tuple(s - t for s, t in zip(x, y))


def scale(k, x):
    return tuple(k * t for t in x)


def content(x) -> int:
    g = 0
    for t in x:
        g = gcd(g, t)
    if g == 0:
        raise ValueError("content of the zero point is undefined")
    return g


def is_primitive(x) -> bool:
    return content(x) == 1


def primitive(x):
    """``x`` divided by its content."""
    g = content(x)
    return tuple(t // g for t in x)


def canonical_sign(x):
    """Flip ``x`` so that its first non-zero coordinate is positive."""
    for t in x:
        if t:
            return tuple(x) if t > 0 else tuple(-s for s in x)
    return tuple(x)


def proj_dist(x, y) -> Fraction:
    """Projective distance ||x ^ y|| / (||x|| ||y||) as a reduced fraction."""
    nx, ny = norm(x), norm(y)
    if nx == 0 or ny == 0:
        raise ValueError("projective distance needs non-zero points")
    return Fraction(norm(wedge(x, y)), nx * ny)
