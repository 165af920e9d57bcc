"""Upper half-plane and unit disk geometry (curvature -1).

Scalar functions take :class:`HPoint` / :class:`DPoint` values. The
``*_xy`` helpers take plain floats or numpy arrays and are what the
sampler and verification code use on large batches.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class HPoint:
    """A point x + iy of the upper half-plane."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite point ({self.x}, {self.y})")
        if not self.y > 0:
            raise ValueError(f"point ({self.x}, {self.y}) is not in the upper half-plane")

    @classmethod
    def from_complex(cls, z: complex) -> "HPoint":
        return cls(float(z.real), float(z.imag))

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    @property
    def arg(self) -> float:
        """Argument in (0, pi)."""
        return math.atan2(self.y, self.x)

    def __abs__(self) -> float:
        return math.hypot(self.x, self.y)


I = HPoint(0.0, 1.0)


@dataclass(frozen=True)
class DPoint:
    """A point u + iv of the open unit disk."""

    u: float
    v: float

    def __post_init__(self):
        if not math.hypot(self.u, self.v) < 1.0:
            raise ValueError(f"point ({self.u}, {self.v}) is not in the unit disk")

    @property
    def z(self) -> complex:
        return complex(self.u, self.v)

    def __abs__(self) -> float:
        return math.hypot(self.u, self.v)


@dataclass(frozen=True)
class EuclideanDisk:
    center: complex
    radius: float

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")

    def boundary(self, theta):
        return self.center + self.radius * np.exp(1j * np.asarray(theta))

    def contains(self, z, tol: float = 0.0):
        return np.abs(np.asarray(z) - self.center) <= self.radius + tol


class DegenerateImage(ZeroDivisionError):
    """A Moebius map sent a finite point to infinity."""


@dataclass(frozen=True)
class MoebiusMap:
    """z -> (az + b) / (cz + d), stored with determinant 1.

    Construct through :meth:`normalized` to rescale an arbitrary
    nonsingular matrix; the +/- sign ambiguity is left alone since the
    action is projective.
    """

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        if not all(cmath.isfinite(complex(e)) for e in (self.a, self.b, self.c, self.d)):
            raise ValueError("non-finite matrix entry")
        if abs(self.det - 1) > 1e-12 * max(1.0, abs(self.a * self.d), abs(self.b * self.c)):
            raise ValueError(f"determinant {self.det} is not 1; use MoebiusMap.normalized")

    @classmethod
    def normalized(cls, a, b, c, d) -> "MoebiusMap":
        det = a * d - b * c
        if det == 0:
            raise ValueError("singular matrix")
        if det == 1:
            return cls(a, b, c, d)
        if complex(det).imag == 0 and complex(det).real > 0:
            k = math.sqrt(complex(det).real)
        else:
            k = cmath.sqrt(det)
        return cls(a / k, b / k, c / k, d / k)

    @classmethod
    def identity(cls) -> "MoebiusMap":
        return cls(1, 0, 0, 1)

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> complex:
        return self.a + self.d

    @property
    def is_real(self) -> bool:
        return all(complex(e).imag == 0 for e in (self.a, self.b, self.c, self.d))

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        return MoebiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def __call__(self, z: complex) -> complex:
        den = self.c * z + self.d
        if den == 0:
            raise DegenerateImage(f"{z} is mapped to infinity")
        return (self.a * z + self.b) / den


def apply_moebius(m: MoebiusMap, z: HPoint) -> HPoint:
    """Action of a real Moebius map on the upper half-plane."""
    if not m.is_real:
        raise ValueError("only real matrices preserve the upper half-plane")
    den = m.c * z.z + m.d
    if den == 0:
        raise DegenerateImage(f"{z} is mapped to infinity")
    w = (m.a * z.z + m.b) / den
    # Im w = Im z / |cz + d|^2 exactly for det 1; avoids cancellation in w.imag
    return HPoint(w.real, z.y / abs(den) ** 2)


def dist_h2_xy(x1, y1, x2, y2):
    """Hyperbolic distance between x1 + i y1 and x2 + i y2 (array friendly).

    Uses d = 2 asinh(|z - w| / (2 sqrt(y_z y_w))), which is the arccosh
    formula rewritten without the loss of precision near d = 0.
    """
    chord = np.hypot(np.subtract(x1, x2), np.subtract(y1, y2))
    return 2.0 * np.arcsinh(chord / (2.0 * np.sqrt(np.multiply(y1, y2))))


def dist_h2(z: HPoint, w: HPoint) -> float:
    chord = math.hypot(z.x - w.x, z.y - w.y)
    return 2.0 * math.asinh(chord / (2.0 * math.sqrt(z.y * w.y)))


def dist_disk_from_origin(w: DPoint) -> float:
    """Hyperbolic distance from 0 to w in the unit disk."""
    rho = abs(w)
    return math.log1p(rho) - math.log1p(-rho)


def cayley(tau: HPoint) -> DPoint:
    """(1 + i tau) / (1 - i tau); sends i to 0 and H^2 onto the disk."""
    w = (1 + 1j * tau.z) / (1 - 1j * tau.z)
    return DPoint(w.real, w.imag)


def dist_to_imaginary_axis_xy(x, y):
    return np.arcsinh(np.abs(x) / y)


def dist_to_imaginary_axis(tau: HPoint) -> float:
    """Distance from tau to the geodesic iR, i.e. asinh(|cot arg tau|)."""
    return math.asinh(abs(tau.x) / tau.y)


def ball_about_i(r: float) -> EuclideanDisk:
    """The hyperbolic ball of radius r about i as a Euclidean disk."""
    if r < 0:
        raise ValueError("radius must be nonnegative")
    return EuclideanDisk(1j * math.cosh(r), math.sinh(r))


def hyperbolic_disk_area(r: float) -> float:
    if r < 0:
        raise ValueError("radius must be nonnegative")
    return 4.0 * math.pi * math.sinh(r / 2) ** 2
