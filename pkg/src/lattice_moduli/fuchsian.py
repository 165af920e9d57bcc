"""Rectangular punctured-torus groups acting on the unit disk.

For r > 0 and s = 1/r the generators

    A = (1/r) [[sqrt(r^2+1), 1], [1, sqrt(r^2+1)]]
    B = (1/s) [[sqrt(s^2+1), i], [-i, sqrt(s^2+1)]]

have hyperbolic axes along the real and imaginary diameters and a
parabolic commutator. Their isometric circles bound an ideal
quadrilateral, which is a fundamental polygon for <A, B>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hyperbolic import DegenerateImage, EuclideanDisk, MoebiusMap


@dataclass(frozen=True)
class RectangularGroup:
    r: float
    s: float
    A: MoebiusMap
    B: MoebiusMap

    @property
    def is_punctured_torus(self) -> bool:
        return abs(self.r * self.s - 1.0) <= 1e-12

    def commutator(self) -> MoebiusMap:
        return self.A @ self.B @ self.A.inverse() @ self.B.inverse()

    def commutator_trace(self) -> complex:
        return self.commutator().trace


@dataclass(frozen=True)
class IdealQuadrilateral:
    """Four side circles (ell_f, ell_f^-1, ell_g, ell_g^-1) and the ideal vertices."""

    circles: tuple[EuclideanDisk, EuclideanDisk, EuclideanDisk, EuclideanDisk]
    vertices: tuple[complex, complex, complex, complex]

    def contains(self, z, tol: float = 0.0):
        """True for points of the open disk lying outside all four side disks."""
        z = np.asarray(z)
        inside = np.abs(z) < 1 - tol
        for circ in self.circles:
            inside &= np.abs(z - circ.center) > circ.radius + tol
        return inside


def make_group(r: float, s: float | None = None) -> RectangularGroup:
    """Generators for parameters r and s (s defaults to 1/r, the punctured-torus case)."""
    if not r > 0:
        raise ValueError("r must be positive")
    if s is None:
        s = 1.0 / r
    if not s > 0:
        raise ValueError("s must be positive")
    cr, cs = math.sqrt(r * r + 1), math.sqrt(s * s + 1)
    A = MoebiusMap(complex(cr / r), complex(1 / r), complex(1 / r), complex(cr / r))
    B = MoebiusMap(complex(cs / s), 1j / s, -1j / s, complex(cs / s))
    return RectangularGroup(r, s, A, B)


def _apply(num_a, num_b, den_c, den_d, z):
    den = den_c * z + den_d
    if np.any(den == 0):
        raise DegenerateImage("point is the pole of the map")
    return (num_a * z + num_b) / den


def mobius_f(g: RectangularGroup, z):
    """f(z) = (sqrt(r^2+1) z + 1) / (z + sqrt(r^2+1)); fixes +-1."""
    c = math.sqrt(g.r * g.r + 1)
    return _apply(c, 1.0, 1.0, c, np.asarray(z, dtype=complex))


def mobius_f_inv(g: RectangularGroup, z):
    c = math.sqrt(g.r * g.r + 1)
    return _apply(c, -1.0, -1.0, c, np.asarray(z, dtype=complex))


def mobius_g(g: RectangularGroup, z):
    """g(z) = (sqrt(s^2+1) z + i) / (-i z + sqrt(s^2+1)); fixes +-i."""
    c = math.sqrt(g.s * g.s + 1)
    return _apply(c, 1j, -1j, c, np.asarray(z, dtype=complex))


def mobius_g_inv(g: RectangularGroup, z):
    c = math.sqrt(g.s * g.s + 1)
    return _apply(c, -1j, 1j, c, np.asarray(z, dtype=complex))


def isometric_circles(g: RectangularGroup) -> IdealQuadrilateral:
    if not g.is_punctured_torus:
        raise ValueError("the side circles only bound an ideal quadrilateral when rs = 1")
    cr, cs = math.sqrt(g.r ** 2 + 1), math.sqrt(g.s ** 2 + 1)
    circles = (
        EuclideanDisk(complex(-cr, 0), g.r),
        EuclideanDisk(complex(cr, 0), g.r),
        EuclideanDisk(complex(0, -cs), g.s),
        EuclideanDisk(complex(0, cs), g.s),
    )
    # each f-circle meets the unit circle at Re z = -+1/cr, and with rs = 1
    # those points are shared with the g-circles
    u, v = 1.0 / cr, g.r / cr
    vertices = (complex(u, v), complex(-u, v), complex(-u, -v), complex(u, -v))
    return IdealQuadrilateral(circles, vertices)


def word_action(g: RectangularGroup, word: str, z):
    """Apply a word in 'f', 'F' (f^-1), 'g', 'G' (g^-1), rightmost letter first."""
    maps = {"f": mobius_f, "F": mobius_f_inv, "g": mobius_g, "G": mobius_g_inv}
    out = np.asarray(z, dtype=complex)
    for letter in reversed(word):
        out = maps[letter](g, out)
    return out


@dataclass(frozen=True)
class SquareGroupReport:
    vertices: tuple[complex, ...]
    vertex_error: float
    axis_f: tuple[complex, complex]
    axis_g: tuple[complex, complex]
    axis_angle: float
    commutator_trace: complex

    @property
    def ok(self) -> bool:
        return (
            self.vertex_error < 1e-12
            and abs(self.axis_angle - math.pi / 2) < 1e-12
            and abs(self.commutator_trace + 2) < 1e-12
        )


def _fixed_points(m: MoebiusMap) -> tuple[complex, complex]:
    # cz^2 + (d - a)z - b = 0
    a, b, c, d = (complex(e) for e in (m.a, m.b, m.c, m.d))
    disc = np.sqrt((d - a) ** 2 + 4 * b * c + 0j)
    return ((a - d) - disc) / (2 * c), ((a - d) + disc) / (2 * c)


def square_group_check() -> SquareGroupReport:
    """The r = s = 1 group: ideal square with perpendicular axes meeting at 0."""
    g = make_group(1.0)
    quad = isometric_circles(g)
    expected = [complex(sx, sy) / math.sqrt(2) for sx, sy in ((1, 1), (-1, 1), (-1, -1), (1, -1))]
    err = max(min(abs(v - e) for v in quad.vertices) for e in expected)
    fa, fb = _fixed_points(g.A)
    ga, gb = _fixed_points(g.B)
    da, db = fb - fa, gb - ga
    angle = abs(math.atan2((da.conjugate() * db).imag, (da.conjugate() * db).real))
    return SquareGroupReport(quad.vertices, err, (fa, fb), (ga, gb), angle, g.commutator_trace())
