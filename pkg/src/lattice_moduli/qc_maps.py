"""Extremal quasiconformal maps between lattices.

The affine map z -> az + b conj(z) with a = (1 - i tau)/2, b = (1 + i tau)/2
sends the square lattice Z + iZ onto Z + tau Z and has the least
distortion among maps doing so; log K equals the hyperbolic distance
from i to tau.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .hyperbolic import HPoint, dist_h2_xy
from .modular import orbit_points, reduce

ORBIT_DEPTH = 8


@dataclass(frozen=True)
class AffineMap:
    a: complex
    b: complex

    def __post_init__(self):
        if not abs(self.a) > abs(self.b):
            raise ValueError("|a| must exceed |b| for an orientation-preserving homeomorphism")

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = self.a * z + self.b * np.conj(z)
        return complex(out) if out.ndim == 0 else out


def extremal_map(tau: HPoint) -> AffineMap:
    return AffineMap((1 - 1j * tau.z) / 2, (1 + 1j * tau.z) / 2)


def distortion(m: AffineMap) -> float:
    """K = (|a| + |b|) / (|a| - |b|)."""
    pa, pb = abs(m.a), abs(m.b)
    # |a|^2 - |b|^2 = Re[(a - b) conj(a + b)], free of the cancellation in |a| - |b|
    gap = ((m.a - m.b) * (m.a + m.b).conjugate()).real
    if not (pa > pb and gap > 0):
        raise ValueError("map is not invertible (|a| <= |b|)")
    return (pa + pb) ** 2 / gap


@lru_cache(maxsize=256)
def _orbit_array(x: float, y: float, depth: int):
    pts = orbit_points(HPoint(x, y), depth)
    return np.array([p.x for p in pts]), np.array([p.y for p in pts])


def quotient_distance(tau1: HPoint, tau2: HPoint, depth: int = ORBIT_DEPTH) -> float:
    """Distance between the images of tau1, tau2 on the modular surface (orbit minimum)."""
    p1 = reduce(tau1).reduced.point
    p2 = reduce(tau2).reduced.point
    ox, oy = _orbit_array(p2.x, p2.y, depth)
    return float(np.min(dist_h2_xy(p1.x, p1.y, ox, oy)))


def extremal_distortion_between(tau1: HPoint, tau2: HPoint) -> float:
    """Least distortion of a quasiconformal map between the two punctured tori."""
    return math.exp(quotient_distance(tau1, tau2))
