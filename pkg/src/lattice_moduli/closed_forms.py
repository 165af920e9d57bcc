"""Closed-form densities, distribution functions and moments.

Distances are Teichmueller distances of a uniformly chosen lattice (a
point of the modular surface, normalised area measure) to the square
lattice and to the rectangular locus; distortions are the corresponding
extremal quasiconformal dilatations K = exp(distance). The shortest-
geodesic density for rectangular tori built from random ideal
quadrilaterals is included as a standalone density.

All evaluators accept floats or numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .modular import (
    OMEGA_AREA,
    R_CORNER,
    R_EMBEDDED,
    R_RECT_MAX,
    area_ball_cap,
    area_cone_strip,
    area_outside_ball,
)
from .special import QuadratureResult, catalan_constant, dilog, integrate, lerch_special

SQRT3 = math.sqrt(3.0)
GOLDEN = 0.5 * (1.0 + math.sqrt(5.0))
QUAD_GEODESIC_MAX = math.log(3.0 + 2.0 * math.sqrt(2.0))
# upper cut-off for integrals of the square-distance density; tail mass ~ e^-40
R_MAX = 40.0
# beyond this the printed third piece overflows (cosh 4r); the exponential
# tail is then exact to double precision
_R_ASYMPTOTIC = 150.0


def _out(values, like):
    return float(values) if np.ndim(like) == 0 else values


@dataclass(frozen=True)
class MomentReport:
    mean: float
    variance: float
    quadrature_tolerance: float

    def __post_init__(self):
        if self.variance < 0:
            raise ValueError("negative variance")


@dataclass(frozen=True)
class PiecewiseDensity:
    """A density given piece by piece between ordered breakpoints.

    ``breakpoints`` includes both support endpoints (the last may be inf);
    ``pieces[k]`` evaluates the density on [breakpoints[k], breakpoints[k+1]]
    and may be called directly to get one-sided values at a breakpoint.
    """

    name: str
    breakpoints: tuple
    pieces: tuple
    cdf_closed: Optional[Callable] = None
    singular_left: bool = False
    has_moments: bool = True
    truncate_at: Optional[float] = None
    # bound on int_R^inf x^k f(x) dx, used to account for the truncation
    tail_moment_bound: Optional[Callable[[int, float], float]] = None
    variable: str = "r"

    def __post_init__(self):
        if len(self.pieces) != len(self.breakpoints) - 1:
            raise ValueError("need one piece per interval")
        if list(self.breakpoints) != sorted(self.breakpoints):
            raise ValueError("breakpoints must be ordered")

    @property
    def support(self) -> tuple[float, float]:
        return self.breakpoints[0], self.breakpoints[-1]

    @property
    def integration_upper(self) -> float:
        hi = self.breakpoints[-1]
        return self.truncate_at if math.isinf(hi) else hi

    def pdf(self, x):
        xa = np.asarray(x, dtype=float)
        flat = np.atleast_1d(xa)
        out = np.zeros_like(flat)
        bp = np.asarray(self.breakpoints, dtype=float)
        idx = np.searchsorted(bp, flat, side="right") - 1
        idx[flat == bp[-1]] = len(self.pieces) - 1
        for k, piece in enumerate(self.pieces):
            sel = idx == k
            if sel.any():
                with np.errstate(divide="ignore", invalid="ignore"):
                    out[sel] = piece(flat[sel])
        return _out(out.reshape(xa.shape), x)

    __call__ = pdf

    def cdf(self, x):
        if self.cdf_closed is not None:
            return self.cdf_closed(x)
        lo, hi = self.support
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        vals = []
        for v in xs:
            if v <= lo:
                vals.append(0.0)
            elif v >= hi:
                vals.append(1.0)
            else:
                vals.append(self._integral(lambda t: self.pdf(t), lo, v, 1e-13).value)
        res = np.clip(np.array(vals), 0.0, 1.0)
        return _out(res.reshape(np.shape(x)), x)

    def _integral(self, f, a, b, tol) -> QuadratureResult:
        inner = [p for p in self.breakpoints[1:-1] if a < p < b]
        singular = "left" if (self.singular_left and a == self.breakpoints[0]) else None
        return integrate(f, a, b, tol, points=inner, singular=singular)

    def integral(self, f: Callable[[float], float], tol: float = 1e-13) -> QuadratureResult:
        """Integrate f(x) * pdf(x) over the (possibly truncated) support."""
        lo, hi = self.breakpoints[0], self.integration_upper
        return self._integral(lambda t: f(t) * self.pdf(t), lo, hi, tol)


def moments(density: PiecewiseDensity, tol: float = 1e-13) -> MomentReport:
    """Mean and variance by adaptive quadrature.

    Raises ValueError for densities without finite moments and
    QuadratureError when the quadrature budget runs out.
    """
    if not density.has_moments:
        raise ValueError(f"{density.name} has no finite moments")
    if tol <= 0:
        raise ValueError("tol must be positive")
    first = density.integral(lambda t: t, tol)
    mean = first.value
    second = density.integral(lambda t: (t - mean) ** 2, tol)
    err = first.error_estimate + second.error_estimate
    if density.tail_moment_bound is not None and math.isinf(density.breakpoints[-1]):
        R = density.truncate_at
        err += density.tail_moment_bound(1, R) + density.tail_moment_bound(2, R)
    return MomentReport(mean, second.value, err)


# ---------------------------------------------------------------- square


def _square_piece_small(r):
    return 3.0 * np.sinh(r)


def _q(r):
    # sqrt(2 cosh 2r - 3) = sqrt(4 sinh^2 r - 1), clamped at the breakpoint
    s = np.sinh(r)
    return np.sqrt(np.maximum(4.0 * s * s - 1.0, 0.0))


def _square_piece_mid(r):
    c, q = np.cosh(r), _q(r)
    return np.sinh(r) * (3.0 - 6.0 / np.pi * np.arctan(4.0 * c * q / (7.0 - 3.0 * np.cosh(2 * r))))


def _square_piece_large(r):
    r = np.asarray(r, dtype=float)
    out = np.empty_like(r)
    far = r > _R_ASYMPTOTIC
    out[far] = tail_square(r[far])
    rn = r[~far]
    c, s, q = np.cosh(rn), np.sinh(rn), _q(rn)
    c2 = np.cosh(2 * rn)
    num = 4.0 * (1.0 - c2 - c * q)
    den = 5.0 * c2 - 2.0 * np.cosh(4 * rn) - 8.0 * s * s * c * q + 1.0
    out[~far] = 3.0 / np.pi * s * np.arctan(num / den)
    return out


def cdf_square_distance(r):
    """P(d(tau, i*) <= r): normalised area of the ball about i*."""
    r_arr = np.asarray(r, dtype=float)
    return _out(np.asarray(area_ball_cap(np.maximum(r_arr, 0.0))) / OMEGA_AREA, r)


def sf_square_distance(r):
    r_arr = np.asarray(r, dtype=float)
    return _out(np.asarray(area_outside_ball(np.maximum(r_arr, 0.0))) / OMEGA_AREA, r)


def tail_square(r):
    """Leading large-r behaviour (3/pi) e^-r of the square-distance density."""
    return _out(3.0 / np.pi * np.exp(-np.asarray(r, dtype=float)), r)


SQUARE_DISTANCE = PiecewiseDensity(
    name="square",
    breakpoints=(0.0, R_EMBEDDED, R_CORNER, math.inf),
    pieces=(_square_piece_small, _square_piece_mid, _square_piece_large),
    cdf_closed=cdf_square_distance,
    truncate_at=R_MAX,
    # int_R^inf x^k (3/pi) e^-x dx for k = 1, 2
    tail_moment_bound=lambda k, R: 3.0 / math.pi * math.exp(-R) * (
        (R + 1.0) if k == 1 else (R * R + 2.0 * R + 2.0)
    ),
)


def pdf_square_distance(r):
    return SQUARE_DISTANCE.pdf(r)


def pdf_distortion_square(K):
    """Density of K = exp(d(tau, i*)); decays like 3/(pi K^2), so no mean."""
    K_arr = np.asarray(K, dtype=float)
    out = np.zeros_like(K_arr)
    ok = K_arr >= 1.0
    out[ok] = np.asarray(pdf_square_distance(np.log(K_arr[ok]))) / K_arr[ok]
    return _out(out, K)


def cdf_distortion_square(K):
    K_arr = np.asarray(K, dtype=float)
    return _out(np.asarray(cdf_square_distance(np.log(np.maximum(K_arr, 1.0)))), K)


def prob_distortion_square_le(K: float) -> float:
    """P(K <= k) for the extremal map to the square torus."""
    if K < 1:
        raise ValueError("distortion is at least 1")
    return cdf_square_distance(math.log(K))


DISTORTION_SQUARE = PiecewiseDensity(
    name="distortion-square",
    breakpoints=(1.0, math.exp(R_EMBEDDED), math.exp(R_CORNER), math.inf),
    pieces=(pdf_distortion_square,) * 3,
    cdf_closed=cdf_distortion_square,
    has_moments=False,
    truncate_at=math.exp(R_MAX),
    variable="K",
)


# ---------------------------------------------------------------- rectangular


def _rect_piece(r):
    r = np.asarray(r, dtype=float)
    with np.errstate(divide="ignore"):
        return 6.0 / np.pi * np.cosh(r) * -np.log(2.0 * np.tanh(r))


def cdf_rect_distance(r):
    r_arr = np.asarray(r, dtype=float)
    return _out(np.asarray(area_cone_strip(np.maximum(r_arr, 0.0))) / OMEGA_AREA, r)


RECT_DISTANCE = PiecewiseDensity(
    name="rect",
    breakpoints=(0.0, R_RECT_MAX),
    pieces=(_rect_piece,),
    cdf_closed=cdf_rect_distance,
    singular_left=True,
)


def pdf_rect_distance(r):
    """(6/pi) cosh r log(coth(r)/2) up to atanh(1/2), zero beyond."""
    return RECT_DISTANCE.pdf(r)


def _distortion_rect_piece(K):
    K = np.asarray(K, dtype=float)
    k2 = K * K
    with np.errstate(divide="ignore"):
        return 3.0 / (np.pi * k2) * (k2 + 1.0) * np.log(0.5 * (k2 + 1.0) / (k2 - 1.0))


def cdf_distortion_rect(K):
    K_arr = np.asarray(K, dtype=float)
    return _out(np.asarray(cdf_rect_distance(np.log(np.maximum(K_arr, 1.0)))), K)


DISTORTION_RECT = PiecewiseDensity(
    name="distortion-rect",
    breakpoints=(1.0, SQRT3),
    pieces=(_distortion_rect_piece,),
    cdf_closed=cdf_distortion_rect,
    singular_left=True,
    variable="K",
)


def pdf_distortion_rect(K):
    return DISTORTION_RECT.pdf(K)


def expected_rect_distance_closed() -> float:
    """Mean distance to the rectangular locus via Catalan's constant and the Lerch series."""
    return (
        12.0 * catalan_constant()
        - SQRT3 * lerch_special()
        - math.pi * math.log(3.0)
        + 12.0 * math.log((SQRT3 + 1.0) / (2.0 * math.sqrt(2.0)))
    ) / math.pi


def expected_distortion_closed(li2: Callable[[float], float] = dilog) -> float:
    """Mean extremal distortion to the rectangular locus, via the dilogarithm."""
    return 3.0 / math.pi * (
        0.25 * li2(1.0 / 9.0)
        - li2(1.0 / 3.0)
        + math.pi ** 2 / 8.0
        + math.log(2.0) * (1.0 - math.log(SQRT3))
    )


# ---------------------------------------------------------------- quadrilaterals


def _geodesic_piece(ell):
    ell = np.asarray(ell, dtype=float)
    out = np.zeros_like(ell)
    pos = ell > 0
    e = ell[pos]
    h = 0.5 * e
    bracket = 4.0 * np.log(np.cosh(h)) + 2.0 * (np.cosh(e) - 1.0) * np.log(1.0 / np.tanh(h))
    out[pos] = 6.0 / np.pi ** 2 / np.sinh(e) * bracket
    return out


QUADRILATERAL_GEODESIC = PiecewiseDensity(
    name="quadrilateral",
    breakpoints=(0.0, QUAD_GEODESIC_MAX),
    pieces=(_geodesic_piece,),
    variable="ell",
)


def pdf_shortest_geodesic_quadrilateral(ell):
    """Shortest-geodesic length density for tori from random ideal quadrilaterals."""
    return QUADRILATERAL_GEODESIC.pdf(ell)


DENSITIES = {
    d.name: d
    for d in (SQUARE_DISTANCE, RECT_DISTANCE, DISTORTION_SQUARE, DISTORTION_RECT, QUADRILATERAL_GEODESIC)
}
