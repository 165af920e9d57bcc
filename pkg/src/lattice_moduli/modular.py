"""The modular surface H^2 / PSL(2, Z).

Fundamental domain, reduction of a period ratio into it, distances on the
quotient to the square point i* and to the rectangular locus, and the
hyperbolic areas of the metric ball about i* and of the tubular
neighbourhood of the rectangular locus inside the fundamental domain.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .hyperbolic import (
    I,
    HPoint,
    MoebiusMap,
    dist_h2,
    dist_h2_xy,
    dist_to_imaginary_axis_xy,
)
from .special import integrate

OMEGA_AREA = math.pi / 3
# ball about i* stops being embedded / swallows the order-3 cone point
R_EMBEDDED = math.asinh(0.5)
R_CORNER = math.asinh(1.0 / math.sqrt(3.0))
# farthest any lattice gets from the rectangular ones (the hexagonal point)
R_RECT_MAX = math.atanh(0.5)

BOUNDARY_TOL = 1e-12
MAX_REDUCTION_STEPS = 10_000

S = MoebiusMap(0, -1, 1, 0)
T = MoebiusMap(1, 1, 0, 1)
T_INV = MoebiusMap(1, -1, 0, 1)
GENERATORS = (S, T, T_INV)


class ReductionError(RuntimeError):
    """Reduction did not terminate (input numerically on the real axis)."""


def in_fundamental_domain(x, y, tol: float = BOUNDARY_TOL):
    """Membership in Omega with the convention Re >= 0 on the unit circle."""
    x = np.asarray(x)
    y = np.asarray(y)
    r2 = x * x + y * y
    ok = (y > 0) & (r2 >= 1 - tol) & (x > -0.5) & (x <= 0.5 + tol)
    return ok & ~((r2 <= 1 + tol) & (x < -tol))


@dataclass(frozen=True)
class FundamentalPoint:
    point: HPoint

    def __post_init__(self):
        if not in_fundamental_domain(self.point.x, self.point.y):
            raise ValueError(f"{self.point} is not in the fundamental domain")

    @property
    def x(self) -> float:
        return self.point.x

    @property
    def y(self) -> float:
        return self.point.y


@dataclass(frozen=True)
class ReductionResult:
    reduced: FundamentalPoint
    word: MoebiusMap
    steps: int


def _translate_into_strip(x: float) -> int:
    k = math.ceil(x - 0.5)
    if x - k <= -0.5 + BOUNDARY_TOL:
        k -= 1
    return k


def reduce(tau: HPoint) -> ReductionResult:
    """Move tau into the fundamental domain by translations and inversions."""
    x, y = tau.x, tau.y
    a, b, c, d = 1, 0, 0, 1
    steps = 0
    for _ in range(MAX_REDUCTION_STEPS):
        k = _translate_into_strip(x)
        if k:
            x -= k
            a, b = a - k * c, b - k * d
            steps += abs(k)
        r2 = x * x + y * y
        if r2 >= 1 - BOUNDARY_TOL:
            break
        if r2 == 0.0 or not math.isfinite(y / r2):
            raise ReductionError(f"{tau} is numerically on the real axis")
        x, y = -x / r2, y / r2
        a, b, c, d = -c, -d, a, b
        steps += 1
    else:
        raise ReductionError(f"no reduction of {tau} after {MAX_REDUCTION_STEPS} steps")

    if x * x + y * y <= 1 + BOUNDARY_TOL and x < 0:
        r2 = x * x + y * y
        x, y = -x / r2, y / r2
        a, b, c, d = -c, -d, a, b
        steps += 1
    if c < 0 or (c == 0 and d < 0):
        a, b, c, d = -a, -b, -c, -d
    return ReductionResult(FundamentalPoint(HPoint(x, y)), MoebiusMap(a, b, c, d), steps)


def reduce_xy(x, y):
    """Vectorised reduction of arrays of points; returns reduced (x, y)."""
    x = np.array(x, dtype=float, copy=True)
    y = np.array(y, dtype=float, copy=True)
    for _ in range(MAX_REDUCTION_STEPS):
        k = np.ceil(x - 0.5)
        k -= x - k <= -0.5 + BOUNDARY_TOL
        x -= k
        r2 = x * x + y * y
        inside = r2 < 1 - BOUNDARY_TOL
        if not inside.any():
            break
        if np.any(r2[inside] == 0.0):
            raise ReductionError("input numerically on the real axis")
        x[inside] = -x[inside] / r2[inside]
        y[inside] = y[inside] / r2[inside]
    else:
        raise ReductionError("vectorised reduction did not terminate")
    r2 = x * x + y * y
    flip = (r2 <= 1 + BOUNDARY_TOL) & (x < 0)
    x[flip] = -x[flip] / r2[flip]
    y[flip] = y[flip] / r2[flip]
    return x, y


def _canonical(m: MoebiusMap) -> tuple:
    a, b, c, d = m.a, m.b, m.c, m.d
    if c < 0 or (c == 0 and d < 0):
        a, b, c, d = -a, -b, -c, -d
    return (a, b, c, d)


def modular_words(max_len: int) -> list[MoebiusMap]:
    """Distinct elements of PSL(2, Z) with word length <= max_len in S, T, T^-1."""
    if max_len < 0:
        raise ValueError("max_len must be nonnegative")
    ident = MoebiusMap.identity()
    seen = {_canonical(ident)}
    out = [ident]
    frontier = [ident]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for g in GENERATORS:
                m = g @ w
                key = _canonical(m)
                if key not in seen:
                    seen.add(key)
                    m = MoebiusMap(*key)
                    out.append(m)
                    nxt.append(m)
        frontier = nxt
    return out


def orbit_points(base: HPoint, max_word_len: int, tol: float = 1e-9) -> list[HPoint]:
    """Images of ``base`` under words of length <= max_word_len, deduplicated within tol."""
    if max_word_len < 0:
        raise ValueError("max_word_len must be nonnegative")
    grid: dict[tuple[int, int], list[complex]] = {}

    def insert(z: complex) -> bool:
        kx, ky = round(z.real / tol), round(z.imag / tol)
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for w in grid.get((kx + dx, ky + dy), ()):
                    if abs(w - z) <= tol:
                        return False
        grid.setdefault((kx, ky), []).append(z)
        return True

    start = base.z
    insert(start)
    points = [start]
    frontier = deque([start])
    for _ in range(max_word_len):
        nxt = deque()
        for z in frontier:
            for w in (-1 / z, z + 1, z - 1):
                if insert(w):
                    points.append(w)
                    nxt.append(w)
        frontier = nxt
    return [HPoint(z.real, z.imag) for z in points]


def quotient_dist_to_square(tau: HPoint) -> float:
    """Distance in the quotient from tau to the image i* of i."""
    return dist_h2(reduce(tau).reduced.point, I)


def quotient_dist_to_square_xy(x, y, reduced: bool = False):
    if not reduced:
        x, y = reduce_xy(x, y)
    return dist_h2_xy(x, y, 0.0, 1.0)


def quotient_dist_to_rect(tau: HPoint) -> float:
    """Distance in the quotient from tau to the rectangular locus.

    The nearest rectangular lattice to a reduced tau is |tau|, at distance
    asinh(|Re tau| / Im tau); this never exceeds atanh(1/2).
    """
    p = reduce(tau).reduced
    return math.asinh(abs(p.x) / p.y)


def quotient_dist_to_rect_xy(x, y, reduced: bool = False):
    if not reduced:
        x, y = reduce_xy(x, y)
    return dist_to_imaginary_axis_xy(x, y)


def _as_output(values, like):
    return float(values) if np.ndim(like) == 0 else values


def area_outside_ball(r):
    """Hyperbolic area of the part of Omega farther than r from i."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0):
        raise ValueError("radius must be nonnegative")
    out = np.empty_like(r_arr)
    small = r_arr < R_CORNER
    out[small] = OMEGA_AREA - _area_ball_cap_inner(r_arr[small])
    big = ~small
    rb = r_arr[big]
    mid = rb <= 300.0
    res = np.empty_like(rb)
    rm = rb[mid]
    c, s = np.cosh(rm), np.sinh(rm)
    q = np.sqrt(4 * s * s - 1)
    # Omega minus the ball is the region above the top arc of the ball,
    # 2 * int_0^{1/2} dx / (c + sqrt(s^2 - x^2)), evaluated in closed form
    res[mid] = 2 * np.arctan(1 / q) - 2 * c * np.arctan(5 / ((2 * c + q) * (2 * q + c)))
    res[~mid] = np.exp(-rb[~mid])
    out[big] = res
    return _as_output(out, r)


def _area_ball_cap_inner(r):
    """Closed forms on the first two regimes (r < asinh(1/sqrt 3))."""
    half_disk = 2 * np.pi * np.sinh(r / 2) ** 2
    s = np.sinh(r)
    q2 = np.maximum(4 * s * s - 1, 0.0)
    q = np.sqrt(q2)
    c = np.cosh(r)
    # ball now crosses Re = +-1/2; strip off the two caps beyond those lines
    cut = 4 * np.arctan(q) - 2 * c * np.arctan(4 * c * q / (4 - 6 * s * s))
    return np.where(r <= R_EMBEDDED, half_disk, half_disk + cut)


def area_ball_cap(r):
    """Hyperbolic area of the metric ball of radius r about i* in the quotient.

    Three regimes: below asinh(1/2) the ball is half a hyperbolic disk;
    up to asinh(1/sqrt 3) it is additionally cut by Re = +-1/2; beyond that
    it contains both cone points and only a neighbourhood of the cusp is
    missing.
    """
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0):
        raise ValueError("radius must be nonnegative")
    out = np.empty_like(r_arr)
    low = r_arr < R_CORNER
    out[low] = _area_ball_cap_inner(r_arr[low])
    out[~low] = OMEGA_AREA - area_outside_ball(r_arr[~low])
    return _as_output(out, r)


def area_cone_strip(r):
    """Hyperbolic area of {z in Omega : d(z, iR) <= r}."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0):
        raise ValueError("radius must be nonnegative")
    out = np.full_like(r_arr, OMEGA_AREA)
    part = (r_arr > 0) & (np.tanh(r_arr) < 0.5)
    rp = r_arr[part]
    s = np.sinh(rp)
    out[part] = 2 * np.arctan(s) - 2 * s * np.log(2 * np.tanh(rp))
    out[r_arr == 0] = 0.0
    return _as_output(out, r)


def area_region(
    indicator: Callable,
    bounds: tuple[float, float, float, float],
    tol: float = 1e-10,
    *,
    n_scan: int = 1000,
    n_probe: int = 256,
    budget: int = 2000,
) -> float:
    """Hyperbolic area of {indicator(x, y)} inside bounds = (x0, x1, y0, y1).

    Quadrature oracle for dxdy / y^2 that needs nothing but a vectorised
    membership test. ``indicator(x, y)`` returns either booleans or constraint
    margins of shape (n,) or (k, n), the region being where all k margins
    are >= 0.

    Each vertical line is scanned on a log-spaced grid, membership changes
    are located by bisection, and the exact y-integral 1/lo - 1/hi is summed
    over the resulting intervals. With margins, every edge is labelled by the
    constraint that is tight there; x-positions where the label sequence
    changes (corners of the region, where the column integral has a kink)
    are located by bisection and the x-integral is split at them. Boolean
    indicators fall back to fixed panels.

    The caller truncates unbounded regions (mass above height Y is <= width / Y).
    Raises QuadratureError when ``budget`` subdivisions do not suffice.
    """
    x0, x1, y0, y1 = bounds
    if not (x0 < x1 and 0 < y0 < y1):
        raise ValueError(f"bad bounds {bounds}")
    ly = np.linspace(math.log(y0), math.log(y1), n_scan + 1)
    ys = np.exp(ly)

    def evaluate(xs, yv):
        raw = np.asarray(indicator(xs, yv))
        if raw.dtype == bool:
            return raw, None
        if raw.ndim == 1:
            raw = raw[None, :]
        return np.all(raw >= 0, axis=0), raw

    def column(x: float):
        inside, _ = evaluate(np.full_like(ys, x), ys)
        if not inside.any():
            return 0.0, ()
        flips = np.flatnonzero(inside[1:] != inside[:-1])
        lo, hi = ly[flips].copy(), ly[flips + 1].copy()
        left_state = inside[flips]
        xs = np.full_like(lo, x)
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            same = evaluate(xs, np.exp(mid))[0] == left_state
            lo = np.where(same, mid, lo)
            hi = np.where(same, hi, mid)
        edges = np.exp(0.5 * (lo + hi))
        bounds_y = np.concatenate(([y0], edges, [y1]))
        states = np.concatenate(([inside[0]], ~left_state))
        y_lo, y_hi = bounds_y[:-1][states], bounds_y[1:][states]
        value = float(np.sum(1.0 / y_lo - 1.0 / y_hi))
        _, margins = evaluate(xs, edges)
        labels = () if margins is None else tuple(np.argmin(np.abs(margins), axis=0))
        return value, (bool(inside[0]), bool(inside[-1])) + labels

    grid = np.linspace(x0, x1, n_probe + 1)
    sigs = [column(x)[1] for x in grid]
    cuts = {x0, x1}
    if any(len(sg) > 2 for sg in sigs):
        for k in range(n_probe):
            if sigs[k] == sigs[k + 1]:
                continue
            a, b = grid[k], grid[k + 1]
            for _ in range(60):
                m = 0.5 * (a + b)
                if column(m)[1] == sigs[k]:
                    a = m
                else:
                    b = m
            cuts.add(0.5 * (a + b))
    else:
        cuts.update(np.linspace(x0, x1, 9))
    cuts = sorted(cuts)
    f = lambda x: column(x)[0]
    return math.fsum(
        integrate(f, a, b, tol / len(cuts), singular="both", limit=budget).value
        for a, b in zip(cuts[:-1], cuts[1:])
        if b > a
    )
