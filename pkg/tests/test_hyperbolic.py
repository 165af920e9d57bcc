import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate as sint
from scipy.optimize import minimize_scalar

from lattice_moduli.hyperbolic import (
    I,
    DegenerateImage,
    DPoint,
    EuclideanDisk,
    HPoint,
    MoebiusMap,
    apply_moebius,
    ball_about_i,
    cayley,
    dist_disk_from_origin,
    dist_h2,
    dist_h2_xy,
    dist_to_imaginary_axis,
    hyperbolic_disk_area,
)
from lattice_moduli.modular import S, T

coord = st.floats(-20, 20, allow_nan=False)
height = st.floats(1e-3, 50, allow_nan=False)
points = st.builds(HPoint, coord, height)


def _arc(lo: float, hi: float) -> float:
    # int_lo^hi dphi / sin(phi) for 0 < lo <= hi <= pi/2, in log-angle so tiny angles stay resolved
    return sint.quad(lambda u: math.exp(u) / math.sin(math.exp(u)), math.log(lo), math.log(hi), epsabs=1e-13, epsrel=1e-13)[0]


def geodesic_length(z: HPoint, w: HPoint) -> float:
    """Integrate |dz|/y along the geodesic through z and w."""
    if abs(z.x - w.x) < 1e-15:
        return sint.quad(lambda t: 1 / t, min(z.y, w.y), max(z.y, w.y), epsabs=1e-14)[0]
    # semicircle centred at c on the real axis; |dz|/y = dphi / sin(phi) with
    # phi the angle seen from the centre, measured from the nearer foot
    c = (abs(w.z) ** 2 - abs(z.z) ** 2) / (2 * (w.x - z.x))
    phis = [math.atan2(p.y, abs(p.x - c)) for p in (z, w)]
    if (z.x - c) * (w.x - c) > 0:
        return _arc(min(phis), max(phis))
    return _arc(phis[0], math.pi / 2) + _arc(phis[1], math.pi / 2)


def test_hpoint_invariants():
    with pytest.raises(ValueError):
        HPoint(0.0, 0.0)
    with pytest.raises(ValueError):
        HPoint(math.inf, 1.0)
    with pytest.raises(ValueError):
        DPoint(0.8, 0.7)
    with pytest.raises(ValueError):
        EuclideanDisk(0j, -1.0)


def test_dist_examples():
    assert dist_h2(I, I) == 0.0
    assert dist_h2(I, HPoint(0, 2)) == pytest.approx(math.log(2), abs=1e-15)
    d = dist_h2(I, HPoint(1, 1))
    assert d == pytest.approx(math.acosh(1.5), abs=1e-15)
    assert abs(d - geodesic_length(I, HPoint(1, 1))) < 1e-12
    assert d == pytest.approx(0.96242, abs=1e-5)


@given(points, points)
def test_dist_matches_geodesic_length(z, w):
    d = dist_h2(z, w)
    if d < 1e-6 or d > 20:
        return
    assert abs(d - geodesic_length(z, w)) < 1e-8 * max(1.0, d)


@given(points, points)
def test_dist_matches_arccosh(z, w):
    cosh_d = 1 + ((z.x - w.x) ** 2 + (z.y - w.y) ** 2) / (2 * z.y * w.y)
    d = dist_h2(z, w)
    if cosh_d < 1e6:
        assert math.cosh(d) == pytest.approx(cosh_d, rel=1e-12)


def test_nearby_points_keep_precision():
    z, w = HPoint(0.3, 1.7), HPoint(0.3 + 1e-9, 1.7)
    assert dist_h2(z, w) == pytest.approx(1e-9 / 1.7, rel=1e-6)


def test_metric_axioms():
    rng = np.random.default_rng(7)
    n = 10 ** 4
    xs = rng.uniform(-5, 5, (3, n))
    ys = np.exp(rng.uniform(-3, 3, (3, n)))
    ab = dist_h2_xy(xs[0], ys[0], xs[1], ys[1])
    ba = dist_h2_xy(xs[1], ys[1], xs[0], ys[0])
    bc = dist_h2_xy(xs[1], ys[1], xs[2], ys[2])
    ac = dist_h2_xy(xs[0], ys[0], xs[2], ys[2])
    assert np.array_equal(ab, ba)
    assert np.all(ac <= ab + bc + 1e-12)
    assert np.all(ab > 0)


@given(points, points, st.floats(-3, 3), st.floats(-3, 3), st.floats(0.2, 5))
def test_moebius_invariance(z, w, b, c, a):
    # (a, b; c, d) with det 1
    g = MoebiusMap(a, b, c, (1 + b * c) / a)
    try:
        gz, gw = apply_moebius(g, z), apply_moebius(g, w)
    except DegenerateImage:
        return
    d0 = dist_h2(z, w)
    if d0 > 15 or max(abs(gz.z), abs(gw.z)) > 1e6 or min(gz.y, gw.y) < 1e-6:
        return
    assert abs(dist_h2(gz, gw) - d0) < 1e-10 * max(1.0, d0)


def test_moebius_examples():
    assert apply_moebius(MoebiusMap.identity(), HPoint(0.3, 0.7)) == HPoint(0.3, 0.7)
    si = apply_moebius(S, I)
    assert abs(si.z - 1j) < 1e-15
    ti = apply_moebius(T, I)
    assert (ti.x, ti.y) == (1.0, 1.0)
    with pytest.raises(DegenerateImage):
        MoebiusMap(0, -1, 1, 0)(0)


def test_moebius_det_check_and_normalization():
    with pytest.raises(ValueError):
        MoebiusMap(2, 0, 0, 1)
    m = MoebiusMap.normalized(2, 0, 0, 2)
    assert abs(m.det - 1) < 1e-12


@given(points, st.integers(-3, 3), st.integers(-3, 3))
def test_composition_law(z, k, j):
    m1 = MoebiusMap(1, k, 0, 1) @ S
    m2 = S @ MoebiusMap(1, j, 0, 1)
    lhs = apply_moebius(m1 @ m2, z)
    rhs = apply_moebius(m1, apply_moebius(m2, z))
    scale = max(1.0, abs(lhs.z))
    assert abs(lhs.z - rhs.z) < 1e-12 * scale * max(1.0, 1 / z.y)


def test_disk_distance():
    assert dist_disk_from_origin(DPoint(0, 0)) == 0.0
    assert dist_disk_from_origin(DPoint(0.5, 0)) == pytest.approx(math.log(3), abs=1e-15)
    w = cayley(HPoint(0, 2))
    assert abs(w.z - (-1 / 3)) < 1e-15
    assert dist_disk_from_origin(w) == pytest.approx(dist_h2(I, HPoint(0, 2)), abs=1e-15)


def test_cayley_examples():
    assert abs(cayley(I).z) < 1e-16
    eps = 1e-7
    assert abs(cayley(HPoint(0, 1 + eps)).z) < 2 * eps


@given(points)
def test_cayley_conjugates_metric(tau):
    d = dist_h2(I, tau)
    # 1 - |w| ~ 2 e^-d, so the disk coordinates hold about e^d * eps of error
    if d > 8:
        return
    assert abs(dist_disk_from_origin(cayley(tau)) - d) < 1e-12 * max(1.0, d)


def axis_distance_oracle(tau: HPoint) -> float:
    ts = np.logspace(-6, 6, 10 ** 4)
    vals = dist_h2_xy(tau.x, tau.y, 0.0, ts)
    k = int(np.argmin(vals))
    lo, hi = math.log(ts[max(k - 1, 0)]), math.log(ts[min(k + 1, len(ts) - 1)])
    res = minimize_scalar(
        lambda s: float(dist_h2_xy(tau.x, tau.y, 0.0, math.exp(s))),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-12},
    )
    return min(float(vals[k]), float(res.fun))


def test_axis_distance_examples():
    assert dist_to_imaginary_axis(HPoint(0, 3.7)) == 0.0
    hexa = HPoint.from_complex(cmath.exp(2j * math.pi / 3))
    assert dist_to_imaginary_axis(hexa) == pytest.approx(math.atanh(0.5), abs=1e-15)
    assert dist_to_imaginary_axis(hexa) == pytest.approx(0.5 * math.log(3), abs=1e-15)
    assert abs(axis_distance_oracle(hexa) - math.atanh(0.5)) < 1e-6
    one_i = HPoint(1, 1)
    assert dist_to_imaginary_axis(one_i) == pytest.approx(math.log(1 + math.sqrt(2)), abs=1e-15)
    assert abs(axis_distance_oracle(one_i) - math.log(1 + math.sqrt(2))) < 1e-6


def test_axis_distance_is_cot_of_argument():
    rng = np.random.default_rng(3)
    for _ in range(200):
        tau = HPoint(rng.uniform(-3, 3), rng.uniform(0.1, 3))
        assert dist_to_imaginary_axis(tau) == pytest.approx(math.asinh(abs(1 / math.tan(tau.arg))), abs=1e-12)


def test_axis_distance_vs_minimisation():
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(1000):
        tau = HPoint(rng.uniform(-2, 2), math.exp(rng.uniform(-1.5, 1.5)))
        worst = max(worst, abs(dist_to_imaginary_axis(tau) - axis_distance_oracle(tau)))
    assert worst < 1e-6


def test_ball_examples():
    b = ball_about_i(0.0)
    assert b.center == 1j and b.radius == 0.0
    b = ball_about_i(math.asinh(0.5))
    assert abs(b.center - 1j * math.sqrt(5) / 2) < 1e-15
    assert b.radius == pytest.approx(0.5, abs=1e-15)


@given(st.floats(0.01, 3.0))
def test_ball_boundary_at_distance_r(r):
    b = ball_about_i(r)
    pts = b.boundary(np.linspace(0, 2 * np.pi, 100, endpoint=False))
    d = dist_h2_xy(0.0, 1.0, pts.real, pts.imag)
    assert np.max(np.abs(d - r)) < 1e-10


def test_disk_area():
    assert hyperbolic_disk_area(0.0) == 0.0
    assert hyperbolic_disk_area(1.0) == pytest.approx(4 * math.pi * math.sinh(0.5) ** 2, abs=1e-15)
    r = 1e-3
    assert hyperbolic_disk_area(r) == pytest.approx(math.pi * r * r, rel=1e-6)
    # integrate dx dy / y^2 over the Euclidean disk
    b = ball_about_i(1.0)
    c, R = b.center.imag, b.radius
    f = lambda x: 2 * math.sqrt(R * R - x * x) / (c * c - (R * R - x * x))
    val = sint.quad(f, -R, R, epsabs=1e-13)[0]
    assert abs(val - hyperbolic_disk_area(1.0)) < 1e-10
