"""Special functions and the quadrature engine.

The dilogarithm, Catalan's constant and the alternating Lerch series that
appear in the closed-form moments, plus a thin adaptive-quadrature wrapper
used both by the moment code and by the test oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from scipy import integrate as _scipy_integrate

PI2_6 = math.pi ** 2 / 6.0

# G = sum (-1)^n / (2n+1)^2
CATALAN = 0.91596559417721901505460351493238411077414937428167


class QuadratureError(ArithmeticError):
    """Raised when an integral does not converge within its evaluation budget."""


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int

    def __float__(self) -> float:
        return self.value


def _dilog_series(x: float) -> float:
    # |x| <= 1/2: terms shrink at least like 2^-n / n^2
    total = 0.0
    power = x
    n = 1
    while True:
        term = power / (n * n)
        total += term
        if abs(term) < 1e-18 * max(abs(total), 1e-300) or power == 0.0:
            break
        n += 1
        power *= x
    return total


def dilog(x: float) -> float:
    """Real dilogarithm Li2(x) = sum_{n>=1} x^n / n^2 for -1 <= x <= 1.

    The power series is summed directly for |x| <= 1/2. Above 1/2 the
    reflection Li2(x) + Li2(1-x) = pi^2/6 - log(x) log(1-x) is used, and
    below -1/2 the Landen identity Li2(x) = -Li2(x/(x-1)) - log(1-x)^2 / 2
    brings the argument into [1/3, 1/2].
    """
    x = float(x)
    if not -1.0 <= x <= 1.0:
        raise ValueError(f"dilog is implemented on [-1, 1], got {x}")
    if x == 1.0:
        return PI2_6
    if x == 0.0:
        return 0.0
    if x > 0.5:
        return PI2_6 - math.log(x) * math.log1p(-x) - _dilog_series(1.0 - x)
    if x < -0.5:
        return -_dilog_series(x / (x - 1.0)) - 0.5 * math.log1p(-x) ** 2
    return _dilog_series(x)


def catalan_constant() -> float:
    return CATALAN


def lerch_special() -> float:
    """4 * sum_{n>=0} (-1)^n / (3^n (2n+1)^2), i.e. LerchPhi(-1/3, 2, 1/2)."""
    total = 0.0
    n = 0
    while True:
        term = (-1.0) ** n / (3.0 ** n * (2 * n + 1) ** 2)
        total += term
        if abs(term) < 1e-18:
            break
        n += 1
    return 4.0 * total


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-12,
    *,
    points: Sequence[float] = (),
    singular: Optional[str] = None,
    limit: int = 500,
) -> QuadratureResult:
    """Adaptive Gauss-Kronrod quadrature of ``f`` over ``[a, b]``.

    ``points`` lists interior breakpoints where ``f`` or a derivative jumps.
    ``singular`` declares an integrable endpoint singularity ("left",
    "right" or "both"); the interval is then reparametrised by
    ``x = a + (b - a) u**2`` (mirrored for the right end) so logarithmic and
    inverse-square-root blow-ups become bounded integrands.

    Raises QuadratureError when the subdivision budget ``limit`` runs out.
    """
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    if tol <= 0:
        raise ValueError("tol must be positive")

    inner = [p for p in points if a < p < b]
    if singular is None:
        g, lo, hi, pts = f, a, b, inner
    elif singular == "left":
        w = b - a
        g = lambda u: 2.0 * w * u * f(a + w * u * u)
        lo, hi = 0.0, 1.0
        pts = [math.sqrt((p - a) / w) for p in inner]
    elif singular == "right":
        w = b - a
        g = lambda u: 2.0 * w * u * f(b - w * u * u)
        lo, hi = 0.0, 1.0
        pts = sorted(math.sqrt((b - p) / w) for p in inner)
    elif singular == "both":
        mid = 0.5 * (a + b)
        left = integrate(f, a, mid, tol / 2, points=inner, singular="left", limit=limit)
        right = integrate(f, mid, b, tol / 2, points=inner, singular="right", limit=limit)
        return QuadratureResult(
            left.value + right.value,
            left.error_estimate + right.error_estimate,
            left.evaluations + right.evaluations,
        )
    else:
        raise ValueError(f"unknown singularity kind {singular!r}")

    value, err, info, *rest = _scipy_integrate.quad(
        g, lo, hi, epsabs=tol, epsrel=0.0, limit=limit,
        points=pts or None, full_output=1,
    )
    # full_output appends a message only when QUADPACK reports a problem
    if rest and "maximum number of subdivisions" in str(rest[0]):
        raise QuadratureError(
            f"quadrature budget of {limit} subdivisions exhausted on [{a}, {b}] "
            f"(error estimate {err:.3g}, requested {tol:.3g})"
        )
    return QuadratureResult(float(value), float(err), int(info["neval"]))
