"""Command-line interface: sample, eval, moments, verify, group, table.

Exit codes: 0 success, 1 a verification check failed, 2 invalid options,
3 I/O failure, 4 quadrature budget exhausted.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import math
import sys

import numpy as np

from . import closed_forms as cf
from .fuchsian import isometric_circles, make_group
from .sampler import METHODS, INVERSE, SamplerConfig, sample_uniform
from .special import QuadratureError

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_IO, EXIT_QUADRATURE = 0, 1, 2, 3, 4

DIGITS = 12


class UsageError(Exception):
    pass


def fmt(v) -> str:
    return f"{float(v):.{DIGITS}g}"


def parse_grid(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must look like A:B:N, got {text!r}")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"bad grid {text!r}") from None
    if not (math.isfinite(a) and math.isfinite(b)) or n < 1 or b < a:
        raise UsageError("grid needs finite A <= B and N >= 1")
    return a, b, n


def grid_points(density: cf.PiecewiseDensity, text: str) -> np.ndarray:
    """N+1 equally spaced points, with the bounds clamped to the support."""
    a, b, n = parse_grid(text)
    lo, hi = density.support
    ca, cb = max(a, lo), min(b, hi)
    if (ca, cb) != (a, b):
        print(
            f"warning: grid {a:g}:{b:g} clamped to the support of {density.name}: {fmt(ca)}:{fmt(cb)}",
            file=sys.stderr,
        )
    if ca > cb:
        raise UsageError(f"grid lies outside the support of {density.name}")
    return np.linspace(ca, cb, n + 1)


def get_density(name: str) -> cf.PiecewiseDensity:
    try:
        return cf.DENSITIES[name]
    except KeyError:
        raise UsageError(f"unknown distribution {name!r}; choose from {', '.join(cf.DENSITIES)}") from None


@contextlib.contextmanager
def open_out(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            yield fh


def evaluate(density, what, x):
    return density.pdf(x) if what == "pdf" else density.cdf(x)


# ---------------------------------------------------------------- commands


def cmd_sample(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    try:
        config = SamplerConfig(args.seed, args.n, args.method)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    batch = sample_uniform(config)
    with open_out(args.out) as fh:
        if args.format == "csv":
            batch.to_csv(fh)
        else:
            json.dump(batch.to_json(), fh)
            fh.write("\n")
    return EXIT_OK


def cmd_eval(args) -> int:
    density = get_density(args.dist)
    if args.grid is None:
        print(fmt(evaluate(density, args.what, args.r)))
        return EXIT_OK
    xs = grid_points(density, args.grid)
    vals = np.atleast_1d(evaluate(density, args.what, xs))
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow([density.variable, args.what])
    for x, v in zip(xs, vals):
        writer.writerow([fmt(x), fmt(v)])
    return EXIT_OK


def cmd_moments(args) -> int:
    density = get_density(args.dist)
    if not args.tol > 0:
        raise UsageError("--tol must be positive")
    try:
        rep = cf.moments(density, args.tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(f"mean {fmt(rep.mean)}")
    print(f"variance {fmt(rep.variance)}")
    print(f"error_estimate {rep.quadrature_tolerance:.3g}")
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_verification

    if args.n < 10 ** 4:
        raise UsageError("--n must be at least 10000")
    report = run_verification(args.seed, args.n)
    print(report.table())
    if args.report:
        with open_out(args.report) as fh:
            fh.write(report.dumps() + "\n")
    for c in report.failures():
        print(f"FAILED: {c.name}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAILED


def _cx(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def group_document(r: float) -> dict:
    g = make_group(r)
    quad = isometric_circles(g)
    names = ("f", "f_inv", "g", "g_inv")
    return {
        "r": g.r,
        "s": g.s,
        "A": [[_cx(v) for v in row] for row in g.A.matrix()],
        "B": [[_cx(v) for v in row] for row in g.B.matrix()],
        "commutator_trace": _cx(g.commutator_trace()),
        "circles": [
            {"side": n, "center": _cx(c.center), "radius": c.radius} for n, c in zip(names, quad.circles)
        ],
        "vertices": [_cx(v) for v in quad.vertices],
    }


def cmd_group(args) -> int:
    if not (args.r > 0 and math.isfinite(args.r)):
        raise UsageError("--r must be positive")
    doc = group_document(args.r)
    with open_out(args.out) as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    return EXIT_OK


DEFAULT_GRIDS = {
    "square": "0:3:600",
    "rect": f"0:{cf.RECT_DISTANCE.support[1]!r}:550",
    "distortion-square": "1:10:900",
    "distortion-rect": f"1:{math.sqrt(3.0)!r}:750",
    "quadrilateral": f"0:{cf.QUAD_GEODESIC_MAX!r}:350",
}


def cmd_table(args) -> int:
    density = get_density(args.dist)
    xs = grid_points(density, args.grid or DEFAULT_GRIDS[density.name])
    pdf = np.atleast_1d(density.pdf(xs))
    cdf = np.atleast_1d(density.cdf(xs))
    with open_out(args.out) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([density.variable, "pdf", "cdf"])
        for row in zip(xs, pdf, cdf):
            writer.writerow([fmt(v) for v in row])
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lattice-moduli", description="Random lattices and their distance distributions.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sample", help="sample points of the fundamental domain")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--method", choices=METHODS, default=INVERSE)
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--out", default=None, help="output file (default stdout)")
    s.set_defaults(func=cmd_sample)

    e = sub.add_parser("eval", help="evaluate a density or c.d.f.")
    e.add_argument("--dist", required=True)
    e.add_argument("--what", choices=("pdf", "cdf"), default="pdf")
    where = e.add_mutually_exclusive_group(required=True)
    where.add_argument("--r", type=float)
    where.add_argument("--grid", help="A:B:N, N+1 points from A to B")
    e.set_defaults(func=cmd_eval)

    m = sub.add_parser("moments", help="mean and variance by quadrature")
    m.add_argument("--dist", required=True)
    m.add_argument("--tol", type=float, default=1e-12)
    m.set_defaults(func=cmd_moments)

    v = sub.add_parser("verify", help="run the Monte Carlo and quadrature checks")
    v.add_argument("--n", type=int, default=10 ** 6)
    v.add_argument("--seed", type=int, default=1)
    v.add_argument("--report", default=None, help="write the JSON report here")
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("group", help="generators and fundamental quadrilateral for r")
    g.add_argument("--r", type=float, required=True)
    g.add_argument("--out", default=None)
    g.set_defaults(func=cmd_group)

    t = sub.add_parser("table", help="export (x, pdf, cdf) plot data as CSV")
    t.add_argument("--dist", required=True)
    t.add_argument("--grid", default=None)
    t.add_argument("--out", default=None)
    t.set_defaults(func=cmd_table)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QuadratureError as exc:
        print(f"error: quadrature budget exhausted: {exc}", file=sys.stderr)
        return EXIT_QUADRATURE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
