"""Uniform sampling of lattices (points of the fundamental domain).

The target law has density (3/pi) / y^2 on Omega. Two samplers:

* inverse transform: x = sin(u) with u uniform on (-pi/6, pi/6), then
  y = sqrt(1 - x^2) / v with v uniform on (0, 1). The marginal of x is
  proportional to 1/sqrt(1 - x^2) and the conditional law of y is
  P(Y <= y | x) = 1 - sqrt(1 - x^2)/y, so this is exact.
* rejection: propose x uniform on (-1/2, 1/2), y = (sqrt(3)/2)/v on the
  strip y >= sqrt(3)/2, accept when |x + iy| >= 1.

Randomness is counter based. Sample (or proposal) i draws its words from a
Philox block whose key is (seed, stream) and whose counter is i, so a batch
is a pure function of (seed, count) no matter how blocks are scheduled.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterator

import numpy as np
from numpy.random import Philox

from .hyperbolic import HPoint, dist_h2_xy, dist_to_imaginary_axis_xy
from .modular import FundamentalPoint

INVERSE = "inverse-transform"
REJECTION = "rejection"
METHODS = (INVERSE, REJECTION)

BLOCK = 1 << 16
_STREAM = {INVERSE: 0, REJECTION: 1}
ACCEPTANCE_RATE = math.pi * math.sqrt(3.0) / 6.0

COLUMNS = ("index", "x", "y", "d_square", "d_rect", "K_square", "K_rect")


@dataclass(frozen=True)
class SamplerConfig:
    seed: int
    count: int
    method: str = INVERSE

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.count < 1:
            raise ValueError("count must be at least 1")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")


@dataclass(frozen=True, eq=False)
class SampleBatch:
    """Sampled points of Omega held column-wise."""

    config: SamplerConfig
    x: np.ndarray
    y: np.ndarray
    proposals: int

    def __len__(self) -> int:
        return len(self.x)

    def points(self) -> Iterator[FundamentalPoint]:
        for xi, yi in zip(self.x, self.y):
            yield FundamentalPoint(HPoint(float(xi), float(yi)))

    @property
    def d_square(self) -> np.ndarray:
        return dist_h2_xy(self.x, self.y, 0.0, 1.0)

    @property
    def d_rect(self) -> np.ndarray:
        return dist_to_imaginary_axis_xy(self.x, self.y)

    @property
    def acceptance_rate(self) -> float:
        return len(self) / self.proposals

    def columns(self) -> dict[str, np.ndarray]:
        ds, dr = self.d_square, self.d_rect
        return {
            "index": np.arange(len(self)),
            "x": self.x,
            "y": self.y,
            "d_square": ds,
            "d_rect": dr,
            "K_square": np.exp(ds),
            "K_rect": np.exp(dr),
        }

    def to_csv(self, fh) -> None:
        cols = self.columns()
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(COLUMNS)
        for row in zip(*(cols[c] for c in COLUMNS)):
            writer.writerow([str(int(row[0]))] + [repr(float(v)) for v in row[1:]])

    def to_json(self) -> dict:
        cols = self.columns()
        return {
            "config": asdict(self.config),
            "proposals": self.proposals,
            "columns": list(COLUMNS),
            "rows": [
                [int(row[0])] + [float(v) for v in row[1:]]
                for row in zip(*(cols[c] for c in COLUMNS))
            ],
        }

    def csv_text(self) -> str:
        buf = io.StringIO()
        self.to_csv(buf)
        return buf.getvalue()

    def json_text(self) -> str:
        return json.dumps(self.to_json())


def worker_count() -> int:
    env = os.environ.get("MODULI_THREADS")
    cap = os.cpu_count() or 1
    if env:
        try:
            return max(1, min(int(env), cap))
        except ValueError:
            pass
    return cap


def _uniforms(seed: int, stream: int, start: int, n: int) -> np.ndarray:
    """Two open-interval uniforms per index for indices start..start+n-1."""
    gen = Philox(key=[seed, stream], counter=[start, 0, 0, 0])
    raw = gen.random_raw(4 * n).reshape(n, 4)[:, :2]
    return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0 ** -53


def _blocks(total: int, start: int = 0):
    return [(s, min(BLOCK, start + total - s)) for s in range(start, start + total, BLOCK)]


def _map_blocks(fn, blocks):
    workers = worker_count()
    if workers == 1 or len(blocks) == 1:
        return [fn(b) for b in blocks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, blocks))


def _inverse_block(seed: int, block):
    start, n = block
    u = _uniforms(seed, _STREAM[INVERSE], start, n)
    x = np.sin((u[:, 0] - 0.5) * (math.pi / 3.0))
    y = np.sqrt(1.0 - x * x) / u[:, 1]
    return x, y


def _rejection_block(seed: int, block):
    start, n = block
    u = _uniforms(seed, _STREAM[REJECTION], start, n)
    x = u[:, 0] - 0.5
    y = (math.sqrt(3.0) / 2.0) / u[:, 1]
    return x, y, x * x + y * y >= 1.0


def sample_uniform(config: SamplerConfig) -> SampleBatch:
    """Exact inverse-transform sampler for the normalised area measure on Omega."""
    if config.method == REJECTION:
        return sample_rejection(config)
    parts = _map_blocks(lambda b: _inverse_block(config.seed, b), _blocks(config.count))
    x = np.concatenate([p[0] for p in parts])
    y = np.concatenate([p[1] for p in parts])
    return SampleBatch(config, x, y, config.count)


def sample_rejection(config: SamplerConfig) -> SampleBatch:
    """Rejection sampler; ``proposals`` records how many draws were consumed."""
    xs, ys, masks = [], [], []
    have = 0
    next_index = 0
    while have < config.count:
        need = config.count - have
        total = int(need / ACCEPTANCE_RATE * 1.01) + 64
        parts = _map_blocks(lambda b: _rejection_block(config.seed, b), _blocks(total, next_index))
        next_index += total
        for x, y, ok in parts:
            xs.append(x[ok])
            ys.append(y[ok])
            masks.append(ok)
            have += int(ok.sum())
    # proposal index of the count-th acceptance
    last = int(np.flatnonzero(np.concatenate(masks))[config.count - 1])
    return SampleBatch(
        SamplerConfig(config.seed, config.count, REJECTION),
        np.concatenate(xs)[: config.count],
        np.concatenate(ys)[: config.count],
        last + 1,
    )
