"""Assembly of countably many bump metrics into one planar metric field.

Disc n sits at (1/n, 0) with radius a_n = 1/(2(n+1)^2); the radii shrink
fast enough that the discs are pairwise disjoint, avoid the origin, and
accumulate there. Inside disc n the field carries the bump metric with
parameter a_n written in Cartesian components; outside every disc it is the
identity. The assembled field is C^2 with Lipschitz second derivatives away
from the origin, and exactly Euclidean on a neighborhood of every point not
in the closed discs.
"""
from __future__ import annotations

import dataclasses
from typing import Optional

import numpy as np

from . import kernels
from .exceptions import ConsistencyError, DomainError, ParameterError
from .serialize import write_csv

DEFAULT_DOMAIN = ((-0.1, 1.2), (-0.2, 0.2))


@dataclasses.dataclass(frozen=True)
class DiscEntry:
    n: int
    cx: float
    cy: float
    radius: float


@dataclasses.dataclass(frozen=True)
class DiscLayout:
    entries: tuple
    n_max: int

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, n: int) -> DiscEntry:
        if not 1 <= n <= self.n_max:
            raise ParameterError(f"disc index must be in 1..{self.n_max}, got {n}")
        return self.entries[n - 1]

    def radii(self) -> np.ndarray:
        return np.array([e.radius for e in self.entries])

    def centers(self) -> np.ndarray:
        return np.array([(e.cx, e.cy) for e in self.entries])

    def to_dict(self) -> dict:
        return {
            "n_max": self.n_max,
            "entries": [
                {"n": e.n, "cx": e.cx, "cy": e.cy, "r": e.radius}
                for e in self.entries
            ],
        }


def build_layout(n_max: int) -> DiscLayout:
    """Disc centers 1/n and radii 1/(2(n+1)^2), verified pairwise disjoint.

    Disjointness and origin avoidance are checked outright rather than
    trusted: gaps between consecutive discs and distance from 0 must be
    strictly positive, else the layout is rejected.
    """
    if not isinstance(n_max, int) or n_max < 1:
        raise ParameterError(f"n_max must be a positive integer, got {n_max!r}")
    ns = np.arange(1, n_max + 1, dtype=float)
    cx = 1.0 / ns
    r = 1.0 / (2.0 * (ns + 1.0) * (ns + 1.0))
    # all discs live on the x-axis: full pairwise check reduces to intervals,
    # but verify the quadratic-form statement directly anyway
    lo = cx - r
    hi = cx + r
    order = np.argsort(cx)  # increasing center
    gaps = lo[order][1:] - hi[order][:-1]
    if np.any(gaps <= 0.0):
        k = int(np.argmax(gaps <= 0.0))
        raise ConsistencyError(
            f"discs {int(ns[order][k])} and {int(ns[order][k + 1])} overlap or touch")
    if np.any(lo <= 0.0):
        raise ConsistencyError("a disc reaches the origin")
    entries = tuple(DiscEntry(n=int(n), cx=float(c), cy=0.0, radius=float(rr))
                    for n, c, rr in zip(ns, cx, r))
    return DiscLayout(entries=entries, n_max=n_max)


@dataclasses.dataclass(frozen=True)
class MetricField:
    """Piecewise metric on a planar domain: bump metric on each disc,
    identity elsewhere. Point locations resolve to at most one disc."""

    layout: DiscLayout
    domain: tuple = DEFAULT_DOMAIN

    def _check_domain(self, x, y):
        (x0, x1), (y0, y1) = self.domain
        if np.any(x < x0) or np.any(x > x1) or np.any(y < y0) or np.any(y > y1):
            raise DomainError(f"point outside the working domain {self.domain}")

    def disc_index(self, x: float, y: float) -> Optional[int]:
        """Index of the disc containing (x, y), or None.

        Candidate indices come from inverting the center map n -> 1/n; only
        a handful of neighbors need the exact membership test.
        """
        self._check_domain(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        if x <= 0.0:
            return None
        n_est = int(round(1.0 / x))
        for n in range(max(1, n_est - 2), min(self.layout.n_max, n_est + 2) + 1):
            e = self.layout[n]
            dx = x - e.cx
            dy = y - e.cy
            if dx * dx + dy * dy < e.radius * e.radius:
                return n
        return None

    def locate(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Vectorized disc_index: array of indices, 0 where no disc applies."""
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        self._check_domain(xs, ys)
        out = np.zeros(xs.shape, dtype=np.int64)
        positive = xs > 0.0
        safe = np.where(positive, xs, 1.0)
        with np.errstate(over="ignore"):
            base = np.clip(np.rint(1.0 / safe), 1, self.layout.n_max).astype(np.int64)
        cx = np.array([0.0] + [e.cx for e in self.layout.entries])
        rr = np.array([0.0] + [e.radius for e in self.layout.entries])
        for off in (-2, -1, 0, 1, 2):
            cand = np.clip(base + off, 1, self.layout.n_max)
            dx = xs - cx[cand]
            inside = positive & (out == 0) & (dx * dx + ys * ys < rr[cand] * rr[cand])
            out = np.where(inside, cand, out)
        return out

    def eval(self, x: float, y: float) -> np.ndarray:
        """Metric tensor g(x, y) as a 2x2 array."""
        n = self.disc_index(float(x), float(y))
        g = np.eye(2)
        if n is None:
            return g
        e = self.layout[n]
        H, _, _ = kernels.metric_tensors(np.array([x - e.cx]), np.array([y - e.cy]), e.radius)
        g[0, 0] += H[0, 0]
        g[0, 1] = g[1, 0] = H[0, 1]
        g[1, 1] += H[0, 2]
        return g

    def eval_derivatives(self, x: float, y: float, order: int):
        """Cartesian derivative tensors of g at one point.

        order=1: (2,2,2) array D[k,i,j] = d_k g_ij;
        order=2: (2,2,2,2) array D[l,k,i,j] = d_l d_k g_ij.
        """
        if order not in (1, 2):
            raise ParameterError(f"order must be 1 or 2, got {order}")
        n = self.disc_index(float(x), float(y))
        if order == 1:
            out = np.zeros((2, 2, 2))
        else:
            out = np.zeros((2, 2, 2, 2))
        if n is None:
            return out
        e = self.layout[n]
        _, D1, D2 = kernels.metric_tensors(np.array([x - e.cx]), np.array([y - e.cy]), e.radius)
        if order == 1:
            out[0] = [[D1[0, 0], D1[0, 1]], [D1[0, 1], D1[0, 2]]]
            out[1] = [[D1[0, 3], D1[0, 4]], [D1[0, 4], D1[0, 5]]]
        else:
            xx = [[D2[0, 0], D2[0, 1]], [D2[0, 1], D2[0, 2]]]
            xy = [[D2[0, 3], D2[0, 4]], [D2[0, 4], D2[0, 5]]]
            yy = [[D2[0, 6], D2[0, 7]], [D2[0, 7], D2[0, 8]]]
            out[0, 0] = xx
            out[0, 1] = xy
            out[1, 0] = xy
            out[1, 1] = yy
        return out


def make_metric_field(n_max: int, domain: tuple = DEFAULT_DOMAIN) -> MetricField:
    return MetricField(layout=build_layout(n_max), domain=domain)


def eval_metric(field: MetricField, x: float, y: float) -> np.ndarray:
    return field.eval(x, y)


def metric_derivatives(field: MetricField, x: float, y: float, order: int):
    return field.eval_derivatives(x, y, order)


def grid_dump(field: MetricField, bounds=None, resolution: int = 256):
    """Rows (x, y, g11, g12, g22) over a uniform grid of the given bounds."""
    if resolution < 2:
        raise ParameterError(f"resolution must be >= 2, got {resolution}")
    if bounds is None:
        bounds = field.domain
    (x0, x1), (y0, y1) = bounds
    xs = np.linspace(x0, x1, resolution)
    ys = np.linspace(y0, y1, resolution)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    idx = field.locate(X.ravel(), Y.ravel())
    g11 = np.ones(idx.size)
    g12 = np.zeros(idx.size)
    g22 = np.ones(idx.size)
    for n in np.unique(idx):
        if n == 0:
            continue
        e = field.layout[int(n)]
        sel = idx == n
        H, _, _ = kernels.metric_tensors(X.ravel()[sel] - e.cx, Y.ravel()[sel] - e.cy, e.radius)
        g11[sel] += H[:, 0]
        g12[sel] = H[:, 1]
        g22[sel] += H[:, 2]
    return np.stack([X.ravel(), Y.ravel(), g11, g12, g22], axis=1)


def write_grid_csv(field: MetricField, path, bounds=None, resolution: int = 256) -> None:
    rows = grid_dump(field, bounds, resolution)
    write_csv(path, ["x", "y", "h11", "h12", "h22"],
              (tuple(float(v) for v in row) for row in rows))
