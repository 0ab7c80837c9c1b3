"""Norm estimates for the per-disc metric deviations and their decay.

Each disc contributes h - I supported on an annulus. Measured sup norms of
the deviation and its first two Cartesian derivative tensors, plus the
Lipschitz constant of the second derivatives, decay like powers of the disc
radius; fitting those powers against 1/(n+1) quantifies how fast the
assembled field approaches the identity while the Lipschitz constants of
the second derivatives stay summable-or-not as the fit decides.
"""
from __future__ import annotations

import dataclasses
import math

import numpy as np

from . import kernels
from .assembly import MetricField
from .exceptions import ConfigurationError, ParameterError
from .serialize import write_csv


@dataclasses.dataclass(frozen=True)
class NormRow:
    n: int
    a: float
    sup_dev: float
    sup_D1: float
    sup_D2: float
    lip_D2: float
    lip_argmax_rho: float   # radius (in units of a) of the steepest D2 pair
    stable: bool            # Lipschitz estimate moved < 20% under refinement


@dataclasses.dataclass(frozen=True)
class NormReport:
    rows: tuple
    grid_n: int
    exponents: dict = dataclasses.field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])

    def to_csv(self, path) -> None:
        write_csv(path, ["n", "a", "sup_dev", "sup_D1", "sup_D2", "lip_D2"],
                  ((r.n, r.a, r.sup_dev, r.sup_D1, r.sup_D2, r.lip_D2)
                   for r in self.rows))

    def to_dict(self) -> dict:
        return {
            "grid_n": self.grid_n,
            "rows": [
                {"n": r.n, "a": r.a, "sup_dev": r.sup_dev, "sup_D1": r.sup_D1,
                 "sup_D2": r.sup_D2, "lip_D2": r.lip_D2,
                 "lip_argmax_rho": r.lip_argmax_rho, "stable": r.stable}
                for r in self.rows
            ],
            "exponents": self.exponents,
        }


def _disc_norms(a: float, grid_n: int, impl=None):
    """Sup norms and Lipschitz constant on one disc via a polar grid.

    The grid covers radii 0.45a .. 1.05a so pairs straddle both branch
    circles; outside the annulus every tensor is exactly zero.
    """
    radii = np.linspace(0.45 * a, 1.05 * a, grid_n + 1)
    theta = 2.0 * math.pi * np.arange(grid_n) / grid_n
    R = radii[:, None]
    ct = np.cos(theta)[None, :]
    st = np.sin(theta)[None, :]
    X = (R * ct).ravel()
    Y = (R * st).ravel()
    H, D1, D2 = kernels.metric_tensors(X, Y, a, impl=impl)
    nr, nt = radii.size, theta.size
    H = H.reshape(nr, nt, 3)
    D1 = D1.reshape(nr, nt, 6)
    D2 = D2.reshape(nr, nt, 9)
    sup_dev = float(np.max(np.abs(H)))
    sup_D1 = float(np.max(np.abs(D1)))
    sup_D2 = float(np.max(np.abs(D2)))

    # Lipschitz quotient of D2 over radial and angular neighbor pairs
    dr = radii[1] - radii[0]
    rad_diff = np.max(np.abs(np.diff(D2, axis=0)), axis=(1, 2)) / dr
    chord = 2.0 * radii * math.sin(math.pi / nt)
    ang_diff = np.max(np.abs(D2 - np.roll(D2, -1, axis=1)), axis=(1, 2)) / chord
    rad_best = float(np.max(rad_diff))
    ang_best = float(np.max(ang_diff))
    if rad_best >= ang_best:
        k = int(np.argmax(rad_diff))
        argmax_rho = float(0.5 * (radii[k] + radii[k + 1])) / a
        lip = rad_best
    else:
        k = int(np.argmax(ang_diff))
        argmax_rho = float(radii[k]) / a
        lip = ang_best
    return sup_dev, sup_D1, sup_D2, lip, argmax_rho


def estimate_norms(field: MetricField, n: int, grid_n: int = 96, impl=None) -> NormRow:
    """Measured norms for disc n, with one grid refinement for stability.

    Sup norms come from the refined grid; the Lipschitz constant is the
    larger of the two grids, flagged unstable when refinement moves it by
    more than 20%.
    """
    if grid_n < 64:
        raise ParameterError(f"grid_n must be >= 64, got {grid_n}")
    e = field.layout[n]
    a = e.radius
    coarse = _disc_norms(a, grid_n, impl=impl)
    fine = _disc_norms(a, 2 * grid_n, impl=impl)
    lip = max(coarse[3], fine[3])
    stable = abs(fine[3] - coarse[3]) <= 0.2 * max(fine[3], 1e-300)
    argmax = fine[4] if fine[3] >= coarse[3] else coarse[4]
    return NormRow(n=n, a=a, sup_dev=fine[0], sup_D1=fine[1], sup_D2=fine[2],
                   lip_D2=lip, lip_argmax_rho=argmax, stable=stable)


def estimate_norm_table(field: MetricField, ns=None, grid_n: int = 96,
                        impl=None) -> NormReport:
    if ns is None:
        ns = range(1, field.layout.n_max + 1)
    rows = tuple(estimate_norms(field, int(n), grid_n, impl=impl) for n in ns)
    if not rows:
        raise ConfigurationError("no discs selected")
    return NormReport(rows=rows, grid_n=grid_n)


_NORM_COLUMNS = ("sup_dev", "sup_D1", "sup_D2", "lip_D2")


def decay_fit(report: NormReport, n_range=(5, 40)) -> NormReport:
    """OLS slope of log(norm) against log(n+1) per measured column.

    Returns a new report whose exponents field maps column -> dict with the
    slope, its standard error, a 95% confidence half-width, and the maximum
    absolute log-residual. A column that is identically zero in range gets
    the sentinel slope -inf; mixed zero and positive entries abort the fit.
    """
    lo, hi = n_range
    rows = [r for r in report.rows if lo <= r.n <= hi]
    if len(rows) < 5:
        raise ConfigurationError(f"need at least 5 rows in n_range={n_range}, have {len(rows)}")
    x = np.log([r.n + 1.0 for r in rows])
    fits = {}
    for col in _NORM_COLUMNS:
        vals = np.array([getattr(r, col) for r in rows])
        if np.all(vals == 0.0):
            fits[col] = {"slope": -math.inf, "intercept": -math.inf,
                         "stderr": 0.0, "ci95": 0.0,
                         "max_abs_residual": 0.0, "n_used": len(rows)}
            continue
        if np.any(vals <= 0.0):
            raise ConfigurationError(f"column {col} has nonpositive entries; cannot fit decay")
        y = np.log(vals)
        A = np.stack([x, np.ones_like(x)], axis=1)
        coef, res, *_ = np.linalg.lstsq(A, y, rcond=None)
        slope, intercept = float(coef[0]), float(coef[1])
        resid = y - A @ coef
        dof = len(rows) - 2
        s2 = float(resid @ resid) / dof
        sx = float(np.sum((x - x.mean()) ** 2))
        stderr = math.sqrt(s2 / sx)
        fits[col] = {
            "slope": slope,
            "intercept": intercept,
            "stderr": stderr,
            "ci95": 1.96 * stderr,
            "max_abs_residual": float(np.max(np.abs(resid))),
            "n_used": len(rows),
        }
    return dataclasses.replace(report, exponents=fits)


@dataclasses.dataclass(frozen=True)
class CauchyTable:
    """Tail sums T(m) = sum over n > m of a norm column, per column."""

    m: np.ndarray
    tails: dict
    monotone: dict
    m_star: dict    # first m with tail below the threshold, None if never

    def to_dict(self) -> dict:
        return {
            "m": [int(v) for v in self.m],
            "tails": {k: list(map(float, v)) for k, v in self.tails.items()},
            "monotone": self.monotone,
            "m_star": self.m_star,
        }


def gluing_mismatch(field: MetricField, n: int, n_dirs: int = 32,
                    delta_frac: float = 1e-4) -> dict:
    """One-sided mismatch of h, D1, D2 across the outer circle of disc n.

    Evaluates each tensor just inside (rho = a - delta) and just outside
    (rho = a + delta, exactly zero there) along n_dirs directions and
    reports the largest absolute difference per tensor. Small values
    witness that the glued field is C^2 across the disc boundary.
    """
    if n_dirs < 4:
        raise ParameterError(f"n_dirs must be >= 4, got {n_dirs}")
    if not 0.0 < delta_frac < 0.1:
        raise ParameterError(f"delta_frac must be in (0, 0.1), got {delta_frac}")
    e = field.layout[n]
    a = e.radius
    delta = delta_frac * a
    theta = 2.0 * math.pi * np.arange(n_dirs) / n_dirs
    ct, st = np.cos(theta), np.sin(theta)
    out = {}
    for key_idx, key in enumerate(("h", "D1", "D2")):
        inner = kernels.metric_tensors((a - delta) * ct, (a - delta) * st, a)[key_idx]
        outer = kernels.metric_tensors((a + delta) * ct, (a + delta) * st, a)[key_idx]
        out[key] = float(np.max(np.abs(inner - outer)))
    out["delta"] = delta
    return out


def cauchy_check(report: NormReport, threshold: float = 1e-9) -> CauchyTable:
    """Partial-sum tails of each norm column over the measured discs.

    Decreasing tails with a finite crossing index witness that the metric
    deviations form a Cauchy sequence in the corresponding norm over the
    measured range.
    """
    ns = report.column("n").astype(int)
    if np.any(np.diff(ns) <= 0):
        raise ConfigurationError("rows must be sorted by n")
    ms = np.concatenate([[ns[0] - 1], ns])
    tails = {}
    monotone = {}
    m_star = {}
    for col in _NORM_COLUMNS:
        vals = report.column(col)
        # suffix sums: tail[i] = sum of vals[i:], nonincreasing by construction
        tail = np.concatenate([np.cumsum(vals[::-1])[::-1], [0.0]])
        tails[col] = tail
        monotone[col] = bool(np.all(np.diff(tail) <= 0.0))
        below = np.nonzero(tail < threshold)[0]
        m_star[col] = int(ms[below[0]]) if below.size else None
    return CauchyTable(m=ms, tails=tails, monotone=monotone, m_star=m_star)
