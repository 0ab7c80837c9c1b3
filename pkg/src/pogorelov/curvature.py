"""Gauss curvature of radial metrics and its local structure at the branch.

For a metric d rho^2 + f^2 d theta^2 the Gauss curvature is K = -f''/f
(K = -f'''(0)/f'(0) at the pole). The bump family has K = 0 on the inner
disc, K > 0 just past rho = a/2 with leading behaviour (3/2) a^3 (rho - a/2),
a sign change interior to the annulus, and a closed rational form in (a, rho).
"""
from __future__ import annotations

import dataclasses

import numpy as np

from .exceptions import ConfigurationError, DomainError, SingularEvaluationError
from .exceptions import ParameterError
from .profile import RadialProfile

#: quadratic Taylor coefficients of K at the branch point, K ~ c1 t + c2 t^2
#: with t = rho - a/2, precomputed symbolically from -f''/f
EXPANSION_C1_COEFF = 1.5    # c1 = (3/2) a^3
EXPANSION_C2_COEFF = -21.0  # c2 = -21 a^2


def gauss_curvature(p: RadialProfile, rho):
    """K(rho) = -f''(rho)/f(rho), with the pole handled by its limit.

    Accepts scalars or arrays inside [0, a). The +0.0 normalizes the signed
    zero produced on exactly flat samples.
    """
    arr = np.asarray(rho, dtype=float)
    scalar = np.isscalar(rho) or arr.ndim == 0
    arr = np.atleast_1d(arr)
    if np.any(arr < 0.0) or np.any(arr >= p.a):
        raise DomainError(f"rho outside [0, {p.a})")
    pole = arr == 0.0
    safe = np.where(pole, 0.5 * p.a, arr)
    K = -(np.asarray(p.eval(safe, 2)) / np.asarray(p.eval(safe, 0))) + 0.0
    if np.any(pole):
        K0 = -p.eval(0.0, 3) / p.eval(0.0, 1) + 0.0
        K = np.where(pole, K0, K)
    return float(K[0]) if scalar else K


def closed_form_K(a: float, r):
    """Rational closed form of the bump curvature on [a/2, a].

    K(r) = -6a (a-2r)(a-r)(11a^2 - 30ar + 20r^2)
           / (a (a-2r)^3 (a-r)^3 + 8r).
    Raises if the denominator is within 1e-14 of zero.
    """
    if a <= 0:
        raise ParameterError(f"a must be positive, got {a!r}")
    arr = np.asarray(r, dtype=float)
    scalar = np.isscalar(r) or arr.ndim == 0
    arr = np.atleast_1d(arr)
    if np.any(arr < 0.5 * a) or np.any(arr > a):
        raise DomainError(f"closed form is stated on [{0.5 * a}, {a}]")
    num = 6.0 * a * (a - 2.0 * arr) * (a - arr) * (11.0 * a * a - 30.0 * a * arr + 20.0 * arr * arr)
    den = a * (a - 2.0 * arr) ** 3 * (a - arr) ** 3 + 8.0 * arr
    if np.any(np.abs(den) < 1e-14):
        raise SingularEvaluationError("closed-form denominator within 1e-14 of zero")
    K = -(num / den) + 0.0
    return float(K[0]) if scalar else K


def expansion_fit(p: RadialProfile, eps_fit: float):
    """Least-squares (c1, c2) in K ~ c1 t + c2 t^2 just past the branch point.

    Fits on 64 offsets t in (0, eps_fit]. eps_fit must not exceed a quarter
    of the bump width.
    """
    a = p.a
    start = p.flat_radius
    width = a - start
    if not (0.0 < eps_fit <= 0.25 * width):
        raise ParameterError(
            f"eps_fit must lie in (0, {0.25 * width}] for this profile, got {eps_fit}")
    t = eps_fit * np.arange(1, 65, dtype=float) / 64.0
    usable = (start + t) > start
    if int(np.count_nonzero(usable)) < 8:
        raise ConfigurationError(
            f"only {int(np.count_nonzero(usable))} usable offsets at eps_fit={eps_fit}; need >= 8")
    t = t[usable]
    K = gauss_curvature(p, start + t)
    A = np.stack([t, t * t], axis=1)
    coef, *_ = np.linalg.lstsq(A, K, rcond=None)
    return float(coef[0]), float(coef[1])


def lower_bound_window(p: RadialProfile, coeff: float) -> float:
    """Largest eps with K(a/2 + t) > coeff * t for all t in (0, eps].

    Located by a coarse scan plus bisection at resolution 1e-6 * a. Returns 0
    when the bound fails within one resolution step of the branch point.
    """
    if coeff <= 0:
        raise ParameterError(f"coeff must be positive, got {coeff}")
    a = p.a
    start = p.flat_radius
    res = 1e-6 * a
    width = (a - start) - 2.0 * res

    def ok(t):
        return gauss_curvature(p, start + t) > coeff * t

    coarse = np.linspace(res, width, 2048)
    good = np.asarray(ok(coarse))
    if not bool(good[0]):
        return 0.0
    bad = np.nonzero(~good)[0]
    if bad.size == 0:
        return float(coarse[-1])
    lo = float(coarse[bad[0] - 1])
    hi = float(coarse[bad[0]])
    while hi - lo > res:
        mid = 0.5 * (lo + hi)
        if bool(ok(mid)):
            lo = mid
        else:
            hi = mid
    eps = 0.5 * (lo + hi)
    return 0.0 if eps <= res else eps


def first_zero_past_branch(p: RadialProfile) -> float:
    """First rho past the flat disc where K crosses zero (bisected to 1e-14 a)."""
    a = p.a
    start = p.flat_radius
    grid = np.linspace(start + 1e-9 * a, a - 1e-9 * a, 4096)
    K = gauss_curvature(p, grid)
    sign = np.sign(K)
    flips = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    if flips.size == 0:
        raise ConfigurationError("no sign change of K found past the branch point")
    lo, hi = float(grid[flips[0]]), float(grid[flips[0] + 1])
    klo = gauss_curvature(p, lo)
    while hi - lo > 1e-14 * a:
        mid = 0.5 * (lo + hi)
        if gauss_curvature(p, mid) * klo > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# sampled table with an independent finite-difference column


@dataclasses.dataclass(frozen=True)
class CurvatureTable:
    rho: np.ndarray
    K_formula: np.ndarray
    K_closed: np.ndarray
    K_fd: np.ndarray

    @property
    def abs_err(self) -> np.ndarray:
        return np.abs(self.K_formula - self.K_closed)

    def rows(self):
        for i in range(self.rho.size):
            yield (float(self.rho[i]), float(self.K_formula[i]),
                   float(self.K_closed[i]), float(self.K_fd[i]),
                   float(self.abs_err[i]))


def _fd_second_derivative(p: RadialProfile, rho: np.ndarray, h: float) -> np.ndarray:
    """Branch-aware O(h^2) estimate of f'' differencing the reduced profile.

    Stencils never straddle a branch point: near the flat edge a one-sided
    stencil pointing into the bump is used instead of the central one.
    """
    a = p.a
    start = p.flat_radius
    rho = np.asarray(rho, dtype=float)
    est = np.empty_like(rho)
    for i, r in enumerate(rho.flat):
        if r < start:
            est.flat[i] = 0.0
            continue
        if r - h < start:
            side = +1.0
        elif r + 3.0 * h >= a:
            side = -1.0
        else:
            side = 0.0
        if side == 0.0:
            vals = p.eval_reduced(np.array([r - h, r, r + h]), 0)
            est.flat[i] = (vals[0] - 2.0 * vals[1] + vals[2]) / (h * h)
        else:
            nodes = r + side * h * np.arange(4, dtype=float)
            vals = p.eval_reduced(nodes, 0)
            est.flat[i] = (2.0 * vals[0] - 5.0 * vals[1] + 4.0 * vals[2] - vals[3]) / (h * h)
    return est


def curvature_table(p: RadialProfile, rhos=None, n: int = 64) -> CurvatureTable:
    """Sampled comparison of -f''/f, the closed form, and an FD oracle.

    Defaults to n samples spanning the bump [a/2, a). The closed-form column
    is only defined there, so explicit sample lists must stay inside it.
    """
    a = p.a
    if rhos is None:
        rhos = np.linspace(p.flat_radius, a, n, endpoint=False)
    rhos = np.atleast_1d(np.asarray(rhos, dtype=float))
    if np.any(rhos < p.flat_radius) or np.any(rhos >= a):
        raise DomainError(f"table samples must lie in [{p.flat_radius}, {a})")
    Kf = np.atleast_1d(gauss_curvature(p, rhos))
    Kc = np.atleast_1d(closed_form_K(a, rhos)) if p.kind == "pogorelov" else Kf.copy()
    h = 1e-5 * a
    d2 = _fd_second_derivative(p, rhos, h)
    Kfd = -(d2 / np.asarray(p.eval(rhos, 0))) + 0.0
    return CurvatureTable(rho=rhos, K_formula=Kf, K_closed=Kc, K_fd=Kfd)
