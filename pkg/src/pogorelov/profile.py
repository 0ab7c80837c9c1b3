"""Radial profile family for metrics in geodesic polar form.

A radial profile f defines a rotationally symmetric metric
d rho^2 + f(rho)^2 d theta^2 on a disc. The central object is the bump
family: f(rho) = rho for rho <= a/2, then rho + a(rho-a)^3(rho-a/2)^3 up to
rho = a. It is C^2 with a bounded jump in f''' at rho = a/2.
"""
from __future__ import annotations

import dataclasses
import math
from typing import Callable, Optional

import numpy as np

from . import kernels
from .exceptions import ConfigurationError, DomainError, ParameterError

_FLAT_DERIVS = (None, 1.0, 0.0, 0.0)  # derivatives of the identity map, k >= 1


def _flat_eval(rho, a, k):
    if k == 0:
        return np.asarray(rho, dtype=float).copy()
    return np.full_like(np.asarray(rho, dtype=float), _FLAT_DERIVS[k])


def _sphere_eval(rho, a, k):
    rho = np.asarray(rho, dtype=float)
    return (np.sin, np.cos, lambda t: -np.sin(t), lambda t: -np.cos(t))[k](rho)


def _sinh_eval(rho, a, k):
    rho = np.asarray(rho, dtype=float)
    return (np.sinh, np.cosh)[k % 2](rho)


def _pogorelov_eval(rho, a, k):
    return kernels.profile_eval(rho, a, k)


_KINDS: dict[str, Callable] = {
    "pogorelov": _pogorelov_eval,
    "flat": _flat_eval,
    "sphere": _sphere_eval,
    "sinh": _sinh_eval,
}


@dataclasses.dataclass(frozen=True)
class RadialProfile:
    """Evaluatable radial function f with derivatives through order 3.

    Domain is the half-open interval [0, a). flat_radius is the largest rho0
    such that f is exactly the identity on [0, rho0]; singular_edge, when set,
    marks the rho at which f' returns to 1 and the embedding integrand loses
    smoothness.
    """

    kind: str
    a: float
    flat_radius: float
    singular_edge: Optional[float] = None

    def eval(self, rho, k: int = 0):
        """Value of the k-th derivative (k in 0..3) at rho (scalar or array).

        At a branch point the bump family returns the right-sided value; for
        orders 0..2 the branches agree there, so only f''' is one-sided.
        """
        if k not in (0, 1, 2, 3):
            raise ParameterError(f"derivative order must be 0..3, got {k}")
        arr = np.asarray(rho, dtype=float)
        if np.any(arr < 0.0) or np.any(arr >= self.a):
            raise DomainError(
                f"rho outside the profile domain [0, {self.a}): "
                f"offending value {arr[(arr < 0.0) | (arr >= self.a)].flat[0] if arr.ndim else float(arr)}")
        out = _KINDS[self.kind](arr, self.a, k)
        if np.isscalar(rho) or arr.ndim == 0:
            return float(np.asarray(out).item())
        return out

    def eval_reduced(self, rho, k: int = 0):
        """Derivatives of f minus the identity map, without cancellation.

        For the bump family this evaluates the bump polynomial directly, so
        values near the branch ends keep full relative precision; finite
        difference harnesses should difference this, not eval().
        """
        if k not in (0, 1, 2, 3):
            raise ParameterError(f"derivative order must be 0..3, got {k}")
        arr = np.asarray(rho, dtype=float)
        if self.kind == "pogorelov":
            out = kernels.deviation_eval(arr, self.a)[k]
        elif self.kind == "flat":
            out = np.zeros_like(arr)
        else:
            flat_part = arr if k == 0 else _FLAT_DERIVS[k]
            out = _KINDS[self.kind](arr, self.a, k) - flat_part
        if np.isscalar(rho) or arr.ndim == 0:
            return float(np.asarray(out).item())
        return out

    def __repr__(self):
        return f"RadialProfile(kind={self.kind!r}, a={self.a!r})"


def make_pogorelov_profile(a: float) -> RadialProfile:
    """Bump-family profile: flat to a/2, degree-six polynomial bump to a."""
    if not (isinstance(a, (int, float)) and math.isfinite(a) and a > 0):
        raise ParameterError(f"disc radius a must be a positive finite real, got {a!r}")
    a = float(a)
    return RadialProfile(kind="pogorelov", a=a, flat_radius=0.5 * a,
                         singular_edge=0.75 * a)


def make_flat_profile(a: float = 1.0) -> RadialProfile:
    """Euclidean profile f(rho) = rho (identically flat metric)."""
    if a <= 0:
        raise ParameterError(f"domain radius must be positive, got {a!r}")
    return RadialProfile(kind="flat", a=float(a), flat_radius=float(a))


def make_sphere_profile(a: float = math.pi) -> RadialProfile:
    """Unit-sphere profile f(rho) = sin(rho), constant curvature +1."""
    if not 0 < a <= math.pi:
        raise ParameterError(f"sphere profile needs 0 < a <= pi, got {a!r}")
    return RadialProfile(kind="sphere", a=float(a), flat_radius=0.0)


def make_sinh_profile(a: float = 2.0) -> RadialProfile:
    """Hyperbolic profile f(rho) = sinh(rho), constant curvature -1."""
    if a <= 0:
        raise ParameterError(f"domain radius must be positive, got {a!r}")
    return RadialProfile(kind="sinh", a=float(a), flat_radius=0.0)


# ---------------------------------------------------------------------------
# smoothness diagnostics


@dataclasses.dataclass(frozen=True)
class SmoothnessRow:
    order: int
    left_exact: float
    right_exact: float
    left_fd: float
    right_fd: float

    @property
    def jump(self) -> float:
        """Magnitude of the one-sided mismatch, from exact branch values."""
        return abs(self.right_exact - self.left_exact)

    @property
    def jump_signed(self) -> float:
        return self.right_exact - self.left_exact

    @property
    def fd_error(self) -> float:
        return max(abs(self.left_fd - self.left_exact),
                   abs(self.right_fd - self.right_exact))


@dataclasses.dataclass(frozen=True)
class SmoothnessReport:
    rho0: float
    h_min: float
    rows: tuple  # SmoothnessRow per order 0..3

    def jump(self, k: int) -> float:
        return self.rows[k].jump


def _one_sided_exact(p: RadialProfile, rho0: float, side: int):
    """Exact one-sided limits of f, f', f'', f''' at rho0 from branch formulas."""
    if p.kind != "pogorelov":
        return tuple(p.eval(rho0, k) for k in range(4))
    a = p.a
    half = 0.5 * a
    # which branch applies on the chosen side of rho0
    on_bump = (half < rho0 < a) or (rho0 == half and side > 0) or (rho0 == a and side < 0)
    if not on_bump:
        return (rho0, 1.0, 0.0, 0.0)
    u = rho0 - a
    v = rho0 - half
    f0 = rho0 + a * u**3 * v**3
    f1 = 1.0 + 3.0 * a * u**2 * v**2 * (2.0 * rho0 - 1.5 * a)
    f2 = 6.0 * a * u * v * (u**2 + 3.0 * u * v + v**2)
    f3 = 6.0 * a * (v**3 + 9.0 * u * v**2 + 9.0 * u**2 * v + u**3)
    return (f0, f1, f2, f3)


_FD_STENCILS = {
    # one-sided nodes 0..4 in units of h, O(h^2) truncation
    1: ((-1.5, 2.0, -0.5), 1),
    2: ((2.0, -5.0, 4.0, -1.0), 2),
    3: ((-2.5, 9.0, -12.0, 7.0, -1.5), 3),
}


def _one_sided_fd(p: RadialProfile, rho0: float, side: int, h: float, k: int) -> float:
    """One-sided finite-difference estimate of the k-th derivative.

    Differences the reduced profile (f minus identity) and restores the flat
    part exactly, which keeps high-order differences free of cancellation.
    """
    if k == 0:
        # limit of the (continuous) value from one side
        return float(p.eval(rho0 + side * h, 0))
    coeffs, power = _FD_STENCILS[k]
    nodes = rho0 + side * h * np.arange(len(coeffs), dtype=float)
    red = np.asarray(p.eval_reduced(nodes, 0), dtype=float)
    est = float(np.dot(coeffs, red)) / (side * h) ** power
    flat_part = _FLAT_DERIVS[k]
    return est + flat_part


def _richardson(seq, order0: int):
    """Eliminate the two leading error orders from a step-halving sequence."""
    seq = list(seq)
    p = order0
    for _ in range(2):
        w = 2.0 ** p
        seq = [(w * b - a) / (w - 1.0) for a, b in zip(seq, seq[1:])]
        p += 1
    return seq[-1]


def smoothness_report(p: RadialProfile, rho0: float, h_min: float = None) -> SmoothnessReport:
    """One-sided limit table for f through f''' at rho0.

    Each order carries the exact branch values and Richardson-extrapolated
    finite-difference estimates from each side; the jump per order is taken
    from the exact values.
    """
    if h_min is None:
        h_min = 1e-5 * p.a
    if h_min <= 0:
        raise ParameterError(f"h_min must be positive, got {h_min}")
    if not (0.0 < rho0 < p.a):
        raise DomainError(f"rho0={rho0} is not interior to [0, {p.a})")
    reach = 16.0 * h_min  # largest stencil offset used below
    if rho0 - reach < 0.0 or rho0 + reach >= p.a:
        raise DomainError(
            f"h_min={h_min} too large: stencils would leave [0, {p.a}) around rho0={rho0}")
    rows = []
    for k in range(4):
        order0 = 1 if k == 0 else 2
        est = {}
        for side in (-1, +1):
            seq = [_one_sided_fd(p, rho0, side, h_min * (2.0 ** (2 - j)), k)
                   for j in range(3)]
            est[side] = _richardson(seq, order0)
        ex_l = _one_sided_exact(p, rho0, -1)[k]
        ex_r = _one_sided_exact(p, rho0, +1)[k]
        rows.append(SmoothnessRow(order=k, left_exact=float(ex_l), right_exact=float(ex_r),
                                  left_fd=est[-1], right_fd=est[+1]))
    return SmoothnessReport(rho0=float(rho0), h_min=float(h_min), rows=tuple(rows))


# ---------------------------------------------------------------------------
# embeddable window


def embeddable_window(p: RadialProfile, grid_n: int = 1024) -> list:
    """Maximal sub-intervals of (0, a) where f'(rho) < 1.

    Interval ends interior to the domain are located by bisection to relative
    tolerance 1e-12 * a; ends at the domain boundary are reported as 0 or a.
    """
    if grid_n < 100:
        raise ParameterError(f"grid_n must be >= 100, got {grid_n}")
    a = p.a
    grid = a * (np.arange(grid_n, dtype=float) + 0.5) / grid_n
    below = np.asarray(p.eval_reduced(grid, 1)) < 0.0  # f' - 1 < 0

    def refine(lo: float, hi: float) -> float:
        # invariant: predicate differs at lo and hi
        plo = bool(p.eval_reduced(lo, 1) < 0.0)
        tol = 1e-12 * a
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if bool(p.eval_reduced(mid, 1) < 0.0) == plo:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    intervals = []
    i = 0
    while i < grid_n:
        if not below[i]:
            i += 1
            continue
        j = i
        while j + 1 < grid_n and below[j + 1]:
            j += 1
        lo = 0.0 if i == 0 else refine(grid[i - 1], grid[i])
        hi = float(a) if j == grid_n - 1 else refine(grid[j], grid[j + 1])
        intervals.append((lo, hi))
        i = j + 1
    return intervals
