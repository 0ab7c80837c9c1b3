"""Numerical labs for the supporting lemmas behind the construction.

Four independent checkers: a second-derivative bound for convex graphs on a
rectangle, the 1/(s+B) law for the nonzero principal curvature along rulings
of developable surfaces, two-sided sagitta estimates for circular arcs, and
an affine-segment detector for mapped discs.
"""
from __future__ import annotations

import dataclasses
import math
from typing import Callable, Optional

import numpy as np

from .exceptions import (CaseRejectedError, DomainError,
                         GeneratorExhaustedError, ParameterError)
from .serialize import write_json

# ---------------------------------------------------------------------------
# convex graphs z(x, y) on [-c, c] x [0, b] with a flat edge on y = 0


@dataclasses.dataclass
class ConvexCase:
    """Convex graph on [-c, c] x [0, b], flat along the y = 0 edge.

    z, hess, grad are callables of broadcastable (x, y). m and M are filled
    by validation with the extremes of z_yy over the sample grid.
    """

    c: float
    b: float
    z: Callable
    hess: Callable
    grad: Optional[Callable] = None
    label: str = "case"
    terms: Optional[dict] = None
    m: Optional[float] = None
    M: Optional[float] = None
    validated: bool = False

    def grid(self, n: int = 64):
        x = np.linspace(-self.c, self.c, n)
        y = np.linspace(0.0, self.b, n)
        return np.meshgrid(x, y, indexing="ij")


def validate_case(case: ConvexCase, grid_n: int = 64, eig_floor: float = -1e-10) -> ConvexCase:
    """Check the hypotheses on a sample grid; reject with the violated one.

    Hypotheses: Hessian positive semidefinite (smallest eigenvalue above
    eig_floor) everywhere, and vanishing gradient along the y = 0 edge.
    Fills case.m / case.M with the range of z_yy.
    """
    X, Y = case.grid(grid_n)
    zxx, zxy, zyy = case.hess(X, Y)
    zxx = np.broadcast_to(np.asarray(zxx, dtype=float), X.shape)
    zxy = np.broadcast_to(np.asarray(zxy, dtype=float), X.shape)
    zyy = np.broadcast_to(np.asarray(zyy, dtype=float), X.shape)
    tr = zxx + zyy
    det = zxx * zyy - zxy * zxy
    disc = np.sqrt(np.maximum(tr * tr - 4.0 * det, 0.0))
    lam_min = 0.5 * (tr - disc)
    k = int(np.argmin(lam_min))
    if lam_min.flat[k] < eig_floor:
        raise CaseRejectedError(
            f"{case.label}: Hessian not positive semidefinite at "
            f"(x, y) = ({X.flat[k]:.6g}, {Y.flat[k]:.6g}); "
            f"smallest eigenvalue {lam_min.flat[k]:.3e}")
    xs = X[:, 0]
    if case.grad is not None:
        gx, gy = case.grad(xs, np.zeros_like(xs))
    else:
        h = 1e-7 * max(case.b, case.c)
        gx = (np.asarray(case.z(xs + h, 0.0)) - np.asarray(case.z(xs - h, 0.0))) / (2.0 * h)
        gy = (np.asarray(case.z(xs, h)) - np.asarray(case.z(xs, 0.0))) / h
    scale = max(float(np.max(np.abs(zyy))) * case.b, 1e-12)
    worst = float(np.max(np.abs(np.asarray(gx)) + np.abs(np.asarray(gy))))
    tol = 1e-10 * scale if case.grad is not None else 1e-5 * scale
    if worst > tol:
        raise CaseRejectedError(
            f"{case.label}: gradient does not vanish along the y = 0 edge "
            f"(max |grad| = {worst:.3e})")
    case.m = float(np.min(zyy))
    case.M = float(np.max(zyy))
    case.validated = True
    return case


@dataclasses.dataclass(frozen=True)
class BoundCheck:
    label: str
    c: float
    b: float
    m: float
    M: float
    lhs: float       # min over x of z_xx(x, b)
    rhs: float       # (M - m) b^2 / c^2
    passed: bool

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs if self.rhs > 0.0 else (0.0 if self.lhs <= 0.0 else math.inf)


def convex_bound_check(case: ConvexCase, grid_n: int = 64) -> BoundCheck:
    """min_x z_xx(x, b) <= (M - m) b^2 / c^2 for a validated case.

    The 1e-9 additive slack absorbs rounding in cases that meet the bound
    with equality.
    """
    if not case.validated:
        validate_case(case, grid_n)
    x = np.linspace(-case.c, case.c, grid_n)
    zxx, _, _ = case.hess(x, np.full_like(x, case.b))
    lhs = float(np.min(np.broadcast_to(np.asarray(zxx, dtype=float), x.shape)))
    rhs = (case.M - case.m) * case.b * case.b / (case.c * case.c)
    return BoundCheck(label=case.label, c=case.c, b=case.b, m=case.m, M=case.M,
                      lhs=lhs, rhs=rhs, passed=bool(lhs <= rhs + 1e-9))


def generate_convex_cases(seed: int, count: int, c: float = 1.0, b: float = 0.3) -> list:
    """Random convex cases z = int_0^y int_0^t w(x, s) ds dt.

    w is a trigonometric polynomial in x with y-polynomial coefficients,
    shifted by a constant; candidates are kept only if the full Hessian of z
    passes the positive-semidefiniteness screen on a 64 x 64 grid. Raises
    when more than 99% of candidates are rejected.
    """
    if count < 1:
        raise ParameterError(f"count must be positive, got {count}")
    if c <= 0 or b <= 0:
        raise ParameterError("c and b must be positive")
    rng = np.random.default_rng(seed)
    out = []
    tried = 0
    while len(out) < count:
        tried += 1
        if tried >= 400 and len(out) < 0.01 * tried:
            raise GeneratorExhaustedError(
                f"rejection rate above 99% after {tried} candidates "
                f"({len(out)} accepted)")
        if tried > 1000 * count + 1000:
            raise GeneratorExhaustedError(
                f"gave up after {tried} candidates ({len(out)} accepted)")
        n_terms = int(rng.choice([1, 1, 2, 3]))
        base = float(rng.uniform(0.5, 2.0))
        terms = []
        for _ in range(n_terms):
            amp = float(rng.uniform(-1.0, 1.0)) * base / n_terms
            # absolute log-uniform frequency: z_xx >= 0 forces one cosine
            # sign across [-c, c], so wide windows reject far more candidates
            freq = math.pi * float(np.exp(rng.uniform(math.log(0.05), math.log(3.0))))
            phase = float(rng.uniform(0.0, 2.0 * math.pi))
            p0 = float(rng.uniform(0.2, 1.0))
            p2 = float(rng.uniform(-1.0, 1.0)) / (b * b)
            terms.append((amp, freq, phase, p0, p2))
        scale = float(10.0 ** rng.uniform(-1.0, 2.0))
        case = _case_from_terms(c, b, base, terms, scale,
                                label=f"gen-{seed}-{len(out)}")
        try:
            validate_case(case)
        except CaseRejectedError:
            continue
        out.append(case)
    return out


def _case_from_terms(c, b, base, terms, scale, label):
    """Assemble the double integral of w(x, y) = base + sum of
    amp cos(freq x + phase) (p0 + p2 y^2) in closed form."""

    def w(x, y):
        acc = np.full(np.broadcast(np.asarray(x), np.asarray(y)).shape, base, dtype=float)
        for amp, freq, phase, p0, p2 in terms:
            acc = acc + amp * np.cos(freq * np.asarray(x) + phase) * (p0 + p2 * np.asarray(y) ** 2)
        return scale * acc

    def z(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        acc = base * y * y / 2.0
        for amp, freq, phase, p0, p2 in terms:
            acc = acc + amp * np.cos(freq * x + phase) * (p0 * y * y / 2.0 + p2 * y ** 4 / 12.0)
        return scale * acc

    def grad(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        gx = np.zeros(np.broadcast(x, y).shape, dtype=float)
        gy = base * y
        for amp, freq, phase, p0, p2 in terms:
            gx = gx + amp * (-freq) * np.sin(freq * x + phase) * (p0 * y * y / 2.0 + p2 * y ** 4 / 12.0)
            gy = gy + amp * np.cos(freq * x + phase) * (p0 * y + p2 * y ** 3 / 3.0)
        return scale * gx, scale * np.broadcast_to(gy, gx.shape)

    def hess(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        shape = np.broadcast(x, y).shape
        zxx = np.zeros(shape, dtype=float)
        zxy = np.zeros(shape, dtype=float)
        zyy = np.full(shape, base, dtype=float)
        for amp, freq, phase, p0, p2 in terms:
            co = np.cos(freq * x + phase)
            si = np.sin(freq * x + phase)
            zxx = zxx + amp * (-freq * freq) * co * (p0 * y * y / 2.0 + p2 * y ** 4 / 12.0)
            zxy = zxy + amp * (-freq) * si * (p0 * y + p2 * y ** 3 / 3.0)
            zyy = zyy + amp * co * (p0 + p2 * y * y)
        return scale * zxx, scale * zxy, scale * zyy

    return ConvexCase(c=float(c), b=float(b), z=z, hess=hess, grad=grad, label=label,
                      terms={"base": base, "scale": scale, "terms": [list(t) for t in terms]})


@dataclasses.dataclass(frozen=True)
class ConvexSuiteResult:
    checks: tuple
    cases: tuple

    @property
    def failures(self):
        return tuple(ch for ch in self.checks if not ch.passed)

    @property
    def max_ratio(self) -> float:
        return max((ch.ratio for ch in self.checks), default=0.0)


def run_convex_suite(seeds, count: int, c: float = 1.0, b: float = 0.3) -> ConvexSuiteResult:
    """Bound checks over generated cases for several seeds."""
    checks = []
    cases = []
    for seed in seeds:
        for case in generate_convex_cases(int(seed), count, c, b):
            checks.append(convex_bound_check(case))
            cases.append(case)
    return ConvexSuiteResult(checks=tuple(checks), cases=tuple(cases))


def archive_failures(checks, cases, path, grid_n: int = 64) -> int:
    """Write failing bound checks with their full sampled field to JSON."""
    by_label = {case.label: case for case in cases}
    entries = []
    for ch in checks:
        if ch.passed:
            continue
        case = by_label.get(ch.label)
        entry = {
            "label": ch.label, "c": ch.c, "b": ch.b, "m": ch.m, "M": ch.M,
            "lhs": ch.lhs, "rhs": ch.rhs,
        }
        if case is not None:
            X, Y = case.grid(grid_n)
            entry["terms"] = case.terms
            entry["z_grid"] = np.asarray(case.z(X, Y), dtype=float).tolist()
        entries.append(entry)
    write_json(path, {"failures": entries, "grid_n": grid_n})
    return len(entries)


# ---------------------------------------------------------------------------
# rulings of developable surfaces: k(s) = A / (s + B)


@dataclasses.dataclass(frozen=True)
class RuledSample:
    surface: str
    params: dict
    s: np.ndarray        # arclength along the ruling, from the first sample
    k: np.ndarray        # nonzero principal curvature at each sample
    K_max: float         # largest |Gauss curvature| seen (should be ~0)


def _second_form_curvature(E, F, G, L, M, N):
    """(Gauss K, nonzero principal curvature 2H) for a developable patch."""
    den = E * G - F * F
    K = (L * N - M * M) / den
    H2 = (E * N - 2.0 * F * M + G * L) / den  # = 2H = k1 + k2
    return K, H2


def _fd_forms(surface, u, v, h):
    """Fundamental forms via central differences of the parametrization.

    O(h^2) truncation; used by the builders' method="fd" path so refinement
    studies have an actual discretization error to measure.
    """
    u = np.asarray(u, dtype=float)
    v = np.full_like(u, v) if np.ndim(v) == 0 else np.asarray(v, dtype=float)
    Xu = (surface(u + h, v) - surface(u - h, v)) / (2.0 * h)
    Xv = (surface(u, v + h) - surface(u, v - h)) / (2.0 * h)
    X0 = surface(u, v)
    Xuu = (surface(u + h, v) - 2.0 * X0 + surface(u - h, v)) / (h * h)
    Xvv = (surface(u, v + h) - 2.0 * X0 + surface(u, v - h)) / (h * h)
    Xuv = (surface(u + h, v + h) - surface(u + h, v - h)
           - surface(u - h, v + h) + surface(u - h, v - h)) / (4.0 * h * h)
    nrm = np.cross(Xu, Xv)
    nrm = nrm / np.linalg.norm(nrm, axis=-1, keepdims=True)
    dot = lambda A, B: np.sum(A * B, axis=-1)
    return (dot(Xu, Xu), dot(Xu, Xv), dot(Xv, Xv),
            dot(Xuu, nrm), dot(Xuv, nrm), dot(Xvv, nrm))


def cylinder_ruling(R: float = 1.0, length: float = 1.0, n: int = 1000,
                    method: str = "analytic") -> RuledSample:
    """Generator of a right circular cylinder of radius R (k = 1/R)."""
    if R <= 0 or length <= 0 or n < 2:
        raise ParameterError("need R > 0, length > 0, n >= 2")
    s = np.linspace(0.0, length, n)
    # X(u, v) = (R cos(v/R), R sin(v/R), u) with the inward normal
    if method == "fd":
        def surf(u, v):
            return np.stack([R * np.cos(v / R), R * np.sin(v / R), u], axis=-1)
        forms = _fd_forms(surf, s, 0.3 * R, length / n)
    elif method == "analytic":
        one = np.ones_like(s)
        zero = np.zeros_like(s)
        forms = (one, zero, one, zero, zero, np.full_like(s, 1.0 / R))
    else:
        raise ParameterError(f"method must be 'analytic' or 'fd', got {method!r}")
    K, k = _second_form_curvature(*forms)
    return RuledSample(surface="cylinder", params={"R": R, "length": length},
                       s=s, k=k, K_max=float(np.max(np.abs(K))))


def cone_ruling(half_angle: float = 0.5, s0: float = 0.5, s1: float = 1.5,
                n: int = 1000, method: str = "analytic") -> RuledSample:
    """Slant generator of a cone sampled at distances s0..s1 from the apex.

    k(t) = cot(alpha)/t at apex distance t, so with s = t - s0 the fit
    recovers A = cot(alpha), B = s0.
    """
    if not 0.0 < half_angle < 0.5 * math.pi:
        raise ParameterError("half_angle must be in (0, pi/2)")
    if not 0.0 < s0 < s1:
        raise ParameterError("need 0 < s0 < s1")
    if n < 2:
        raise ParameterError("n must be >= 2")
    t = np.linspace(s0, s1, n)
    sa, ca = math.sin(half_angle), math.cos(half_angle)
    # X(t, phi) = t (sa cos phi, sa sin phi, ca)
    if method == "fd":
        def surf(u, v):
            return np.stack([u * sa * np.cos(v), u * sa * np.sin(v), u * ca], axis=-1)
        forms = _fd_forms(surf, t, 0.4, (s1 - s0) / n)
    elif method == "analytic":
        one = np.ones_like(t)
        zero = np.zeros_like(t)
        forms = (one, zero, (t * sa) ** 2, zero, zero, t * sa * ca)
    else:
        raise ParameterError(f"method must be 'analytic' or 'fd', got {method!r}")
    K, k = _second_form_curvature(*forms)
    return RuledSample(surface="cone", params={"half_angle": half_angle, "s0": s0, "s1": s1},
                       s=t - s0, k=k, K_max=float(np.max(np.abs(K))))


def tangent_developable_ruling(R: float = 1.0, pitch: float = 0.5,
                               w0: float = 0.2, w1: float = 1.2,
                               n: int = 1000, method: str = "analytic") -> RuledSample:
    """Ruling of the tangent developable of a helix (k = -tau/(kappa w)).

    The surface is gamma(t) + w T(t) for the unit-speed helix with radius R
    and pitch parameter p; along a ruling the arclength is w itself, so the
    law has B equal to the starting offset w0.
    """
    if R <= 0 or pitch == 0.0:
        raise ParameterError("need R > 0 and nonzero pitch")
    if not 0.0 < w0 < w1 or n < 2:
        raise ParameterError("need 0 < w0 < w1 and n >= 2")
    c2 = R * R + pitch * pitch
    c = math.sqrt(c2)
    kappa = R / c2
    tau = pitch / c2
    w = np.linspace(w0, w1, n)
    if method == "fd":
        def surf(u, v):
            # v is arclength along the helix, u the offset along the tangent
            gamma = np.stack([R * np.cos(v / c), R * np.sin(v / c), pitch * v / c], axis=-1)
            T = np.stack([-R / c * np.sin(v / c), R / c * np.cos(v / c),
                          np.full_like(np.asarray(v, dtype=float), pitch / c)], axis=-1)
            return gamma + np.asarray(u)[..., None] * T
        forms = _fd_forms(surf, w, 0.7, (w1 - w0) / n)
    elif method == "analytic":
        one = np.ones_like(w)
        zero = np.zeros_like(w)
        forms = (1.0 + (w * kappa) ** 2, one, one, -w * kappa * tau, zero, zero)
    else:
        raise ParameterError(f"method must be 'analytic' or 'fd', got {method!r}")
    K, k = _second_form_curvature(*forms)
    return RuledSample(surface="tangent_developable",
                       params={"R": R, "pitch": pitch, "w0": w0, "w1": w1},
                       s=w - w0, k=k, K_max=float(np.max(np.abs(K))))


@dataclasses.dataclass(frozen=True)
class RulingFit:
    A: float
    B: float
    max_residual: float      # max |1/k - (s + B)/A| over the samples
    slope: float
    intercept: float
    n: int

    def __iter__(self):
        return iter((self.A, self.B, self.max_residual))


def ruling_curvature_fit(sample: RuledSample) -> RulingFit:
    """Fit 1/k linear in s; the law k = A/(s+B) makes 1/k = s/A + B/A.

    Rejects samples whose nonzero curvature changes sign or vanishes, since
    the law presumes nonvanishing mean curvature along the ruling. Constant
    k is reported as A = inf with B = nan.
    """
    k = sample.k
    if np.any(k == 0.0) or float(np.min(k)) * float(np.max(k)) < 0.0:
        raise CaseRejectedError(
            f"{sample.surface}: principal curvature vanishes or changes sign "
            "along the ruling; nonvanishing mean curvature hypothesis fails")
    invk = 1.0 / k
    s = sample.s
    A_mat = np.stack([s, np.ones_like(s)], axis=1)
    coef, *_ = np.linalg.lstsq(A_mat, invk, rcond=None)
    slope, intercept = float(coef[0]), float(coef[1])
    resid = float(np.max(np.abs(invk - (slope * s + intercept))))
    span = float(np.max(np.abs(invk)))
    if abs(slope) * float(s[-1] - s[0]) <= 1e-12 * span:
        return RulingFit(A=math.inf, B=math.nan, max_residual=resid,
                         slope=slope, intercept=intercept, n=int(s.size))
    A = 1.0 / slope
    B = intercept * A
    return RulingFit(A=A, B=B, max_residual=resid, slope=slope,
                     intercept=intercept, n=int(s.size))


# ---------------------------------------------------------------------------
# sagitta bounds


class Sagitta(float):
    """Sagitta value carrying the two-sided bound flags."""

    lower_ok: bool
    upper_ok: bool

    def __new__(cls, value: float, lower_ok: bool, upper_ok: bool):
        obj = super().__new__(cls, value)
        obj.lower_ok = bool(lower_ok)
        obj.upper_ok = bool(upper_ok)
        return obj


def sagitta(a: float, c: float) -> Sagitta:
    """Depth a/2 - sqrt(a^2/4 - c^2) of a chord of half-width c in a circle
    of diameter a, with the bracket c^2/a < sagitta <= 2 c^2/a.

    Evaluated as c^2 / (a/2 + sqrt(a^2/4 - c^2)), which is exact at c = 0
    and free of subtractive cancellation for small c.
    """
    if a <= 0:
        raise ParameterError(f"diameter a must be positive, got {a}")
    if not 0.0 <= c < 0.5 * a:
        raise DomainError(f"half-width must satisfy 0 <= c < a/2, got c={c}")
    root = math.sqrt(0.25 * a * a - c * c)
    value = (c * c) / (0.5 * a + root)
    lower = (c * c) / a
    upper = 2.0 * (c * c) / a
    slack = 1e-12 * max(value, lower, 1e-300)
    return Sagitta(value, lower_ok=value >= lower - slack,
                   upper_ok=value <= upper + slack)


# ---------------------------------------------------------------------------
# affine segments of mapped discs


@dataclasses.dataclass(frozen=True)
class MappedDisc:
    """Disc in the parameter plane with a mapping into R^3.

    boundary holds (N, 2) parameter points on the rim; points/triangles give
    a triangulation of the sampled disc; the map is evaluated exactly via
    eval on any (M, 2) batch of parameter points.
    """

    label: str
    radius: float
    boundary: np.ndarray
    points: np.ndarray
    triangles: np.ndarray
    eval: Callable

    def mapped_boundary(self) -> np.ndarray:
        return self.eval(self.boundary)


def _disc_samples(radius: float, n_boundary: int, n_rings: int):
    """Polar triangulation of the disc: rings of n_boundary points."""
    pts = [np.zeros((1, 2))]
    for j in range(1, n_rings + 1):
        r = radius * j / n_rings
        th = 2.0 * math.pi * (np.arange(n_boundary) + 0.5 * (j % 2)) / n_boundary
        pts.append(np.stack([r * np.cos(th), r * np.sin(th)], axis=1))
    points = np.concatenate(pts)
    tris = []
    for i in range(n_boundary):
        tris.append((0, 1 + i, 1 + (i + 1) % n_boundary))
    for j in range(1, n_rings):
        b0 = 1 + (j - 1) * n_boundary
        b1 = 1 + j * n_boundary
        for i in range(n_boundary):
            ip = (i + 1) % n_boundary
            tris.append((b0 + i, b1 + i, b1 + ip))
            tris.append((b0 + i, b1 + ip, b0 + ip))
    boundary = points[-n_boundary:]
    return boundary, points, np.asarray(tris, dtype=np.int64)


def _rigid(frame):
    """(origin, e1, e2, e3) orthonormal placement; defaults to identity."""
    if frame is None:
        return (np.zeros(3), np.eye(3))
    origin, basis = frame
    basis = np.asarray(basis, dtype=float)
    if basis.shape != (3, 3):
        raise ParameterError("frame basis must be a 3x3 matrix")
    if not np.allclose(basis @ basis.T, np.eye(3), atol=1e-12):
        raise ParameterError("frame basis must be orthonormal")
    return (np.asarray(origin, dtype=float), basis)


def planar_disc(radius: float = 0.2, n_boundary: int = 64, n_rings: int = 8,
                frame=None) -> MappedDisc:
    """Isometric planar embedding; every chord maps to a straight segment.

    This is exactly the inner flat disc of the revolution surface when
    radius < a/2.
    """
    origin, basis = _rigid(frame)
    boundary, points, tris = _disc_samples(radius, n_boundary, n_rings)

    def ev(p):
        p = np.asarray(p, dtype=float)
        return origin + p[..., 0, None] * basis[0] + p[..., 1, None] * basis[1]

    return MappedDisc(label="planar", radius=radius, boundary=boundary,
                      points=points, triangles=tris, eval=ev)


def cylinder_patch(R: float = 1.0, radius: float = 0.5, n_boundary: int = 64,
                   n_rings: int = 8, frame=None) -> MappedDisc:
    """Isometric rolling of the disc onto a cylinder of radius R.

    Chords parallel to the parameter u-axis are rulings and stay affine;
    generic chords bend.
    """
    if radius >= math.pi * R:
        raise ParameterError("patch must not wrap around the cylinder")
    origin, basis = _rigid(frame)
    boundary, points, tris = _disc_samples(radius, n_boundary, n_rings)

    def ev(p):
        p = np.asarray(p, dtype=float)
        u = p[..., 0]
        v = p[..., 1]
        local = np.stack([u, R * np.sin(v / R), R * (1.0 - np.cos(v / R))], axis=-1)
        return origin + local @ basis

    return MappedDisc(label="cylinder", radius=radius, boundary=boundary,
                      points=points, triangles=tris, eval=ev)


def sphere_cap(R: float = 1.0, radius: float = 0.5, n_boundary: int = 64,
               n_rings: int = 8, frame=None) -> MappedDisc:
    """Orthographic lift of the disc to a sphere of radius R (not isometric;
    strictly convex, so no mapped chord is affine)."""
    if radius >= R:
        raise ParameterError("cap must satisfy radius < R")
    origin, basis = _rigid(frame)
    boundary, points, tris = _disc_samples(radius, n_boundary, n_rings)

    def ev(p):
        p = np.asarray(p, dtype=float)
        u = p[..., 0]
        v = p[..., 1]
        w = np.sqrt(R * R - u * u - v * v) - R
        local = np.stack([u, v, w], axis=-1)
        return origin + local @ basis

    return MappedDisc(label="sphere_cap", radius=radius, boundary=boundary,
                      points=points, triangles=tris, eval=ev)


@dataclasses.dataclass(frozen=True)
class Chord:
    i: int
    j: int
    p_i: tuple
    p_j: tuple
    length: float
    deviation: float


def affine_segment_detect(disc: MappedDisc, tol: float = 1e-9,
                          n_chord: int = 65) -> list:
    """Boundary chords whose image stays within tol * length of the affine
    interpolation of its endpoint images, sorted by length.

    Checks every boundary pair with n_chord samples per chord; the map is
    evaluated on the straight parameter segment and compared to the straight
    space segment.
    """
    if tol <= 0:
        raise ParameterError("tol must be positive")
    if n_chord < 3:
        raise ParameterError("n_chord must be >= 3")
    B = disc.boundary
    nb = B.shape[0]
    ii, jj = np.triu_indices(nb, k=1)
    t = np.linspace(0.0, 1.0, n_chord)[None, :, None]
    seg = (1.0 - t) * B[ii][:, None, :] + t * B[jj][:, None, :]
    img = disc.eval(seg.reshape(-1, 2)).reshape(len(ii), n_chord, 3)
    aff = (1.0 - t) * img[:, :1, :] + t * img[:, -1:, :]
    dev = np.max(np.linalg.norm(img - aff, axis=2), axis=1)
    lengths = np.linalg.norm(B[jj] - B[ii], axis=1)
    keep = dev <= tol * lengths
    chords = [Chord(i=int(a), j=int(b), p_i=tuple(map(float, B[a])),
                    p_j=tuple(map(float, B[b])), length=float(L), deviation=float(d))
              for a, b, L, d in zip(ii[keep], jj[keep], lengths[keep], dev[keep])]
    chords.sort(key=lambda ch: (ch.length, ch.i, ch.j))
    return chords


def chords_in_smaller_side(disc: MappedDisc, chord: Chord, chords: list) -> list:
    """Chords from the list whose endpoints both lie strictly inside the
    smaller of the two parts the given chord cuts from the disc."""
    p = np.asarray(chord.p_i)
    q = np.asarray(chord.p_j)
    d = q - p
    nrm = np.array([-d[1], d[0]])

    def side(pt):
        return float(nrm @ (np.asarray(pt) - p))

    samples = disc.points
    signs = (samples - p) @ nrm
    smaller_sign = 1.0 if np.sum(signs > 0) <= np.sum(signs < 0) else -1.0
    out = []
    for ch in chords:
        si, sj = side(ch.p_i), side(ch.p_j)
        if si * smaller_sign > 0 and sj * smaller_sign > 0:
            out.append(ch)
    return out
