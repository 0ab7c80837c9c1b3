"""Isometric embedding of radial metrics as surfaces of revolution.

With f' <= 1 the metric d rho^2 + f^2 d theta^2 embeds as
(f(rho) cos theta, f(rho) sin theta, z(rho)) where z' = sqrt(1 - f'^2).
For the bump family the window is rho < 3a/4: there f' < 1 holds past the
flat disc, z'' stays bounded but jumps at rho = a/2, so the surface is
C^{1,1} and not C^2. The integrand has a sqrt zero at 3a/4, handled by a
change of variable in the panels that approach it.
"""
from __future__ import annotations

import dataclasses
import math
from typing import Optional

import numpy as np
from scipy.integrate import quad

from .exceptions import ConfigurationError, ConsistencyError, DomainError, ParameterError
from .profile import RadialProfile
from .serialize import fmt17, write_csv


def _dz(p: RadialProfile, rho):
    """z'(rho) = sqrt(1 - f'^2), evaluated without cancellation.

    1 - f'^2 = -d(2 + d) where d = f' - 1 is the reduced first derivative.
    """
    d = np.asarray(p.eval_reduced(rho, 1), dtype=float)
    rad = -(d * (2.0 + d))
    if np.any(rad < 0.0):
        raise ConsistencyError("negative radicand: |f'| > 1 inside the requested window")
    # +0.0 turns the signed zero from sqrt(-0.0) into plain 0
    return np.sqrt(rad) + 0.0


def _zpp(p: RadialProfile, rho):
    """z''(rho) = -f' f'' / z' where z' > 0 (not valid at z' = 0)."""
    rho = np.asarray(rho, dtype=float)
    d1 = np.asarray(p.eval_reduced(rho, 1), dtype=float)
    d2 = np.asarray(p.eval_reduced(rho, 2), dtype=float)
    return -((1.0 + d1) * d2) / _dz(p, rho)


def _zpp_limit_right(p: RadialProfile, start: float, span: float):
    """Richardson limit of z'' as rho decreases to start (where z' = 0).

    Returns (limit, estimates, extrapolated_tail, converged). Convergence
    demands the last two extrapolants agree to 1e-3 relative.
    """
    h0 = 0.04 * span
    raw = [float(_zpp(p, start + h0 * 0.5 ** j)) for j in range(9)]
    seq = list(raw)
    for order in (1, 2, 3):
        w = 2.0 ** order
        seq = [(w * b - a) / (w - 1.0) for a, b in zip(seq, seq[1:])]
    limit = seq[-1]
    scale = max(abs(limit), 1e-300)
    converged = abs(seq[-1] - seq[-2]) <= 1e-3 * scale
    return limit, raw, seq, converged


@dataclasses.dataclass(frozen=True)
class ProfileCurve:
    """Sampled generator (r(rho), z(rho)) of the surface of revolution."""

    profile: RadialProfile
    rho: np.ndarray
    r: np.ndarray
    z: np.ndarray
    dz: np.ndarray
    d2z_left: np.ndarray
    d2z_right: np.ndarray
    rho_max: float
    quad_error: float

    @property
    def a(self) -> float:
        return self.profile.a

    def __len__(self):
        return self.rho.size

    def to_csv(self, path) -> None:
        write_curve_csv(self, path)


def _window_nodes(start: float, rho_max: float, mid_step: Optional[float]):
    """Sample nodes on (start, rho_max]: geometric clusters at both ends
    (ratio 1.2 from 1e-4 of the window length) and a uniform middle."""
    L = rho_max - start
    h0 = 1e-4 * L
    offs = [h0]
    while offs[-1] * 1.2 < L / 3.0:
        offs.append(offs[-1] * 1.2)
    offs = np.asarray(offs)
    if mid_step is None:
        mid_step = min(float(offs[-1] * 1.2), L / 24.0)
    left = start + offs
    right = rho_max - offs[::-1]
    lo, hi = float(left[-1]), float(right[0])
    n_mid = max(int(math.ceil((hi - lo) / mid_step)) - 1, 0)
    mid = lo + (hi - lo) * np.arange(1, n_mid + 1) / (n_mid + 1)
    nodes = np.concatenate([left, mid, right, [rho_max]])
    return np.unique(nodes)


def integrate_profile(p: RadialProfile, rho_max: float, tol: float = 1e-10,
                      n_flat: int = 17, mid_step: Optional[float] = None) -> ProfileCurve:
    """Cumulative height z(rho) = int_0^rho sqrt(1 - f'^2) on [0, rho_max].

    Adaptive quadrature panel by panel with cumulative absolute error kept
    below tol. Panels approaching a sqrt zero of the integrand (f' -> 1 at
    rho = 3a/4 for the bump family) are integrated in the variable
    u = sqrt(edge - rho), where the integrand is smooth.
    """
    a = p.a
    start = p.flat_radius
    if tol <= 0:
        raise ParameterError(f"tol must be positive, got {tol}")
    if n_flat < 2 and start > 0:
        raise ParameterError(f"n_flat must be >= 2, got {n_flat}")
    if not (start < rho_max < a):
        raise DomainError(
            f"rho_max must lie in ({start}, {a}), got {rho_max}")
    edge = p.singular_edge
    if edge is not None and rho_max >= edge:
        raise DomainError(
            f"rho_max={rho_max} is outside the embeddable window ({start}, {edge}): "
            f"f' returns to 1 at rho = {edge}")

    window = _window_nodes(start, rho_max, mid_step)
    # positivity probe over the whole window, not only the panel ends
    probe = np.linspace(start, rho_max, 4096)
    _dz(p, probe)

    def integrand(rho):
        return float(_dz(p, rho))

    n_panels = window.size
    panel_tol = tol / (2.0 * n_panels)
    z_vals = np.empty(n_panels)
    total_err = 0.0
    acc = 0.0
    lo = start
    for i, hi in enumerate(window):
        if edge is not None and (edge - hi) <= 0.1 * a:
            u_hi = math.sqrt(edge - lo)
            u_lo = math.sqrt(edge - hi)
            val, err = quad(lambda u: 2.0 * u * integrand(edge - u * u),
                            u_lo, u_hi, epsabs=panel_tol, epsrel=1e-12)
        else:
            val, err = quad(integrand, lo, hi, epsabs=panel_tol, epsrel=1e-12)
        acc += val
        total_err += err
        z_vals[i] = acc
        lo = hi
    if total_err > tol:
        raise ConsistencyError(
            f"cumulative quadrature error estimate {total_err:.3e} exceeds tol={tol}")

    if start > 0:
        flat = np.linspace(0.0, start, n_flat)
        rho = np.concatenate([flat, window])
        z = np.concatenate([np.zeros(n_flat), z_vals])
    else:
        rho = np.concatenate([[0.0], window])
        z = np.concatenate([[0.0], z_vals])

    r = np.asarray(p.eval(rho, 0), dtype=float)
    dz = _dz(p, rho)

    span = rho_max - start
    limit_right, _, _, _ = _zpp_limit_right(p, start, span)
    moving = dz > 0.0
    d2z_left = np.zeros_like(rho)
    d2z_right = np.zeros_like(rho)
    d2z_left[moving] = _zpp(p, rho[moving])
    d2z_right[moving] = d2z_left[moving]
    at_start = ~moving & (rho == start)
    d2z_right[at_start] = limit_right
    if start == 0.0:
        d2z_left[at_start] = limit_right  # pole: no left side, report the limit
    return ProfileCurve(profile=p, rho=rho, r=r, z=z, dz=dz,
                        d2z_left=d2z_left, d2z_right=d2z_right,
                        rho_max=float(rho_max), quad_error=float(total_err))


# ---------------------------------------------------------------------------
# one-sided second derivative at the branch point


@dataclasses.dataclass(frozen=True)
class JumpReport:
    """One-sided values of z'' where the flat disc meets the curved annulus."""

    left: float
    right: float
    estimates: tuple
    extrapolated: tuple
    converged: bool

    @property
    def jump(self) -> float:
        return abs(self.right - self.left)

    def __iter__(self):
        return iter((self.left, self.right))


def jump_analysis(curve: ProfileCurve) -> JumpReport:
    """Richardson-extrapolated z''(start+) against the exact flat-side 0.

    A non-converged extrapolation (last two estimates apart by more than
    1e-3 relative) is reported with converged=False rather than raised.
    """
    p = curve.profile
    start = p.flat_radius
    if start <= 0.0:
        raise ConfigurationError("jump analysis needs a profile with a flat inner disc")
    span = curve.rho_max - start
    limit, raw, tail, converged = _zpp_limit_right(p, start, span)
    return JumpReport(left=0.0, right=float(limit), estimates=tuple(raw),
                      extrapolated=tuple(tail), converged=converged)


# ---------------------------------------------------------------------------
# triangulated surface of revolution


@dataclasses.dataclass(frozen=True)
class RevolutionMesh:
    vertices: np.ndarray   # (V, 3) float64
    faces: np.ndarray      # (F, 3) int64, CCW seen from +z above the flat disc
    params: np.ndarray     # (V, 2) generating (rho, theta)
    n_rho: int
    n_theta: int
    a: float
    rho_max: float

    def edge_count(self) -> int:
        e = self.faces[:, [0, 1, 1, 2, 2, 0]].reshape(-1, 2)
        e = np.sort(e, axis=1)
        return int(np.unique(e, axis=0).shape[0])

    def euler_characteristic(self) -> int:
        V = int(self.vertices.shape[0])
        F = int(self.faces.shape[0])
        return V - self.edge_count() + F

    def orientation_consistent(self) -> bool:
        """Every interior edge is traversed once in each direction."""
        seen = {}
        for tri in self.faces:
            for u, v in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
                key = (int(u), int(v))
                if key in seen:
                    return False
                seen[key] = True
        boundary = 0
        for u, v in seen:
            if (v, u) not in seen:
                boundary += 1
        # a disc: boundary edges form one cycle, everything else is paired
        return boundary == self.n_theta

    def boundary_vertex_mask(self) -> np.ndarray:
        return self.params[:, 0] == self.rho_max


def build_mesh(curve: ProfileCurve, n_theta: int = 64) -> RevolutionMesh:
    """Triangle fan at the apex plus quad rings split into triangles."""
    if n_theta < 8:
        raise ParameterError(f"n_theta must be >= 8, got {n_theta}")
    if len(curve) < 3:
        raise ConfigurationError("curve must carry at least 3 samples")
    if curve.rho[0] != 0.0:
        raise ConfigurationError("curve must start at the pole rho = 0")
    m = len(curve) - 1  # rings beyond the apex
    theta = 2.0 * math.pi * np.arange(n_theta) / n_theta
    ct, st = np.cos(theta), np.sin(theta)
    V = 1 + m * n_theta
    verts = np.empty((V, 3))
    params = np.empty((V, 2))
    verts[0] = (0.0, 0.0, curve.z[0])
    params[0] = (0.0, 0.0)
    for j in range(m):
        b = 1 + j * n_theta
        rj, zj = curve.r[j + 1], curve.z[j + 1]
        verts[b:b + n_theta, 0] = rj * ct
        verts[b:b + n_theta, 1] = rj * st
        verts[b:b + n_theta, 2] = zj
        params[b:b + n_theta, 0] = curve.rho[j + 1]
        params[b:b + n_theta, 1] = theta

    faces = []
    i = np.arange(n_theta)
    ip = (i + 1) % n_theta
    ring0 = 1 + i
    faces.append(np.stack([np.zeros(n_theta, dtype=np.int64), ring0, 1 + ip], axis=1))
    for j in range(m - 1):
        A = 1 + j * n_theta + i
        Ap = 1 + j * n_theta + ip
        B = 1 + (j + 1) * n_theta + i
        Bp = 1 + (j + 1) * n_theta + ip
        faces.append(np.stack([A, B, Bp], axis=1))
        faces.append(np.stack([A, Bp, Ap], axis=1))
    faces = np.concatenate(faces).astype(np.int64)
    return RevolutionMesh(vertices=verts, faces=faces, params=params,
                          n_rho=len(curve), n_theta=int(n_theta),
                          a=curve.a, rho_max=curve.rho_max)


def write_obj(mesh: RevolutionMesh, path) -> None:
    """Wavefront OBJ with the construction parameters in the header."""
    lines = ["# pogorelov a=%s rho_max=%s" % (fmt17(mesh.a), fmt17(mesh.rho_max))]
    for v in mesh.vertices:
        lines.append("v %s %s %s" % (fmt17(v[0]), fmt17(v[1]), fmt17(v[2])))
    for f in mesh.faces:
        lines.append("f %d %d %d" % (f[0] + 1, f[1] + 1, f[2] + 1))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def write_curve_csv(curve: ProfileCurve, path) -> None:
    header = ["rho", "r", "z", "dz", "d2z_left", "d2z_right"]
    rows = zip(curve.rho, curve.r, curve.z, curve.dz, curve.d2z_left, curve.d2z_right)
    write_csv(path, header, ((float(a), float(b), float(c), float(d), float(e), float(g))
                             for a, b, c, d, e, g in rows))


# ---------------------------------------------------------------------------
# discrete curvature diagnostics


def discrete_gauss(mesh: RevolutionMesh):
    """Angle-defect Gauss curvature at interior vertices.

    Returns (indices, K) with K = (2 pi - sum of incident angles) divided by
    a third of the incident triangle area.
    """
    F = mesh.faces
    P = mesh.vertices
    defect = np.full(P.shape[0], 2.0 * math.pi)
    area = np.zeros(P.shape[0])
    tri = P[F]  # (F, 3, 3)
    for corner in range(3):
        a = tri[:, corner]
        b = tri[:, (corner + 1) % 3]
        c = tri[:, (corner + 2) % 3]
        u = b - a
        v = c - a
        nu = np.linalg.norm(u, axis=1)
        nv = np.linalg.norm(v, axis=1)
        cosang = np.clip(np.sum(u * v, axis=1) / (nu * nv), -1.0, 1.0)
        np.add.at(defect, F[:, corner], -np.arccos(cosang))
        if corner == 0:
            tarea = 0.5 * np.linalg.norm(np.cross(u, v), axis=1)
        np.add.at(area, F[:, corner], tarea / 3.0)
    interior = ~mesh.boundary_vertex_mask()
    idx = np.nonzero(interior)[0]
    return idx, defect[idx] / area[idx]


def discrete_mean(mesh: RevolutionMesh):
    """Cotangent-Laplacian mean curvature magnitude at interior vertices."""
    F = mesh.faces
    P = mesh.vertices
    lap = np.zeros_like(P)
    area = np.zeros(P.shape[0])
    tri = P[F]
    for corner in range(3):
        a = tri[:, corner]
        b = tri[:, (corner + 1) % 3]
        c = tri[:, (corner + 2) % 3]
        u = b - a
        v = c - a
        cross = np.linalg.norm(np.cross(u, v), axis=1)
        cot = np.sum(u * v, axis=1) / np.maximum(cross, 1e-300)
        # angle at `corner` weights the opposite edge (b, c)
        for tail, head in ((F[:, (corner + 1) % 3], F[:, (corner + 2) % 3]),
                           (F[:, (corner + 2) % 3], F[:, (corner + 1) % 3])):
            np.add.at(lap, tail, 0.5 * cot[:, None] * (P[head] - P[tail]))
        if corner == 0:
            np.add.at(area, F[:, 0], cross / 6.0)
            np.add.at(area, F[:, 1], cross / 6.0)
            np.add.at(area, F[:, 2], cross / 6.0)
    interior = ~mesh.boundary_vertex_mask()
    idx = np.nonzero(interior)[0]
    # lap already carries the half edge weight, so lap/(2A) is H n itself
    Hvec = lap[idx] / (2.0 * area[idx][:, None])
    return idx, np.linalg.norm(Hvec, axis=1)


# ---------------------------------------------------------------------------
# principal curvature scan along the generator


@dataclasses.dataclass(frozen=True)
class MeanCurvatureReport:
    rho: np.ndarray
    k_meridian: np.ndarray
    k_parallel: np.ndarray
    H: np.ndarray
    branch_flagged: bool
    sign_changes: tuple   # (rho_lo, rho_hi) brackets between nonzero signs
    constant_sign: bool

    def rows(self):
        for i in range(self.rho.size):
            yield (float(self.rho[i]), float(self.k_meridian[i]),
                   float(self.k_parallel[i]), float(self.H[i]))


def mean_curvature_scan(curve: ProfileCurve) -> MeanCurvatureReport:
    """Principal curvatures and H = (k_mu + k_pi)/2 at the curve samples.

    k_mu = -f''/z' (meridian), k_pi = z'/f (parallel); at samples with
    z' = 0 or f = 0 the one-sided limits are substituted and flagged.
    """
    p = curve.profile
    rho = curve.rho
    n = rho.size
    k_mu = np.zeros(n)
    k_pi = np.zeros(n)
    flagged = False
    d2 = np.asarray(p.eval_reduced(rho, 2), dtype=float)
    for i in range(n):
        if curve.dz[i] > 0.0:
            k_mu[i] = -d2[i] / curve.dz[i]
        else:
            k_mu[i] = curve.d2z_right[i]
            if rho[i] == p.flat_radius and p.flat_radius > 0.0:
                flagged = True
        if rho[i] > 0.0:
            k_pi[i] = curve.dz[i] / curve.r[i]
        else:
            k_pi[i] = curve.d2z_right[i]
    H = 0.5 * (k_mu + k_pi)
    tol = 1e-12 * float(np.max(np.abs(H))) if n else 0.0
    sign = np.where(np.abs(H) <= tol, 0, np.sign(H)).astype(int)
    nz = np.nonzero(sign)[0]
    changes = []
    for i, j in zip(nz, nz[1:]):
        if sign[i] != sign[j]:
            changes.append((float(rho[i]), float(rho[j])))
    constant = len(changes) == 0
    return MeanCurvatureReport(rho=rho.copy(), k_meridian=k_mu, k_parallel=k_pi, H=H,
                               branch_flagged=flagged, sign_changes=tuple(changes),
                               constant_sign=constant)


# ---------------------------------------------------------------------------
# isometry residual of the parametrized surface


@dataclasses.dataclass(frozen=True)
class MetricResidual:
    max_E: float      # max |E - 1|
    max_F: float      # max |F|
    max_G: float      # max |G - f^2|
    n_rho: int
    n_theta: int
    dz_scale: float

    @property
    def max_residual(self) -> float:
        return max(self.max_E, self.max_F, self.max_G)


def induced_metric_residual(p: RadialProfile, curve: ProfileCurve,
                            n_rho: int = 200, n_theta: int = 64,
                            dz_scale: float = 1.0) -> MetricResidual:
    """First fundamental form of the embedding against the target metric.

    E, F, G are evaluated from the exact derivative fields of the
    parametrization (f', z' and the angular frame), so the residual measures
    only floating-point rounding when dz_scale = 1. dz_scale multiplies z'
    and exists as a deliberate mismatch control for tests.
    """
    if n_rho < 2 or n_theta < 4:
        raise ParameterError("residual grid too small")
    rhos = np.linspace(0.0, curve.rho_max, n_rho)
    theta = 2.0 * math.pi * np.arange(n_theta) / n_theta
    ct, st = np.cos(theta), np.sin(theta)
    f = np.asarray(p.eval(rhos, 0), dtype=float)[:, None]
    fp = 1.0 + np.asarray(p.eval_reduced(rhos, 1), dtype=float)[:, None]
    zp = (dz_scale * _dz(p, rhos))[:, None]
    ct = ct[None, :]
    st = st[None, :]
    E = (fp * ct) ** 2 + (fp * st) ** 2 + zp * zp
    F = (fp * ct) * (-(f * st)) + (fp * st) * (f * ct)
    G = (f * st) ** 2 + (f * ct) ** 2
    return MetricResidual(max_E=float(np.max(np.abs(E - 1.0))),
                          max_F=float(np.max(np.abs(F))),
                          max_G=float(np.max(np.abs(G - f * f))),
                          n_rho=int(n_rho), n_theta=int(n_theta),
                          dz_scale=float(dz_scale))
