"""Pure numpy evaluation kernels.

This module is the reference backend. pogorelov._kernels is a compiled mirror
with identical arithmetic: every expression here is written with an explicit
operation order (no ** on floats, no fused operations) and the compiled source
replays the same order, so both backends produce bit-identical results.

Conventions shared by all kernels:
  - the profile is flat (f = rho) for rho < a/2 and again treated as flat for
    rho >= a, where callers never use it or want a zero deviation;
  - the bump branch applies on a/2 <= rho < a; at rho = a/2 exactly, the bump
    polynomials reproduce the flat values for orders 0..2 and give the
    right-sided third derivative.
"""
import numpy as np

BACKEND = "python"


def _bump_terms(rho, a):
    u = rho - a
    v = rho - 0.5 * a
    u2 = u * u
    u3 = u2 * u
    v2 = v * v
    v3 = v2 * v
    return u, v, u2, u3, v2, v3


def profile_eval(rho, a, k):
    """k-th derivative (k in 0..3) of the radial profile at rho (array).

    Flat branch outside [a/2, a); bump polynomial inside.
    """
    rho = np.ascontiguousarray(rho, dtype=np.float64)
    u, v, u2, u3, v2, v3 = _bump_terms(rho, a)
    inside = (rho >= 0.5 * a) & (rho < a)
    if k == 0:
        val = rho + (a * u3) * v3
        base = rho
    elif k == 1:
        s = 2.0 * rho - 1.5 * a
        val = 1.0 + (((3.0 * a) * u2) * v2) * s
        base = np.ones_like(rho)
    elif k == 2:
        q = (u2 + 3.0 * (u * v)) + v2
        val = (((6.0 * a) * u) * v) * q
        base = np.zeros_like(rho)
    elif k == 3:
        s = ((v3 + (9.0 * u) * v2) + (9.0 * u2) * v) + u3
        val = (6.0 * a) * s
        base = np.zeros_like(rho)
    else:
        raise ValueError(f"derivative order {k} not in 0..3")
    return np.where(inside, val, base)


def deviation_eval(rho, a):
    """Deviation d = f - rho and its first three derivatives, as four arrays.

    Identically zero outside [a/2, a). Evaluating d directly (instead of
    f - rho) avoids cancellation: near the branch ends d underflows gracefully
    while f - rho would lose all significant digits.
    """
    rho = np.ascontiguousarray(rho, dtype=np.float64)
    u, v, u2, u3, v2, v3 = _bump_terms(rho, a)
    inside = (rho >= 0.5 * a) & (rho < a)
    s1 = 2.0 * rho - 1.5 * a
    q2 = (u2 + 3.0 * (u * v)) + v2
    s3 = ((v3 + (9.0 * u) * v2) + (9.0 * u2) * v) + u3
    zero = np.zeros_like(rho)
    d = np.where(inside, (a * u3) * v3, zero)
    d1 = np.where(inside, (((3.0 * a) * u2) * v2) * s1, zero)
    d2 = np.where(inside, (((6.0 * a) * u) * v) * q2, zero)
    d3 = np.where(inside, (6.0 * a) * s3, zero)
    return d, d1, d2, d3


def metric_scalars(rho, a):
    """Radial coefficient chain of the Cartesian metric deviation.

    With N = d^2 + 2 rho d = f^2 - rho^2, returns (w-1, w', w'', m, m', m'')
    where w = f^2/rho^2 is the tangential coefficient and m = (1-w)/rho^2
    = -N/rho^4 multiplies x_i x_j. All six vanish outside [a/2, a).
    """
    rho = np.ascontiguousarray(rho, dtype=np.float64)
    d, d1, d2, _ = deviation_eval(rho, a)
    N = d * d + (2.0 * rho) * d
    N1 = (2.0 * (d * d1) + 2.0 * d) + 2.0 * (rho * d1)
    N2 = ((2.0 * (d1 * d1) + 2.0 * (d * d2)) + 4.0 * d1) + 2.0 * (rho * d2)
    # rho = 0 is always outside the bump; guard the division anyway
    r = np.where(rho == 0.0, 1.0, rho)
    r2 = r * r
    r3 = r2 * r
    r4 = r2 * r2
    r5 = r4 * r
    r6 = r4 * r2
    wm1 = N / r2
    w1 = N1 / r2 - (2.0 * N) / r3
    w2 = (N2 / r2 - (4.0 * N1) / r3) + (6.0 * N) / r4
    m = -(N / r4)
    m1 = -(N1 / r4) + (4.0 * N) / r5
    m2 = (-(N2 / r4) + (8.0 * N1) / r5) - (20.0 * N) / r6
    return wm1, w1, w2, m, m1, m2


def metric_tensors(x, y, a):
    """Deviation from the identity of the disc metric and its partials.

    Input: flat arrays x, y of Cartesian offsets from the disc center, and the
    disc radius a. Output: compact symmetric storage
      H   (n, 3): h11-1, h12, h22-1
      D1  (n, 6): d_k h_ij for k in {x, y} x ij in {11, 12, 22}
      D2  (n, 9): d_l d_k h_ij for kl in {xx, xy, yy} x ij in {11, 12, 22}
    All rows vanish unless a/2 <= rho < a.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    rho = np.sqrt(x * x + y * y)
    inside = (rho >= 0.5 * a) & (rho < a)
    r = np.where(inside, rho, 1.0)
    wm1, w1, w2, m, m1, m2 = metric_scalars(r, a)
    ex = x / r
    ey = y / r
    xx = x * x
    xy = x * y
    yy = y * y

    H = np.zeros(rho.shape + (3,))
    H[..., 0] = wm1 + m * xx
    H[..., 1] = m * xy
    H[..., 2] = wm1 + m * yy

    m1ex = m1 * ex
    m1ey = m1 * ey
    D1 = np.zeros(rho.shape + (6,))
    D1[..., 0] = (w1 * ex + m1ex * xx) + (2.0 * m) * x
    D1[..., 1] = m1ex * xy + m * y
    D1[..., 2] = w1 * ex + m1ex * yy
    D1[..., 3] = w1 * ey + m1ey * xx
    D1[..., 4] = m1ey * xy + m * x
    D1[..., 5] = (w1 * ey + m1ey * yy) + (2.0 * m) * y

    exx = ex * ex
    exy = ex * ey
    eyy = ey * ey
    Pxx = (1.0 - exx) / r
    Pxy = -(exy / r)
    Pyy = (1.0 - eyy) / r
    Wxx = w2 * exx + w1 * Pxx
    Wxy = w2 * exy + w1 * Pxy
    Wyy = w2 * eyy + w1 * Pyy
    Mxx = m2 * exx + m1 * Pxx
    Mxy = m2 * exy + m1 * Pxy
    Myy = m2 * eyy + m1 * Pyy

    D2 = np.zeros(rho.shape + (9,))
    D2[..., 0] = ((Wxx + Mxx * xx) + (4.0 * m1ex) * x) + 2.0 * m
    D2[..., 1] = Mxx * xy + (2.0 * m1ex) * y
    D2[..., 2] = Wxx + Mxx * yy
    D2[..., 3] = (Wxy + Mxy * xx) + (2.0 * m1ey) * x
    D2[..., 4] = ((Mxy * xy + m1ey * y) + m1ex * x) + m
    D2[..., 5] = (Wxy + Mxy * yy) + (2.0 * m1ex) * y
    D2[..., 6] = Wyy + Myy * xx
    D2[..., 7] = Myy * xy + (2.0 * m1ey) * x
    D2[..., 8] = ((Wyy + Myy * yy) + (4.0 * m1ey) * y) + 2.0 * m

    out = inside[..., None]
    return np.where(out, H, 0.0), np.where(out, D1, 0.0), np.where(out, D2, 0.0)
