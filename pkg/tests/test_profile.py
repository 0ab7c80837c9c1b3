"""Radial profile family: exact piecewise values, derivative identities,
branch-point regularity, and the embeddable window."""
import math

import numpy as np
import pytest

import pogorelov as pg
from pogorelov.exceptions import DomainError, ParameterError


def test_flat_branch_is_identity(unit_profile):
    p = unit_profile
    assert p.eval(0.25, 0) == 0.25
    assert p.eval(0.0, 0) == 0.0
    assert p.eval(0.0, 1) == 1.0
    # derivative orders 2 and 3 vanish identically strictly below a/2
    rho = np.linspace(0.0, 0.5, 41)[:-1]
    assert np.all(np.asarray(p.eval(rho, 2)) == 0.0)
    assert np.all(np.asarray(p.eval(rho, 3)) == 0.0)
    # order 2 is continuous, so the branch point itself is still zero
    assert p.eval(0.5, 2) == 0.0
    # order 3 at the branch point reports the right-branch value
    assert p.eval(0.5, 3) == -0.75


def test_branch_point_first_derivative(unit_profile):
    # cubic factor vanishes to order 3, so f'(a/2) = 1 exactly
    assert unit_profile.eval(0.5, 1) == 1.0


def test_bump_value_by_direct_substitution(unit_profile):
    # f(0.75) = 0.75 + (-0.25)^3 (0.25)^3 = 0.75 - 2^-12, exact in binary
    expected = 0.75 - 2.44140625e-4
    assert unit_profile.eval(0.75, 0) == expected


def test_positive_on_open_interval():
    for a in (1.0, 0.5, 0.0625):
        p = pg.make_pogorelov_profile(a)
        rho = np.linspace(1e-6 * a, a * (1 - 1e-9), 2001)
        assert np.all(np.asarray(p.eval(rho, 0)) > 0.0)


@pytest.mark.parametrize("a, jump3", [(1.0, 0.75), (0.5, 0.046875)])
def test_smoothness_at_branch_point(a, jump3):
    p = pg.make_pogorelov_profile(a)
    rep = pg.smoothness_report(p, 0.5 * a)
    jumps = {row.order: row for row in rep.rows}
    for k in (0, 1, 2):
        assert jumps[k].jump <= 1e-10
    assert jumps[3].jump == pytest.approx(jump3, rel=1e-12)
    # one-sided exact values: left branch is linear, right branch drops
    assert jumps[3].left_exact == 0.0
    assert jumps[3].right_exact == pytest.approx(-jump3, rel=1e-12)
    # finite differences confirm the exact one-sided values
    for row in rep.rows:
        assert row.fd_error <= 1e-6 * max(1.0, abs(row.right_exact))


def test_smoothness_interior_point(unit_profile):
    rep = pg.smoothness_report(unit_profile, 0.3)
    assert all(row.jump <= 1e-10 for row in rep.rows)


def test_smoothness_domain_errors(unit_profile):
    with pytest.raises(DomainError):
        pg.smoothness_report(unit_profile, -0.1)
    with pytest.raises(DomainError):
        pg.smoothness_report(unit_profile, 1.0)
    # stencil reach 16*h_min would leave [0, a)
    with pytest.raises(DomainError):
        pg.smoothness_report(unit_profile, 0.5, h_min=0.2)
    with pytest.raises(ParameterError):
        pg.smoothness_report(unit_profile, 0.5, h_min=0.0)


@pytest.mark.parametrize("a", [2.0 ** (-k) for k in range(11)])
def test_fd_derivatives_match_exact(a):
    """One-sided FD of the deviation from the identity map reproduces the
    exact reduced derivatives on the bump branch, orders 1-3."""
    p = pg.make_pogorelov_profile(a)
    h = 1e-4 * a
    # stay a stencil width away from both the branch point and the far end
    rho = np.linspace(0.5 * a + 8 * h, a - 8 * h, 101)
    for k, step in ((1, 1e-6 * a), (2, 1e-5 * a), (3, 1e-4 * a)):
        exact = np.asarray(p.eval_reduced(rho, k))
        if k == 1:
            fd = (np.asarray(p.eval_reduced(rho + step, 0))
                  - np.asarray(p.eval_reduced(rho - step, 0))) / (2 * step)
        elif k == 2:
            fd = (np.asarray(p.eval_reduced(rho + step, 0))
                  - 2 * np.asarray(p.eval_reduced(rho, 0))
                  + np.asarray(p.eval_reduced(rho - step, 0))) / step ** 2
        else:
            fd = (np.asarray(p.eval_reduced(rho + 2 * step, 0))
                  - 2 * np.asarray(p.eval_reduced(rho + step, 0))
                  + 2 * np.asarray(p.eval_reduced(rho - step, 0))
                  - np.asarray(p.eval_reduced(rho - 2 * step, 0))) / (2 * step ** 3)
        scale = np.max(np.abs(exact))
        assert scale > 0
        assert np.max(np.abs(fd - exact)) <= 1e-6 * scale


@pytest.mark.parametrize("a", [1.0, 0.5, 0.1])
def test_first_derivative_factored_identity(a, rng):
    # f' - 1 = 3a (rho-a)^2 (rho-a/2)^2 (2 rho - 3a/2) on the bump branch
    p = pg.make_pogorelov_profile(a)
    rho = 0.5 * a + 0.5 * a * rng.random(1000)
    direct = np.asarray(p.eval_reduced(rho, 1))
    factored = 3 * a * (rho - a) ** 2 * (rho - 0.5 * a) ** 2 * (2 * rho - 1.5 * a)
    assert np.max(np.abs(direct - factored)) <= 1e-12 * np.max(np.abs(direct))


def test_first_derivative_sign_pattern(unit_profile):
    p = unit_profile
    inside = np.linspace(0.5 + 1e-9, 0.75 - 1e-9, 501)
    outside = np.linspace(0.75 + 1e-9, 1.0 - 1e-9, 501)
    assert np.all(np.asarray(p.eval_reduced(inside, 1)) < 0.0)
    assert np.all(np.asarray(p.eval_reduced(outside, 1)) > 0.0)
    assert p.eval_reduced(0.5, 1) == 0.0
    assert p.eval_reduced(0.75, 1) == 0.0


@pytest.mark.parametrize("a", [1.0, 0.2])
def test_embeddable_window_endpoints(a):
    p = pg.make_pogorelov_profile(a)
    windows = pg.embeddable_window(p, grid_n=1024)
    assert len(windows) == 1
    lo, hi = windows[0]
    assert abs(lo - 0.5 * a) <= 1e-10 * a
    assert abs(hi - 0.75 * a) <= 1e-10 * a


def test_embeddable_window_flat_empty():
    flat = pg.make_flat_profile(1.0)
    assert pg.embeddable_window(flat, grid_n=512) == []


def test_embeddable_window_grid_guard(unit_profile):
    with pytest.raises(ParameterError):
        pg.embeddable_window(unit_profile, grid_n=50)


def test_eval_domain_and_order_guards(unit_profile):
    with pytest.raises(DomainError):
        unit_profile.eval(-0.01, 0)
    with pytest.raises(DomainError):
        unit_profile.eval(1.0, 0)
    with pytest.raises(ParameterError):
        unit_profile.eval(0.3, 4)


def test_constructor_guards():
    with pytest.raises(ParameterError):
        pg.make_pogorelov_profile(0.0)
    with pytest.raises(ParameterError):
        pg.make_pogorelov_profile(-1.0)
    with pytest.raises(ParameterError):
        pg.make_sphere_profile(4.0)


def test_builtin_profiles_match_reference():
    rho = np.linspace(0.05, 1.2, 23)
    sphere = pg.make_sphere_profile(2.0)
    np.testing.assert_allclose(sphere.eval(rho, 0), np.sin(rho), rtol=1e-15)
    np.testing.assert_allclose(sphere.eval(rho, 1), np.cos(rho), rtol=1e-15)
    np.testing.assert_allclose(sphere.eval(rho, 2), -np.sin(rho), rtol=1e-15)
    sinh = pg.make_sinh_profile(2.0)
    np.testing.assert_allclose(sinh.eval(rho, 0), np.sinh(rho), rtol=1e-15)
    np.testing.assert_allclose(sinh.eval(rho, 3), np.cosh(rho), rtol=1e-15)
    flat = pg.make_flat_profile(2.0)
    assert np.all(np.asarray(flat.eval(rho, 0)) == rho)


def test_geodesic_polar_normalization():
    # f(0) = 0 and f'(0) = 1 for every built-in profile
    for p in (pg.make_pogorelov_profile(0.7), pg.make_sphere_profile(2.0),
              pg.make_sinh_profile(1.0), pg.make_flat_profile(1.0)):
        assert p.eval(0.0, 0) == 0.0
        assert p.eval(0.0, 1) == 1.0
