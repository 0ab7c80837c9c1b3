"""Disc layout and the assembled planar metric field."""

import numpy as np
import pytest

import pogorelov as pg
from pogorelov import assembly
from pogorelov.exceptions import DomainError, ParameterError


def test_layout_exact_values():
    lay = assembly.build_layout(2)
    assert np.array_equal(lay.centers(), np.array([[1.0, 0.0], [0.5, 0.0]]))
    assert lay.radii()[0] == 0.125
    assert lay.radii()[1] == 1.0 / 18.0
    gap = (1.0 - 0.125) - (0.5 + 1.0 / 18.0)
    assert gap == 0.5 - (0.125 + 1.0 / 18.0)
    assert gap > 0.31


def test_layout_disjoint_brute_force():
    lay = assembly.build_layout(50)
    c = lay.centers()
    r = lay.radii()
    for i in range(50):
        for j in range(i + 1, 50):
            d = np.hypot(c[i, 0] - c[j, 0], c[i, 1] - c[j, 1])
            assert d > r[i] + r[j]
    # none reaches the origin
    assert np.all(c[:, 0] - r > 0.0)


def test_layout_guards():
    with pytest.raises(ParameterError):
        assembly.build_layout(0)
    with pytest.raises(ParameterError):
        assembly.build_layout(-3)


def test_layout_to_dict():
    d = assembly.build_layout(2).to_dict()
    assert d["n_max"] == 2
    assert d["entries"][0] == {"n": 1, "cx": 1.0, "cy": 0.0, "r": 0.125}
    assert d["entries"][1]["r"] == 1.0 / 18.0


def test_identity_outside_discs(field25):
    for x, y in [(0.25, 0.05), (0.7, 0.0), (-0.05, 0.1), (1.2, 0.2)]:
        assert np.array_equal(field25.eval(x, y), np.eye(2))


def test_identity_on_inner_half(field25):
    # bump metric is exactly euclidean up to half the disc radius
    lay = field25.layout
    c, a = lay.centers()[0], lay.radii()[0]
    for frac in (0.0, 0.2, 0.49):
        h = field25.eval(c[0] + frac * a, c[1])
        assert np.array_equal(h, np.eye(2))


def test_axis_point_diagonal_metric(field25):
    """On the x-axis the radial direction is x, so h = diag(1, f^2/rho^2)."""
    rho = 0.09375  # 3/4 of the first disc radius
    h = field25.eval(1.0 - rho, 0.0)
    p = pg.make_pogorelov_profile(0.125)
    expected = (p.eval(rho) / rho) ** 2
    assert h[0, 0] == 1.0
    assert h[0, 1] == 0.0 and h[1, 0] == 0.0
    assert abs(h[1, 1] - expected) <= 4e-16


def test_metric_matches_polar_tensor_oracle(field25, rng):
    """eval agrees with e_r (x) e_r + (f/rho)^2 (I - e_r (x) e_r) pointwise."""
    lay = field25.layout
    centers, radii = lay.centers(), lay.radii()
    profiles = {i: pg.make_pogorelov_profile(radii[i]) for i in range(len(radii))}
    worst = 0.0
    for _ in range(1000):
        i = int(rng.integers(0, len(radii)))
        c, a = centers[i], radii[i]
        t = rng.uniform(0.0, 2.0 * np.pi)
        s = a * np.sqrt(rng.uniform(0.3, 0.98))
        x, y = c[0] + s * np.cos(t), c[1] + s * np.sin(t)
        v = np.array([x - c[0], y - c[1]])
        rho = np.hypot(*v)
        er = v / rho
        w = (profiles[i].eval(rho) / rho) ** 2
        expected = np.outer(er, er) + w * (np.eye(2) - np.outer(er, er))
        worst = max(worst, np.max(np.abs(field25.eval(x, y) - expected)))
    assert worst <= 1e-12


def test_metric_positive_definite(field25, rng):
    xs = rng.uniform(-0.1, 1.2, 10000)
    ys = rng.uniform(-0.2, 0.2, 10000)
    for x, y in zip(xs, ys):
        h = field25.eval(x, y)
        assert h[0, 0] > 0.0
        assert np.linalg.det(h) > 0.0


def test_rotational_conjugation(field25):
    # the disc metric is rotationally symmetric about its center
    c, a = field25.layout.centers()[0], field25.layout.radii()[0]
    v = np.array([0.6 * a, 0.3 * a])
    h0 = field25.eval(c[0] + v[0], c[1] + v[1])
    for ang in (0.3, 0.7, 2.0, np.pi):
        R = np.array([[np.cos(ang), -np.sin(ang)], [np.sin(ang), np.cos(ang)]])
        w = R @ v
        h1 = field25.eval(c[0] + w[0], c[1] + w[1])
        assert np.max(np.abs(h1 - R @ h0 @ R.T)) <= 1e-12


def test_first_derivatives_match_fd(field25):
    lay = field25.layout
    c, a = lay.centers()[0], lay.radii()[0]
    x0, y0 = c[0] - 0.75 * a, c[1] + 0.02 * a
    d1 = np.asarray(field25.eval_derivatives(x0, y0, 1))
    # the h ~ 1 baseline caps FD resolution near machine epsilon / step,
    # so the step must stay large enough for the tiny true derivatives
    s = 1e-3 * a
    fd_x = (field25.eval(x0 + s, y0) - field25.eval(x0 - s, y0)) / (2.0 * s)
    fd_y = (field25.eval(x0, y0 + s) - field25.eval(x0, y0 - s)) / (2.0 * s)
    scale = np.max(np.abs(d1))
    assert np.max(np.abs(d1[0] - fd_x)) <= 1e-3 * scale
    assert np.max(np.abs(d1[1] - fd_y)) <= 1e-3 * scale


def test_second_derivatives_match_fd_of_first(field25):
    """Differencing the analytic first derivatives isolates the second
    derivatives from the O(1) identity baseline, so the comparison is sharp."""
    lay = field25.layout
    c, a = lay.centers()[0], lay.radii()[0]
    x0, y0 = c[0] - 0.75 * a, c[1] + 0.02 * a
    d2 = np.asarray(field25.eval_derivatives(x0, y0, 2))
    s = 1e-5 * a

    def d1(dx, dy):
        return np.asarray(field25.eval_derivatives(x0 + dx, y0 + dy, 1))

    fd_x = (d1(s, 0.0) - d1(-s, 0.0)) / (2.0 * s)
    fd_y = (d1(0.0, s) - d1(0.0, -s)) / (2.0 * s)
    scale = np.max(np.abs(d2))
    assert np.max(np.abs(d2[0] - fd_x)) <= 1e-5 * scale
    assert np.max(np.abs(d2[1] - fd_y)) <= 1e-5 * scale
    # symmetry of mixed partials and of the tensor itself
    assert np.array_equal(d2[0, 1], d2[1, 0])
    assert np.array_equal(d2[..., 0, 1], d2[..., 1, 0])


def test_derivative_guards(field25):
    with pytest.raises(ParameterError):
        field25.eval_derivatives(0.9, 0.0, 3)
    with pytest.raises(ParameterError):
        field25.eval_derivatives(0.9, 0.0, 0)
    with pytest.raises(DomainError):
        field25.eval(2.0, 0.0)
    with pytest.raises(DomainError):
        field25.eval_derivatives(0.9, 0.5, 1)


def test_locate_and_disc_index(field25):
    xs = np.array([0.90625, 0.2, 0.5])
    ys = np.array([0.0, 0.1, 0.0])
    assert np.array_equal(field25.locate(xs, ys), np.array([1, 0, 2]))
    assert field25.disc_index(0.90625, 0.0) == 1
    assert field25.disc_index(0.2, 0.1) is None


def test_grid_dump_and_csv(field25, tmp_path):
    g = assembly.grid_dump(field25, resolution=8)
    assert g.shape == (64, 5)
    # identity rows in the far corner
    assert np.array_equal(g[0, 2:], np.array([1.0, 0.0, 1.0]))
    path = tmp_path / "grid.csv"
    assembly.write_grid_csv(field25, path, resolution=8)
    lines = path.read_text().splitlines()
    assert lines[0] == "x,y,h11,h12,h22"
    assert len(lines) == 65


def test_module_level_wrappers(field25):
    assert np.array_equal(assembly.eval_metric(field25, 0.25, 0.05), np.eye(2))
    d = assembly.metric_derivatives(field25, 0.25, 0.05, 1)
    assert np.array_equal(np.asarray(d), np.zeros((2, 2, 2)))
