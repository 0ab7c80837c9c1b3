"""Rotationally symmetric embedding: profile curve, mesh, discrete checks."""

import numpy as np
import pytest

import pogorelov as pg
from pogorelov import curvature, embedding
from pogorelov.exceptions import ConfigurationError, DomainError, ParameterError

H_FLIP_UNIT = 0.6532810245911692

# endpoint heights frozen from a 50-digit quadrature of sqrt(-d(2+d))
Z_ORACLE_UNIT = {
    0.55: 0.000940818680039495139673,
    0.6: 0.003217604145651072773819,
    0.65: 0.006056616339734218208639,
    0.7: 0.008720950658169404311548,
    0.74: 0.01016253072112636354814,
}


@pytest.mark.parametrize("rho_max", sorted(Z_ORACLE_UNIT))
def test_height_endpoint_oracle(unit_profile, rho_max):
    c = embedding.integrate_profile(unit_profile, rho_max)
    assert abs(c.z[-1] - Z_ORACLE_UNIT[rho_max]) <= 1e-12


def test_height_endpoint_oracle_half_scale():
    c = embedding.integrate_profile(pg.make_pogorelov_profile(0.5), 0.3745)
    assert abs(c.z[-1] - 0.0006440758798133825071956) <= 1e-12


def test_flat_region_is_exactly_flat(unit_curve):
    c = unit_curve
    flat = c.rho <= 0.5
    assert flat.sum() >= 3
    assert np.all(c.z[flat] == 0.0)
    assert np.all(c.dz[flat] == 0.0)
    assert np.all(c.r[flat] == c.rho[flat])


def test_height_nondecreasing(unit_curve):
    assert np.all(np.diff(unit_curve.z) >= 0.0)
    assert np.all(np.diff(unit_curve.r) > 0.0)


def test_arclength_identity(unit_curve):
    # (dr/drho)^2 + (dz/drho)^2 == 1 by construction
    fp = unit_curve.profile.eval(unit_curve.rho, 1)
    assert np.max(np.abs(fp**2 + unit_curve.dz**2 - 1.0)) <= 4e-16


def test_slope_leading_order(unit_profile):
    """dz grows linearly just past the branch with slope (sqrt(3)/2) a^2."""
    c = embedding.integrate_profile(unit_profile, 0.74, mid_step=1e-4)
    sel = (c.rho > 0.5) & (c.rho - 0.5 <= 1e-3)
    assert sel.sum() >= 5
    lead = 0.8660254037844386 * (c.rho[sel] - 0.5)
    assert np.max(np.abs(c.dz[sel] / lead - 1.0)) <= 0.05


def test_quadrature_tolerance_ladder(unit_profile):
    z_ref = embedding.integrate_profile(unit_profile, 0.74, tol=1e-12).z[-1]
    for tol in (1e-6, 1e-8, 1e-10):
        c = embedding.integrate_profile(unit_profile, 0.74, tol=tol)
        assert c.quad_error <= tol
        assert abs(c.z[-1] - z_ref) <= 2.0 * tol


@pytest.mark.parametrize("a", [1.0, 0.5])
def test_jump_analysis_second_derivative(a):
    p = pg.make_pogorelov_profile(a)
    c = embedding.integrate_profile(p, 0.74 * a)
    rep = embedding.jump_analysis(c)
    assert rep.left == 0.0
    assert rep.converged
    expected = np.sqrt(3.0) / 2.0 * a * a
    assert abs(rep.right - expected) <= 1e-9 * expected
    assert abs(rep.jump - expected) <= 1e-9 * expected
    # the raw one-sided estimates approach from below, extrapolation fixes it
    assert rep.estimates[-1] < rep.right
    assert abs(rep.extrapolated[-1] - rep.right) <= abs(rep.estimates[-1] - rep.right)


def test_jump_analysis_needs_branch_point():
    c = embedding.integrate_profile(pg.make_sphere_profile(), 1.0)
    with pytest.raises(ConfigurationError):
        embedding.jump_analysis(c)


def test_integrate_domain_guards(unit_profile):
    for bad in (-0.1, 0.0, 1.0, 1.5):
        with pytest.raises(DomainError):
            embedding.integrate_profile(unit_profile, bad)
    with pytest.raises(ParameterError):
        embedding.integrate_profile(unit_profile, 0.7, tol=0.0)


def test_mesh_topology(unit_curve):
    mesh = embedding.build_mesh(unit_curve, n_theta=64)
    assert mesh.euler_characteristic() == 1
    assert mesh.orientation_consistent()
    assert int(mesh.boundary_vertex_mask().sum()) == 64
    # V - E + F for a disc triangulation, cross-checked by hand
    assert len(mesh.vertices) - mesh.edge_count() + len(mesh.faces) == 1


def test_mesh_vertices_reconstruct_bitwise(unit_curve):
    mesh = embedding.build_mesh(unit_curve, n_theta=16)
    rho = mesh.params[:, 0]
    theta = mesh.params[:, 1]
    r = np.interp(rho, unit_curve.rho, unit_curve.r)
    z = np.interp(rho, unit_curve.rho, unit_curve.z)
    assert np.array_equal(mesh.vertices[:, 0], r * np.cos(theta))
    assert np.array_equal(mesh.vertices[:, 1], r * np.sin(theta))
    assert np.array_equal(mesh.vertices[:, 2], z)


def test_hand_built_flat_curve_meshes_planar():
    p = pg.make_flat_profile(1.0)
    rho = np.array([0.0, 0.1, 0.2])
    c = embedding.ProfileCurve(profile=p, rho=rho, r=rho.copy(), z=np.zeros(3),
                               dz=np.zeros(3), d2z_left=np.zeros(3),
                               d2z_right=np.zeros(3), rho_max=0.2, quad_error=0.0)
    mesh = embedding.build_mesh(c, n_theta=12)
    assert np.all(mesh.vertices[:, 2] == 0.0)
    assert mesh.euler_characteristic() == 1


def test_mesh_theta_guard(unit_curve):
    with pytest.raises(ParameterError):
        embedding.build_mesh(unit_curve, n_theta=2)


def test_mesh_guards():
    p = pg.make_flat_profile(1.0)
    rho = np.array([0.0, 0.1])
    c = embedding.ProfileCurve(profile=p, rho=rho, r=rho.copy(), z=np.zeros(2),
                               dz=np.zeros(2), d2z_left=np.zeros(2),
                               d2z_right=np.zeros(2), rho_max=0.1, quad_error=0.0)
    with pytest.raises(ConfigurationError):
        embedding.build_mesh(c, n_theta=12)


def test_obj_export_format(unit_curve, tmp_path):
    mesh = embedding.build_mesh(unit_curve, n_theta=8)
    path = tmp_path / "mesh.obj"
    embedding.write_obj(mesh, path)
    data = path.read_bytes()
    assert b"\r" not in data
    lines = data.decode("ascii").splitlines()
    assert lines[0] == "# pogorelov a=1 rho_max=0.69999999999999996"
    v_lines = [l for l in lines if l.startswith("v ")]
    f_lines = [l for l in lines if l.startswith("f ")]
    assert len(v_lines) == len(mesh.vertices)
    assert len(f_lines) == len(mesh.faces)
    # coordinates round-trip through the text exactly
    got = np.array([[float(t) for t in l.split()[1:]] for l in v_lines])
    assert np.array_equal(got, mesh.vertices)
    # faces are 1-based triangles
    first = f_lines[0].split()[1:]
    assert len(first) == 3
    assert min(int(t) for l in f_lines for t in l.split()[1:]) == 1


def test_curve_csv_header(unit_curve, tmp_path):
    path = tmp_path / "curve.csv"
    embedding.write_curve_csv(unit_curve, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "rho,r,z,dz,d2z_left,d2z_right"
    assert len(lines) == 1 + len(unit_curve.rho)


def test_induced_metric_matches_target(unit_profile, unit_curve):
    res = embedding.induced_metric_residual(unit_profile, unit_curve,
                                            n_rho=200, n_theta=64)
    assert res.max_residual <= 1e-8
    assert res.max_F <= 1e-12


def test_induced_metric_flat_exact():
    p = pg.make_flat_profile(1.0)
    rho = np.linspace(0.0, 0.8, 17)
    c = embedding.ProfileCurve(profile=p, rho=rho, r=rho.copy(), z=np.zeros(17),
                               dz=np.zeros(17), d2z_left=np.zeros(17),
                               d2z_right=np.zeros(17), rho_max=0.8, quad_error=0.0)
    res = embedding.induced_metric_residual(p, c)
    assert res.max_residual <= 1e-14


def test_induced_metric_negative_control(unit_profile):
    """Scaling dz by 1.01 must show up as a residual of the predicted size."""
    c = embedding.integrate_profile(unit_profile, 0.74)
    res = embedding.induced_metric_residual(unit_profile, c, dz_scale=1.01)
    predicted = (1.01**2 - 1.0) * np.max(c.dz) ** 2
    assert abs(res.max_E / predicted - 1.0) <= 0.01


def test_discrete_gauss_tracks_formula(unit_profile):
    c = embedding.integrate_profile(unit_profile, 0.74)
    mesh = embedding.build_mesh(c, n_theta=256)
    idx, Kd = embedding.discrete_gauss(mesh)
    K_true = curvature.gauss_curvature(unit_profile, mesh.params[idx, 0])
    mask = np.abs(K_true) >= 0.1 * np.max(np.abs(K_true))
    rel = np.abs(Kd[mask] - K_true[mask]) / np.abs(K_true[mask])
    assert np.median(rel) <= 1e-2
    assert np.percentile(rel, 90) <= 5e-2
    assert rel.max() <= 0.1


def test_discrete_mean_tracks_scan(unit_profile):
    c = embedding.integrate_profile(unit_profile, 0.74)
    mesh = embedding.build_mesh(c, n_theta=256)
    idx, Hd = embedding.discrete_mean(mesh)
    scan = embedding.mean_curvature_scan(c)
    H_ref = np.interp(mesh.params[idx, 0], scan.rho, scan.H)
    mask = np.abs(H_ref) >= 0.1 * np.max(np.abs(H_ref))
    rel = np.abs(Hd[mask] - np.abs(H_ref[mask])) / np.abs(H_ref[mask])
    assert np.median(rel) <= 2e-2


def test_mean_curvature_scan_structure(unit_profile):
    c = embedding.integrate_profile(unit_profile, 0.74)
    scan = embedding.mean_curvature_scan(c)
    flat = scan.rho < 0.5
    assert np.all(scan.H[flat] == 0.0)
    assert np.all(scan.k_meridian[flat] == 0.0)
    assert np.all(scan.k_parallel[flat] == 0.0)
    assert scan.branch_flagged
    # at the branch point the scan reports right limits: the meridian
    # curvature jumps to sqrt(3)/2 while the parallel one stays zero
    i = int(np.argmin(np.abs(scan.rho - 0.5)))
    assert scan.rho[i] == 0.5
    assert abs(scan.k_meridian[i] - np.sqrt(3.0) / 2.0) <= 1e-9
    assert abs(scan.H[i] - np.sqrt(3.0) / 4.0) <= 1e-9
    # H changes sign once past the branch, inside a narrow bracket
    assert not scan.constant_sign
    assert len(scan.sign_changes) == 1
    lo, hi = scan.sign_changes[0]
    assert lo < H_FLIP_UNIT < hi
    assert hi - lo <= 0.01


def test_sphere_cap_mean_curvature_constant():
    c = embedding.integrate_profile(pg.make_sphere_profile(), 1.2)
    scan = embedding.mean_curvature_scan(c)
    assert scan.constant_sign
    assert scan.sign_changes == ()
    assert np.max(np.abs(scan.H - 1.0)) <= 1e-6
