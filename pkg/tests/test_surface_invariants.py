""" p-variation, Gaussian curvature, the Codazzi-type equation and patch totals """

import pytest
import numpy as np

@pytest.fixture(scope = "module")
def helicoid_fine():
    from h1frames.surfaces.factory import helicoid_coefficients

    return helicoid_coefficients(np.linspace(-1.5, 1.5, 601), np.linspace(0.0, 1.0, 11))

@pytest.fixture(scope = "module")
def swept():
    from h1frames.surfaces import coefficients
    from h1frames.surfaces.factory import random_swept_patch

    return [coefficients(random_swept_patch(np.random.default_rng(seed))) for seed in range(10)]

def test_flat_surfaces():
    from h1frames.surfaces import gaussian_curvature_formula, p_variation, check_gauss
    from h1frames.surfaces.factory import constant_coefficients

    u = np.linspace(0.0, 2.0, 21)
    for l in (0.0, 1.0):
        coeffs = constant_coefficients(u, u, l = l)
        K = gaussian_curvature_formula(p_variation(coeffs), coeffs.l, coeffs)
        assert np.all(K == 0.0)
        assert check_gauss(coeffs).max_residual == 0.0

def test_helicoid_curvature(helicoid_fine):
    from h1frames.surfaces import gaussian_curvature_formula, p_variation, check_gauss

    coeffs = helicoid_fine
    K = gaussian_curvature_formula(p_variation(coeffs), coeffs.l, coeffs)
    at_zero = np.argmin(np.abs(coeffs.u))
    at_one = np.argmin(np.abs(coeffs.u - 1.0))
    assert np.allclose(K[at_zero], -3.0, rtol = 0, atol = 1e-3)
    assert np.allclose(K[at_one], -0.8, rtol = 0, atol = 1e-3)
    # nowhere positive
    assert np.all(K < 0)

    report = check_gauss(coeffs)
    assert report.passed
    assert report.tol == 1e-3

def test_reference_curvature():
    from h1frames.surfaces import gaussian_curvature_reference, MetricPatch
    from h1frames.surfaces.factory import sphere_metric
    from h1frames.utils.exceptions import DegenerateMetric

    metric = sphere_metric(np.linspace(0.3, 2.8, 251), np.linspace(0.0, 1.0, 11))
    K = gaussian_curvature_reference(metric)
    assert np.allclose(K[2:-2, 2:-2], 1.0, rtol = 0, atol = 1e-3)

    shape = (6, 6)
    degenerate = MetricPatch(0.0, 0.1, 0.0, 0.1, np.ones(shape), np.ones(shape), np.ones(shape))
    with pytest.raises(DegenerateMetric):
        gaussian_curvature_reference(degenerate)

def test_structure_connection():
    from h1frames.surfaces import Coframe, structure_connection
    from h1frames.surfaces.factory import sphere_metric

    u, v = np.linspace(0.3, 2.8, 251), np.linspace(0.0, 1.0, 11)
    U, _ = np.meshgrid(u, v, indexing = 'ij')
    # du, sin u dv
    coframe = Coframe(np.ones_like(U), np.zeros_like(U), np.zeros_like(U), np.sin(U), u[1] - u[0], v[1] - v[0])
    connection = structure_connection(coframe)
    assert np.allclose(connection.lambda1, 0.0, rtol = 0, atol = 1e-12)
    assert np.allclose(connection.lambda2[1:-1], np.cos(U[1:-1])/np.sin(U[1:-1]), rtol = 0, atol = 1e-3)
    assert np.allclose(connection.K[2:-2, 2:-2], 1.0, rtol = 0, atol = 1e-3)

    metric = coframe.metric()
    reference = sphere_metric(u, v)
    assert np.allclose(metric.G, reference.G)
    assert np.all(metric.F == 0.0)

    flat = structure_connection(Coframe.flat((11, 11), 0.1, 0.1))
    assert np.all(flat.K == 0.0)

def test_coframe_from_coefficients(helicoid_fine):
    from h1frames.surfaces import Coframe, induced_metric, structure_connection, connection_forms, p_variation

    coeffs = helicoid_fine
    coframe = Coframe.from_coefficients(coeffs)
    metric, induced = coframe.metric(), induced_metric(coeffs)
    for key in "EFG":
        assert np.allclose(getattr(metric, key), getattr(induced, key), rtol = 1e-12, atol = 1e-12)

    # the Riemannian connection form of the coframe matches the closed form in alpha and l
    alpha = np.ma.filled(p_variation(coeffs), np.nan)
    e1_alpha, _ = coframe.derivatives(alpha)
    forms = connection_forms(alpha, coeffs.l, e1_alpha)
    connection = structure_connection(coframe)
    inner = (slice(1, -1), slice(1, -1))
    assert np.allclose(connection.lambda1[inner], forms.omega_hat_12[0][inner], rtol = 0, atol = 1e-3)
    assert np.allclose(connection.lambda2[inner], forms.omega_hat_12[1][inner], rtol = 0, atol = 1e-3)

def test_random_patches(swept):
    from h1frames.surfaces import (
        p_variation, gaussian_curvature_formula, gaussian_curvature_reference, induced_metric,
        check_gauss, check_codazzi, check_surface_integrability,
    )

    for coeffs in swept:
        alpha = p_variation(coeffs)
        K = gaussian_curvature_formula(alpha, coeffs.l, coeffs)
        K_metric = gaussian_curvature_reference(induced_metric(coeffs))
        assert np.max(np.abs(K - K_metric)[1:-1, 1:-1]) <= 1e-3
        assert check_gauss(coeffs).passed
        assert check_codazzi(alpha, coeffs.l, coeffs).passed
        assert check_surface_integrability(alpha, coeffs.l, K, coeffs).passed

def test_codazzi_detects_wrong_l(helicoid_fine):
    from h1frames.surfaces import p_variation, check_codazzi, check_surface_integrability, gaussian_curvature_formula

    coeffs = helicoid_fine
    alpha = p_variation(coeffs)
    assert check_codazzi(alpha, coeffs.l, coeffs).passed

    wrong = coeffs.l + 0.5
    report = check_codazzi(alpha, wrong, coeffs)
    assert not report.passed
    assert report.max_residual > 0.05

    K = gaussian_curvature_formula(alpha, coeffs.l, coeffs)
    assert check_surface_integrability(alpha, coeffs.l, K, coeffs).passed
    assert not check_surface_integrability(alpha, coeffs.l, K + 0.5, coeffs).passed

def test_singular_cells():
    from h1frames.surfaces import surface_invariants, gaussian_curvature_formula, p_variation
    from h1frames.surfaces.factory import sampled_coefficients
    from h1frames.utils.exceptions import SingularCell

    u = np.linspace(-1.0, 1.0, 21)
    # c vanishes along u = 0
    coeffs = sampled_coefficients(u, u, b = 1.0, c = lambda U, V: U)
    invariants = surface_invariants(coeffs)
    assert np.all(np.isnan(invariants.alpha[10]))
    assert np.all(np.isnan(invariants.K[10]))
    assert np.all(np.isfinite(invariants.K[:8]))

    data = invariants.to_json()
    assert data["alpha"][10][0] is None
    assert data["alpha"][0][0] == pytest.approx(-1.0)

    with pytest.raises(SingularCell):
        gaussian_curvature_formula(p_variation(coeffs), coeffs.l, coeffs, strict = True)
    with pytest.raises(SingularCell):
        surface_invariants(sampled_coefficients(u, u, c = 0.0))

def test_totals(helicoid_fine):
    from h1frames.surfaces import (
        patch_total, patch_area, euler_integrand, euler_integrand_alt, p_variation, induced_metric,
    )
    from h1frames.surfaces.factory import constant_coefficients
    from h1frames.utils.numerics import simpson_integrate
    from h1frames.utils.exceptions import ClosedSurfaceUnsupported

    u = np.linspace(0.0, 2.0, 41)
    cylinder = constant_coefficients(u, u, l = 1.0)
    assert patch_area(cylinder) == pytest.approx(4.0)
    assert patch_total(euler_integrand(p_variation(cylinder), cylinder.l, cylinder), cylinder) == 0.0

    coeffs = helicoid_fine
    metric = induced_metric(coeffs)
    area = simpson_integrate(simpson_integrate(np.sqrt(metric.determinant), coeffs.du, axis = 0), coeffs.dv, axis = 0)
    assert patch_area(coeffs) == pytest.approx(area, rel = 1e-12)

    alpha = p_variation(coeffs)
    K = euler_integrand(alpha, coeffs.l, coeffs)
    K_alt = euler_integrand_alt(alpha, coeffs.l, coeffs)
    assert np.allclose(K_alt, K*np.sqrt(1 + alpha**2), rtol = 1e-12, atol = 0)
    # same total against either area form
    assert patch_total(K_alt, coeffs, "contact") == pytest.approx(patch_total(K, coeffs, "area"), rel = 1e-12)

    with pytest.raises(ClosedSurfaceUnsupported):
        patch_total(K, coeffs, closed = True)
    with pytest.raises(ValueError):
        patch_total(K, coeffs, form = "volume")

def test_save_invariants(helicoid_fine, tmp_path):
    from h1frames.surfaces import surface_invariants, SurfaceInvariants
    from h1frames.record import GridRecord

    invariants = surface_invariants(helicoid_fine)
    assert invariants.K_discrepancy <= 1e-3
    path = invariants.save(tmp_path / "helicoid.h1rec")

    loaded = GridRecord.load(path)
    assert isinstance(loaded, SurfaceInvariants)
    assert np.array_equal(loaded.K, invariants.K, equal_nan = True)
    assert np.array_equal(loaded.coframe.q2, invariants.coframe.q2)
    assert loaded.to_json()["K_max_discrepancy"] == invariants.K_discrepancy

def test_directional_derivatives(helicoid_fine):
    from h1frames.surfaces import directional_derivatives, p_variation

    coeffs = helicoid_fine
    U, V = np.meshgrid(coeffs.u, coeffs.v, indexing = 'ij')
    alpha = np.ma.filled(p_variation(coeffs), np.nan)

    e1_u, e_sigma_u = directional_derivatives(U, coeffs)
    assert np.allclose(e1_u, 1.0, rtol = 0, atol = 1e-12)
    # a = 0 on the helicoid
    assert np.allclose(e_sigma_u, 0.0, rtol = 0, atol = 1e-12)

    e1_v, e_sigma_v = directional_derivatives(V, coeffs)
    assert np.allclose(e1_v, 0.0, rtol = 0, atol = 1e-12)
    assert np.allclose(e_sigma_v, 1/(coeffs.c*np.sqrt(1 + alpha**2)), rtol = 1e-12, atol = 0)

def test_flat_reference_curvature():
    from h1frames.surfaces import gaussian_curvature_reference, induced_metric
    from h1frames.surfaces.factory import constant_coefficients

    u = np.linspace(0.0, 2.0, 21)
    # plane, then cylinder
    for l in (0.0, 1.0):
        K = gaussian_curvature_reference(induced_metric(constant_coefficients(u, u, c = 1.0, l = l)))
        assert np.allclose(K, 0.0, rtol = 0, atol = 1e-8)

def test_verdicts_agree(swept):
    """ The single condition passes exactly when the Gauss and Codazzi checks both do """
    from h1frames.surfaces import (
        p_variation, gaussian_curvature_formula, check_gauss, check_codazzi, check_surface_integrability,
    )
    from h1frames.surfaces.factory import constant_coefficients

    u = np.linspace(0.0, 2.0, 21)
    flat = [constant_coefficients(u, u, c = 1.0, l = l) for l in (0.0, 1.0)]

    def verdicts(coeffs):
        alpha = p_variation(coeffs)
        K = gaussian_curvature_formula(alpha, coeffs.l, coeffs)
        return (
            check_gauss(coeffs).passed,
            check_codazzi(alpha, coeffs.l, coeffs).passed,
            check_surface_integrability(alpha, coeffs.l, K, coeffs).passed,
        )

    for coeffs in swept + flat:
        assert verdicts(coeffs) == (True, True, True)

    for coeffs in swept + flat:
        gauss, codazzi, whole = verdicts(coeffs.with_values(l = coeffs.l + 0.5))
        assert whole == (gauss and codazzi)

    # alpha does not vanish on the swept patches, so the shifted l is caught
    for coeffs in swept:
        _, codazzi, whole = verdicts(coeffs.with_values(l = coeffs.l + 0.5))
        assert not codazzi
        assert not whole
