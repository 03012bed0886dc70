""" Coefficients of normal patches, their conditions and transformation law """

import pytest
import numpy as np

U_GRID = np.linspace(-1.0, 1.0, 41)
V_GRID = np.linspace(0.0, 2.0, 41)

@pytest.fixture(scope = "module")
def helicoid_coeffs():
    from h1frames.surfaces import coefficients
    from h1frames.surfaces.factory import helicoid

    return coefficients(helicoid(U_GRID, V_GRID))

def test_known_coefficients(helicoid_coeffs):
    from h1frames.surfaces import coefficients
    from h1frames.surfaces.factory import vertical_plane, cylinder_normal

    plane = coefficients(vertical_plane(U_GRID, V_GRID))
    for key, value in zip("abclm", (0, 0, 1, 0, 0)):
        assert np.allclose(getattr(plane, key), value, rtol = 0, atol = 1e-14)

    cylinder = coefficients(cylinder_normal(U_GRID, V_GRID))
    for key, value in zip("abclm", (0, 0, 1, 1, 0)):
        assert np.allclose(getattr(cylinder, key), value, rtol = 0, atol = 1e-14)

    U, _ = np.meshgrid(U_GRID, V_GRID, indexing = 'ij')
    assert np.allclose(helicoid_coeffs.a, 0.0, rtol = 0, atol = 1e-14)
    assert np.allclose(helicoid_coeffs.b, U, rtol = 0, atol = 1e-14)
    assert np.allclose(helicoid_coeffs.c, 1 + U**2, rtol = 0, atol = 1e-14)
    assert np.allclose(helicoid_coeffs.l, 0.0, rtol = 0, atol = 1e-14)
    assert np.allclose(helicoid_coeffs.m, 1.0, rtol = 0, atol = 1e-14)
    assert helicoid_coeffs.shape == (41, 41)
    assert np.allclose(helicoid_coeffs.u, U_GRID)

def test_finite_difference_coefficients():
    from h1frames.surfaces import coefficients
    from h1frames.surfaces.factory import helicoid, helicoid_coefficients

    u, v = np.linspace(-1.0, 1.0, 201), np.linspace(0.0, 2.0, 201)
    fd = coefficients(helicoid(u, v).without_partials())
    assert fd.max_difference(helicoid_coefficients(u, v)) <= 1e-3

def test_not_normal():
    from h1frames.surfaces import coefficients
    from h1frames.surfaces.factory import cylinder_vertical
    from h1frames.utils.exceptions import NotNormal

    with pytest.raises(NotNormal) as e:
        coefficients(cylinder_vertical(U_GRID, V_GRID))
    assert not e.value.report.characteristic
    assert e.value.exit_code == 3

def test_integrability(helicoid_coeffs):
    from h1frames.surfaces import coefficients, check_integrability
    from h1frames.surfaces.factory import cylinder_normal, random_swept_patch, constant_coefficients

    assert check_integrability(helicoid_coeffs).max_residual <= 1e-10
    assert check_integrability(coefficients(cylinder_normal(U_GRID, V_GRID))).passed
    for seed in range(3):
        swept = coefficients(random_swept_patch(np.random.default_rng(seed)))
        assert check_integrability(swept).passed
        # every u-line is a circle lift of radius r
        assert np.ptp(swept.l) <= 1e-12

    # c_u = 2 b breaks by 0.2 everywhere
    tampered = check_integrability(helicoid_coeffs.with_values(b = helicoid_coeffs.b + 0.1))
    assert not tampered.passed
    assert tampered.max_residual >= 0.19
    assert tampered.per_equation["c_u - 2 b"] == pytest.approx(0.2, abs = 1e-9)
    assert tampered.argmax_cell is not None

    # constant coefficients: b = 0 and m = a l exactly
    assert check_integrability(constant_coefficients(U_GRID, V_GRID, a = 0.5, c = 2.0, l = 3.0, m = 1.5)).passed
    assert not check_integrability(constant_coefficients(U_GRID, V_GRID, a = 0.5, c = 2.0, l = 3.0, m = 1.0)).passed
    assert not check_integrability(constant_coefficients(U_GRID, V_GRID, b = 0.5, c = 2.0)).passed

def test_pminimal(helicoid_coeffs):
    from h1frames.surfaces import coefficients, check_pminimal
    from h1frames.surfaces.factory import cylinder_normal

    report = check_pminimal(helicoid_coeffs)
    assert report.passed
    assert report.max_residual <= 1e-10

    cylinder = check_pminimal(coefficients(cylinder_normal(U_GRID, V_GRID)))
    assert not cylinder.passed
    assert cylinder.per_equation["l"] == pytest.approx(1.0)

def test_transform_values():
    """ The law agrees with coefficients computed from a reparametrized helicoid """
    from h1frames.surfaces import SurfacePatch, coefficients, transform_coefficient_values

    # G(u, v) = helicoid(-u + 0.3 v, v)
    U, V = np.meshgrid(U_GRID, V_GRID, indexing = 'ij')
    W = -U + 0.3*V
    C, S = np.cos(V), np.sin(V)
    zeros, ones = np.zeros_like(U), np.ones_like(U)
    patch = SurfacePatch(
        U_GRID[0], U_GRID[1] - U_GRID[0], V_GRID[0], V_GRID[1] - V_GRID[0],
        np.stack([W*C, W*S, V], axis = -1),
        {
            'F_u' : np.stack([-C, -S, zeros], axis = -1),
            'F_v' : np.stack([0.3*C - W*S, 0.3*S + W*C, ones], axis = -1),
            'F_uu' : np.stack([zeros, zeros, zeros], axis = -1),
            'F_uv' : np.stack([S, -C, zeros], axis = -1),
        },
    )
    direct = coefficients(patch)
    # helicoid coefficients at the image point (W, V)
    a, b, c, l, m = transform_coefficient_values(zeros, W, 1 + W**2, zeros, ones, -1, 0.3, 1.0)
    for key, expected in zip("abclm", (a, b, c, l, m)):
        assert np.allclose(getattr(direct, key), expected, rtol = 0, atol = 1e-12)
    assert np.allclose(a, -0.3)

    with pytest.raises(ValueError):
        transform_coefficient_values(a, b, c, l, m, 2, 0.0, 1.0)

def test_transform_grid():
    from h1frames.surfaces import transform_coefficients, check_integrability
    from h1frames.surfaces.factory import constant_coefficients
    from h1frames.utils.exceptions import DegenerateReparam

    u = np.linspace(0.0, 2.0, 41)
    cylinder = constant_coefficients(u, u, l = 1.0)

    # old (u, v) = (u + v/2, 2 v + 1)
    new = transform_coefficients(cylinder, 1, [0.0, 0.5], [1.0, 2.0])
    assert new.v[0] == pytest.approx(-0.5)
    assert new.v[-1] == pytest.approx(0.5)
    assert new.u[0] == pytest.approx(0.25)
    assert new.u[-1] == pytest.approx(1.75)
    for key, value in zip("abclm", (0.5, 0.0, 2.0, 1.0, 0.5)):
        assert np.allclose(getattr(new, key), value, rtol = 0, atol = 1e-10)
    assert check_integrability(new).passed

    flipped = transform_coefficients(cylinder, -1, [0.0, 0.5], [1.0, 2.0])
    for key, value in zip("abclm", (-0.5, 0.0, 2.0, -1.0, 0.5)):
        assert np.allclose(getattr(flipped, key), value, rtol = 0, atol = 1e-10)
    assert check_integrability(flipped).passed

    with pytest.raises(DegenerateReparam):
        transform_coefficients(cylinder, 1, [0.0], [1.0])

def test_p_variation(helicoid_coeffs):
    from h1frames.surfaces import p_variation
    from h1frames.surfaces.factory import sampled_coefficients

    U, _ = np.meshgrid(U_GRID, V_GRID, indexing = 'ij')
    alpha = p_variation(helicoid_coeffs)
    assert not np.any(np.ma.getmaskarray(alpha))
    assert np.allclose(alpha, U/(1 + U**2), rtol = 0, atol = 1e-14)

    # c vanishes along u = 0
    degenerate = sampled_coefficients(U_GRID, V_GRID, b = 1.0, c = lambda U, V: U)
    alpha = p_variation(degenerate)
    mask = np.ma.getmaskarray(alpha)
    assert np.array_equal(np.argwhere(mask.any(axis = 1)).ravel(), [20])
    assert np.all(mask[20])

def test_induced_metric():
    from h1frames.surfaces import coefficients, induced_metric, fundamental_forms
    from h1frames.surfaces.factory import random_swept_patch

    patch = random_swept_patch(np.random.default_rng(4), np.linspace(0, 1, 21), np.linspace(0, 1, 21))
    coeffs = coefficients(patch)
    metric = induced_metric(coeffs)

    # the adapted metric on frame components
    Fu = patch.frame_components(patch.tangent_u())
    Fv = patch.frame_components(patch.tangent_v())
    assert np.allclose(metric.E, np.sum(Fu*Fu, axis = -1), rtol = 0, atol = 1e-12)
    assert np.allclose(metric.F, np.sum(Fu*Fv, axis = -1), rtol = 0, atol = 1e-12)
    assert np.allclose(metric.G, np.sum(Fv*Fv, axis = -1), rtol = 0, atol = 1e-12)
    assert np.all(metric.is_positive_definite())

    forms = fundamental_forms(coeffs)
    assert np.array_equal(forms["I"][..., 1], coeffs.a)
    assert np.all(forms["III"][..., 0] == 0.0)
    assert np.array_equal(forms["IV"][..., 0], coeffs.l)

def test_coefficient_validation():
    from h1frames.surfaces import SurfaceCoefficients
    from h1frames.utils.exceptions import InvalidInput

    grid = np.zeros((5, 5))
    with pytest.raises(ValueError):
        SurfaceCoefficients(0.0, 0.1, 0.0, 0.1, grid, grid, grid, grid, np.zeros((5, 4)))
    with pytest.raises(ValueError):
        SurfaceCoefficients(0.0, 0.1, 0.0, 0.1, grid, grid, grid + np.nan, grid, grid)
    with pytest.raises(InvalidInput):
        SurfaceCoefficients.from_json({"u0" : 0.0})

def test_motion_invariance():
    from h1frames.group import HeisenbergMotion, H1Point
    from h1frames.surfaces import coefficients
    from h1frames.surfaces.factory import random_swept_patch

    rng = np.random.default_rng(11)
    grid = np.linspace(0.0, 1.0, 51)
    for _ in range(10):
        patch = random_swept_patch(rng, grid, grid)
        g = HeisenbergMotion.from_angle(H1Point(*rng.normal(size = 3)), rng.uniform(-np.pi, np.pi))
        moved = coefficients(patch.transformed(g))
        assert moved.max_difference(coefficients(patch)) <= 1e-8

def test_reparametrized_forms():
    """
    Pulled back through (u, v) -> (sign u + g(v), h(v)), the old forms are
    sign I, sign II, III and IV of the new coordinates, and the metric
    agrees on every tangent vector.
    """
    from numpy.polynomial.polynomial import polyval2d, polyval
    from h1frames.surfaces import (
        SurfaceCoefficients, transform_coefficients, fundamental_forms, induced_metric,
    )
    from h1frames.surfaces.factory import sampled_coefficients

    rng = np.random.default_rng(12)
    for _ in range(10):
        # bicubic data, which the spline resampling reproduces exactly
        tables = {key : rng.normal(scale = 0.1, size = (4, 4)) for key in "abclm"}
        tables["c"][0, 0] += 1.0
        funcs = {key : (lambda U, V, t = table : polyval2d(U, V, t)) for key, table in tables.items()}
        old = sampled_coefficients(U_GRID, V_GRID, **funcs)

        sign = int(rng.choice([-1, 1]))
        g = [rng.uniform(-0.3, 0.3), rng.uniform(-0.5, 0.5)]
        h = [rng.uniform(-0.2, 0.2), rng.choice([-1, 1])*rng.uniform(0.8, 1.5)]
        new = transform_coefficients(old, sign, g, h)

        U, V = np.meshgrid(new.u, new.v, indexing = 'ij')
        at_image = SurfaceCoefficients(
            new.u0, new.du, new.v0, new.dv,
            *(funcs[key](sign*U + polyval(V, g), polyval(V, h)) for key in "abclm"),
        )
        g_prime, h_prime = g[1], h[1]

        old_forms, new_forms = fundamental_forms(at_image), fundamental_forms(new)
        for key, factor in zip(("I", "II", "III", "IV"), (sign, sign, 1, 1)):
            A, B = old_forms[key][..., 0], old_forms[key][..., 1]
            pulled = np.stack([sign*A, g_prime*A + h_prime*B], axis = -1)
            assert np.allclose(pulled, factor*new_forms[key], rtol = 0, atol = 1e-8)

        old_metric, new_metric = induced_metric(at_image), induced_metric(new)
        for du_vec, dv_vec in ((1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (0.3, -2.0)):
            assert np.allclose(
                new_metric.apply(du_vec, dv_vec),
                old_metric.apply(sign*du_vec + g_prime*dv_vec, h_prime*dv_vec),
                rtol = 0, atol = 1e-8,
            )
