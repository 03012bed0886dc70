""" Horizontal regularity, arclength and the invariants k and tau """

import pytest
import numpy as np

def _reparametrized_circle(t : np.ndarray, radius : float, pitch : float):
    """ circle_lift run at the varying speed phi'(t), phi(t) = t + 0.3 sin t """
    from h1frames.curves import ParamCurve
    from h1frames.curves.factory import circle_lift

    phi = t + 0.3*np.sin(t)
    phi_t = (1 + 0.3*np.cos(t))[:, None]
    phi_tt = (-0.3*np.sin(t))[:, None]
    base = circle_lift(phi, radius, pitch)
    return ParamCurve(t, base.points, base.d1*phi_t, base.d2*phi_t**2 + base.d1*phi_tt)

def test_velocity_decomposition():
    from h1frames.curves import velocity_decomposition
    from h1frames.curves.factory import horizontal_line, vertical_line, circle_lift

    t = np.linspace(0.0, 1.0, 11)
    contact, vertical = velocity_decomposition(horizontal_line(t), 3)
    assert np.allclose(contact.frame, [1.0, 0.0, 0.0])
    assert vertical == 0.0

    contact, vertical = velocity_decomposition(vertical_line(t), 3)
    assert np.allclose(contact.frame, 0.0)
    assert vertical == 1.0

    contact, vertical = velocity_decomposition(circle_lift(t), 4)
    assert np.allclose(contact.frame, [-np.sin(t[4]), np.cos(t[4]), 0.0])
    assert vertical == pytest.approx(1.0)

def test_horizontal_regularity():
    from h1frames.curves import is_horizontally_regular, require_regular, signature
    from h1frames.curves.factory import horizontal_line, vertical_line, cubic_line
    from h1frames.utils.exceptions import NotHorizontallyRegular

    t = np.linspace(-1.0, 1.0, 101)
    assert is_horizontally_regular(horizontal_line(t)) == (True, None)
    assert is_horizontally_regular(vertical_line(t)) == (False, 0)

    regular, index = is_horizontally_regular(cubic_line(t), eps = 1e-8)
    assert not regular
    assert abs(t[index]) < 1e-12

    with pytest.raises(NotHorizontallyRegular) as e:
        require_regular(cubic_line(t), eps = 1e-8)
    assert e.value.index == index
    with pytest.raises(NotHorizontallyRegular):
        signature(vertical_line(t))

def test_arclength():
    from h1frames.curves import ParamCurve, horizontal_arclength, reparametrize_by_arclength
    from h1frames.curves.factory import horizontal_line, circle_lift

    t = np.linspace(0.0, 1.0, 51)
    assert np.allclose(horizontal_arclength(horizontal_line(t)), t, rtol = 0, atol = 1e-12)
    assert np.allclose(horizontal_arclength(circle_lift(t)), t, rtol = 0, atol = 1e-12)

    # (2t, 0, 0) has horizontal speed 2
    doubled = ParamCurve(t, np.column_stack([2*t, 0*t, 0*t]))
    assert np.allclose(horizontal_arclength(doubled), 2*t, rtol = 0, atol = 1e-12)

    resampled = reparametrize_by_arclength(doubled, n_out = 11)
    assert np.allclose(resampled.t, np.linspace(0.0, 2.0, 11), rtol = 0, atol = 1e-12)
    assert np.allclose(resampled.points[:, 0], resampled.t, rtol = 0, atol = 1e-10)

    # already unit speed: resampling on the same grid changes nothing
    circle = circle_lift(np.linspace(0.0, 2*np.pi, 201), 1.5, 0.2)
    same = reparametrize_by_arclength(circle)
    assert np.allclose(same.points, circle.points, rtol = 0, atol = 1e-8)

    varying = reparametrize_by_arclength(_reparametrized_circle(np.linspace(0.0, 2*np.pi, 801), 1.0, 0.0))
    d1 = varying.first_derivative()
    assert np.allclose(np.hypot(d1[:, 0], d1[:, 1]), 1.0, rtol = 0, atol = 1e-6)
    assert varying.t[-1] == pytest.approx(2*np.pi, abs = 1e-8)

def test_pointwise_invariants():
    from h1frames.curves import p_curvature, t_variation, curvature_profile
    from h1frames.curves.factory import horizontal_line, circle_lift
    from h1frames.curves.geodesics import GeodesicParams, geodesic_closed_form

    t = np.linspace(0.0, 2.0, 21)
    line = horizontal_line(t, direction = 0.4)
    assert p_curvature(line, 5) == 0.0
    assert t_variation(line, 5) == pytest.approx(0.0, abs = 1e-15)

    unit = circle_lift(t)
    assert p_curvature(unit, 7) == pytest.approx(1.0)
    assert t_variation(unit, 7) == pytest.approx(1.0)

    # (sin t, cos t, t)
    geodesic = geodesic_closed_form(GeodesicParams(0.5, a1 = 1.0), t)
    assert np.allclose(geodesic.points[:, 0], np.sin(t))
    assert np.allclose(geodesic.points[:, 2], t)
    k, tau = curvature_profile(geodesic)
    assert np.allclose(k, -1.0, rtol = 0, atol = 1e-12)
    assert np.allclose(tau, 0.0, rtol = 0, atol = 1e-12)

def test_projection_curvature():
    """ k is the signed curvature of the projection to the xy-plane """
    from h1frames.curves import curvature_profile

    t = np.linspace(0.0, 2*np.pi, 101)
    curve = _reparametrized_circle(t, 2.0, 0.7)
    k, _ = curvature_profile(curve)

    x_t, y_t = curve.d1[:, 0], curve.d1[:, 1]
    x_tt, y_tt = curve.d2[:, 0], curve.d2[:, 1]
    plane = np.linalg.det(np.stack([np.column_stack([x_t, y_t]), np.column_stack([x_tt, y_tt])], axis = 1))/np.hypot(x_t, y_t)**3
    assert np.allclose(k, plane, rtol = 0, atol = 1e-10)
    assert np.allclose(k, 0.5, rtol = 0, atol = 1e-10)

def test_signature_values():
    from h1frames.curves import signature
    from h1frames.curves.factory import horizontal_line, circle_lift, reversed_curve

    t = np.linspace(0.0, 2*np.pi, 801)
    line = signature(horizontal_line(t, 1.0))
    assert np.max(np.abs(line.k)) < 1e-12
    assert np.max(np.abs(line.tau)) < 1e-12

    sig = signature(circle_lift(t, 2.0, 0.5))
    assert sig.s[0] == 0.0
    assert sig.s[-1] == pytest.approx(2*np.pi, abs = 1e-10)
    assert np.allclose(sig.k, 0.5, rtol = 0, atol = 1e-8)
    assert np.allclose(sig.tau, 2.25, rtol = 0, atol = 1e-8)

    # running backwards flips the sign of both invariants
    backwards = signature(reversed_curve(circle_lift(t, 2.0, 0.5)))
    assert np.allclose(backwards.k, -0.5, rtol = 0, atol = 1e-8)
    assert np.allclose(backwards.tau, -2.25, rtol = 0, atol = 1e-8)

    # reparametrizing does not change the signature
    varying = signature(_reparametrized_circle(t, 2.0, 0.5))
    assert np.allclose(varying.k, 0.5, rtol = 0, atol = 1e-6)
    assert np.allclose(varying.tau, 2.25, rtol = 0, atol = 1e-6)

def test_signature_motion_invariance():
    from h1frames.curves import signature
    from h1frames.group import HeisenbergMotion, H1Point

    rng = np.random.default_rng(11)
    t = np.linspace(0.0, 2*np.pi, 401)
    curve = _reparametrized_circle(t, 1.3, -0.4)
    original = signature(curve)
    for _ in range(20):
        g = HeisenbergMotion.from_angle(H1Point(*rng.uniform(-3, 3, 3)), rng.uniform(-np.pi, np.pi))
        moved = signature(curve.transformed(g))
        assert moved.max_difference(original) <= 1e-8

def test_finite_difference_signature():
    from h1frames.curves import signature
    from h1frames.curves.factory import circle_lift

    t = np.linspace(0.0, 2*np.pi, 801)
    sig = signature(circle_lift(t, 2.0, 0.5).without_derivatives())
    assert np.allclose(sig.k, 0.5, rtol = 0, atol = 1e-3)
    assert np.allclose(sig.tau, 2.25, rtol = 0, atol = 1e-3)

def test_signature_validation():
    from h1frames.curves import CurveSignature, ParamCurve
    from h1frames.utils.exceptions import NonUniformGrid

    with pytest.raises(NonUniformGrid):
        CurveSignature([0.0, 0.1, 0.3], [0.0]*3, [0.0]*3)
    with pytest.raises(ValueError):
        CurveSignature([0.0, 0.1, 0.2], [0.0]*3, [0.0]*2)
    with pytest.raises(ValueError):
        ParamCurve(np.linspace(0, 1, 3), np.zeros((3, 3)))
    with pytest.raises(ValueError):
        ParamCurve(np.array([0.0, 0.2, 0.1, 0.3, 0.4]), np.zeros((5, 3)))
