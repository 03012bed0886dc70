""" Group law, frame components, motions and frames of H^1 """

import pytest
import numpy as np

@pytest.fixture(scope = "module")
def sample_points():
    rng = np.random.default_rng(7)
    return rng.uniform(-2, 2, size = (20, 3))

def test_group_law(sample_points):
    from h1frames.group import H1Point, ORIGIN, group_mul, group_inv, group_mul_array

    p = H1Point(1.0, 2.0, 3.0)
    q = H1Point(-0.5, 0.25, 1.0)
    # z1 + z2 + y1 x2 - x1 y2
    assert group_mul(p, q) == H1Point(0.5, 2.25, 4.0 + 2.0*(-0.5) - 1.0*0.25)
    assert group_mul(p, group_inv(p)) == ORIGIN
    assert group_mul(ORIGIN, p) == p

    a, b, c = sample_points[:6], sample_points[6:12], sample_points[12:18]
    left = group_mul_array(group_mul_array(a, b), c)
    right = group_mul_array(a, group_mul_array(b, c))
    assert np.allclose(left, right, rtol = 0, atol = 1e-12)

def test_point_validation():
    from h1frames.group import H1Point
    from h1frames.utils.exceptions import InvalidInput

    with pytest.raises(ValueError):
        H1Point(np.nan, 0.0, 0.0)
    with pytest.raises(InvalidInput):
        H1Point.from_json([1.0, 2.0])

def test_frame_components(sample_points):
    from h1frames.group import coord_to_frame, frame_to_coord, contact_form_array

    rng = np.random.default_rng(8)
    coords = rng.normal(size = sample_points.shape)
    frame = coord_to_frame(sample_points, coords)
    assert np.allclose(frame_to_coord(sample_points, frame), coords, rtol = 0, atol = 1e-12)

    x, y = sample_points[:, 0], sample_points[:, 1]
    expected = coords[:, 2] + x*coords[:, 1] - y*coords[:, 0]
    assert np.allclose(contact_form_array(sample_points, coords), expected, rtol = 0, atol = 1e-12)

def test_tangent_vectors():
    from h1frames.group import (
        H1Point, TangentVector, e1, e2, T, apply_J0, adapted_inner, adapted_norm, contact_form,
    )
    from h1frames.utils.exceptions import NotInContactPlane, BasePointMismatch

    p = H1Point(1.0, -1.0, 0.5)
    # e1 = d/dx + y d/dz in coordinates
    assert np.allclose(e1(p).coord, [1.0, 0.0, -1.0])
    assert np.allclose(e2(p).coord, [0.0, 1.0, -1.0])
    assert contact_form(e1(p)) == 0.0
    assert contact_form(T(p)) == 1.0

    assert apply_J0(e1(p)).isclose(e2(p))
    assert apply_J0(e2(p)).isclose(-e1(p))
    with pytest.raises(NotInContactPlane):
        apply_J0(T(p))

    v = 3.0*e1(p) + 4.0*e2(p)
    assert adapted_norm(v) == pytest.approx(5.0)
    assert adapted_inner(v, T(p)) == 0.0
    with pytest.raises(BasePointMismatch):
        v + e1()

def test_motions_preserve_structure(sample_points):
    from h1frames.group import (
        H1Point, HeisenbergMotion, TangentVector, contact_form, adapted_inner, apply_J0,
    )

    g = HeisenbergMotion.from_angle(H1Point(0.3, -1.2, 2.0), 0.7)
    h = HeisenbergMotion.from_angle(H1Point(-0.4, 0.1, 0.5), -1.9)

    assert g.compose(g.inverse()).isclose(HeisenbergMotion.identity())
    assert g.inverse().compose(g).isclose(HeisenbergMotion.identity())
    for q in sample_points[:5]:
        q = H1Point.from_array(q)
        assert np.allclose(g.compose(h).apply(q).array, g.apply(h.apply(q)).array, rtol = 0, atol = 1e-12)

    rng = np.random.default_rng(9)
    for q, coords in zip(sample_points[:5], rng.normal(size = (5, 3))):
        q = H1Point.from_array(q)
        v = TangentVector(q, coord = coords)
        w = TangentVector(q, coord = rng.normal(size = 3))
        gv, gw = g.pushforward(v), g.pushforward(w)
        # pushforward agrees with the Jacobian on coordinate components
        assert np.allclose(gv.coord, g.push_coords(coords), rtol = 0, atol = 1e-12)
        assert contact_form(gv) == pytest.approx(contact_form(v), abs = 1e-12)
        assert adapted_inner(gv, gw) == pytest.approx(adapted_inner(v, w), abs = 1e-12)

        horizontal = TangentVector(q, frame = [coords[0], coords[1], 0.0])
        assert g.pushforward(apply_J0(horizontal)).isclose(apply_J0(g.pushforward(horizontal)))

def test_motion_validation():
    from h1frames.group import HeisenbergMotion, ORIGIN
    from h1frames.utils.exceptions import NotInGroup

    with pytest.raises(NotInGroup):
        HeisenbergMotion(ORIGIN, np.array([[1.0, 0.1], [0.0, 1.0]]))
    with pytest.raises(NotInGroup):
        HeisenbergMotion(ORIGIN, np.diag([1.0, -1.0]))
    M = HeisenbergMotion.from_angle(ORIGIN, 0.3).matrix
    M[3, 1] += 1e-3
    with pytest.raises(NotInGroup):
        HeisenbergMotion.from_matrix(M)

def test_frames():
    from h1frames.group import (
        H1Point, OrientedFrame, HeisenbergMotion, TangentVector, frame_to_matrix, matrix_to_frame,
    )

    p = H1Point(1.0, 2.0, -1.0)
    f = OrientedFrame.from_angle(p, 0.4)
    assert np.allclose(f.Y.frame, [-np.sin(0.4), np.cos(0.4), 0.0])

    back = matrix_to_frame(frame_to_matrix(f))
    assert back.p == f.p
    assert back.X.isclose(f.X)

    # the frame's motion carries the standard frame onto it
    standard = OrientedFrame.standard()
    moved = standard.transformed(f.motion)
    assert np.allclose(moved.p.array, f.p.array, rtol = 0, atol = 1e-12)
    assert moved.X.isclose(f.X)

    g = HeisenbergMotion.from_angle(H1Point(0.0, 1.0, 0.0), 1.0)
    assert np.allclose(f.transformed(g).matrix, g.matrix @ f.matrix, rtol = 0, atol = 1e-12)

    with pytest.raises(ValueError):
        OrientedFrame(p, TangentVector(p, frame = [2.0, 0.0, 0.0]))

def test_maurer_cartan():
    from h1frames.group import psh_algebra, MaurerCartanValue, OrientedFrame, moving_frame_derivative

    omega = psh_algebra(1.0, 2.0, 3.0, 4.0)
    expected = np.array([
        [0, 0, 0, 0],
        [1, 0, -4, 0],
        [2, 4, 0, 0],
        [3, 2, -1, 0],
    ], dtype = float)
    assert np.array_equal(omega, expected)

    # dp = X along a curve at the origin with tau = 0
    f = OrientedFrame.standard()
    dM = moving_frame_derivative(f, MaurerCartanValue.for_curve(k = 2.0, tau = 0.0))
    assert np.allclose(dM[1:4, 0], f.X.coord)
    assert np.allclose(dM[1:4, 1], 2.0*f.Y.coord)

def test_worked_values():
    from h1frames.group import (
        H1Point, HeisenbergMotion, TangentVector, OrientedFrame, group_mul, contact_form,
        adapted_inner, T, ORIGIN,
    )

    assert group_mul(H1Point(1, 0, 0), H1Point(0, 1, 0)) == H1Point(1, 1, -1)

    p = H1Point(2.0, 0.0, 0.0)
    v = TangentVector(p, coord = [1.0, 1.0, 0.0])
    assert contact_form(v) == 2.0
    assert adapted_inner(v, T(p)) == 2.0

    quarter = HeisenbergMotion.from_angle(ORIGIN, np.pi/2)
    assert np.allclose(quarter.apply(H1Point(1, 0, 0)).array, [0.0, 1.0, 0.0], rtol = 0, atol = 1e-15)

    q = H1Point(0.5, -1.5, 2.0)
    translated = HeisenbergMotion.translation(q).apply(H1Point(1.0, 2.0, 3.0))
    assert translated == group_mul(q, H1Point(1.0, 2.0, 3.0))

    M = OrientedFrame.standard(H1Point(1.0, 2.0, 3.0)).matrix
    assert np.array_equal(M[3], [3.0, 2.0, -1.0, 1.0])
    assert np.array_equal(OrientedFrame.standard().matrix, np.eye(4))

def test_motion_functions():
    from h1frames.group import (
        H1Point, HeisenbergMotion, TangentVector, group_mul, motion_apply, motion_compose,
        motion_inverse, motion_pushforward,
    )

    p, q = H1Point(1.0, 2.0, 3.0), H1Point(-0.5, 0.25, 1.0)
    assert np.allclose(motion_apply(HeisenbergMotion.translation(p), q).array, group_mul(p, q).array)

    # quarter turn about the z-axis
    quarter = HeisenbergMotion.from_angle(H1Point(0.0, 0.0, 0.0), np.pi/2)
    assert np.allclose(motion_apply(quarter, H1Point(1.0, 0.0, 0.0)).array, [0.0, 1.0, 0.0], rtol = 0, atol = 1e-15)
    assert motion_compose(quarter, motion_inverse(quarter)).isclose(HeisenbergMotion.identity())

    v = TangentVector(H1Point(1.0, 0.0, 0.0), frame = [1.0, 0.0, 0.5])
    w = motion_pushforward(quarter, v)
    assert np.allclose(w.base.array, [0.0, 1.0, 0.0], rtol = 0, atol = 1e-15)
    assert np.allclose(w.frame, [0.0, 1.0, 0.5], rtol = 0, atol = 1e-15)
