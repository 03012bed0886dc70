"""
Ready-made curves and signatures with known invariants, all carrying
analytic derivative samples.
"""
from typing import Callable, Optional

import numpy as np

from .curve import ParamCurve, CurveSignature

def horizontal_line(t : np.ndarray, direction : float = 0.0)->ParamCurve:
    """ (t cos a, t sin a, 0): k = 0, tau = 0 """
    t = np.asarray(t, dtype=float)
    c, s = np.cos(direction), np.sin(direction)
    zeros = np.zeros_like(t)
    points = np.column_stack([c*t, s*t, zeros])
    d1 = np.column_stack([c + zeros, s + zeros, zeros])
    return ParamCurve(t, points, d1, np.zeros_like(points))

def vertical_line(t : np.ndarray)->ParamCurve:
    """ (0, 0, t), nowhere horizontally regular """
    t = np.asarray(t, dtype=float)
    zeros = np.zeros_like(t)
    points = np.column_stack([zeros, zeros, t])
    d1 = np.column_stack([zeros, zeros, zeros + 1.0])
    return ParamCurve(t, points, d1, np.zeros_like(points))

def circle_lift(t : np.ndarray, radius : float = 1.0, pitch : float = 0.0)->ParamCurve:
    """
    (r cos(t/r), r sin(t/r), pitch t/r), already in horizontal arclength.
    k = 1/r and tau = (r^2 + pitch)/r, so pitch = -r^2 gives a geodesic.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    t = np.asarray(t, dtype=float)
    r = float(radius)
    phase = t/r
    C, S = np.cos(phase), np.sin(phase)
    points = np.column_stack([r*C, r*S, pitch*phase])
    d1 = np.column_stack([-S, C, np.full_like(t, pitch/r)])
    d2 = np.column_stack([-C/r, -S/r, np.zeros_like(t)])
    return ParamCurve(t, points, d1, d2)

def cubic_line(t : np.ndarray)->ParamCurve:
    """ (t^3, 0, 0): horizontal speed vanishes at t = 0 """
    t = np.asarray(t, dtype=float)
    zeros = np.zeros_like(t)
    points = np.column_stack([t**3, zeros, zeros])
    d1 = np.column_stack([3*t**2, zeros, zeros])
    d2 = np.column_stack([6*t, zeros, zeros])
    return ParamCurve(t, points, d1, d2)

def reversed_curve(curve : ParamCurve)->ParamCurve:
    """ The same trace run backwards, t -> t0 + t1 - t """
    t = curve.t[0] + curve.t[-1] - curve.t[::-1]
    d1 = None if curve.d1 is None else -curve.d1[::-1]
    d2 = None if curve.d2 is None else curve.d2[::-1]
    return ParamCurve(t, curve.points[::-1], d1, d2)

def sampled_signature(
        k       : Callable[[np.ndarray], np.ndarray],
        tau     : Callable[[np.ndarray], np.ndarray],
        s_max   : float,
        n       : int,
        name    : Optional[str] = None,
    )->CurveSignature:
    """ Samples k(s), tau(s) on n uniform points of [0, s_max] """
    s = np.linspace(0.0, s_max, n)
    return CurveSignature(
        s,
        np.broadcast_to(k(s), s.shape),
        np.broadcast_to(tau(s), s.shape),
        name = name,
    )

def constant_signature(k : float, tau : float, s_max : float, n : int)->CurveSignature:
    return sampled_signature(lambda s: np.full_like(s, k), lambda s: np.full_like(s, tau), s_max, n)
