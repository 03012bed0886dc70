"""
Curves from their signature and the congruence test between two curves.

Along a curve in horizontal arclength the frame (gamma; X, Y, T) with
X = gamma'_xi0 and Y = J0 X moves by

    M'(s) = M(s) omega(s),   omega = psh(1) matrix of (1, 0, tau(s), k(s)),

so integrating this linear ODE from any initial frame rebuilds the curve,
and two curves with the same signature differ by the motion carrying one
initial frame onto the other.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .curve import ParamCurve, CurveSignature, reparametrize_by_arclength, horizontal_arclength
from ..group import OrientedFrame, HeisenbergMotion, TangentVector, psh_algebra
from ..utils.exceptions import NotCongruent
from ..utils.numerics import (
    OdeProblem, integrate_group_ode, sampled_generator, fd_derivative,
)

def integrate_frames(
        sig             : CurveSignature,
        initial         : Optional[OrientedFrame] = None,
        reproject_every : int = 1,
    )->tuple[np.ndarray, np.ndarray]:
    """
    Frames along the curve with signature `sig`.

    Returns
    -------
    (s, frames) : tuple[np.ndarray, np.ndarray]

        frames has shape (len(sig), 4, 4); frames[0] is the initial frame.
    """
    initial = OrientedFrame.standard() if initial is None else initial
    omegas = psh_algebra(1.0, 0.0, sig.tau, sig.k)
    generator = sampled_generator(sig.s[0], sig.step, omegas)
    problem = OdeProblem(
        rhs = lambda s, M: M @ generator(s),
        y0 = initial.matrix,
        t0 = float(sig.s[0]),
        t1 = float(sig.s[-1]),
        n_steps = len(sig) - 1,
    )
    return integrate_group_ode(problem, reproject_every = reproject_every)

def reconstruct_curve(
        sig             : CurveSignature,
        initial         : Optional[OrientedFrame] = None,
        reproject_every : int = 1,
    )->ParamCurve:
    """
    The curve with signature `sig` starting at `initial` (standard frame
    at the origin by default). Derivative samples are read off the
    integrated frames: gamma' = X + tau T and gamma'' = k Y + tau' T.
    """
    s, frames = integrate_frames(sig, initial, reproject_every)
    points = frames[:, 1:4, 0]
    X = frames[:, 1:4, 1]
    Y = frames[:, 1:4, 2]
    T = np.array([0.0, 0.0, 1.0])
    tau_s = fd_derivative(sig.tau, sig.step, axis=0)
    d1 = X + sig.tau[:, None]*T
    d2 = sig.k[:, None]*Y + tau_s[:, None]*T
    return ParamCurve(s, points, d1, d2)

def _start_frame(curve : ParamCurve)->OrientedFrame:
    """ (gamma(s0); X, J0 X) for a curve in horizontal arclength """
    base = curve.point(0)
    d1 = curve.first_derivative()[0]
    horizontal = d1[:2]/np.hypot(d1[0], d1[1])
    return OrientedFrame(base, TangentVector(base, frame = [horizontal[0], horizontal[1], 0.0]))

@dataclass
class CongruenceResult():
    motion : HeisenbergMotion
    max_deviation : float
    frame_deviation : float
    tol : float

    @property
    def congruent(self)->bool:
        return self.max_deviation <= self.tol and self.frame_deviation <= self.tol

def congruence_diagnostic(c1 : ParamCurve, c2 : ParamCurve, g : HeisenbergMotion)->np.ndarray:
    """
    A(s) = <X1^g, X2> + <Y1^g, Y2> for two curves sampled on the same
    arclength grid. It equals 2 exactly when g lines the frames up.
    """
    d1, d2 = c1.first_derivative(), c2.first_derivative()
    X1 = d1[:, :2]/np.hypot(d1[:, 0], d1[:, 1])[:, None]
    X2 = d2[:, :2]/np.hypot(d2[:, 0], d2[:, 1])[:, None]
    X1g = X1 @ g.R.T
    Y1g = np.column_stack([-X1g[:, 1], X1g[:, 0]])
    Y2 = np.column_stack([-X2[:, 1], X2[:, 0]])
    return np.sum(X1g*X2, axis=1) + np.sum(Y1g*Y2, axis=1)

def congruence_check(c1 : ParamCurve, c2 : ParamCurve, tol : Optional[float] = None)->CongruenceResult:
    """
    Resamples both curves on a shared arclength grid over their common
    length, solves g from g . frame1(s0) = frame2(s0) and measures how far
    g . gamma1 is from gamma2 and how far A(s) is from 2.
    """
    if tol is None:
        tol = 1e-6 if (c1.has_analytic and c2.has_analytic) else 1e-4
    length = min(horizontal_arclength(c1)[-1], horizontal_arclength(c2)[-1])
    n = min(len(c1), len(c2))
    r1 = reparametrize_by_arclength(c1, n, s_max = length)
    r2 = reparametrize_by_arclength(c2, n, s_max = length)

    f1, f2 = _start_frame(r1), _start_frame(r2)
    g = f2.motion.compose(f1.motion.inverse())
    deviation = float(np.max(np.linalg.norm(g.apply_array(r1.points) - r2.points, axis=1)))
    frame_deviation = float(np.max(np.abs(congruence_diagnostic(r1, r2, g) - 2.0)))
    return CongruenceResult(g, deviation, frame_deviation, tol)

def congruence_motion(c1 : ParamCurve, c2 : ParamCurve, tol : Optional[float] = None)->HeisenbergMotion:
    """
    The motion g with g . c1 = c2, or NotCongruent carrying the largest
    pointwise deviation.
    """
    result = congruence_check(c1, c2, tol)
    if not result.congruent:
        raise NotCongruent(
            f"Curves are not congruent within {result.tol:.1e} "
            f"(|A(s) - 2| up to {result.frame_deviation:.3e})",
            max_deviation = result.max_deviation,
        )
    return result.motion
