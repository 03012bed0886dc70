"""
Surfaces from their invariants.

Both reconstructions integrate the frame equations

    M_u = M phi_u,   M_v = M phi_v

with phi_u, phi_v in psh(1), first along one coordinate line through the
grid corner and then along every fiber of the other coordinate. The
fibers are independent, so they are integrated in batches on a thread
pool sized by H1_NUM_THREADS.
"""
from concurrent.futures import ThreadPoolExecutor
from logging import info
from typing import Optional

import numpy as np

from .coefficients import SurfaceCoefficients, check_integrability
from .invariants import Coframe, GridLike, coframe_integrability_residual, connection_forms, _filled
from .patch import SurfacePatch
from ..group import OrientedFrame, psh_algebra
from ..utils.config import TOLERANCES, num_threads
from ..utils.exceptions import IntegrabilityViolation
from ..utils.numerics import (
    OdeProblem, GridField, integrate_group_ode, sampled_generator, fd_truncation_estimate,
    fd_partial,
)
from ..utils.reports import ResidualReport

ORDERS = ("uv", "vu")

def _integrate_line(
        generators      : np.ndarray,
        start           : np.ndarray,
        step            : float,
        reproject_every : int,
    )->np.ndarray:
    """
    M' = M omega along axis 0 of `generators` (n, ..., 4, 4) from the
    batch of frames `start` (..., 4, 4). Returns (n, ..., 4, 4).
    """
    generator = sampled_generator(0.0, step, generators)
    n = generators.shape[0]
    problem = OdeProblem(
        rhs = lambda t, M: M @ generator(t),
        y0 = start,
        t0 = 0.0,
        t1 = step*(n - 1),
        n_steps = n - 1,
    )
    _, trajectory = integrate_group_ode(problem, reproject_every = reproject_every)
    return trajectory

def _integrate_fibers(
        generators      : np.ndarray,
        starts          : np.ndarray,
        step            : float,
        reproject_every : int,
    )->np.ndarray:
    """
    Integrates fiber k from starts[k] with generators[:, k]. Fibers are
    split into one chunk per worker.
    """
    n_fibers = starts.shape[0]
    workers = min(num_threads(), n_fibers)
    chunks = np.array_split(np.arange(n_fibers), workers)

    def run(indices : np.ndarray)->np.ndarray:
        return _integrate_line(generators[:, indices], starts[indices], step, reproject_every)

    if workers == 1:
        return run(chunks[0])
    info(f"Integrating {n_fibers} fibers on {workers} threads")
    with ThreadPoolExecutor(max_workers = workers) as pool:
        parts = list(pool.map(run, chunks))
    return np.concatenate(parts, axis=1)

def integrate_frame_grid(
        phi_u           : np.ndarray,
        phi_v           : np.ndarray,
        initial         : OrientedFrame,
        du              : float,
        dv              : float,
        order           : str = "uv",
        reproject_every : int = 1,
    )->np.ndarray:
    """
    Frames on the whole grid from psh(1) samples phi_u, phi_v of shape
    (nu, nv, 4, 4), with frames[0, 0] the initial frame.

    order = "uv" runs along u at v = v0 and then up every v-fiber;
    "vu" runs along v at u = u0 first and then along every u-fiber.
    """
    if order not in ORDERS:
        raise ValueError(f"order must be one of {ORDERS}, got {order!r}")
    M0 = initial.matrix
    if order == "uv":
        line = _integrate_line(phi_u[:, 0], M0, du, reproject_every)
        fibers = _integrate_fibers(np.swapaxes(phi_v, 0, 1), line, dv, reproject_every)
        return np.swapaxes(fibers, 0, 1)
    line = _integrate_line(phi_v[0], M0, dv, reproject_every)
    return _integrate_fibers(phi_u, line, du, reproject_every)

def _frame_columns(frames : np.ndarray)->tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """ p, X, Y, T in coordinate components """
    return frames[..., 1:4, 0], frames[..., 1:4, 1], frames[..., 1:4, 2], frames[..., 1:4, 3]

def reconstruct_surface(
        coeffs          : SurfaceCoefficients,
        initial         : Optional[OrientedFrame] = None,
        tol             : float = TOLERANCES.fd,
        order           : str = "uv",
        reproject_every : int = 1,
    )->SurfacePatch:
    """
    The normal patch with coefficients `coeffs` whose corner frame is
    `initial` (the standard frame at the origin by default), from

        phi_u = psh(1, 0, 0, l),   phi_v = psh(a, b, c, m).

    The patch carries partials read off the frames:
    F_u = X, F_v = a X + b Y + c T, F_uu = l Y, F_uv = m Y + b T.

    Raises IntegrabilityViolation, with the worst cell, when the
    coefficients fail the integrability conditions at `tol`.
    """
    report = check_integrability(coeffs, tol)
    if not report.passed:
        raise IntegrabilityViolation("Coefficients violate the integrability conditions", report = report)
    initial = OrientedFrame.standard() if initial is None else initial

    a, b, c, l, m = coeffs.a, coeffs.b, coeffs.c, coeffs.l, coeffs.m
    phi_u = psh_algebra(1.0, 0.0, 0.0, l)
    phi_v = psh_algebra(a, b, c, m)
    frames = integrate_frame_grid(phi_u, phi_v, initial, coeffs.du, coeffs.dv, order, reproject_every)
    points, X, Y, T = _frame_columns(frames)
    partials = {
        'F_u' : X,
        'F_v' : a[..., None]*X + b[..., None]*Y + c[..., None]*T,
        'F_uu' : l[..., None]*Y,
        'F_uv' : m[..., None]*Y + b[..., None]*T,
    }
    return SurfacePatch(coeffs.u0, coeffs.du, coeffs.v0, coeffs.dv, points, partials)

def invariants_tolerance(coframe : Coframe, alpha : np.ndarray, l : np.ndarray)->float:
    """ 50 times the Richardson truncation estimate of the inputs, at least 1e-8 """
    fields = [GridField(values, coframe.du, coframe.dv) for values in (alpha, l)] + coframe.fields()
    return max(50.0*fd_truncation_estimate(*fields), 1e-8)

def reconstruct_from_invariants(
        coframe         : Coframe,
        alpha           : GridLike,
        l               : GridLike,
        initial         : Optional[OrientedFrame] = None,
        tol             : Optional[float] = None,
        order           : str = "uv",
        reproject_every : int = 1,
    )->SurfacePatch:
    """
    The patch whose induced metric has orthonormal coframe (w^1, w^2),
    with p-variation alpha and p-mean curvature l, from

        w1 = w^1,  w2 = alpha/s w^2,  w3 = w^2/s,
        w12 = alpha/s w^_1^2 + l/s^2 w^1 + (e1 alpha)/s^3 w^2,

    s = sqrt(1 + alpha^2), with w^_1^2 from the structure equations of
    the coframe. The output carries F_u and F_v read off the frames.

    Raises IntegrabilityViolation when (alpha, l, K) fail the
    integrability condition at `tol`, by default 50 times the estimated
    finite-difference truncation error.
    """
    alpha, l = _filled(alpha), _filled(l)
    if alpha.shape != coframe.shape or l.shape != coframe.shape:
        raise ValueError("alpha and l must live on the coframe grid")
    if not (np.all(np.isfinite(alpha)) and np.all(np.isfinite(l))):
        raise ValueError("alpha and l must be finite on the whole patch")
    tol = invariants_tolerance(coframe, alpha, l) if tol is None else tol

    residual, connection = coframe_integrability_residual(coframe, alpha, l)
    report = ResidualReport.from_residuals({"integrability" : residual}, tol)
    if not report.passed:
        raise IntegrabilityViolation("Invariants violate the integrability condition", report = report)
    initial = OrientedFrame.standard() if initial is None else initial

    e1_alpha, _ = coframe.derivatives(alpha)
    forms = connection_forms(alpha, l, e1_alpha, (connection.lambda1, connection.lambda2))
    w12_1, w12_2 = forms.omega_12_via_hat
    s = np.sqrt(1.0 + alpha**2)
    p1, q1, p2, q2 = coframe.p1, coframe.q1, coframe.p2, coframe.q2

    phi_u = psh_algebra(p1, alpha/s*p2, p2/s, w12_1*p1 + w12_2*p2)
    phi_v = psh_algebra(q1, alpha/s*q2, q2/s, w12_1*q1 + w12_2*q2)
    frames = integrate_frame_grid(phi_u, phi_v, initial, coframe.du, coframe.dv, order, reproject_every)
    points, X, Y, T = _frame_columns(frames)

    def along(w1, w2, w3):
        return w1[..., None]*X + w2[..., None]*Y + w3[..., None]*T

    def d(values, axis):
        return fd_partial(GridField(values, coframe.du, coframe.dv), axis).values

    # F_u = p1 X + b2 Y + b3 T; differentiate with dX = Y w12 + T w2, dY = -X w12 - T w1
    b2, b3 = alpha/s*p2, p2/s
    c2 = alpha/s*q2
    W_u, W_v = w12_1*p1 + w12_2*p2, w12_1*q1 + w12_2*q2
    partials = {
        'F_u' : along(p1, b2, b3),
        'F_v' : along(q1, c2, q2/s),
        'F_uu' : along(d(p1, 'u') - b2*W_u, d(b2, 'u') + p1*W_u, d(b3, 'u')),
        'F_uv' : along(d(p1, 'v') - b2*W_v, d(b2, 'v') + p1*W_v, d(b3, 'v') + p1*c2 - b2*q1),
    }
    return SurfacePatch(coframe.u0, coframe.du, coframe.v0, coframe.dv, points, partials)
