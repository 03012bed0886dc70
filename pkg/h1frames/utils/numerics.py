"""
Shared numerical kernels: fixed-step explicit integration (plain and on
PSH(1) matrices), Simpson quadrature, finite differences on uniform grids
and projection back onto the rotation group.

Everything here works on numpy arrays with arbitrary leading batch
dimensions, so that a whole row of fibers can be pushed through the
integrator at once.
"""
from dataclasses import dataclass
from logging import warning
from typing import TYPE_CHECKING, Union

import numpy as np
from scipy.integrate import simpson, cumulative_simpson

from .exceptions import (
    NonFiniteState, TooFewSamples, GridTooSmall, TooFarFromGroup, NotInGroup,
)

if TYPE_CHECKING:
    from .types import RHS, FrameMatrix, Grid

# Drift beyond this before projection is worth telling someone about
DRIFT_WARNING = 1e-6

@dataclass(frozen=True)
class OdeProblem():
    """
    y'(t) = rhs(t, y) on [t0, t1] with a fixed number of steps.

    The state may be any array shape; `dimension` is the number
    of scalars in it.
    """
    rhs : 'RHS'
    y0 : np.ndarray
    t0 : float
    t1 : float
    n_steps : int

    def __post_init__(self):
        if int(self.n_steps) < 1:
            raise ValueError(f"n_steps must be at least 1, got {self.n_steps}")
        if self.t1 == self.t0:
            raise ValueError("Integration interval is empty")
        y0 = np.array(self.y0, dtype=float)
        if not np.all(np.isfinite(y0)):
            raise NonFiniteState("Initial state is not finite")
        object.__setattr__(self, 'y0', y0)
        object.__setattr__(self, 'n_steps', int(self.n_steps))

    @property
    def dimension(self)->int:
        return self.y0.size

    @property
    def step(self)->float:
        return (self.t1 - self.t0)/self.n_steps

    @property
    def times(self)->np.ndarray:
        return self.t0 + self.step*np.arange(self.n_steps + 1)

def rk4_step(rhs : 'RHS', t : float, h : float, y : np.ndarray)->np.ndarray:
    """ One step of the classical four-stage scheme """
    k1 = rhs(t, y)
    k2 = rhs(t + h/2, y + (h/2)*k1)
    k3 = rhs(t + h/2, y + (h/2)*k2)
    k4 = rhs(t + h, y + h*k3)
    return y + (h/6)*(k1 + 2*k2 + 2*k3 + k4)

def integrate_ode(problem : OdeProblem)->tuple[np.ndarray, np.ndarray]:
    """
    Fixed-step RK4 integration.

    Returns
    -------
    (times, trajectory) : tuple[np.ndarray, np.ndarray]

        `times` has n_steps + 1 entries, `trajectory` has shape
        (n_steps + 1, *y0.shape) and starts with y0.
    """
    times = problem.times
    h = problem.step
    trajectory = np.empty((problem.n_steps + 1,) + problem.y0.shape)
    trajectory[0] = y = problem.y0
    for i in range(problem.n_steps):
        y = rk4_step(problem.rhs, times[i], h, y)
        if not np.all(np.isfinite(y)):
            raise NonFiniteState(
                f"State diverged at step {i+1} (t = {times[i+1]:.6g})"
            )
        trajectory[i+1] = y
    return times, trajectory

def integrate_group_ode(
        problem : OdeProblem,
        reproject_every : int = 1,
        tol : float = 1e-9,
    )->tuple[np.ndarray, np.ndarray]:
    """
    RK4 for M' = rhs(t, M) with M a (batch of) 4x4 PSH(1) matrices.

    After every `reproject_every` steps the rotation block is pushed back
    onto SO(2) and the dependent entries of the last row are rebuilt.
    The structural zeros are never produced by a psh(1) generator, so they
    stay exact without intervention.

    Arguments
    ---------
    problem : OdeProblem

        `y0` must have shape (..., 4, 4) and lie in PSH(1) within `tol`.

    reproject_every : int

        Projection cadence in steps. 1 projects after every step.
    """
    if problem.y0.shape[-2:] != (4, 4):
        raise ValueError(f"Group states must be 4x4 matrices, got {problem.y0.shape}")
    if reproject_every < 1:
        raise ValueError("reproject_every must be a positive integer")
    if np.max(group_residual(problem.y0)) > tol:
        raise NotInGroup("Initial state is not a PSH(1) matrix")

    times = problem.times
    h = problem.step
    trajectory = np.empty((problem.n_steps + 1,) + problem.y0.shape)
    trajectory[0] = y = project_psh(problem.y0)
    warned = False
    for i in range(problem.n_steps):
        y = rk4_step(problem.rhs, times[i], h, y)
        if not np.all(np.isfinite(y)):
            raise NonFiniteState(
                f"Frame diverged at step {i+1} (t = {times[i+1]:.6g})"
            )
        if (i + 1) % reproject_every == 0:
            if not warned and np.max(rotation_drift(y)) > DRIFT_WARNING:
                warning(
                    f"Rotation block drifted by {np.max(rotation_drift(y)):.2e} "
                    f"at step {i+1}; step size may be too large"
                )
                warned = True
            y = project_psh(y)
        trajectory[i+1] = y
    return times, trajectory

def sampled_generator(t0 : float, step : float, samples : np.ndarray):
    """
    Turns generator samples on a uniform grid (axis 0) into a
    callable of time, interpolating linearly between grid points.
    RK4 half steps land exactly between two samples.
    """
    samples = np.asarray(samples, dtype=float)
    n = samples.shape[0]
    if n < 2:
        raise TooFewSamples("Need at least two generator samples")

    def generator(t : float)->np.ndarray:
        position = (t - t0)/step
        i = int(np.clip(np.floor(position), 0, n - 2))
        w = position - i
        return (1.0 - w)*samples[i] + w*samples[i+1]

    return generator

## PSH(1) matrix helpers

def dependent_entries(p : np.ndarray, R : np.ndarray)->tuple[np.ndarray, np.ndarray]:
    """ (a p2 - c p1, b p2 - d p1) for translation p and rotation R """
    a, b = R[..., 0, 0], R[..., 0, 1]
    c, d = R[..., 1, 0], R[..., 1, 1]
    p1, p2 = p[..., 0], p[..., 1]
    return a*p2 - c*p1, b*p2 - d*p1

def assemble_psh(p : np.ndarray, R : np.ndarray)->'FrameMatrix':
    """
    The 4x4 matrix of L_p o Phi_R acting on (1, x, y, z)^T. The
    last-row entries tied to p and R are always recomputed here.
    """
    p = np.asarray(p, dtype=float)
    R = np.asarray(R, dtype=float)
    M = np.zeros(p.shape[:-1] + (4, 4))
    M[..., 0, 0] = 1.0
    M[..., 1:4, 0] = p
    M[..., 1:3, 1:3] = R
    M[..., 3, 1], M[..., 3, 2] = dependent_entries(p, R)
    M[..., 3, 3] = 1.0
    return M

def so2_project(R : np.ndarray)->np.ndarray:
    """
    Nearest rotation, built by normalizing the first column and
    rotating it by 90 degrees for the second. Works on (..., 2, 2).
    """
    R = np.asarray(R, dtype=float)
    column = R[..., :, 0]
    norm = np.linalg.norm(column, axis=-1)
    if np.any(norm == 0) or not np.all(np.isfinite(norm)):
        raise TooFarFromGroup("Rotation block has a vanishing first column")
    cos = column[..., 0]/norm
    sin = column[..., 1]/norm
    projected = np.empty(R.shape)
    projected[..., 0, 0] = cos
    projected[..., 1, 0] = sin
    projected[..., 0, 1] = -sin
    projected[..., 1, 1] = cos
    distance = np.linalg.norm(R - projected, axis=(-2, -1))
    if np.any(distance > 0.5):
        raise TooFarFromGroup(
            f"Matrix is {np.max(distance):.3f} away from SO(2) (limit 0.5)"
        )
    return projected

def rotation_drift(M : 'FrameMatrix')->np.ndarray:
    """ Max entry of |R^T R - I| for the rotation block of each matrix """
    R = M[..., 1:3, 1:3]
    gram = np.swapaxes(R, -1, -2) @ R
    return np.max(np.abs(gram - np.eye(2)), axis=(-2, -1))

def project_psh(M : 'FrameMatrix')->'FrameMatrix':
    """ Projects the rotation block and rebuilds every dependent entry """
    M = np.asarray(M, dtype=float)
    return assemble_psh(M[..., 1:4, 0], so2_project(M[..., 1:3, 1:3]))

def group_residual(M : 'FrameMatrix')->np.ndarray:
    """
    How far each matrix is from the PSH(1) pattern: orthogonality and
    orientation of R, the structural zeros and ones, and the dependent
    last-row entries.
    """
    M = np.asarray(M, dtype=float)
    R = M[..., 1:3, 1:3]
    p = M[..., 1:4, 0]
    det = R[..., 0, 0]*R[..., 1, 1] - R[..., 0, 1]*R[..., 1, 0]
    e31, e32 = dependent_entries(p, R)
    structure = np.stack(
        [
            np.abs(M[..., 0, 0] - 1.0),
            np.abs(M[..., 0, 1]), np.abs(M[..., 0, 2]), np.abs(M[..., 0, 3]),
            np.abs(M[..., 1, 3]), np.abs(M[..., 2, 3]),
            np.abs(M[..., 3, 3] - 1.0),
            np.abs(M[..., 3, 1] - e31), np.abs(M[..., 3, 2] - e32),
            np.abs(det - 1.0),
            rotation_drift(M),
        ],
        axis=-1,
    )
    return np.max(structure, axis=-1)

## Quadrature

def simpson_integrate(samples : np.ndarray, step : float, axis : int = -1)->Union[float, np.ndarray]:
    """
    Composite Simpson rule on a uniform grid. With an even number of
    samples the last interval is closed with the trapezoid rule.
    """
    samples = np.asarray(samples, dtype=float)
    n = samples.shape[axis]
    if n < 3:
        raise TooFewSamples(f"Simpson quadrature needs at least 3 samples, got {n}")
    if n % 2 == 1:
        return simpson(samples, dx=step, axis=axis)
    head = np.take(samples, np.arange(n - 1), axis=axis)
    tail = np.take(samples, [n - 2, n - 1], axis=axis)
    return simpson(head, dx=step, axis=axis) + 0.5*step*np.sum(tail, axis=axis)

def cumulative_integral(samples : np.ndarray, x : np.ndarray)->np.ndarray:
    """ Running integral from the first sample, starting at exactly 0 """
    samples = np.asarray(samples, dtype=float)
    if samples.shape[0] < 3:
        raise TooFewSamples("Cumulative quadrature needs at least 3 samples")
    return cumulative_simpson(samples, x=np.asarray(x, dtype=float), initial=0.0)

## Finite differences

AXES = {'u' : 0, 'v' : 1, 0 : 0, 1 : 1}

@dataclass(frozen=True)
class GridField():
    """ A scalar field sampled on a uniform (u, v) grid, axis 0 along u """
    values : 'Grid'
    du : float
    dv : float

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise ValueError(f"GridField needs a 2D array, got shape {values.shape}")
        if min(values.shape) < 3:
            raise GridTooSmall(
                f"Grid {values.shape} too small for central differences (need 3x3)"
            )
        if self.du <= 0 or self.dv <= 0:
            raise ValueError("Grid steps must be positive")
        object.__setattr__(self, 'values', values)

    def step(self, axis : Union[int, str])->float:
        return self.du if AXES[axis] == 0 else self.dv

    @property
    def shape(self)->tuple[int, int]:
        return self.values.shape

def fd_derivative(
        values : np.ndarray,
        spacing : Union[float, np.ndarray],
        axis : int = 0,
        order : int = 1,
    )->np.ndarray:
    """
    Order-2 accurate finite differences along one axis: central in the
    interior, one-sided at the ends.

    `spacing` is either the uniform step or the sample coordinates. Second
    derivatives on a uniform grid use the three-point stencil inside and
    the four-point one-sided stencil at the ends.
    """
    values = np.asarray(values, dtype=float)
    n = values.shape[axis]
    if order not in (1, 2):
        raise ValueError(f"Only first and second derivatives, got order {order}")
    if n < 3 or (order == 2 and n < 4):
        raise GridTooSmall(f"{n} samples along axis {axis} are too few for order {order}")

    if order == 1:
        return np.gradient(values, spacing, axis=axis, edge_order=2)

    if not np.isscalar(spacing):
        first = np.gradient(values, spacing, axis=axis, edge_order=2)
        return np.gradient(first, spacing, axis=axis, edge_order=2)

    f = np.moveaxis(values, axis, 0)
    out = np.empty_like(f)
    out[1:-1] = f[2:] - 2*f[1:-1] + f[:-2]
    out[0] = 2*f[0] - 5*f[1] + 4*f[2] - f[3]
    out[-1] = 2*f[-1] - 5*f[-2] + 4*f[-3] - f[-4]
    return np.moveaxis(out/spacing**2, 0, axis)

def fd_partial(field : GridField, axis : Union[int, str], order : int = 1)->GridField:
    """ Partial derivative of a grid field along 'u' (0) or 'v' (1) """
    axis = AXES[axis]
    return GridField(
        fd_derivative(field.values, field.step(axis), axis=axis, order=order),
        field.du,
        field.dv,
    )

def fd_mixed(field : GridField)->GridField:
    """ d/dv of d/du """
    return fd_partial(fd_partial(field, 'u'), 'v')

def fd_truncation_estimate(*fields : GridField)->float:
    """
    Richardson estimate of the first-derivative truncation error:
    differences taken at step 2h against step h at shared nodes, divided
    by 2^2 - 1. Largest value over all fields and both axes.
    """
    estimate = 0.0
    for f in fields:
        for axis in (0, 1):
            if f.values.shape[axis] < 5:
                continue
            fine = fd_derivative(f.values, f.step(axis), axis=axis)
            coarse_values = np.take(f.values, np.arange(0, f.values.shape[axis], 2), axis=axis)
            coarse = fd_derivative(coarse_values, 2*f.step(axis), axis=axis)
            fine_on_coarse = np.take(fine, np.arange(0, f.values.shape[axis], 2), axis=axis)
            estimate = max(estimate, float(np.max(np.abs(coarse - fine_on_coarse)))/3.0)
    return estimate
