"""
Parametrized surface patches F(u, v) sampled on uniform grids, their
characteristic foliation and normal coordinates.

(u, v) are normal coordinates when the patch has no singular points
(the tangent plane never equals the contact plane), F_u spans the
characteristic direction TS ∩ xi0 and |F_u| = 1. All grids put u along
axis 0, so points have shape (nu, nv, 3).
"""
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional, Sequence

import numpy as np
from scipy.interpolate import RectBivariateSpline

from ..group import H1Point, TangentVector, coord_to_frame, frame_to_coord
from ..utils import uniform_step
from ..utils.config import TOLERANCES
from ..utils.exceptions import Singular, FlowLeftPatch, InvalidInput
from ..utils.numerics import OdeProblem, integrate_ode, fd_derivative
from ..utils.reports import NormalityReport

if TYPE_CHECKING:
    from ..group import HeisenbergMotion
    from ..utils.types import PointArray

PARTIAL_NAMES = ('F_u', 'F_v', 'F_uu', 'F_uv')

def _flatten_u_fastest(values : np.ndarray)->list:
    """ (nu, nv, 3) -> nu*nv rows with u varying fastest """
    return np.swapaxes(values, 0, 1).reshape(-1, 3).tolist()

def _unflatten_u_fastest(rows, nu : int, nv : int)->np.ndarray:
    rows = np.asarray(rows, dtype=float)
    if rows.shape != (nu*nv, 3):
        raise ValueError(f"Expected {nu*nv} rows of 3 values, got {rows.shape}")
    return np.swapaxes(rows.reshape(nv, nu, 3), 0, 1)

class SurfacePatch():
    """
    Samples F(u_i, v_j) on a uniform grid, with optional analytic partial
    derivative samples (coordinate components) keyed by 'F_u', 'F_v',
    'F_uu' and 'F_uv'. Missing partials come from order-2 finite
    differences, of an analytic lower partial where one exists.
    """

    MIN_SIZE : int = 5

    def __init__(
            self,
            u0          : float,
            du          : float,
            v0          : float,
            dv          : float,
            points      : 'PointArray',
            partials    : Optional[dict[str, np.ndarray]] = None,
        ):
        points = np.array(points, dtype=float)
        if points.ndim != 3 or points.shape[2] != 3:
            raise ValueError(f"Points must have shape (nu, nv, 3), got {points.shape}")
        if min(points.shape[:2]) < self.MIN_SIZE:
            raise ValueError(
                f"A patch needs at least {self.MIN_SIZE}x{self.MIN_SIZE} samples, got {points.shape[:2]}"
            )
        if not (du > 0 and dv > 0):
            raise ValueError("Grid steps must be positive")
        if not np.all(np.isfinite(points)):
            raise ValueError("Patch samples must be finite")
        self.u0, self.du = float(u0), float(du)
        self.v0, self.dv = float(v0), float(dv)
        points.flags.writeable = False
        self._points = points

        self._partials : dict[str, np.ndarray] = {}
        for key, value in (partials or {}).items():
            if key not in PARTIAL_NAMES:
                raise ValueError(f"Unknown partial {key!r}, expected one of {PARTIAL_NAMES}")
            if value is None:
                continue
            value = np.array(value, dtype=float)
            if value.shape != points.shape:
                raise ValueError(f"{key} has shape {value.shape}, expected {points.shape}")
            if not np.all(np.isfinite(value)):
                raise ValueError(f"{key} must be finite")
            value.flags.writeable = False
            self._partials[key] = value

    @property
    def points(self)->'PointArray':
        return self._points

    @property
    def partials(self)->dict[str, np.ndarray]:
        return dict(self._partials)

    @property
    def has_analytic(self)->bool:
        return 'F_u' in self._partials and 'F_v' in self._partials

    @property
    def nu(self)->int:
        return self._points.shape[0]

    @property
    def nv(self)->int:
        return self._points.shape[1]

    @property
    def shape(self)->tuple[int, int]:
        return self._points.shape[:2]

    @property
    def u(self)->np.ndarray:
        return self.u0 + self.du*np.arange(self.nu)

    @property
    def v(self)->np.ndarray:
        return self.v0 + self.dv*np.arange(self.nv)

    def point(self, i : int, j : int)->H1Point:
        return H1Point.from_array(self._points[i, j])

    def tangent_u(self)->np.ndarray:
        if 'F_u' in self._partials:
            return self._partials['F_u']
        return fd_derivative(self._points, self.du, axis=0)

    def tangent_v(self)->np.ndarray:
        if 'F_v' in self._partials:
            return self._partials['F_v']
        return fd_derivative(self._points, self.dv, axis=1)

    def second_uu(self)->np.ndarray:
        if 'F_uu' in self._partials:
            return self._partials['F_uu']
        if 'F_u' in self._partials:
            return fd_derivative(self._partials['F_u'], self.du, axis=0)
        return fd_derivative(self._points, self.du, axis=0, order=2)

    def second_uv(self)->np.ndarray:
        if 'F_uv' in self._partials:
            return self._partials['F_uv']
        if 'F_u' in self._partials:
            return fd_derivative(self._partials['F_u'], self.dv, axis=1)
        return fd_derivative(self.tangent_u(), self.dv, axis=1)

    def frame_components(self, coords : np.ndarray)->np.ndarray:
        """ (e1, e2, T) components of vectors sampled on the grid """
        return coord_to_frame(self._points, coords)

    def transformed(self, g : 'HeisenbergMotion')->'SurfacePatch':
        """ g o F, analytic partials pushed forward by the Jacobian of g """
        return SurfacePatch(
            self.u0, self.du, self.v0, self.dv,
            g.apply_array(self._points),
            {key : g.push_coords(value) for key, value in self._partials.items()},
        )

    def without_partials(self)->'SurfacePatch':
        return SurfacePatch(self.u0, self.du, self.v0, self.dv, self._points)

    def to_json(self)->dict:
        out = {
            "u0" : self.u0, "du" : self.du, "nu" : self.nu,
            "v0" : self.v0, "dv" : self.dv, "nv" : self.nv,
            "points" : _flatten_u_fastest(self._points),
        }
        if self._partials:
            out["partials"] = {
                key : _flatten_u_fastest(value) for key, value in self._partials.items()
            }
        return out

    @classmethod
    def from_json(cls, data : dict)->'SurfacePatch':
        try:
            nu, nv = int(data["nu"]), int(data["nv"])
            points = _unflatten_u_fastest(data["points"], nu, nv)
            partials = {
                key : _unflatten_u_fastest(rows, nu, nv)
                for key, rows in (data.get("partials") or {}).items()
            }
            return cls(
                float(data["u0"]), float(data["du"]),
                float(data["v0"]), float(data["dv"]),
                points, partials,
            )
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidInput(f"Bad surface patch: {e}")

    def __repr__(self)->str:
        source = "analytic" if self.has_analytic else "finite-difference"
        return (
            f"SurfacePatch {self.nu}x{self.nv} on "
            f"[{self.u[0]:.6g}, {self.u[-1]:.6g}] x [{self.v[0]:.6g}, {self.v[-1]:.6g}] "
            f"({source} partials)"
        )

## Characteristic foliation

@dataclass
class CharacteristicField():
    """
    Unit characteristic vectors (frame components, T part zero) on every
    cell, oriented continuously from the (0, 0) corner. `orientation` is
    +1 when the corner vector kept its seed sign and -1 when the caller
    asked for the opposite one.

    `param_velocity` holds (du/ds, dv/ds) for unit-speed motion along X:
    X is proportional to theta0(F_v) F_u - theta0(F_u) F_v.
    """
    X : np.ndarray
    param_velocity : np.ndarray
    singular : np.ndarray
    contact_u : np.ndarray
    contact_v : np.ndarray
    orientation : int = 1

def _seed_sign(vector : np.ndarray)->float:
    nonzero = np.flatnonzero(np.abs(vector) > 1e-14)
    if nonzero.size == 0:
        return 1.0
    return 1.0 if vector[nonzero[0]] > 0 else -1.0

def _continuity_signs(X : np.ndarray)->np.ndarray:
    """
    +-1 per cell so that neighbours along u, and along v on the first
    row, never point against each other.
    """
    along_u = np.sum(X[1:]*X[:-1], axis=-1)
    steps_u = np.where(along_u < 0, -1.0, 1.0)
    signs = np.ones(X.shape[:2])
    signs[1:] = np.cumprod(steps_u, axis=0)

    along_v = np.sum(X[0, 1:]*X[0, :-1], axis=-1)
    first_row = np.ones(X.shape[1])
    first_row[1:] = np.cumprod(np.where(along_v < 0, -1.0, 1.0))
    return signs*first_row[None, :]

def characteristic_field(
        patch       : SurfacePatch,
        tol         : float = TOLERANCES.contact,
        orientation : int = 1,
    )->CharacteristicField:
    """
    Solves theta0(p F_u + q F_v) = 0 on every cell. Cells where both
    theta0(F_u) and theta0(F_v) are within `tol` of zero are singular;
    their vectors are left at zero.
    """
    Fu = patch.frame_components(patch.tangent_u())
    Fv = patch.frame_components(patch.tangent_v())
    cu, cv = Fu[..., 2], Fv[..., 2]
    singular = (np.abs(cu) <= tol) & (np.abs(cv) <= tol)

    weights = np.stack([cv, -cu], axis=-1)
    horizontal = weights[..., :1]*Fu[..., :2] + weights[..., 1:]*Fv[..., :2]
    norm = np.linalg.norm(horizontal, axis=-1)
    degenerate = singular | ~(norm > 0)
    safe_norm = np.where(degenerate, 1.0, norm)

    X = np.zeros(Fu.shape)
    X[..., :2] = np.where(degenerate[..., None], 0.0, horizontal/safe_norm[..., None])
    signs = _continuity_signs(X)*_seed_sign(X[0, 0])*float(orientation)
    X *= signs[..., None]
    velocity = np.where(degenerate[..., None], 0.0, weights*(signs/safe_norm)[..., None])
    return CharacteristicField(X, velocity, singular, cu, cv, int(orientation))

def characteristic_direction(
        patch   : SurfacePatch,
        i       : int,
        j       : int,
        tol     : float = TOLERANCES.contact,
    )->TangentVector:
    """
    The unit vector spanning TS ∩ xi0 at F(u_i, v_j), oriented by the
    continuity sweep from the patch corner.
    """
    field = characteristic_field(patch, tol)
    if field.singular[i, j]:
        raise Singular(f"F(u, v) is a singular point at cell ({i}, {j})")
    return TangentVector(patch.point(i, j), frame = field.X[i, j])

def singular_cells(patch : SurfacePatch, tol : float = TOLERANCES.contact)->np.ndarray:
    return characteristic_field(patch, tol).singular

def is_normal_parametrization(patch : SurfacePatch, tol : Optional[float] = None)->NormalityReport:
    """
    Checks the three normal-coordinate conditions: no singular points,
    theta0(F_u) = 0 and |F_u| = 1, the last two within `tol`.
    """
    if tol is None:
        tol = TOLERANCES.analytic if patch.has_analytic else TOLERANCES.fd
    Fu = patch.frame_components(patch.tangent_u())
    singular = singular_cells(patch)
    max_contact = float(np.max(np.abs(Fu[..., 2])))
    max_speed_error = float(np.max(np.abs(np.linalg.norm(Fu, axis=-1) - 1.0)))
    return NormalityReport(
        nonsingular = not bool(np.any(singular)),
        characteristic = max_contact <= tol,
        unit_speed = max_speed_error <= tol,
        max_contact = max_contact,
        max_speed_error = max_speed_error,
        singular_cells = int(np.sum(singular)),
        tol = tol,
    )

## Normalization

class _GridInterpolant():
    """ Cubic interpolation of a (nu, nv, k) field on a patch grid """

    def __init__(self, patch : SurfacePatch, values : np.ndarray):
        u, v = patch.u, patch.v
        self._splines = [
            RectBivariateSpline(u, v, values[..., k], kx=3, ky=3, s=0)
            for k in range(values.shape[-1])
        ]

    def __call__(self, u : np.ndarray, v : np.ndarray)->np.ndarray:
        return np.stack([spline.ev(u, v) for spline in self._splines], axis=-1)

def normalize_patch(
        patch           : SurfacePatch,
        n_u             : Optional[int] = None,
        ds              : Optional[float] = None,
        seed_u_index    : int = 0,
        v_indices       : Optional[Sequence[int]] = None,
        orientation     : int = 1,
        tol             : float = TOLERANCES.contact,
    )->SurfacePatch:
    """
    Builds normal coordinates by flowing along the unit characteristic
    field from the seed line u = u[seed_u_index].

    The flow runs in parameter space, (u, v)' = W(u, v) with W the unit
    characteristic field pulled back to (du, dv) and interpolated by
    bicubic splines, using fixed-step RK4. The new coordinates are
    (s, v) with s the flow time, so the result has F_s horizontal and of
    unit length; its F_s samples are attached as analytic partials.

    Arguments
    ---------
    n_u : int, optional

        Samples along each characteristic, defaults to patch.nu.

    ds : float, optional

        Flow step, defaults to patch.du.

    v_indices : Sequence[int], optional

        Evenly spaced seed columns, defaults to all of them.

    Raises
    ------
    Singular when the patch has singular points, FlowLeftPatch when a
    characteristic leaves the sampled rectangle.
    """
    field = characteristic_field(patch, tol, orientation)
    if np.any(field.singular):
        first = tuple(int(k) for k in np.argwhere(field.singular)[0])
        raise Singular(f"Patch has {int(np.sum(field.singular))} singular cells, first at {first}")

    n_u = patch.nu if n_u is None else int(n_u)
    ds = patch.du if ds is None else float(ds)
    if n_u < SurfacePatch.MIN_SIZE:
        raise ValueError(f"n_u must be at least {SurfacePatch.MIN_SIZE}")
    v_indices = np.arange(patch.nv) if v_indices is None else np.asarray(v_indices, dtype=int)
    v_seed = patch.v[v_indices]
    dv_out = uniform_step(v_seed)

    velocity = _GridInterpolant(patch, field.param_velocity)
    u_lo, u_hi = patch.u[0], patch.u[-1]
    v_lo, v_hi = patch.v[0], patch.v[-1]
    slack = 1e-12*max(u_hi - u_lo, v_hi - v_lo)

    def rhs(s : float, state : np.ndarray)->np.ndarray:
        u, v = state[:, 0], state[:, 1]
        outside = (u < u_lo - slack) | (u > u_hi + slack) | (v < v_lo - slack) | (v > v_hi + slack)
        if np.any(outside):
            column = int(np.flatnonzero(outside)[0])
            raise FlowLeftPatch(
                f"Characteristic from v = {v_seed[column]:.6g} leaves the patch near s = {s:.6g}"
            )
        return velocity(u, v)

    start = np.column_stack([np.full(v_seed.shape, patch.u[seed_u_index]), v_seed])
    _, trajectory = integrate_ode(OdeProblem(rhs, start, 0.0, ds*(n_u - 1), n_u - 1))
    # one last bounds check on the final samples
    rhs(ds*(n_u - 1), trajectory[-1])

    u_path, v_path = trajectory[..., 0], trajectory[..., 1]
    points = _GridInterpolant(patch, patch.points)(u_path, v_path)
    Fu = _GridInterpolant(patch, patch.tangent_u())(u_path, v_path)
    Fv = _GridInterpolant(patch, patch.tangent_v())(u_path, v_path)
    W = velocity(u_path, v_path)
    along = Fu*W[..., :1] + Fv*W[..., 1:]
    horizontal = coord_to_frame(points, along)
    horizontal[..., 2] = 0.0
    horizontal[..., :2] /= np.linalg.norm(horizontal[..., :2], axis=-1, keepdims=True)

    return SurfacePatch(
        0.0, ds, float(v_seed[0]), dv_out,
        points,
        {'F_u' : frame_to_coord(points, horizontal)},
    )
