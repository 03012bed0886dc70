"""
The coefficients of a normal parametrization,

    a = <F_v, X>,  b = <F_v, Y>,  c = <F_v, T>,  l = <F_uu, Y>,  m = <F_uv, Y>,

with X = F_u and Y = J0 X, together with the conditions they satisfy,
their behaviour under a change of normal coordinates and the metric they
induce. In these terms the pulled-back Maurer-Cartan forms are

    I = du + a dv,  II = b dv,  III = c dv,  IV = l du + m dv.
"""
from logging import warning
from typing import Optional, Union

import numpy as np
from numpy.polynomial import Polynomial
from scipy.interpolate import RectBivariateSpline

from .patch import SurfacePatch, is_normal_parametrization
from ..group import j0_frame
from ..record import GridRecord
from ..utils.config import TOLERANCES
from ..utils.exceptions import NotNormal, DegenerateReparam, InvalidInput
from ..utils.numerics import GridField, fd_partial
from ..utils.reports import ResidualReport

COEFFICIENT_NAMES = ('a', 'b', 'c', 'l', 'm')

class _GridRecordMixin():
    """ Shared grid bookkeeping for records living on a (u, v) grid """

    u0 : float
    du : float
    v0 : float
    dv : float

    @property
    def shape(self)->tuple[int, int]:
        raise NotImplementedError()

    @property
    def u(self)->np.ndarray:
        return self.u0 + self.du*np.arange(self.shape[0])

    @property
    def v(self)->np.ndarray:
        return self.v0 + self.dv*np.arange(self.shape[1])

    def grid_field(self, values : np.ndarray)->GridField:
        return GridField(np.asarray(values, dtype=float), self.du, self.dv)

def _as_grid(values, label : str)->np.ndarray:
    values = np.array(np.ma.filled(values, np.nan) if np.ma.isMaskedArray(values) else values, dtype=float)
    if values.ndim != 2:
        raise ValueError(f"{label} must be a 2D grid, got shape {values.shape}")
    return values

class SurfaceCoefficients(_GridRecordMixin, GridRecord):
    """ Grids of a, b, c, l, m on the (u, v) grid of a normal patch """

    SAVE_ATTRS = ['u0', 'du', 'v0', 'dv', 'a', 'b', 'c', 'l', 'm']

    def __init__(
            self,
            u0          : float,
            du          : float,
            v0          : float,
            dv          : float,
            a           : np.ndarray,
            b           : np.ndarray,
            c           : np.ndarray,
            l           : np.ndarray,
            m           : np.ndarray,
            name        : Optional[str] = None,
            info_string : Optional[str] = None,
        ):
        super().__init__(name = name, info_string = info_string)
        grids = {key : _as_grid(value, key) for key, value in zip(COEFFICIENT_NAMES, (a, b, c, l, m))}
        shapes = {grid.shape for grid in grids.values()}
        if len(shapes) != 1:
            raise ValueError(f"Coefficient grids disagree in shape: {shapes}")
        for key, grid in grids.items():
            if not np.all(np.isfinite(grid)):
                raise ValueError(f"Coefficient {key} has non-finite entries")
        if not (du > 0 and dv > 0):
            raise ValueError("Grid steps must be positive")
        self.u0, self.du, self.v0, self.dv = float(u0), float(du), float(v0), float(dv)
        self.a, self.b, self.c = grids['a'], grids['b'], grids['c']
        self.l, self.m = grids['l'], grids['m']

    @property
    def shape(self)->tuple[int, int]:
        return self.a.shape

    def field(self, name : str)->GridField:
        return self.grid_field(getattr(self, name))

    def eps_singular(self, eps : Optional[float] = None)->float:
        """ |c| at or below this marks a singular-adjacent cell """
        if eps is not None:
            return float(eps)
        return TOLERANCES.singular*float(np.median(np.abs(self.c)))

    def singular_mask(self, eps : Optional[float] = None)->np.ndarray:
        return np.abs(self.c) <= self.eps_singular(eps)

    def with_values(self, **values)->'SurfaceCoefficients':
        """ A copy with some coefficient grids replaced """
        current = {key : getattr(self, key) for key in COEFFICIENT_NAMES}
        current.update(values)
        return SurfaceCoefficients(self.u0, self.du, self.v0, self.dv, name = self._name, **current)

    def max_difference(self, other : 'SurfaceCoefficients')->float:
        return float(max(
            np.max(np.abs(getattr(self, key) - getattr(other, key)))
            for key in COEFFICIENT_NAMES
        ))

    def to_json(self)->dict:
        out = {
            "u0" : self.u0, "du" : self.du, "nu" : self.shape[0],
            "v0" : self.v0, "dv" : self.dv, "nv" : self.shape[1],
        }
        for key in COEFFICIENT_NAMES:
            out[key] = getattr(self, key).tolist()
        return out

    @classmethod
    def from_json(cls, data : dict)->'SurfaceCoefficients':
        try:
            return cls(
                float(data["u0"]), float(data["du"]), float(data["v0"]), float(data["dv"]),
                *(np.asarray(data[key], dtype=float) for key in COEFFICIENT_NAMES),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidInput(f"Bad coefficient file: {e}")

    def __repr__(self)->str:
        return f"SurfaceCoefficients on a {self.shape[0]}x{self.shape[1]} grid"

def coefficients(patch : SurfacePatch, tol : Optional[float] = None)->SurfaceCoefficients:
    """
    a, b, c, l, m of a normal patch. Analytic partials are used where the
    patch carries them, order-2 finite differences otherwise.

    Raises NotNormal, carrying the NormalityReport, when (u, v) fail to
    be normal coordinates within `tol`.
    """
    report = is_normal_parametrization(patch, tol)
    if not report.passed:
        raise NotNormal(
            "Patch is not a normal parametrization "
            f"(max theta0(F_u) {report.max_contact:.3e}, max ||F_u| - 1| {report.max_speed_error:.3e}, "
            f"{report.singular_cells} singular cells)",
            report = report,
        )
    X = patch.frame_components(patch.tangent_u())
    X[..., 2] = 0.0
    Y = j0_frame(X)
    Fv = patch.frame_components(patch.tangent_v())
    Fuu = patch.frame_components(patch.second_uu())
    Fuv = patch.frame_components(patch.second_uv())

    def dot(A, B):
        return np.sum(A*B, axis=-1)

    return SurfaceCoefficients(
        patch.u0, patch.du, patch.v0, patch.dv,
        a = dot(Fv, X),
        b = dot(Fv, Y),
        c = Fv[..., 2],
        l = dot(Fuu, Y),
        m = dot(Fuv, Y),
    )

def _fd(coeffs : SurfaceCoefficients, values : np.ndarray, axis : str, order : int = 1)->np.ndarray:
    return fd_partial(coeffs.grid_field(values), axis, order).values

def check_integrability(
        coeffs  : SurfaceCoefficients,
        tol     : float = TOLERANCES.fd,
    )->ResidualReport:
    """
    Residuals of

        a_u = b l,   b_u + a l = m,   c_u = 2 b,   l_v = m_u

    by central differences, judged on interior cells.
    """
    a, b, c, l, m = (getattr(coeffs, key) for key in COEFFICIENT_NAMES)
    residuals = {
        "a_u - b l" : _fd(coeffs, a, 'u') - b*l,
        "b_u + a l - m" : _fd(coeffs, b, 'u') + a*l - m,
        "c_u - 2 b" : _fd(coeffs, c, 'u') - 2*b,
        "l_v - m_u" : _fd(coeffs, l, 'v') - _fd(coeffs, m, 'u'),
    }
    return ResidualReport.from_residuals(residuals, tol)

def check_pminimal(
        coeffs  : SurfaceCoefficients,
        tol     : float = TOLERANCES.fd,
    )->ResidualReport:
    """
    p-minimal patches (l = 0) have a_u = 0, b_uu = 0, c_u = 2 b and
    m = b_u, so the first-kind coefficients fix the second kind. The
    report includes l itself, so a patch with l != 0 never passes.
    """
    a, b, c, l, m = (getattr(coeffs, key) for key in COEFFICIENT_NAMES)
    residuals = {
        "a_u" : _fd(coeffs, a, 'u'),
        "b_uu" : _fd(coeffs, b, 'u', order = 2),
        "c_u - 2 b" : _fd(coeffs, c, 'u') - 2*b,
        "m - b_u" : m - _fd(coeffs, b, 'u'),
        "l" : l,
    }
    return ResidualReport.from_residuals(residuals, tol)

## Change of normal coordinates

def transform_coefficient_values(
        a       : np.ndarray,
        b       : np.ndarray,
        c       : np.ndarray,
        l       : np.ndarray,
        m       : np.ndarray,
        sign    : int,
        g_prime : np.ndarray,
        h_prime : np.ndarray,
    )->tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Pointwise change of normal coordinates. With old coordinates
    (u~, v~) = (sign u + g(v), h(v)) and the old coefficients evaluated
    at the image point, the new ones are

        a = sign (g' + h' a~),  b = sign h' b~,  c = h' c~,
        l = sign l~,            m = g' l~ + h' m~.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return (
        sign*(g_prime + h_prime*a),
        sign*h_prime*b,
        h_prime*c,
        sign*l,
        g_prime*l + h_prime*m,
    )

def _as_polynomial(p : Union[Polynomial, np.ndarray, list, float])->Polynomial:
    if isinstance(p, Polynomial):
        return p
    return Polynomial(np.atleast_1d(np.asarray(p, dtype=float)))

def transform_coefficients(
        coeffs  : SurfaceCoefficients,
        sign    : int,
        g       : Union[Polynomial, np.ndarray, list, float],
        h       : Union[Polynomial, np.ndarray, list, float],
        v_range : Optional[tuple[float, float]] = None,
        shape   : Optional[tuple[int, int]] = None,
    )->SurfaceCoefficients:
    """
    Coefficients in the normal coordinates (u, v) related to the old ones
    by u~ = sign u + g(v), v~ = h(v).

    g and h are polynomials (numpy Polynomial or coefficient arrays,
    lowest degree first). The new grid is the largest rectangle whose
    image stays inside the old one: v covers `v_range` (default the
    preimage of the old v-range when h is affine, else the old v-range),
    and u the interval every v-line can reach. Old values are resampled
    with bicubic splines.

    Raises DegenerateReparam when h' vanishes on the new v-grid.
    """
    g, h = _as_polynomial(g), _as_polynomial(h)
    g_prime, h_prime = g.deriv(), h.deriv()
    shape = coeffs.shape if shape is None else shape
    old_u, old_v = coeffs.u, coeffs.v

    if v_range is None:
        if h.degree() == 1:
            ends = sorted(((old_v[0] - h.coef[0])/h.coef[1], (old_v[-1] - h.coef[0])/h.coef[1]))
            v_range = (ends[0], ends[1])
        else:
            v_range = (old_v[0], old_v[-1])
    v_new = np.linspace(v_range[0], v_range[1], shape[1])
    hp = h_prime(v_new)
    if np.any(np.abs(hp) < 1e-12) or np.any(np.sign(hp) != np.sign(hp[0])):
        raise DegenerateReparam("h'(v) vanishes on the new grid")
    image_v = h(v_new)
    span = old_v[-1] - old_v[0]
    if np.any(image_v < old_v[0] - 1e-12*span) or np.any(image_v > old_v[-1] + 1e-12*span):
        raise ValueError("h maps the new v-range outside the old grid")

    gv = g(v_new)
    lower = sign*(old_u[0] - gv)
    upper = sign*(old_u[-1] - gv)
    u_lo = float(np.max(np.minimum(lower, upper)))
    u_hi = float(np.min(np.maximum(lower, upper)))
    if not u_hi > u_lo:
        raise ValueError("The reparametrized grid does not fit inside the old patch")
    u_new = np.linspace(u_lo, u_hi, shape[0])

    U, V = np.meshgrid(u_new, v_new, indexing='ij')
    old_u_at = np.clip(sign*U + g(V), old_u[0], old_u[-1])
    old_v_at = np.clip(h(V), old_v[0], old_v[-1])
    resampled = [
        RectBivariateSpline(old_u, old_v, getattr(coeffs, key), kx=3, ky=3, s=0).ev(old_u_at, old_v_at)
        for key in COEFFICIENT_NAMES
    ]
    new = transform_coefficient_values(*resampled, sign, g_prime(V), h_prime(V))
    return SurfaceCoefficients(
        u_new[0], u_new[1] - u_new[0], v_new[0], v_new[1] - v_new[0], *new,
        name = coeffs._name,
    )

def p_variation(coeffs : SurfaceCoefficients, eps : Optional[float] = None)->np.ma.MaskedArray:
    """ alpha = b/c, masked where |c| is at or below the singular threshold """
    mask = coeffs.singular_mask(eps)
    if np.any(mask):
        warning(f"Masking {int(np.sum(mask))} cells with |c| <= {coeffs.eps_singular(eps):.3e}")
    safe_c = np.where(mask, 1.0, coeffs.c)
    return np.ma.masked_array(coeffs.b/safe_c, mask = mask)

## Induced metric

class MetricPatch(_GridRecordMixin, GridRecord):
    """ g = E du^2 + 2 F du dv + G dv^2 on a (u, v) grid """

    SAVE_ATTRS = ['u0', 'du', 'v0', 'dv', 'E', 'F', 'G']

    def __init__(
            self,
            u0          : float,
            du          : float,
            v0          : float,
            dv          : float,
            E           : np.ndarray,
            F           : np.ndarray,
            G           : np.ndarray,
            name        : Optional[str] = None,
            info_string : Optional[str] = None,
        ):
        super().__init__(name = name, info_string = info_string)
        self.u0, self.du, self.v0, self.dv = float(u0), float(du), float(v0), float(dv)
        self.E, self.F, self.G = _as_grid(E, 'E'), _as_grid(F, 'F'), _as_grid(G, 'G')
        if not (self.E.shape == self.F.shape == self.G.shape):
            raise ValueError("E, F and G must share a grid")

    @property
    def shape(self)->tuple[int, int]:
        return self.E.shape

    @property
    def determinant(self)->np.ndarray:
        return self.E*self.G - self.F**2

    def is_positive_definite(self)->np.ndarray:
        return (self.E > 0) & (self.determinant > 0)

    def apply(self, du_vec : np.ndarray, dv_vec : np.ndarray)->np.ndarray:
        """ g(w, w) for w = du_vec d/du + dv_vec d/dv, cellwise """
        return self.E*du_vec**2 + 2*self.F*du_vec*dv_vec + self.G*dv_vec**2

def induced_metric(coeffs : SurfaceCoefficients)->MetricPatch:
    """ I^2 + II^2 + III^2: E = 1, F = a, G = a^2 + b^2 + c^2 """
    a, b, c = coeffs.a, coeffs.b, coeffs.c
    return MetricPatch(
        coeffs.u0, coeffs.du, coeffs.v0, coeffs.dv,
        np.ones_like(a), a.copy(), a**2 + b**2 + c**2,
        name = coeffs._name,
    )

def fundamental_forms(coeffs : SurfaceCoefficients)->dict[str, np.ndarray]:
    """
    The forms I..IV as (..., 2) arrays of their (du, dv) components.
    """
    zeros = np.zeros_like(coeffs.a)
    ones = np.ones_like(coeffs.a)
    return {
        "I" : np.stack([ones, coeffs.a], axis=-1),
        "II" : np.stack([zeros, coeffs.b], axis=-1),
        "III" : np.stack([zeros, coeffs.c], axis=-1),
        "IV" : np.stack([coeffs.l, coeffs.m], axis=-1),
    }
