"""
Riemannian invariants of a nonsingular patch in terms of the p-variation
alpha = b/c and the p-mean curvature l.

With s = sqrt(1 + alpha^2) the induced metric has the orthonormal coframe

    w^1 = du + a dv,   w^2 = c s dv,

dual to e1 = d/du and e_S = (alpha e2 + T)/s, so that for any function

    e1 f = f_u,   e_S f = (f_v - a f_u)/(c s).

The Gaussian curvature is

    K = -[(e1 alpha)^2 + 2 s^2 (e1 alpha) + 4 alpha^2 s^2 - l (e_S alpha) s] / s^4,

and l, alpha are tied by

    e_S l = [e1 e1 alpha + 6 alpha (e1 alpha) + 4 alpha^3 + alpha l^2] / s.

Cells with |c| at or below the singular threshold are masked: their
values come back as NaN and residual reports skip them together with
their stencil neighbours.
"""
from dataclasses import dataclass
from logging import warning
from typing import Optional, Union

import numpy as np
from scipy.ndimage import binary_dilation

from .coefficients import (
    SurfaceCoefficients, MetricPatch, _GridRecordMixin, _as_grid, p_variation,
    induced_metric,
)
from ..record import GridRecord
from ..utils.config import TOLERANCES
from ..utils.exceptions import SingularCell, DegenerateMetric, ClosedSurfaceUnsupported
from ..utils.numerics import GridField, fd_partial, fd_mixed, simpson_integrate
from ..utils.reports import ResidualReport

GridLike = Union[np.ndarray, np.ma.MaskedArray]

def _filled(values : GridLike)->np.ndarray:
    if np.ma.isMaskedArray(values):
        return np.ma.filled(values.astype(float), np.nan)
    return np.asarray(values, dtype=float)

def _d(values : np.ndarray, du : float, dv : float, axis : str, order : int = 1)->np.ndarray:
    return fd_partial(GridField(values, du, dv), axis, order).values

def _singular(coeffs : SurfaceCoefficients, eps : Optional[float], strict : bool)->np.ndarray:
    mask = coeffs.singular_mask(eps)
    if np.any(mask):
        if strict or np.all(mask):
            first = tuple(int(k) for k in np.argwhere(mask)[0])
            raise SingularCell(f"|c| below {coeffs.eps_singular(eps):.3e} on {int(np.sum(mask))} cells, first at {first}")
    return mask

def _report_mask(mask : np.ndarray)->Optional[np.ndarray]:
    """ Singular cells and every cell whose stencil touches one """
    if not np.any(mask):
        return None
    return binary_dilation(mask, iterations = 2)

## Derivatives along the orthonormal frame

def directional_derivatives(
        field   : GridLike,
        coeffs  : SurfaceCoefficients,
        eps     : Optional[float] = None,
        strict  : bool = False,
    )->tuple[np.ndarray, np.ndarray]:
    """
    (e1 f, e_S f) for a grid function f in normal coordinates. Singular
    cells are NaN, or raise SingularCell when `strict`.
    """
    mask = _singular(coeffs, eps, strict)
    f = _filled(field)
    f_u = _d(f, coeffs.du, coeffs.dv, 'u')
    f_v = _d(f, coeffs.du, coeffs.dv, 'v')
    alpha = _filled(p_variation(coeffs, eps))
    c = np.where(mask, np.nan, coeffs.c)
    e_sigma = (f_v - coeffs.a*f_u)/(c*np.sqrt(1.0 + alpha**2))
    return f_u, e_sigma

@dataclass
class Coframe():
    """
    w^1 = p1 du + q1 dv, w^2 = p2 du + q2 dv on a uniform (u, v) grid,
    assumed orthonormal for the metric it describes.
    """
    p1 : np.ndarray
    q1 : np.ndarray
    p2 : np.ndarray
    q2 : np.ndarray
    du : float
    dv : float
    u0 : float = 0.0
    v0 : float = 0.0

    def __post_init__(self):
        grids = [_filled(getattr(self, name)) for name in ('p1', 'q1', 'p2', 'q2')]
        shapes = {grid.shape for grid in grids}
        if len(shapes) != 1 or grids[0].ndim != 2:
            raise ValueError(f"Coframe grids must share one 2D shape, got {shapes}")
        self.p1, self.q1, self.p2, self.q2 = (np.array(grid, dtype=float) for grid in grids)
        if not (self.du > 0 and self.dv > 0):
            raise ValueError("Grid steps must be positive")

    @classmethod
    def flat(cls, shape : tuple[int, int], du : float, dv : float, u0 : float = 0.0, v0 : float = 0.0)->'Coframe':
        """ w^1 = du, w^2 = dv """
        zeros, ones = np.zeros(shape), np.ones(shape)
        return cls(ones, zeros, zeros.copy(), ones.copy(), du, dv, u0, v0)

    @classmethod
    def from_coefficients(cls, coeffs : SurfaceCoefficients, eps : Optional[float] = None)->'Coframe':
        """ w^1 = du + a dv, w^2 = c sqrt(1 + alpha^2) dv """
        alpha = _filled(p_variation(coeffs, eps))
        return cls(
            np.ones(coeffs.shape), coeffs.a.copy(),
            np.zeros(coeffs.shape), coeffs.c*np.sqrt(1.0 + alpha**2),
            coeffs.du, coeffs.dv, coeffs.u0, coeffs.v0,
        )

    @property
    def shape(self)->tuple[int, int]:
        return self.p1.shape

    @property
    def determinant(self)->np.ndarray:
        """ w^1 ^ w^2 = det du ^ dv """
        return self.p1*self.q2 - self.q1*self.p2

    def metric(self)->MetricPatch:
        """ (w^1)^2 + (w^2)^2 """
        return MetricPatch(
            self.u0, self.du, self.v0, self.dv,
            self.p1**2 + self.p2**2,
            self.p1*self.q1 + self.p2*self.q2,
            self.q1**2 + self.q2**2,
        )

    def derivatives(self, field : GridLike)->tuple[np.ndarray, np.ndarray]:
        """
        Derivatives along the dual frame: df = (e1 f) w^1 + (e2 f) w^2,
        solved cellwise from (f_u, f_v).
        """
        f = _filled(field)
        f_u = _d(f, self.du, self.dv, 'u')
        f_v = _d(f, self.du, self.dv, 'v')
        det = self.determinant
        return (f_u*self.q2 - f_v*self.p2)/det, (f_v*self.p1 - f_u*self.q1)/det

    def fields(self)->list[GridField]:
        return [GridField(values, self.du, self.dv) for values in (self.p1, self.q1, self.p2, self.q2)]

@dataclass
class StructureConnection():
    """
    The Levi-Civita connection form w_1^2 = lambda1 w^1 + lambda2 w^2 of
    a coframe, its (du, dv) components and the Gaussian curvature from
    d w_1^2 = -K w^1 ^ w^2.
    """
    lambda1 : np.ndarray
    lambda2 : np.ndarray
    form_u : np.ndarray
    form_v : np.ndarray
    K : np.ndarray

def structure_connection(coframe : Coframe)->StructureConnection:
    """
    Solves d w^1 = w_1^2 ^ w^2 and d w^2 = w^1 ^ w_1^2 for the connection
    form cellwise, then differentiates it once more for K.
    """
    det = coframe.determinant
    du, dv = coframe.du, coframe.dv
    d_w1 = _d(coframe.q1, du, dv, 'u') - _d(coframe.p1, du, dv, 'v')
    d_w2 = _d(coframe.q2, du, dv, 'u') - _d(coframe.p2, du, dv, 'v')
    lambda1 = d_w1/det
    lambda2 = d_w2/det
    form_u = lambda1*coframe.p1 + lambda2*coframe.p2
    form_v = lambda1*coframe.q1 + lambda2*coframe.q2
    K = -(_d(form_v, du, dv, 'u') - _d(form_u, du, dv, 'v'))/det
    return StructureConnection(lambda1, lambda2, form_u, form_v, K)

@dataclass
class ConnectionForms():
    """
    The pseudohermitian connection form w_1^2 and the Riemannian one
    w^_1^2 in the coframe (w^1, w^2), plus the intermediates

        D = l/(1 + alpha^2),  A = 2 alpha/(1 + alpha^2),  B = l alpha/sqrt(1 + alpha^2).

    `omega_12_via_hat` is w_1^2 rebuilt from a supplied w^_1^2 by
    alpha/s w^_1^2 + D w^1 + (e1 alpha)/s^3 w^2; it is None when no
    w^_1^2 was given.
    """
    omega_12 : tuple[np.ndarray, np.ndarray]
    omega_hat_12 : tuple[np.ndarray, np.ndarray]
    D : np.ndarray
    A : np.ndarray
    B : np.ndarray
    omega_12_via_hat : Optional[tuple[np.ndarray, np.ndarray]] = None

def connection_forms(
        alpha           : GridLike,
        l               : GridLike,
        e1_alpha        : GridLike,
        omega_hat_12    : Optional[tuple[np.ndarray, np.ndarray]] = None,
    )->ConnectionForms:
    """
    w_1^2   = l w^1 + (2 alpha^2 + e1 alpha)/s w^2
    w^_1^2  = l alpha/s w^1 + (2 alpha + alpha (e1 alpha)/s^2) w^2
    """
    alpha, l, e1a = _filled(alpha), _filled(l), _filled(e1_alpha)
    s_sq = 1.0 + alpha**2
    s = np.sqrt(s_sq)
    D = l/s_sq
    A = 2*alpha/s_sq
    B = l*alpha/s
    omega_12 = (l*np.ones_like(alpha), (2*alpha**2 + e1a)/s)
    omega_hat = (B, 2*alpha + alpha*e1a/s_sq)
    via_hat = None
    if omega_hat_12 is not None:
        h1, h2 = (_filled(w) for w in omega_hat_12)
        via_hat = (alpha/s*h1 + D, alpha/s*h2 + e1a/s**3)
    return ConnectionForms(omega_12, omega_hat, D, A, B, via_hat)

## Gaussian curvature

def _curvature_numerator(alpha : np.ndarray, l : np.ndarray, e1a : np.ndarray, esa : np.ndarray)->np.ndarray:
    s_sq = 1.0 + alpha**2
    return e1a**2 + 2*s_sq*e1a + 4*alpha**2*s_sq - l*esa*np.sqrt(s_sq)

def gaussian_curvature_formula(
        alpha   : GridLike,
        l       : GridLike,
        coeffs  : SurfaceCoefficients,
        eps     : Optional[float] = None,
        strict  : bool = False,
    )->np.ndarray:
    """ K from alpha and l alone, derivatives by central differences """
    alpha, l = _filled(alpha), _filled(l)
    e1a, esa = directional_derivatives(alpha, coeffs, eps, strict)
    return -_curvature_numerator(alpha, l, e1a, esa)/(1.0 + alpha**2)**2

def gaussian_curvature_reference(metric : MetricPatch)->np.ndarray:
    """
    Gaussian curvature of E du^2 + 2 F du dv + G dv^2 by Brioschi's
    formula, every derivative by central differences.

    Raises DegenerateMetric when the metric is not positive definite on
    some cell.
    """
    E, F, G = metric.E, metric.F, metric.G
    if not np.all(metric.is_positive_definite()):
        bad = tuple(int(k) for k in np.argwhere(~metric.is_positive_definite())[0])
        raise DegenerateMetric(f"Metric is not positive definite at cell {bad}")
    du, dv = metric.du, metric.dv

    def d(values, axis, order = 1):
        return _d(values, du, dv, axis, order)

    E_u, E_v, E_vv = d(E, 'u'), d(E, 'v'), d(E, 'v', 2)
    F_u, F_v = d(F, 'u'), d(F, 'v')
    F_uv = fd_mixed(GridField(F, du, dv)).values
    G_u, G_v, G_uu = d(G, 'u'), d(G, 'v'), d(G, 'u', 2)

    first = np.stack([
        np.stack([-0.5*E_vv + F_uv - 0.5*G_uu, 0.5*E_u, F_u - 0.5*E_v], axis=-1),
        np.stack([F_v - 0.5*G_u, E, F], axis=-1),
        np.stack([0.5*G_v, F, G], axis=-1),
    ], axis=-2)
    zeros = np.zeros_like(E)
    second = np.stack([
        np.stack([zeros, 0.5*E_v, 0.5*G_u], axis=-1),
        np.stack([0.5*E_v, E, F], axis=-1),
        np.stack([0.5*G_u, F, G], axis=-1),
    ], axis=-2)
    return (np.linalg.det(first) - np.linalg.det(second))/metric.determinant**2

def check_gauss(
        coeffs  : SurfaceCoefficients,
        tol     : float = TOLERANCES.fd,
        eps     : Optional[float] = None,
    )->ResidualReport:
    """ K from alpha and l against K of the induced metric """
    alpha = p_variation(coeffs, eps)
    K = gaussian_curvature_formula(alpha, coeffs.l, coeffs, eps)
    K_ref = gaussian_curvature_reference(induced_metric(coeffs))
    return ResidualReport.from_residuals(
        {"K - K_metric" : K - K_ref}, tol, _report_mask(coeffs.singular_mask(eps)),
    )

def check_codazzi(
        alpha   : GridLike,
        l       : GridLike,
        coeffs  : SurfaceCoefficients,
        tol     : float = TOLERANCES.fd,
        eps     : Optional[float] = None,
    )->ResidualReport:
    """ e_S l - [e1 e1 alpha + 6 alpha e1 alpha + 4 alpha^3 + alpha l^2]/s """
    mask = _singular(coeffs, eps, strict = False)
    alpha, l = _filled(alpha), _filled(l)
    e1a = _d(alpha, coeffs.du, coeffs.dv, 'u')
    e1e1a = _d(alpha, coeffs.du, coeffs.dv, 'u', 2)
    _, esl = directional_derivatives(l, coeffs, eps)
    residual = esl - (e1e1a + 6*alpha*e1a + 4*alpha**3 + alpha*l**2)/np.sqrt(1.0 + alpha**2)
    return ResidualReport.from_residuals({"codazzi" : residual}, tol, _report_mask(mask))

def _integrability_residual(
        alpha   : np.ndarray,
        l       : np.ndarray,
        K       : np.ndarray,
        e1a     : np.ndarray,
        e1e1a   : np.ndarray,
        esa     : np.ndarray,
        esl     : np.ndarray,
    )->np.ndarray:
    s_sq = 1.0 + alpha**2
    s = np.sqrt(s_sq)
    return s_sq*s*esl - (
        s_sq*e1e1a
        - alpha*e1a**2
        + 4*alpha*s_sq*e1a
        - alpha*s_sq**2*K
        + alpha*l*s*esa
        + alpha*s_sq*l**2
    )

def check_surface_integrability(
        alpha   : GridLike,
        l       : GridLike,
        K       : GridLike,
        coeffs  : SurfaceCoefficients,
        tol     : float = TOLERANCES.fd,
        eps     : Optional[float] = None,
    )->ResidualReport:
    """
    The single condition on (alpha, l, K) that holds exactly when both
    the curvature formula and the Codazzi-type equation do.
    """
    mask = _singular(coeffs, eps, strict = False)
    alpha, l, K = _filled(alpha), _filled(l), _filled(K)
    e1a, esa = directional_derivatives(alpha, coeffs, eps)
    e1e1a = _d(alpha, coeffs.du, coeffs.dv, 'u', 2)
    _, esl = directional_derivatives(l, coeffs, eps)
    residual = _integrability_residual(alpha, l, K, e1a, e1e1a, esa, esl)
    return ResidualReport.from_residuals({"integrability" : residual}, tol, _report_mask(mask))

def coframe_integrability_residual(
        coframe : Coframe,
        alpha   : GridLike,
        l       : GridLike,
    )->tuple[np.ndarray, StructureConnection]:
    """
    The same condition for an arbitrary coframe, with e1, e_S the dual
    frame and K from the structure equations of the coframe.
    """
    alpha, l = _filled(alpha), _filled(l)
    connection = structure_connection(coframe)
    e1a, esa = coframe.derivatives(alpha)
    e1e1a, _ = coframe.derivatives(e1a)
    _, esl = coframe.derivatives(l)
    residual = _integrability_residual(alpha, l, connection.K, e1a, e1e1a, esa, esl)
    return residual, connection

## Patch integrals

def euler_integrand(alpha : GridLike, l : GridLike, coeffs : SurfaceCoefficients, eps : Optional[float] = None)->np.ndarray:
    """ K, to be integrated against the area form """
    return gaussian_curvature_formula(alpha, l, coeffs, eps)

def euler_integrand_alt(alpha : GridLike, l : GridLike, coeffs : SurfaceCoefficients, eps : Optional[float] = None)->np.ndarray:
    """
    The same integrand written against w^1 ^ theta0 restricted to the
    surface, which is c du ^ dv: K s instead of K.
    """
    alpha, l = _filled(alpha), _filled(l)
    e1a, esa = directional_derivatives(alpha, coeffs, eps)
    return -_curvature_numerator(alpha, l, e1a, esa)/(1.0 + alpha**2)**1.5

def patch_total(
        integrand   : GridLike,
        coeffs      : SurfaceCoefficients,
        form        : str = "area",
        closed      : bool = False,
        eps         : Optional[float] = None,
    )->float:
    """
    Integral of `integrand` over the patch by 2D composite Simpson.

    form = "area" integrates against w^1 ^ w^2 = c s du ^ dv, form =
    "contact" against w^1 ^ theta0 = c du ^ dv.
    """
    if closed:
        raise ClosedSurfaceUnsupported(
            "Totals over closed surfaces run through singular points; only patches are supported"
        )
    values = _filled(integrand)
    if form == "area":
        alpha = _filled(p_variation(coeffs, eps))
        density = coeffs.c*np.sqrt(1.0 + alpha**2)
    elif form == "contact":
        density = coeffs.c
    else:
        raise ValueError(f"form must be 'area' or 'contact', got {form!r}")
    weighted = values*density
    if not np.all(np.isfinite(weighted)):
        raise SingularCell("Integrand is undefined on part of the patch")
    return float(simpson_integrate(simpson_integrate(weighted, coeffs.du, axis=0), coeffs.dv, axis=0))

def patch_area(coeffs : SurfaceCoefficients, eps : Optional[float] = None)->float:
    return patch_total(np.ones(coeffs.shape), coeffs, "area", eps = eps)

## Assembled record

class SurfaceInvariants(_GridRecordMixin, GridRecord):
    """
    alpha, l and K on a patch with the orthonormal coframe (w^1, w^2) in
    (du, dv), the connection forms in that coframe and the curvature of
    the induced metric as an independent check.
    """

    SAVE_ATTRS = [
        'u0', 'du', 'v0', 'dv', 'alpha', 'l', 'K', 'K_metric',
        'coframe_p1', 'coframe_q1', 'coframe_p2', 'coframe_q2',
        'omega_12_1', 'omega_12_2', 'omega_hat_12_1', 'omega_hat_12_2',
    ]

    def __init__(
            self,
            u0              : float,
            du              : float,
            v0              : float,
            dv              : float,
            alpha           : GridLike,
            l               : GridLike,
            K               : GridLike,
            K_metric        : GridLike,
            coframe_p1      : GridLike,
            coframe_q1      : GridLike,
            coframe_p2      : GridLike,
            coframe_q2      : GridLike,
            omega_12_1      : GridLike,
            omega_12_2      : GridLike,
            omega_hat_12_1  : GridLike,
            omega_hat_12_2  : GridLike,
            name            : Optional[str] = None,
            info_string     : Optional[str] = None,
        ):
        super().__init__(name = name, info_string = info_string)
        self.u0, self.du, self.v0, self.dv = float(u0), float(du), float(v0), float(dv)
        self.alpha = _as_grid(alpha, 'alpha')
        self.l = _as_grid(l, 'l')
        self.K = _as_grid(K, 'K')
        self.K_metric = _as_grid(K_metric, 'K_metric')
        self.coframe_p1 = _as_grid(coframe_p1, 'coframe_p1')
        self.coframe_q1 = _as_grid(coframe_q1, 'coframe_q1')
        self.coframe_p2 = _as_grid(coframe_p2, 'coframe_p2')
        self.coframe_q2 = _as_grid(coframe_q2, 'coframe_q2')
        self.omega_12_1 = _as_grid(omega_12_1, 'omega_12_1')
        self.omega_12_2 = _as_grid(omega_12_2, 'omega_12_2')
        self.omega_hat_12_1 = _as_grid(omega_hat_12_1, 'omega_hat_12_1')
        self.omega_hat_12_2 = _as_grid(omega_hat_12_2, 'omega_hat_12_2')

    @property
    def shape(self)->tuple[int, int]:
        return self.alpha.shape

    @property
    def coframe(self)->Coframe:
        return Coframe(
            self.coframe_p1, self.coframe_q1, self.coframe_p2, self.coframe_q2,
            self.du, self.dv, self.u0, self.v0,
        )

    @property
    def K_discrepancy(self)->float:
        """ Largest |K - K_metric| over interior cells where both are defined """
        diff = np.abs(self.K - self.K_metric)[1:-1, 1:-1]
        diff = diff[np.isfinite(diff)]
        return float(np.max(diff)) if diff.size else 0.0

    def to_json(self)->dict:
        out = {"u0" : self.u0, "du" : self.du, "v0" : self.v0, "dv" : self.dv}
        for key in self.SAVE_ATTRS[4:]:
            grid = getattr(self, key)
            out[key] = np.where(np.isfinite(grid), grid, None).tolist()
        out["K_max_discrepancy"] = self.K_discrepancy
        return out

def surface_invariants(coeffs : SurfaceCoefficients, eps : Optional[float] = None)->SurfaceInvariants:
    alpha = p_variation(coeffs, eps)
    if np.all(np.ma.getmaskarray(alpha)):
        raise SingularCell("Every cell of the patch is singular")
    K = gaussian_curvature_formula(alpha, coeffs.l, coeffs, eps)
    try:
        K_metric = gaussian_curvature_reference(induced_metric(coeffs))
    except DegenerateMetric as e:
        warning(f"Skipping the metric curvature check: {e}")
        K_metric = np.full(coeffs.shape, np.nan)
    coframe = Coframe.from_coefficients(coeffs, eps)
    e1a = _d(_filled(alpha), coeffs.du, coeffs.dv, 'u')
    forms = connection_forms(alpha, coeffs.l, e1a)
    return SurfaceInvariants(
        coeffs.u0, coeffs.du, coeffs.v0, coeffs.dv,
        alpha, coeffs.l, K, K_metric,
        coframe.p1, coframe.q1, coframe.p2, coframe.q2,
        *forms.omega_12, *forms.omega_hat_12,
        name = coeffs._name,
    )
