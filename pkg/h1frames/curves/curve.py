"""
Sampled curves in H^1 and their invariants.

A curve is horizontally regular when the contact-plane part of its
velocity, (x', y') in frame components, never vanishes. Such a curve has a
horizontal arclength s with x'(s)^2 + y'(s)^2 = 1, and in any parameter

    k   = (x' y'' - x'' y') / (x'^2 + y'^2)^(3/2)     (p-curvature)
    tau = (x y' - x' y + z') / (x'^2 + y'^2)^(1/2)    (T-variation)

which together determine the curve up to a motion of PSH(1). The
arclength origin is fixed at the first sample.
"""
from typing import TYPE_CHECKING, Optional

import numpy as np
from scipy.interpolate import PchipInterpolator, CubicHermiteSpline, CubicSpline

from ..group import H1Point, TangentVector, coord_to_frame
from ..record import GridRecord
from ..utils import uniform_step
from ..utils.config import TOLERANCES
from ..utils.exceptions import NotHorizontallyRegular, NonUniformGrid, InvalidInput
from ..utils.numerics import fd_derivative, cumulative_integral

if TYPE_CHECKING:
    from ..group import HeisenbergMotion

class ParamCurve():
    """
    Samples (t_i, gamma(t_i)) of a curve, optionally with analytic first
    and second derivative samples. Without them, derivatives come from
    order-2 finite differences over t.
    """

    MIN_SAMPLES : int = 5

    def __init__(
            self,
            t       : np.ndarray,
            points  : np.ndarray,
            d1      : Optional[np.ndarray] = None,
            d2      : Optional[np.ndarray] = None,
        ):
        t = np.array(t, dtype=float).ravel()
        points = np.array(points, dtype=float)
        if t.size < self.MIN_SAMPLES:
            raise ValueError(f"A curve needs at least {self.MIN_SAMPLES} samples, got {t.size}")
        if np.any(np.diff(t) <= 0):
            raise ValueError("Curve parameter must be strictly increasing")
        if points.shape != (t.size, 3):
            raise ValueError(f"Expected points of shape ({t.size}, 3), got {points.shape}")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(points))):
            raise ValueError("Curve samples must be finite")

        def _check(d, label):
            if d is None:
                return None
            d = np.array(d, dtype=float)
            if d.shape != points.shape:
                raise ValueError(f"{label} has shape {d.shape}, expected {points.shape}")
            if not np.all(np.isfinite(d)):
                raise ValueError(f"{label} must be finite")
            d.flags.writeable = False
            return d

        self._d1 = _check(d1, "d1")
        self._d2 = _check(d2, "d2")
        t.flags.writeable = False
        points.flags.writeable = False
        self._t = t
        self._points = points

    @property
    def t(self)->np.ndarray:
        return self._t

    @property
    def points(self)->np.ndarray:
        return self._points

    @property
    def d1(self)->Optional[np.ndarray]:
        return self._d1

    @property
    def d2(self)->Optional[np.ndarray]:
        return self._d2

    @property
    def has_analytic(self)->bool:
        return self._d1 is not None

    def __len__(self)->int:
        return self._t.size

    @property
    def uniform_step(self)->float:
        return uniform_step(self._t)

    @property
    def _spacing(self):
        try:
            return self.uniform_step
        except NonUniformGrid:
            return self._t

    def first_derivative(self)->np.ndarray:
        if self._d1 is not None:
            return self._d1
        return fd_derivative(self._points, self._spacing, axis=0, order=1)

    def second_derivative(self)->np.ndarray:
        if self._d2 is not None:
            return self._d2
        if self._d1 is not None:
            return fd_derivative(self._d1, self._spacing, axis=0, order=1)
        return fd_derivative(self._points, self._spacing, axis=0, order=2)

    def point(self, index : int)->H1Point:
        return H1Point.from_array(self._points[index])

    def transformed(self, g : 'HeisenbergMotion')->'ParamCurve':
        """ g applied to every sample; derivative samples are pushed forward """
        return ParamCurve(
            self._t,
            g.apply_array(self._points),
            None if self._d1 is None else g.push_coords(self._d1),
            None if self._d2 is None else g.push_coords(self._d2),
        )

    def without_derivatives(self)->'ParamCurve':
        return ParamCurve(self._t, self._points)

    def to_json(self)->dict:
        out = {"t" : self._t.tolist(), "points" : self._points.tolist()}
        if self._d1 is not None:
            out["d1"] = self._d1.tolist()
        if self._d2 is not None:
            out["d2"] = self._d2.tolist()
        return out

    @classmethod
    def from_json(cls, data : dict)->'ParamCurve':
        try:
            return cls(
                data["t"],
                data["points"],
                data.get("d1", None),
                data.get("d2", None),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidInput(f"Bad curve: {e}")

    def __repr__(self)->str:
        source = "analytic" if self.has_analytic else "finite-difference"
        return (
            f"ParamCurve with {len(self)} samples on [{self._t[0]:.6g}, {self._t[-1]:.6g}] "
            f"({source} derivatives)"
        )

class CurveSignature(GridRecord):
    """
    (s, k(s), tau(s)) on a uniform horizontal-arclength grid: the complete
    invariant of a horizontally regular curve.
    """

    SAVE_ATTRS = ['s', 'k', 'tau']

    def __init__(
            self,
            s           : np.ndarray,
            k           : np.ndarray,
            tau         : np.ndarray,
            name        : Optional[str] = None,
            info_string : Optional[str] = None,
        ):
        super().__init__(name = name, info_string = info_string)
        s = np.array(s, dtype=float).ravel()
        k = np.array(k, dtype=float).ravel()
        tau = np.array(tau, dtype=float).ravel()
        if not (s.size == k.size == tau.size):
            raise ValueError("s, k and tau must have the same length")
        if s.size < 2:
            raise ValueError("A signature needs at least two samples")
        if not (np.all(np.isfinite(k)) and np.all(np.isfinite(tau))):
            raise ValueError("k and tau must be finite")
        self._step = uniform_step(s)
        self.s = s
        self.k = k
        self.tau = tau

    @property
    def step(self)->float:
        return self._step

    def __len__(self)->int:
        return self.s.size

    def max_difference(self, other : 'CurveSignature')->float:
        """ L-infinity distance between the k and tau columns """
        if len(self) != len(other):
            raise ValueError("Signatures have different lengths")
        return float(max(
            np.max(np.abs(self.k - other.k)),
            np.max(np.abs(self.tau - other.tau)),
        ))

    def __repr__(self)->str:
        return (
            f"CurveSignature with {len(self)} samples, s in [{self.s[0]:.6g}, {self.s[-1]:.6g}], "
            f"k in [{self.k.min():.6g}, {self.k.max():.6g}], tau in [{self.tau.min():.6g}, {self.tau.max():.6g}]"
        )

## Invariants

def horizontal_speed(curve : ParamCurve)->np.ndarray:
    d1 = curve.first_derivative()
    return np.hypot(d1[:, 0], d1[:, 1])

def velocity_decomposition(curve : ParamCurve, index : int)->tuple[TangentVector, float]:
    """
    gamma' = (x' e1 + y' e2) + (z' + x y' - y x') T. Returns the
    contact part as a vector and the T coefficient.
    """
    d1 = curve.first_derivative()[index]
    base = curve.point(index)
    frame = coord_to_frame(base.array, d1)
    return TangentVector(base, frame = [frame[0], frame[1], 0.0]), float(frame[2])

def _default_eps(curve : ParamCurve)->float:
    scale = float(np.max(np.linalg.norm(curve.first_derivative(), axis=1)))
    return TOLERANCES.regular*(scale if scale > 0 else 1.0)

def is_horizontally_regular(curve : ParamCurve, eps : Optional[float] = None)->tuple[bool, Optional[int]]:
    """
    True iff the horizontal speed exceeds `eps` at every sample, together
    with the first failing index (None when regular). The default `eps`
    scales with the largest full speed along the curve.
    """
    eps = _default_eps(curve) if eps is None else eps
    failing = np.flatnonzero(~(horizontal_speed(curve) > eps))
    if failing.size == 0:
        return True, None
    return False, int(failing[0])

def require_regular(curve : ParamCurve, eps : Optional[float] = None):
    regular, index = is_horizontally_regular(curve, eps)
    if not regular:
        raise NotHorizontallyRegular(
            f"Horizontal speed vanishes at sample {index} (t = {curve.t[index]:.6g})",
            index = index,
        )

def horizontal_arclength(curve : ParamCurve, eps : Optional[float] = None)->np.ndarray:
    """ s(t_i) by cumulative Simpson quadrature of |gamma'_xi0|, s(t_0) = 0 """
    require_regular(curve, eps)
    return cumulative_integral(horizontal_speed(curve), curve.t)

def reparametrize_by_arclength(
        curve   : ParamCurve,
        n_out   : Optional[int] = None,
        s_max   : Optional[float] = None,
        eps     : Optional[float] = None,
    )->ParamCurve:
    """
    Resamples the curve on a uniform horizontal-arclength grid.

    s(t) is inverted with a monotone cubic (PCHIP) so t(s) never
    overshoots. Points are then evaluated with a cubic Hermite spline when
    analytic derivatives exist, a cubic spline otherwise, and the output
    carries derivative samples in s:

        gamma_s  = gamma_t / sigma
        gamma_ss = (gamma_tt - gamma_t sigma_t / sigma) / sigma^2

    with sigma the horizontal speed.

    Arguments
    ---------
    n_out : int, optional

        Number of output samples, defaults to the input count.

    s_max : float, optional

        Resample only [0, s_max]; defaults to the full length.
    """
    n_out = len(curve) if n_out is None else int(n_out)
    if n_out < ParamCurve.MIN_SAMPLES:
        raise ValueError(f"n_out must be at least {ParamCurve.MIN_SAMPLES}")
    s = horizontal_arclength(curve, eps)
    length = float(s[-1])
    if s_max is None:
        s_max = length
    elif s_max > length*(1 + 1e-12):
        raise ValueError(f"s_max = {s_max} exceeds the curve length {length}")

    s_new = np.linspace(0.0, s_max, n_out)
    t_new = PchipInterpolator(s, curve.t)(s_new)
    t_new = np.clip(t_new, curve.t[0], curve.t[-1])

    if curve.d1 is not None:
        position = CubicHermiteSpline(curve.t, curve.points, curve.d1, axis=0)
        if curve.d2 is not None:
            velocity = CubicHermiteSpline(curve.t, curve.d1, curve.d2, axis=0)
            acceleration = CubicSpline(curve.t, curve.d2, axis=0)
        else:
            velocity = CubicSpline(curve.t, curve.d1, axis=0)
            acceleration = velocity.derivative()
    else:
        position = CubicSpline(curve.t, curve.points, axis=0)
        velocity = position.derivative()
        acceleration = position.derivative(2)

    gamma_t = velocity(t_new)
    gamma_tt = acceleration(t_new)
    sigma = np.hypot(gamma_t[:, 0], gamma_t[:, 1])
    sigma_t = (gamma_t[:, 0]*gamma_tt[:, 0] + gamma_t[:, 1]*gamma_tt[:, 1])/sigma

    d1 = gamma_t/sigma[:, None]
    d2 = (gamma_tt - gamma_t*(sigma_t/sigma)[:, None])/(sigma**2)[:, None]
    return ParamCurve(s_new, position(t_new), d1, d2)

def curvature_profile(curve : ParamCurve, eps : Optional[float] = None)->tuple[np.ndarray, np.ndarray]:
    """ (k, tau) at every sample, in the curve's own parameter """
    require_regular(curve, eps)
    d1 = curve.first_derivative()
    d2 = curve.second_derivative()
    x, y = curve.points[:, 0], curve.points[:, 1]
    xp, yp, zp = d1[:, 0], d1[:, 1], d1[:, 2]
    xpp, ypp = d2[:, 0], d2[:, 1]
    speed_sq = xp**2 + yp**2
    k = (xp*ypp - xpp*yp)/speed_sq**1.5
    tau = (x*yp - xp*y + zp)/np.sqrt(speed_sq)
    return k, tau

def p_curvature(curve : ParamCurve, index : int)->float:
    d1 = curve.first_derivative()[index]
    d2 = curve.second_derivative()[index]
    speed_sq = d1[0]**2 + d1[1]**2
    if not np.sqrt(speed_sq) > _default_eps(curve):
        raise NotHorizontallyRegular(f"Horizontal speed vanishes at sample {index}", index = index)
    return float((d1[0]*d2[1] - d2[0]*d1[1])/speed_sq**1.5)

def t_variation(curve : ParamCurve, index : int)->float:
    d1 = curve.first_derivative()[index]
    x, y, _ = curve.points[index]
    speed = np.hypot(d1[0], d1[1])
    if not speed > _default_eps(curve):
        raise NotHorizontallyRegular(f"Horizontal speed vanishes at sample {index}", index = index)
    return float((x*d1[1] - d1[0]*y + d1[2])/speed)

def signature(curve : ParamCurve, n_out : Optional[int] = None, eps : Optional[float] = None)->CurveSignature:
    """ k and tau on a uniform horizontal-arclength grid starting at s = 0 """
    resampled = reparametrize_by_arclength(curve, n_out, eps = eps)
    k, tau = curvature_profile(resampled)
    return CurveSignature(resampled.t, k, tau)
