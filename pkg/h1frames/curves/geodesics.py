"""
Sub-Riemannian geodesics of H^1.

They are the projections of solutions of the Hamiltonian system with
H = ((xi1 + y xi3)^2 + (xi2 - x xi3)^2)/2. Along them xi3 is conserved,
the T-variation vanishes and the p-curvature is constant, and there
are closed forms for each sign of xi3. The closed forms are
parametrized by (c3, a1, a2, d1, d2, d3), plus (c1, c2) for the
straight lines with c3 = 0.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .curve import ParamCurve, signature
from ..group import H1Point
from ..utils.config import TOLERANCES
from ..utils.exceptions import DegenerateParams, InvalidInput
from ..utils.numerics import OdeProblem, integrate_ode

# |c3| below this counts as the straight-line case
ZERO_C3 = 1e-14

@dataclass(frozen=True)
class HamiltonianState():
    x : H1Point
    xi : tuple[float, float, float]

    def __post_init__(self):
        xi = tuple(float(v) for v in np.asarray(self.xi, dtype=float).ravel())
        if len(xi) != 3 or not all(np.isfinite(xi)):
            raise ValueError("xi must hold 3 finite momenta")
        object.__setattr__(self, 'xi', xi)

    @property
    def array(self)->np.ndarray:
        return np.concatenate([self.x.array, np.array(self.xi)])

    @classmethod
    def from_array(cls, array)->'HamiltonianState':
        array = np.asarray(array, dtype=float).ravel()
        return cls(H1Point.from_array(array[:3]), tuple(array[3:6]))

    def to_json(self)->dict:
        return {"x" : self.x.to_json(), "xi" : list(self.xi)}

    @classmethod
    def from_json(cls, data : dict)->'HamiltonianState':
        try:
            return cls(H1Point.from_json(data["x"]), tuple(data["xi"]))
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidInput(f"Bad Hamiltonian state {data!r}: {e}")

def hamiltonian_rhs(t : float, state : np.ndarray)->np.ndarray:
    x1, x2, _, xi1, xi2, xi3 = state
    return np.array([
        xi1 + x2*xi3,
        xi2 - x1*xi3,
        x2*xi1 - x1*xi2 + xi3*(x1**2 + x2**2),
        xi2*xi3 - x1*xi3**2,
        -xi1*xi3 - x2*xi3**2,
        0.0,
    ])

def hamiltonian(state : np.ndarray)->np.ndarray:
    """ H along a trajectory of shape (..., 6); half the squared horizontal speed """
    state = np.asarray(state, dtype=float)
    x1, x2 = state[..., 0], state[..., 1]
    xi1, xi2, xi3 = state[..., 3], state[..., 4], state[..., 5]
    return 0.5*((xi1 + x2*xi3)**2 + (xi2 - x1*xi3)**2)

def _velocity_and_acceleration(trajectory : np.ndarray)->tuple[np.ndarray, np.ndarray]:
    """ Exact x' and x'' of the Hamiltonian flow at each state """
    x1, x2 = trajectory[:, 0], trajectory[:, 1]
    xi1, xi2, xi3 = trajectory[:, 3], trajectory[:, 4], trajectory[:, 5]
    v1 = xi1 + x2*xi3
    v2 = xi2 - x1*xi3
    v3 = x2*xi1 - x1*xi2 + xi3*(x1**2 + x2**2)
    dxi1 = xi2*xi3 - x1*xi3**2
    dxi2 = -xi1*xi3 - x2*xi3**2
    a1 = dxi1 + v2*xi3
    a2 = dxi2 - v1*xi3
    a3 = v2*xi1 + x2*dxi1 - v1*xi2 - x1*dxi2 + 2*xi3*(x1*v1 + x2*v2)
    return np.column_stack([v1, v2, v3]), np.column_stack([a1, a2, a3])

def geodesic_flow(init : HamiltonianState, t_end : float, n_steps : int)->ParamCurve:
    """
    Integrates the Hamiltonian system from `init` over [0, t_end] with
    fixed-step RK4. The returned curve carries the exact velocity and
    acceleration of the flow at each integrated state.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be at least 1")
    t, trajectory = integrate_ode(OdeProblem(hamiltonian_rhs, init.array, 0.0, float(t_end), n_steps))
    d1, d2 = _velocity_and_acceleration(trajectory)
    return ParamCurve(t, trajectory[:, :3], d1, d2)

def hamiltonian_trajectory(init : HamiltonianState, t_end : float, n_steps : int)->tuple[np.ndarray, np.ndarray]:
    """ Raw (t, states) of the flow, for conservation checks """
    return integrate_ode(OdeProblem(hamiltonian_rhs, init.array, 0.0, float(t_end), n_steps))

@dataclass(frozen=True)
class GeodesicParams():
    c3 : float
    a1 : float = 0.0
    a2 : float = 0.0
    d1 : float = 0.0
    d2 : float = 0.0
    d3 : float = 0.0
    c1 : float = 0.0
    c2 : float = 0.0

    def __post_init__(self):
        values = [self.c3, self.a1, self.a2, self.d1, self.d2, self.d3, self.c1, self.c2]
        if not all(np.isfinite(values)):
            raise DegenerateParams("Geodesic parameters must be finite")
        if self.branch != "line" and self.a1**2 + self.a2**2 == 0:
            raise DegenerateParams("c3 != 0 needs a1^2 + a2^2 > 0")
        if self.branch == "line" and self.c1**2 + self.c2**2 == 0:
            raise DegenerateParams("A straight geodesic needs (c1, c2) != 0")

    @property
    def branch(self)->str:
        if abs(self.c3) < ZERO_C3:
            return "line"
        return "positive" if self.c3 > 0 else "negative"

    @property
    def curvature(self)->float:
        """ The constant p-curvature of this geodesic """
        if self.branch == "line":
            return 0.0
        radius = np.hypot(self.a1, self.a2)
        return -1.0/radius if self.branch == "positive" else 1.0/radius

    @classmethod
    def from_state(cls, state : HamiltonianState)->'GeodesicParams':
        """ Closed-form parameters of the geodesic through a Hamiltonian state at t = 0 """
        x1, x2, x3 = state.x
        xi1, xi2, c3 = state.xi
        v1, v2 = xi1 + x2*c3, xi2 - x1*c3
        if abs(c3) < ZERO_C3:
            return cls(0.0, d1 = x1, d2 = x2, d3 = x3, c1 = v1, c2 = v2)
        if c3 > 0:
            a1, a2 = v1/(2*c3), -v2/(2*c3)
            d1, d2 = x1 - a2, x2 - a1
            return cls(c3, a1, a2, d1, d2, x3 - (a2*d2 - a1*d1))
        omega = -2*c3
        a1, a2 = v1/omega, v2/omega
        d1, d2 = x1 - a2, x2 + a1
        return cls(c3, a1, a2, d1, d2, x3 - (a1*d1 + a2*d2))

    def to_json(self)->dict:
        return {
            "c3" : self.c3, "a1" : self.a1, "a2" : self.a2,
            "d1" : self.d1, "d2" : self.d2, "d3" : self.d3,
            "c1" : self.c1, "c2" : self.c2,
        }

    @classmethod
    def from_json(cls, data : dict)->'GeodesicParams':
        try:
            return cls(**{key : float(value) for key, value in data.items()})
        except (TypeError, ValueError) as e:
            raise InvalidInput(f"Bad geodesic parameters {data!r}: {e}")

def geodesic_closed_form(params : GeodesicParams, t : np.ndarray)->ParamCurve:
    """
    Evaluates the explicit geodesic on the grid `t`, with analytic
    derivatives. For c3 < 0 the height is

        2 c3 (a1^2 + a2^2) t + (a1 d2 - a2 d1) sin(w t) + (a1 d1 + a2 d2) cos(w t) + d3,

    w = -2 c3, which is the form that keeps the curve horizontal for any
    centre (d1, d2).
    """
    t = np.asarray(t, dtype=float)
    p = params
    if p.branch == "line":
        ones = np.ones_like(t)
        points = np.column_stack([
            p.c1*t + p.d1,
            p.c2*t + p.d2,
            (p.c1*p.d2 - p.c2*p.d1)*t + p.d3,
        ])
        d1 = np.column_stack([p.c1*ones, p.c2*ones, (p.c1*p.d2 - p.c2*p.d1)*ones])
        return ParamCurve(t, points, d1, np.zeros_like(points))

    r_sq = p.a1**2 + p.a2**2
    if p.branch == "positive":
        w = 2*p.c3
        S, C = np.sin(w*t), np.cos(w*t)
        A, B = p.a2*p.d1 + p.a1*p.d2, p.a2*p.d2 - p.a1*p.d1
        points = np.column_stack([
            p.a1*S + p.a2*C + p.d1,
            -p.a2*S + p.a1*C + p.d2,
            A*S + B*C + 2*p.c3*r_sq*t + p.d3,
        ])
        d1 = np.column_stack([
            w*(p.a1*C - p.a2*S),
            w*(-p.a2*C - p.a1*S),
            w*(A*C - B*S) + 2*p.c3*r_sq,
        ])
        d2 = np.column_stack([
            -w**2*(p.a1*S + p.a2*C),
            -w**2*(-p.a2*S + p.a1*C),
            -w**2*(A*S + B*C),
        ])
        return ParamCurve(t, points, d1, d2)

    w = -2*p.c3
    S, C = np.sin(w*t), np.cos(w*t)
    A, B = p.a1*p.d2 - p.a2*p.d1, p.a1*p.d1 + p.a2*p.d2
    points = np.column_stack([
        p.a1*S + p.a2*C + p.d1,
        p.a2*S - p.a1*C + p.d2,
        A*S + B*C + 2*p.c3*r_sq*t + p.d3,
    ])
    d1 = np.column_stack([
        w*(p.a1*C - p.a2*S),
        w*(p.a2*C + p.a1*S),
        w*(A*C - B*S) + 2*p.c3*r_sq,
    ])
    d2 = np.column_stack([
        -w**2*(p.a1*S + p.a2*C),
        -w**2*(p.a2*S - p.a1*C),
        -w**2*(A*S + B*C),
    ])
    return ParamCurve(t, points, d1, d2)

def geodesic_defect(curve : ParamCurve, n_out : Optional[int] = None)->tuple[float, float]:
    """ (max |tau|, max k - min k) on the arclength parametrization """
    sig = signature(curve, n_out)
    return float(np.max(np.abs(sig.tau))), float(np.ptp(sig.k))

def is_geodesic(curve : ParamCurve, tol : Optional[float] = None)->bool:
    if tol is None:
        tol = TOLERANCES.geodesic if curve.has_analytic else TOLERANCES.curve_fd
    tau_max, k_range = geodesic_defect(curve)
    return tau_max <= tol and k_range <= tol
