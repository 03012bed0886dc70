"""
Ready-made patches, coefficient grids and metrics with known invariants.
Every patch carries analytic partials.
"""
from typing import Callable, Optional, Union

import numpy as np

from .coefficients import SurfaceCoefficients, MetricPatch, COEFFICIENT_NAMES
from .patch import SurfacePatch
from ..group import rotation_matrix
from ..utils import uniform_step
from ..utils.numerics import assemble_psh

GridFunction = Callable[[np.ndarray, np.ndarray], np.ndarray]
CurveFunction = Callable[[np.ndarray], np.ndarray]

def _mesh(u : np.ndarray, v : np.ndarray)->tuple[np.ndarray, np.ndarray]:
    return np.meshgrid(np.asarray(u, dtype=float), np.asarray(v, dtype=float), indexing='ij')

def _patch(u, v, points, **partials)->SurfacePatch:
    u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    return SurfacePatch(u[0], uniform_step(u), v[0], uniform_step(v), points, partials)

def _vectors(*components)->np.ndarray:
    return np.stack(np.broadcast_arrays(*components), axis=-1)

def vertical_plane(u : np.ndarray, v : np.ndarray)->SurfacePatch:
    """ (u, 0, v): a = b = l = m = 0, c = 1 """
    U, V = _mesh(u, v)
    zeros, ones = np.zeros_like(U), np.ones_like(U)
    return _patch(
        u, v, _vectors(U, zeros, V),
        F_u = _vectors(ones, zeros, zeros),
        F_v = _vectors(zeros, zeros, ones),
        F_uu = _vectors(zeros, zeros, zeros),
        F_uv = _vectors(zeros, zeros, zeros),
    )

def cylinder_normal(u : np.ndarray, v : np.ndarray)->SurfacePatch:
    """
    (cos u, sin u, v - u), the unit cylinder in normal coordinates:
    a = b = m = 0, c = 1, l = 1.
    """
    U, V = _mesh(u, v)
    C, S = np.cos(U), np.sin(U)
    zeros, ones = np.zeros_like(U), np.ones_like(U)
    return _patch(
        u, v, _vectors(C, S, V - U),
        F_u = _vectors(-S, C, -ones),
        F_v = _vectors(zeros, zeros, ones),
        F_uu = _vectors(-C, -S, zeros),
        F_uv = _vectors(zeros, zeros, zeros),
    )

def cylinder_vertical(u : np.ndarray, v : np.ndarray)->SurfacePatch:
    """ (cos u, sin u, v): the same cylinder, F_u not horizontal """
    U, V = _mesh(u, v)
    C, S = np.cos(U), np.sin(U)
    zeros, ones = np.zeros_like(U), np.ones_like(U)
    return _patch(
        u, v, _vectors(C, S, V),
        F_u = _vectors(-S, C, zeros),
        F_v = _vectors(zeros, zeros, ones),
        F_uu = _vectors(-C, -S, zeros),
        F_uv = _vectors(zeros, zeros, zeros),
    )

def helicoid(u : np.ndarray, v : np.ndarray)->SurfacePatch:
    """
    (u cos v, u sin v, v), normal everywhere: a = 0, b = u, c = 1 + u^2,
    l = 0, m = 1. p-minimal.
    """
    U, V = _mesh(u, v)
    C, S = np.cos(V), np.sin(V)
    zeros, ones = np.zeros_like(U), np.ones_like(U)
    return _patch(
        u, v, _vectors(U*C, U*S, V),
        F_u = _vectors(C, S, zeros),
        F_v = _vectors(-U*S, U*C, ones),
        F_uu = _vectors(zeros, zeros, zeros),
        F_uv = _vectors(-S, C, zeros),
    )

def tilted_plane(
        u       : np.ndarray,
        v       : np.ndarray,
        alpha   : float = 0.0,
        beta    : float = 0.0,
        gamma   : float = 0.0,
    )->SurfacePatch:
    """
    The graph z = alpha x + beta y + gamma over (x, y) = (u, v). Its only
    singular point is (u, v) = (-beta, alpha).
    """
    U, V = _mesh(u, v)
    zeros, ones = np.zeros_like(U), np.ones_like(U)
    return _patch(
        u, v, _vectors(U, V, alpha*U + beta*V + gamma),
        F_u = _vectors(ones, zeros, alpha*ones),
        F_v = _vectors(zeros, ones, beta*ones),
        F_uu = _vectors(zeros, zeros, zeros),
        F_uv = _vectors(zeros, zeros, zeros),
    )

def horizontal_plane(u : np.ndarray, v : np.ndarray)->SurfacePatch:
    """ z = 0, singular at the origin """
    return tilted_plane(u, v)

## Swept patches

def _swept_jacobian(
        p           : np.ndarray,
        theta       : np.ndarray,
        p_prime     : np.ndarray,
        theta_prime : np.ndarray,
    )->tuple[np.ndarray, np.ndarray]:
    """ Coordinate Jacobians A(v) of the motions (p(v), R(theta(v))) and A'(v) """
    R = np.stack([rotation_matrix(t) for t in theta])
    A = assemble_psh(p, R)[:, 1:4, 1:4]
    J = np.array([[0.0, -1.0], [1.0, 0.0]])
    R_prime = theta_prime[:, None, None]*(J @ R)
    a, b, c, d = R[:, 0, 0], R[:, 0, 1], R[:, 1, 0], R[:, 1, 1]
    ap, bp, cp, dp = R_prime[:, 0, 0], R_prime[:, 0, 1], R_prime[:, 1, 0], R_prime[:, 1, 1]
    p1, p2 = p[:, 0], p[:, 1]
    q1, q2 = p_prime[:, 0], p_prime[:, 1]
    A_prime = np.zeros_like(A)
    A_prime[:, :2, :2] = R_prime
    A_prime[:, 2, 0] = ap*p2 + a*q2 - cp*p1 - c*q1
    A_prime[:, 2, 1] = bp*p2 + b*q2 - dp*p1 - d*q1
    return A, A_prime

def swept_patch(
        u           : np.ndarray,
        v           : np.ndarray,
        radius      : float,
        p           : CurveFunction,
        p_prime     : CurveFunction,
        theta       : Optional[CurveFunction] = None,
        theta_prime : Optional[CurveFunction] = None,
    )->SurfacePatch:
    """
    F(u, v) = g(v) gamma(u): the horizontal geodesic

        gamma(u) = (r cos(u/r), r sin(u/r), -r u)

    moved by the one-parameter family of motions g(v) = (p(v), R(theta(v))).
    Every u-line is a unit-speed horizontal curve of p-curvature 1/r, so
    (u, v) are normal coordinates wherever theta0(F_v) does not vanish,
    and l = 1/r throughout.

    p and p_prime map the v samples to (nv, 3) arrays; theta and
    theta_prime to (nv,) arrays and default to no rotation.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    r = float(radius)
    theta = theta or (lambda s: np.zeros_like(s))
    theta_prime = theta_prime or (lambda s: np.zeros_like(s))
    p_v = np.broadcast_to(np.asarray(p(v), dtype=float), v.shape + (3,))
    q_v = np.broadcast_to(np.asarray(p_prime(v), dtype=float), v.shape + (3,))
    A, A_prime = _swept_jacobian(
        p_v, np.broadcast_to(theta(v), v.shape),
        q_v, np.broadcast_to(theta_prime(v), v.shape),
    )

    phase = u/r
    C, S = np.cos(phase), np.sin(phase)
    gamma = np.column_stack([r*C, r*S, -r*u])
    gamma_u = np.column_stack([-S, C, np.full_like(u, -r)])
    gamma_uu = np.column_stack([-C/r, -S/r, np.zeros_like(u)])

    def move(M, curve):
        # (nv, 3, 3) x (nu, 3) -> (nu, nv, 3)
        return np.einsum('jab,ib->ija', M, curve)

    return _patch(
        u, v, move(A, gamma) + p_v[None, :, :],
        F_u = move(A, gamma_u),
        F_v = move(A_prime, gamma) + q_v[None, :, :],
        F_uu = move(A, gamma_uu),
        F_uv = move(A_prime, gamma_u),
    )

def random_swept_patch(
        rng     : np.random.Generator,
        u       : Optional[np.ndarray] = None,
        v       : Optional[np.ndarray] = None,
    )->SurfacePatch:
    """
    A swept patch with random smooth data, kept small enough that
    theta0(F_v) stays well away from zero on [0, 1]^2: p3' = 1, horizontal
    amplitudes at most 0.1, rotation rate at most 0.15, r in [0.7, 1.2].
    """
    u = np.linspace(0.0, 1.0, 101) if u is None else u
    v = np.linspace(0.0, 1.0, 101) if v is None else v
    amplitude = rng.uniform(-0.1, 0.1, size=2)
    frequency = rng.uniform(0.2, 1.0, size=2)
    phase = rng.uniform(0.0, 2*np.pi, size=2)
    rate = rng.uniform(-0.15, 0.15)
    radius = rng.uniform(0.7, 1.2)

    def p(s):
        horizontal = amplitude*np.sin(np.multiply.outer(s, frequency) + phase)
        return np.column_stack([horizontal, s])

    def p_prime(s):
        horizontal = amplitude*frequency*np.cos(np.multiply.outer(s, frequency) + phase)
        return np.column_stack([horizontal, np.ones_like(s)])

    return swept_patch(
        u, v, radius, p, p_prime,
        theta = lambda s: rate*s,
        theta_prime = lambda s: np.full_like(s, rate),
    )

## Coefficient grids and metrics

def sampled_coefficients(
        u       : np.ndarray,
        v       : np.ndarray,
        name    : Optional[str] = None,
        **values : Union[float, GridFunction],
    )->SurfaceCoefficients:
    """
    Coefficients sampled on the grid u x v. Each of a, b, c, l, m is a
    constant or a function of the (U, V) mesh; missing ones are 0.
    """
    unknown = set(values) - set(COEFFICIENT_NAMES)
    if unknown:
        raise ValueError(f"Unknown coefficients {sorted(unknown)}")
    U, V = _mesh(u, v)
    grids = {}
    for key in COEFFICIENT_NAMES:
        value = values.get(key, 0.0)
        grid = value(U, V) if callable(value) else value
        grids[key] = np.broadcast_to(np.asarray(grid, dtype=float), U.shape).copy()
    return SurfaceCoefficients(
        U[0, 0], uniform_step(u), V[0, 0], uniform_step(v),
        name = name, **grids,
    )

def constant_coefficients(
        u : np.ndarray,
        v : np.ndarray,
        a : float = 0.0,
        b : float = 0.0,
        c : float = 1.0,
        l : float = 0.0,
        m : float = 0.0,
    )->SurfaceCoefficients:
    """ Integrable exactly when b = 0 and m = a l """
    return sampled_coefficients(u, v, a = a, b = b, c = c, l = l, m = m)

def helicoid_coefficients(u : np.ndarray, v : np.ndarray)->SurfaceCoefficients:
    return sampled_coefficients(
        u, v,
        b = lambda U, V: U,
        c = lambda U, V: 1.0 + U**2,
        m = 1.0,
    )

def sphere_metric(u : np.ndarray, v : np.ndarray)->MetricPatch:
    """ du^2 + sin^2(u) dv^2, Gaussian curvature 1 """
    U, _ = _mesh(u, v)
    return MetricPatch(
        U[0, 0], uniform_step(u), float(np.asarray(v)[0]), uniform_step(v),
        np.ones_like(U), np.zeros_like(U), np.sin(U)**2,
    )
