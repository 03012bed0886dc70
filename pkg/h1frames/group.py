"""
The Heisenberg group H^1 = R^3 with

    (x1, y1, z1) o (x2, y2, z2) = (x1 + x2, y1 + y2, z1 + z2 + y1 x2 - x1 y2),

its left-invariant frame

    e1 = d/dx + y d/dz,  e2 = d/dy - x d/dz,  T = d/dz,

the contact form theta0 = dz + x dy - y dx, the CR structure J0 (e1 -> e2),
the adapted metric making (e1, e2, T) orthonormal, and the group PSH(1)
of pseudohermitian motions L_p o Phi_R written as 4x4 matrices acting on
(1, x, y, z)^T.

Scalar value types live here next to vectorized array helpers
(`coord_to_frame` and friends) which the curve and surface code uses
on whole sample grids.
"""
from dataclasses import dataclass
from logging import warning
from typing import TYPE_CHECKING, Optional, Iterator

import numpy as np

from .utils.config import TOLERANCES
from .utils.exceptions import NotInContactPlane, BasePointMismatch, NotInGroup, InvalidInput
from .utils.numerics import assemble_psh, so2_project, group_residual

if TYPE_CHECKING:
    from .utils.types import PointArray, VectorArray, FrameMatrix

@dataclass(frozen=True)
class H1Point():
    x : float
    y : float
    z : float

    def __post_init__(self):
        for name in ('x', 'y', 'z'):
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise ValueError(f"H1Point coordinate {name} is not finite")
            object.__setattr__(self, name, value)

    @classmethod
    def from_array(cls, array)->'H1Point':
        array = np.asarray(array, dtype=float).ravel()
        if array.size != 3:
            raise ValueError(f"A point needs 3 coordinates, got {array.size}")
        return cls(*array)

    @property
    def array(self)->np.ndarray:
        return np.array([self.x, self.y, self.z])

    def __iter__(self)->Iterator[float]:
        return iter((self.x, self.y, self.z))

    def to_json(self)->list[float]:
        return [self.x, self.y, self.z]

    @classmethod
    def from_json(cls, data)->'H1Point':
        try:
            return cls.from_array(data)
        except (ValueError, TypeError) as e:
            raise InvalidInput(f"Bad point {data!r}: {e}")

ORIGIN = H1Point(0.0, 0.0, 0.0)

def group_mul(p : H1Point, q : H1Point)->H1Point:
    return H1Point(
        p.x + q.x,
        p.y + q.y,
        p.z + q.z + p.y*q.x - p.x*q.y,
    )

def group_inv(p : H1Point)->H1Point:
    return H1Point(-p.x, -p.y, -p.z)

def group_mul_array(p : 'PointArray', q : 'PointArray')->'PointArray':
    p, q = np.asarray(p, dtype=float), np.asarray(q, dtype=float)
    out = p + q
    out[..., 2] += p[..., 1]*q[..., 0] - p[..., 0]*q[..., 1]
    return out

## Vector components

def coord_to_frame(points : 'PointArray', coords : 'VectorArray')->'VectorArray':
    """
    (d/dx, d/dy, d/dz) components at `points` to (e1, e2, T) components:
    v1 = cx, v2 = cy, v3 = cz + x cy - y cx. Broadcasts over leading axes.
    """
    points = np.asarray(points, dtype=float)
    coords = np.asarray(coords, dtype=float)
    frame = np.array(coords, dtype=float, copy=True)
    frame[..., 2] = coords[..., 2] + points[..., 0]*coords[..., 1] - points[..., 1]*coords[..., 0]
    return frame

def frame_to_coord(points : 'PointArray', frame : 'VectorArray')->'VectorArray':
    """ Inverse of `coord_to_frame` """
    points = np.asarray(points, dtype=float)
    frame = np.asarray(frame, dtype=float)
    coords = np.array(frame, dtype=float, copy=True)
    coords[..., 2] = frame[..., 2] - points[..., 0]*frame[..., 1] + points[..., 1]*frame[..., 0]
    return coords

def contact_form_array(points : 'PointArray', coords : 'VectorArray')->np.ndarray:
    """ theta0 of coordinate vectors, elementwise """
    return coord_to_frame(points, coords)[..., 2]

def j0_frame(frame : 'VectorArray')->'VectorArray':
    """ J0 on frame components of contact vectors: (v1, v2) -> (-v2, v1) """
    frame = np.asarray(frame, dtype=float)
    out = np.zeros_like(frame)
    out[..., 0] = -frame[..., 1]
    out[..., 1] = frame[..., 0]
    return out

def adapted_inner_array(frame_a : 'VectorArray', frame_b : 'VectorArray')->np.ndarray:
    return np.sum(np.asarray(frame_a)*np.asarray(frame_b), axis=-1)

class TangentVector():
    """
    A tangent vector at `base`, carrying both its coordinate components
    (d/dx, d/dy, d/dz) and its frame components (e1, e2, T). Exactly one
    of the two is supplied; the other is derived on construction.
    """

    __slots__ = ('_base', '_coord', '_frame')

    def __init__(
            self,
            base    : H1Point,
            coord   : Optional[np.ndarray] = None,
            frame   : Optional[np.ndarray] = None,
        ):
        if (coord is None) == (frame is None):
            raise ValueError("Give exactly one of `coord` or `frame`")
        self._base = base
        if coord is not None:
            coord = np.array(coord, dtype=float).reshape(3)
            frame = coord_to_frame(base.array, coord)
        else:
            frame = np.array(frame, dtype=float).reshape(3)
            coord = frame_to_coord(base.array, frame)
        if not (np.all(np.isfinite(coord)) and np.all(np.isfinite(frame))):
            raise ValueError("TangentVector components must be finite")
        coord.flags.writeable = False
        frame.flags.writeable = False
        self._coord = coord
        self._frame = frame

    @property
    def base(self)->H1Point:
        return self._base

    @property
    def coord(self)->np.ndarray:
        return self._coord

    @property
    def frame(self)->np.ndarray:
        return self._frame

    def _check_base(self, other : 'TangentVector'):
        if not np.allclose(self.base.array, other.base.array, rtol=0, atol=1e-12):
            raise BasePointMismatch(
                f"Vectors live at different points: {self.base} and {other.base}"
            )

    def __add__(self, other : 'TangentVector')->'TangentVector':
        self._check_base(other)
        return TangentVector(self.base, frame = self.frame + other.frame)

    def __sub__(self, other : 'TangentVector')->'TangentVector':
        self._check_base(other)
        return TangentVector(self.base, frame = self.frame - other.frame)

    def __neg__(self)->'TangentVector':
        return TangentVector(self.base, frame = -self.frame)

    def __mul__(self, scalar : float)->'TangentVector':
        return TangentVector(self.base, frame = float(scalar)*self.frame)

    __rmul__ = __mul__

    def isclose(self, other : 'TangentVector', tol : float = 1e-12)->bool:
        return (
            np.allclose(self.base.array, other.base.array, rtol=0, atol=tol)
            and np.allclose(self.frame, other.frame, rtol=0, atol=tol)
        )

    def __repr__(self)->str:
        v1, v2, v3 = self.frame
        return f"TangentVector at {tuple(self.base)}: {v1:.6g} e1 + {v2:.6g} e2 + {v3:.6g} T"

def e1(p : H1Point = ORIGIN)->TangentVector:
    return TangentVector(p, frame = [1.0, 0.0, 0.0])

def e2(p : H1Point = ORIGIN)->TangentVector:
    return TangentVector(p, frame = [0.0, 1.0, 0.0])

def T(p : H1Point = ORIGIN)->TangentVector:
    return TangentVector(p, frame = [0.0, 0.0, 1.0])

def contact_form(v : TangentVector)->float:
    """ theta0(v) = dz + x dy - y dx, which is the T component """
    return float(v.frame[2])

def apply_J0(v : TangentVector, tol : float = TOLERANCES.contact)->TangentVector:
    if abs(contact_form(v)) > tol:
        raise NotInContactPlane(
            f"J0 acts on the contact plane only; theta0(v) = {contact_form(v):.3e}"
        )
    return TangentVector(v.base, frame = j0_frame(v.frame))

def adapted_inner(v : TangentVector, w : TangentVector)->float:
    v._check_base(w)
    return float(adapted_inner_array(v.frame, w.frame))

def adapted_norm(v : TangentVector)->float:
    return float(np.linalg.norm(v.frame))

## Motions

def rotation_matrix(theta : float)->np.ndarray:
    return np.array([
        [np.cos(theta), -np.sin(theta)],
        [np.sin(theta),  np.cos(theta)],
    ])

class HeisenbergMotion():
    """
    A pseudohermitian motion L_p o Phi_R of H^1:

        (x, y, z) -> (a x + b y + p1, c x + d y + p2,
                      (a p2 - c p1) x + (b p2 - d p1) y + z + p3)

    with R = [[a, b], [c, d]] in SO(2). Only p and R are stored; the matrix
    entries tied to both are rebuilt whenever the matrix is requested.
    """

    def __init__(self, p : H1Point = ORIGIN, R : Optional[np.ndarray] = None, tol : float = TOLERANCES.group):
        R = np.eye(2) if R is None else np.array(R, dtype=float).reshape(2, 2)
        drift = max(
            float(np.max(np.abs(R.T @ R - np.eye(2)))),
            abs(float(np.linalg.det(R)) - 1.0),
        )
        if drift > tol:
            raise NotInGroup(f"R is not a rotation (drift {drift:.3e} > {tol:.1e})")
        if drift > TOLERANCES.reproject:
            R = so2_project(R)
        R.flags.writeable = False
        self._p = p if isinstance(p, H1Point) else H1Point.from_array(p)
        self._R = R

    @classmethod
    def identity(cls)->'HeisenbergMotion':
        return cls(ORIGIN, np.eye(2))

    @classmethod
    def translation(cls, p : H1Point)->'HeisenbergMotion':
        return cls(p, np.eye(2))

    @classmethod
    def from_angle(cls, p : H1Point = ORIGIN, theta : float = 0.0)->'HeisenbergMotion':
        return cls(p, rotation_matrix(theta))

    @classmethod
    def from_matrix(cls, M : np.ndarray, tol : float = TOLERANCES.group)->'HeisenbergMotion':
        M = np.asarray(M, dtype=float)
        if M.shape != (4, 4):
            raise NotInGroup(f"Motion matrices are 4x4, got {M.shape}")
        residual = float(group_residual(M))
        if not residual <= tol:
            raise NotInGroup(f"Matrix is not in PSH(1) (residual {residual:.3e})")
        return cls(H1Point.from_array(M[1:4, 0]), M[1:3, 1:3], tol = tol)

    @property
    def p(self)->H1Point:
        return self._p

    @property
    def R(self)->np.ndarray:
        return self._R

    @property
    def theta(self)->float:
        return float(np.arctan2(self._R[1, 0], self._R[0, 0]))

    @property
    def matrix(self)->'FrameMatrix':
        return assemble_psh(self._p.array, self._R)

    @property
    def jacobian(self)->np.ndarray:
        """ Constant coordinate Jacobian of the motion """
        return self.matrix[1:4, 1:4]

    def apply(self, q : H1Point)->H1Point:
        return H1Point.from_array(self.apply_array(q.array))

    def apply_array(self, points : 'PointArray')->'PointArray':
        """ Applies the motion to (..., 3) coordinate arrays """
        points = np.asarray(points, dtype=float)
        return points @ self.jacobian.T + self._p.array

    def push_coords(self, coords : 'VectorArray')->'VectorArray':
        """ Pushes coordinate components of vectors forward """
        return np.asarray(coords, dtype=float) @ self.jacobian.T

    def pushforward(self, v : TangentVector)->TangentVector:
        """
        Frame components rotate by diag(R, 1): left translations fix
        left-invariant components and Phi_R rotates e1, e2 and fixes T.
        """
        frame = np.concatenate([self._R @ v.frame[:2], v.frame[2:]])
        return TangentVector(self.apply(v.base), frame = frame)

    def compose(self, other : 'HeisenbergMotion')->'HeisenbergMotion':
        """ self o other """
        return HeisenbergMotion(self.apply(other.p), self._R @ other.R)

    def inverse(self)->'HeisenbergMotion':
        Rt = self._R.T
        xy = Rt @ (-self._p.array[:2])
        return HeisenbergMotion(H1Point(xy[0], xy[1], -self._p.z), Rt)

    def __matmul__(self, other : 'HeisenbergMotion')->'HeisenbergMotion':
        return self.compose(other)

    def isclose(self, other : 'HeisenbergMotion', tol : float = 1e-9)->bool:
        return bool(np.max(np.abs(self.matrix - other.matrix)) <= tol)

    def to_json(self)->dict:
        return {"p" : self._p.to_json(), "theta" : self.theta}

    @classmethod
    def from_json(cls, data : dict)->'HeisenbergMotion':
        try:
            return cls.from_angle(H1Point.from_json(data["p"]), float(data["theta"]))
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidInput(f"Bad motion {data!r}: {e}")

    def __repr__(self)->str:
        return f"HeisenbergMotion(p = {tuple(self._p)}, theta = {self.theta:.6g})"

def motion_apply(g : HeisenbergMotion, q : H1Point)->H1Point:
    return g.apply(q)

def motion_compose(g1 : HeisenbergMotion, g2 : HeisenbergMotion)->HeisenbergMotion:
    return g1.compose(g2)

def motion_inverse(g : HeisenbergMotion)->HeisenbergMotion:
    return g.inverse()

def motion_pushforward(g : HeisenbergMotion, v : TangentVector)->TangentVector:
    return g.pushforward(v)

## Frames

class OrientedFrame():
    """
    (p; X, Y, T) with X, Y unit contact vectors at p and Y = J0 X.
    Its matrix M satisfies (p; X, Y, T) = (0; e1, e2, T) M: column 0 holds
    p, columns 1 and 2 hold the coordinate components of X and Y.
    """

    def __init__(
            self,
            p   : H1Point,
            X   : TangentVector,
            Y   : Optional[TangentVector] = None,
            tol : float = TOLERANCES.contact,
        ):
        if not np.allclose(X.base.array, p.array, rtol=0, atol=1e-12):
            raise BasePointMismatch("X must be based at p")
        if abs(contact_form(X)) > tol:
            raise NotInContactPlane(f"X is not horizontal (theta0 = {contact_form(X):.3e})")
        if abs(adapted_norm(X) - 1.0) > tol:
            raise ValueError(f"X must be a unit vector, |X| = {adapted_norm(X):.12g}")
        JX = apply_J0(X, tol = tol)
        if Y is not None and not Y.isclose(JX, tol = max(tol, 1e-12)):
            raise ValueError("Y must equal J0 X")
        self._p = p
        self._X = X
        self._Y = JX if Y is None else Y

    @classmethod
    def standard(cls, p : H1Point = ORIGIN)->'OrientedFrame':
        return cls(p, e1(p))

    @classmethod
    def from_angle(cls, p : H1Point = ORIGIN, theta : float = 0.0)->'OrientedFrame':
        """ X = cos(theta) e1 + sin(theta) e2 at p """
        return cls(p, TangentVector(p, frame = [np.cos(theta), np.sin(theta), 0.0]))

    @classmethod
    def from_motion(cls, g : HeisenbergMotion)->'OrientedFrame':
        """ The image of the standard frame at the origin under g """
        return matrix_to_frame(g.matrix)

    @property
    def p(self)->H1Point:
        return self._p

    @property
    def X(self)->TangentVector:
        return self._X

    @property
    def Y(self)->TangentVector:
        return self._Y

    @property
    def T(self)->TangentVector:
        return T(self._p)

    @property
    def matrix(self)->'FrameMatrix':
        return frame_to_matrix(self)

    @property
    def motion(self)->HeisenbergMotion:
        """ The motion taking the standard frame at the origin to this one """
        return HeisenbergMotion(self._p, np.column_stack([self._X.frame[:2], self._Y.frame[:2]]))

    def transformed(self, g : HeisenbergMotion)->'OrientedFrame':
        return OrientedFrame(g.apply(self._p), g.pushforward(self._X))

    def to_json(self)->dict:
        return self.motion.to_json()

    @classmethod
    def from_json(cls, data : dict)->'OrientedFrame':
        return cls.from_motion(HeisenbergMotion.from_json(data))

    def __repr__(self)->str:
        return f"OrientedFrame(p = {tuple(self._p)}, X = {tuple(self._X.frame[:2])})"

def frame_to_matrix(f : OrientedFrame)->'FrameMatrix':
    R = np.column_stack([f.X.frame[:2], f.Y.frame[:2]])
    return assemble_psh(f.p.array, R)

def matrix_to_frame(M : 'FrameMatrix', tol : float = TOLERANCES.group)->OrientedFrame:
    g = HeisenbergMotion.from_matrix(M, tol = tol)
    p = g.p
    return OrientedFrame(p, TangentVector(p, frame = [g.R[0, 0], g.R[1, 0], 0.0]))

## Maurer-Cartan values

def psh_algebra(w1, w2, w3, w12)->np.ndarray:
    """
    Assembles psh(1) matrices from arrays of coefficients:

        [[0,  0,   0,    0],
         [w1, 0,  -w12,  0],
         [w2, w12, 0,    0],
         [w3, w2, -w1,   0]]

    Entries outside this pattern are exact zeros.
    """
    w1, w2, w3, w12 = np.broadcast_arrays(*(np.asarray(w, dtype=float) for w in (w1, w2, w3, w12)))
    omega = np.zeros(w1.shape + (4, 4))
    omega[..., 1, 0] = w1
    omega[..., 2, 0] = w2
    omega[..., 3, 0] = w3
    omega[..., 1, 2] = -w12
    omega[..., 2, 1] = w12
    omega[..., 3, 1] = w2
    omega[..., 3, 2] = -w1
    return omega

@dataclass(frozen=True)
class MaurerCartanValue():
    """ (omega^1, omega^2, omega^3, omega_1^2) on one tangent direction """
    w1 : float = 0.0
    w2 : float = 0.0
    w3 : float = 0.0
    w12 : float = 0.0

    @classmethod
    def for_curve(cls, k : float, tau : float)->'MaurerCartanValue':
        """ Darboux derivative of a curve in horizontal arclength """
        return cls(1.0, 0.0, tau, k)

    @property
    def matrix(self)->np.ndarray:
        return psh_algebra(self.w1, self.w2, self.w3, self.w12)

def moving_frame_derivative(f : OrientedFrame, mc : MaurerCartanValue)->np.ndarray:
    """
    dM = M omega: dp = X w1 + Y w2 + T w3, dX = Y w12 + T w2,
    dY = -X w12 - T w1, dT = 0.
    """
    return f.matrix @ mc.matrix
