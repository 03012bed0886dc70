from .invariants import CurveInvariants, CurveReconstruct, cmd_curve_invariants, cmd_curve_reconstruct
from .congruence import Congruence, cmd_congruence
from .geodesic import Geodesic, cmd_geodesic
