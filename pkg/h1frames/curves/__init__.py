"""
Horizontally regular curves in H^1: their invariants (p-curvature k and
T-variation tau), reconstruction from them, congruence and geodesics.
"""
from .curve import (
    ParamCurve, CurveSignature, velocity_decomposition, horizontal_speed,
    is_horizontally_regular, require_regular, horizontal_arclength,
    reparametrize_by_arclength, curvature_profile, p_curvature, t_variation,
    signature,
)
from .reconstruction import (
    integrate_frames, reconstruct_curve, CongruenceResult, congruence_check,
    congruence_diagnostic, congruence_motion,
)
from .geodesics import (
    HamiltonianState, GeodesicParams, hamiltonian, hamiltonian_rhs,
    hamiltonian_trajectory, geodesic_flow, geodesic_closed_form,
    geodesic_defect, is_geodesic,
)
from . import factory
