"""
Surfaces in H^1: characteristic foliation and normal coordinates, the
coefficients of a normal patch, intrinsic invariants (p-variation,
p-mean curvature, Gaussian curvature) and reconstruction from either.
"""
from .patch import (
    SurfacePatch, CharacteristicField, characteristic_field,
    characteristic_direction, singular_cells, is_normal_parametrization,
    normalize_patch,
)
from .coefficients import (
    COEFFICIENT_NAMES, SurfaceCoefficients, MetricPatch, coefficients,
    check_integrability, check_pminimal, transform_coefficient_values,
    transform_coefficients, p_variation, induced_metric, fundamental_forms,
)
from .invariants import (
    Coframe, StructureConnection, ConnectionForms, SurfaceInvariants,
    directional_derivatives, structure_connection, connection_forms,
    gaussian_curvature_formula, gaussian_curvature_reference, check_gauss,
    check_codazzi, check_surface_integrability, coframe_integrability_residual,
    euler_integrand, euler_integrand_alt, patch_total, patch_area,
    surface_invariants,
)
from .reconstruction import (
    integrate_frame_grid, reconstruct_surface, reconstruct_from_invariants,
    invariants_tolerance,
)
from . import factory
