from .coefficients import (
    ExtractCoefficients, CheckSurface, NormalizePatch,
    cmd_surface_coefficients, cmd_surface_check, cmd_surface_normalize,
)
from .invariants import ExtractInvariants, cmd_surface_invariants
from .reconstruction import (
    ReconstructSurface, SurfaceFromInvariants,
    cmd_surface_reconstruct, cmd_surface_from_invariants,
)
