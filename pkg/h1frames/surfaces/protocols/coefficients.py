from logging import info, error
from typing import TYPE_CHECKING, Optional

import numpy as np

from ..coefficients import SurfaceCoefficients, coefficients, check_integrability, check_pminimal, p_variation
from ..invariants import (
    check_gauss, check_codazzi, check_surface_integrability, gaussian_curvature_formula,
)
from ..patch import normalize_patch, is_normal_parametrization
from ...job_protocol import JobProtocol
from ...io import write_coefficients, write_json, write_patch
from ...utils.exceptions import IntegrabilityViolation, DegenerateMetric, SingularCell
from ...utils.mixins import (
    ReadsPatchMixin, ReadsCoefficientsMixin, WritesReportMixin, require_output,
)

if TYPE_CHECKING:
    from ...utils.config import JobConfig

def fd_tolerance(config : 'JobConfig')->float:
    """ Checks on coefficient grids always difference them """
    return config.tol if config.tol is not None else config.tolerances.fd

class ExtractCoefficients(ReadsPatchMixin, WritesReportMixin, JobProtocol):
    """
    a, b, c, l, m of a normal patch, written as JSON grids, CSV rows or a
    record depending on the --out suffix. A patch that is not in normal
    coordinates is refused with its normality report.
    """

    name = "surface-coefficients"
    description = "Coefficients of a normal patch"
    aliases = ["coefficients"]

    def run(self, config : 'JobConfig')->int:
        out = require_output(config)
        patch = self.load_patch(config)
        report = is_normal_parametrization(patch, config.tol)
        self.write_report(config, {"normality" : report.to_json()})
        coeffs = coefficients(patch, config.tol)
        write_coefficients(out, coeffs)
        info(f"Wrote {coeffs!r} to {out}")
        return 0

def cmd_surface_coefficients(config : 'JobConfig')->int:
    return ExtractCoefficients().run(config)

def surface_checks(
        coeffs  : SurfaceCoefficients,
        tol     : float,
        eps     : Optional[float] = None,
    )->dict:
    """
    Every consistency check on a coefficient grid, keyed by name. The
    intrinsic checks need nonsingular cells and a nondegenerate induced
    metric, and are left out when either is missing.
    """
    checks = {
        "integrability" : check_integrability(coeffs, tol).to_json(),
        "p_minimal" : check_pminimal(coeffs, tol).to_json(),
    }
    try:
        alpha = p_variation(coeffs, eps)
        K = gaussian_curvature_formula(alpha, coeffs.l, coeffs, eps)
        checks["gauss"] = check_gauss(coeffs, tol, eps).to_json()
        checks["codazzi"] = check_codazzi(alpha, coeffs.l, coeffs, tol, eps).to_json()
        checks["surface_integrability"] = check_surface_integrability(alpha, coeffs.l, K, coeffs, tol, eps).to_json()
    except (SingularCell, DegenerateMetric) as e:
        info(f"Skipping intrinsic checks: {e}")
    return checks

class CheckSurface(ReadsCoefficientsMixin, WritesReportMixin, JobProtocol):
    """
    Residual reports for a coefficient grid (or a patch). The exit status
    is that of IntegrabilityViolation when the coefficients fail their
    integrability conditions.
    """

    name = "surface-check"
    description = "Integrability and consistency residuals"
    aliases = ["check"]

    def run(self, config : 'JobConfig')->int:
        coeffs = self.load_coefficients(config)
        tol = fd_tolerance(config)
        checks = surface_checks(coeffs, tol, config.eps_singular)
        if config.output is not None:
            write_json(config.output, checks)
        self.write_report(config, checks)

        integrability = checks["integrability"]
        if not integrability["passed"]:
            error(
                f"Integrability violated: residual {integrability['max_residual']:.3e} "
                f"at cell {integrability['argmax_cell']}"
            )
            return IntegrabilityViolation.exit_code
        return 0

def cmd_surface_check(config : 'JobConfig')->int:
    return CheckSurface().run(config)

class NormalizePatch(ReadsPatchMixin, WritesReportMixin, JobProtocol):
    """
    Normal coordinates for a nonsingular patch by flowing along the
    characteristic field from its first u-line. --grid NxM asks for N
    samples along each characteristic from M evenly spaced seeds;
    --orientation flips the characteristic direction.
    """

    name = "surface-normalize"
    description = "Reparametrize a patch in normal coordinates"
    aliases = ["normalize"]

    def run(self, config : 'JobConfig')->int:
        out = require_output(config)
        patch = self.load_patch(config)
        n_u, v_indices = None, None
        if config.grid is not None:
            n_u = config.grid[0]
            n_v = min(config.grid[1], patch.nv)
            step = (patch.nv - 1)//(n_v - 1)
            v_indices = np.arange(n_v)*step
        normal = normalize_patch(
            patch, n_u = n_u, v_indices = v_indices, orientation = config.orientation,
        )
        write_patch(out, normal)
        self.write_report(config, {"normality" : is_normal_parametrization(normal).to_json()})
        return 0

def cmd_surface_normalize(config : 'JobConfig')->int:
    return NormalizePatch().run(config)
