from logging import info, warning
from typing import TYPE_CHECKING

import numpy as np

from .coefficients import fd_tolerance
from ..invariants import (
    surface_invariants, check_codazzi, check_surface_integrability, euler_integrand, patch_total,
    patch_area,
)
from ...job_protocol import JobProtocol
from ...io import write_invariants
from ...utils.exceptions import SingularCell
from ...utils.mixins import ReadsCoefficientsMixin, WritesReportMixin, require_output

if TYPE_CHECKING:
    from ...utils.config import JobConfig

class ExtractInvariants(ReadsCoefficientsMixin, WritesReportMixin, JobProtocol):
    """
    alpha, l, K (from the formula and from the induced metric), the
    orthonormal coframe and the connection forms, from coefficients or a
    patch. The report carries the largest discrepancy between the two
    curvatures and, on nonsingular patches, the patch totals of area and
    of K.
    """

    name = "surface-invariants"
    description = "Intrinsic invariants of a normal patch"
    aliases = ["invariants"]

    def run(self, config : 'JobConfig')->int:
        out = require_output(config)
        coeffs = self.load_coefficients(config)
        eps = config.eps_singular
        invariants = surface_invariants(coeffs, eps)
        write_invariants(out, invariants)
        info(f"Wrote invariants on a {invariants.shape[0]}x{invariants.shape[1]} grid to {out}")

        tol = fd_tolerance(config)
        report = {
            "K_max_discrepancy" : invariants.K_discrepancy,
            "singular_cells" : int(np.sum(coeffs.singular_mask(eps))),
            "codazzi" : check_codazzi(invariants.alpha, invariants.l, coeffs, tol, eps).to_json(),
            "integrability" : check_surface_integrability(
                invariants.alpha, invariants.l, invariants.K, coeffs, tol, eps,
            ).to_json(),
        }
        try:
            report["area"] = patch_area(coeffs, eps)
            report["total_curvature"] = patch_total(
                euler_integrand(invariants.alpha, invariants.l, coeffs, eps), coeffs, "area", eps = eps,
            )
        except SingularCell as e:
            warning(f"No patch totals: {e}")
        self.write_report(config, report)
        return 0

def cmd_surface_invariants(config : 'JobConfig')->int:
    return ExtractInvariants().run(config)
