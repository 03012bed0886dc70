from logging import info, warning
from typing import TYPE_CHECKING

import numpy as np

from ..curve import signature
from ..geodesics import geodesic_defect
from ..reconstruction import reconstruct_curve
from ...job_protocol import JobProtocol
from ...io import read_signature, write_signature, write_curve, read_frame
from ...utils.config import TOLERANCES
from ...utils.exceptions import InvalidInput
from ...utils.mixins import ReadsCurvesMixin, WritesReportMixin, require_output

if TYPE_CHECKING:
    from ...utils.config import JobConfig

class CurveInvariants(ReadsCurvesMixin, WritesReportMixin, JobProtocol):
    """
    Signature CSV (s, k, tau) of one curve JSON. --grid N resamples onto N
    arclength samples, --eps-regular sets the horizontal-speed threshold.
    """

    name = "curve-invariants"
    description = "p-curvature and T-variation of a curve on its arclength grid"
    aliases = ["signature"]

    def run(self, config : 'JobConfig')->int:
        out = require_output(config)
        curve, = self.load_curves(config)
        n_out = None if config.grid is None else config.grid[0]
        sig = signature(curve, n_out = n_out, eps = config.eps_regular)
        write_signature(out, sig)
        info(f"Wrote {sig!r} to {out}")
        self.write_report(config, {
            "samples" : len(sig),
            "length" : float(sig.s[-1]),
            "k_min" : float(sig.k.min()), "k_max" : float(sig.k.max()),
            "tau_min" : float(sig.tau.min()), "tau_max" : float(sig.tau.max()),
        })
        return 0

def cmd_curve_invariants(config : 'JobConfig')->int:
    return CurveInvariants().run(config)

class CurveReconstruct(WritesReportMixin, JobProtocol):
    """
    Curve JSON rebuilt from a signature (CSV or record), starting at an
    optional initial frame given as the second input. The report holds
    the round-trip residual of the re-extracted signature and whether the
    result is a geodesic.
    """

    name = "curve-reconstruct"
    description = "Curve with a prescribed signature"
    aliases = ["reconstruct-curve"]

    def run(self, config : 'JobConfig')->int:
        out = require_output(config)
        if not 1 <= len(config.inputs) <= 2:
            raise InvalidInput("curve-reconstruct takes a signature and an optional initial frame")
        sig = read_signature(config.inputs[0])
        initial = read_frame(config.inputs[1]) if len(config.inputs) == 2 else None
        curve = reconstruct_curve(sig, initial)
        write_curve(out, curve)

        tol = config.tol if config.tol is not None else TOLERANCES.analytic
        residual = sig.max_difference(signature(curve, n_out = len(sig)))
        if residual > tol:
            warning(f"Re-extracted signature differs from the input by {residual:.3e} (> {tol:.1e})")
        tau_max, k_range = geodesic_defect(curve)
        self.write_report(config, {
            "signature_residual" : residual,
            "tol" : tol,
            "passed" : bool(residual <= tol),
            "is_geodesic" : bool(tau_max <= TOLERANCES.geodesic and k_range <= TOLERANCES.geodesic),
            "tau_max" : tau_max,
            "k_range" : k_range,
            "length" : float(sig.s[-1] - sig.s[0]),
            "end_point" : np.asarray(curve.points[-1]).tolist(),
        })
        return 0

def cmd_curve_reconstruct(config : 'JobConfig')->int:
    return CurveReconstruct().run(config)
