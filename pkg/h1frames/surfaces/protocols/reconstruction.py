from logging import info
from typing import TYPE_CHECKING

import numpy as np

from .coefficients import fd_tolerance
from ..coefficients import coefficients, check_integrability, p_variation
from ..patch import SurfacePatch, is_normal_parametrization
from ..reconstruction import reconstruct_surface, reconstruct_from_invariants, invariants_tolerance
from ...job_protocol import JobProtocol
from ...io import read_invariants, read_frame, write_patch
from ...utils.exceptions import InvalidInput
from ...utils.mixins import ReadsCoefficientsMixin, WritesReportMixin, require_output

if TYPE_CHECKING:
    from ..invariants import Coframe
    from ...utils.config import JobConfig

class ReconstructSurface(ReadsCoefficientsMixin, WritesReportMixin, JobProtocol):
    """
    The normal patch with the given coefficients, from an optional initial
    frame (second input). Coefficients failing the integrability
    conditions are refused. The report holds the integrability residuals
    and the round trip error of re-extracting the coefficients.
    """

    name = "surface-reconstruct"
    description = "Normal patch with prescribed coefficients"
    aliases = ["reconstruct-surface"]

    ACCEPTS_INITIAL_FRAME = True

    def run(self, config : 'JobConfig')->int:
        out = require_output(config)
        coeffs = self.load_coefficients(config)
        initial = self.load_initial_frame(config)
        tol = fd_tolerance(config)
        patch = reconstruct_surface(coeffs, initial, tol)
        write_patch(out, patch)
        info(f"Wrote {patch!r} to {out}")
        self.write_report(config, {
            "integrability" : check_integrability(coeffs, tol).to_json(),
            "coefficient_residual" : coefficients(patch).max_difference(coeffs),
        })
        return 0

def cmd_surface_reconstruct(config : 'JobConfig')->int:
    return ReconstructSurface().run(config)

def metric_residual(patch : SurfacePatch, coframe : 'Coframe')->float:
    """
    Largest entrywise difference between the adapted metric pulled back
    by the patch and the metric of the coframe.
    """
    Fu = patch.frame_components(patch.tangent_u())
    Fv = patch.frame_components(patch.tangent_v())
    target = coframe.metric()
    E = np.sum(Fu*Fu, axis=-1)
    F = np.sum(Fu*Fv, axis=-1)
    G = np.sum(Fv*Fv, axis=-1)
    return float(max(
        np.max(np.abs(E - target.E)),
        np.max(np.abs(F - target.F)),
        np.max(np.abs(G - target.G)),
    ))

class SurfaceFromInvariants(WritesReportMixin, JobProtocol):
    """
    A patch whose induced metric has the given orthonormal coframe, with
    prescribed p-variation alpha and p-mean curvature l. Input: the JSON
    written by surface-invariants (or its record), then optionally an
    initial frame. When the coframe puts the result in normal coordinates
    the report also compares the re-extracted alpha and l with the input.
    """

    name = "surface-from-invariants"
    description = "Patch with prescribed metric, alpha and l"
    aliases = ["from-invariants"]

    def run(self, config : 'JobConfig')->int:
        out = require_output(config)
        if not 1 <= len(config.inputs) <= 2:
            raise InvalidInput("surface-from-invariants takes an invariants file and an optional initial frame")
        coframe, alpha, l = read_invariants(config.inputs[0])
        initial = read_frame(config.inputs[1]) if len(config.inputs) == 2 else None
        tol = config.tol if config.tol is not None else invariants_tolerance(coframe, alpha, l)
        patch = reconstruct_from_invariants(coframe, alpha, l, initial, tol)
        write_patch(out, patch)

        report = {"tol" : tol, "metric_residual" : metric_residual(patch, coframe)}
        if is_normal_parametrization(patch).passed:
            coeffs = coefficients(patch)
            report["alpha_residual"] = float(np.max(np.abs(p_variation(coeffs).filled(np.nan) - alpha)))
            report["l_residual"] = float(np.max(np.abs(coeffs.l - l)))
        self.write_report(config, report)
        return 0

def cmd_surface_from_invariants(config : 'JobConfig')->int:
    return SurfaceFromInvariants().run(config)
