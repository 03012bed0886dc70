""" JOB PROTOCOL MIXINS """
from logging import info
from pathlib import Path
from typing import TYPE_CHECKING, Optional

from ..exceptions import InvalidInput
from ... import io
from ...surfaces.coefficients import coefficients

if TYPE_CHECKING:
    from ..config import JobConfig
    from ...curves import ParamCurve
    from ...group import OrientedFrame
    from ...surfaces import SurfacePatch, SurfaceCoefficients

def _expect_inputs(config : 'JobConfig', at_least : int, at_most : int):
    n = len(config.inputs)
    if not at_least <= n <= at_most:
        expected = str(at_least) if at_least == at_most else f"{at_least} to {at_most}"
        raise InvalidInput(f"{config.subcommand} takes {expected} --in files, got {n}")

def _initial_frame(config : 'JobConfig', index : int)->Optional['OrientedFrame']:
    """ The optional initial-frame file at position `index` of --in """
    if len(config.inputs) <= index:
        return None
    return io.read_frame(config.inputs[index])

class ReadsCurvesMixin():
    """
    ReadsCurves means the protocol takes N_CURVES curve JSON files. In
    finite-difference mode their analytic derivative samples are dropped.
    """
    N_CURVES : int = 1

    def load_curves(self, config : 'JobConfig')->list['ParamCurve']:
        _expect_inputs(config, self.N_CURVES, self.N_CURVES)
        curves = [io.read_curve(path) for path in config.inputs]
        if not config.use_analytic:
            curves = [curve.without_derivatives() for curve in curves]
        return curves

class ReadsPatchMixin():
    """ ReadsPatch means the first input is a surface patch JSON """

    def load_patch(self, config : 'JobConfig')->'SurfacePatch':
        _expect_inputs(config, 1, 1)
        patch = io.read_patch(config.inputs[0])
        return patch if config.use_analytic else patch.without_partials()

class ReadsCoefficientsMixin():
    """
    ReadsCoefficients means the first input holds coefficient grids
    (JSON, CSV or a saved record) or a patch JSON to extract them from.
    A second input, when allowed, is an initial frame.
    """
    ACCEPTS_INITIAL_FRAME : bool = False

    def load_coefficients(self, config : 'JobConfig')->'SurfaceCoefficients':
        _expect_inputs(config, 1, 2 if self.ACCEPTS_INITIAL_FRAME else 1)
        path = config.inputs[0]
        if path.suffix == ".json":
            data = io.read_json(path)
            if isinstance(data, dict) and "points" in data:
                info(f"Extracting coefficients from the patch in {path}")
                patch = io.read_patch(path)
                if not config.use_analytic:
                    patch = patch.without_partials()
                return coefficients(patch, config.tol)
        return io.read_coefficients(path)

    def load_initial_frame(self, config : 'JobConfig')->Optional['OrientedFrame']:
        return _initial_frame(config, 1)

class WritesReportMixin():
    """ Writes a JSON sidecar report when --report is given """

    def write_report(self, config : 'JobConfig', report : dict)->Optional[Path]:
        if config.report is None:
            return None
        info(f"Writing report to {config.report}")
        return io.write_report(config.report, report)

def require_output(config : 'JobConfig')->Path:
    if config.output is None:
        raise InvalidInput(f"{config.subcommand} needs --out")
    return config.output
