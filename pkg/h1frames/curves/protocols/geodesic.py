from typing import TYPE_CHECKING

import numpy as np

from ..geodesics import (
    GeodesicParams, geodesic_flow, geodesic_closed_form, geodesic_defect,
)
from ...job_protocol import JobProtocol
from ...io import read_geodesic_request, write_curve, write_plot
from ...utils.config import TOLERANCES
from ...utils.exceptions import InvalidInput
from ...utils.mixins import WritesReportMixin, require_output

if TYPE_CHECKING:
    from ...utils.config import JobConfig

DEFAULT_T_END = 1.0

class Geodesic(WritesReportMixin, JobProtocol):
    """
    A geodesic from closed-form parameters, or from a Hamiltonian initial
    state by integrating the Hamiltonian flow (--t-end, --steps). For a
    state the report also carries the sup distance to the closed form
    through the same initial data.
    """

    name = "geodesic"
    description = "Geodesic from parameters or a Hamiltonian initial state"

    def run(self, config : 'JobConfig')->int:
        out = require_output(config)
        if len(config.inputs) != 1:
            raise InvalidInput("geodesic takes exactly one --in file")
        request = read_geodesic_request(config.inputs[0])
        t_end = DEFAULT_T_END if config.t_end is None else config.t_end
        if not t_end > 0:
            raise InvalidInput("--t-end must be positive")
        t = np.linspace(0.0, t_end, config.n_steps + 1)

        report = {"t_end" : t_end, "steps" : config.n_steps}
        if isinstance(request, GeodesicParams):
            params = request
            curve = geodesic_closed_form(params, t)
        else:
            params = GeodesicParams.from_state(request)
            curve = geodesic_flow(request, t_end, config.n_steps)
            closed = geodesic_closed_form(params, t)
            report["closed_form_distance"] = float(
                np.max(np.linalg.norm(curve.points - closed.points, axis=1))
            )
        write_curve(out, curve)
        if config.plot is not None:
            write_plot(config.plot, curve)

        tau_max, k_range = geodesic_defect(curve)
        tol = config.tol if config.tol is not None else TOLERANCES.geodesic
        report.update({
            "params" : params.to_json(),
            "branch" : params.branch,
            "curvature" : params.curvature,
            "tau_max" : tau_max,
            "k_range" : k_range,
            "is_geodesic" : bool(tau_max <= tol and k_range <= tol),
        })
        self.write_report(config, report)
        return 0

def cmd_geodesic(config : 'JobConfig')->int:
    return Geodesic().run(config)
