from logging import info
from typing import TYPE_CHECKING

from ..reconstruction import congruence_check
from ...job_protocol import JobProtocol
from ...io import write_json
from ...utils.exceptions import NotCongruent
from ...utils.mixins import ReadsCurvesMixin, WritesReportMixin

if TYPE_CHECKING:
    from ...utils.config import JobConfig

class Congruence(ReadsCurvesMixin, WritesReportMixin, JobProtocol):
    """
    Decides whether two curves differ by a motion of PSH(1). Congruent
    curves get the motion {"p", "theta"} with the deviations written to
    --out; otherwise --out holds the NOT_CONGRUENT verdict and the exit
    status is that of NotCongruent.
    """

    name = "congruence"
    description = "Motion carrying the first curve onto the second"
    aliases = ["congruent"]

    N_CURVES = 2

    def run(self, config : 'JobConfig')->int:
        first, second = self.load_curves(config)
        result = congruence_check(first, second, config.tol)
        verdict = {
            "verdict" : "CONGRUENT" if result.congruent else "NOT_CONGRUENT",
            "max_deviation" : result.max_deviation,
            "frame_deviation" : result.frame_deviation,
            "tol" : result.tol,
        }
        if result.congruent:
            verdict.update(result.motion.to_json())
        if config.output is not None:
            write_json(config.output, verdict)
        self.write_report(config, verdict)
        print(verdict["verdict"])
        if not result.congruent:
            info(f"Curves differ by up to {result.max_deviation:.3e}")
            return NotCongruent.exit_code
        return 0

def cmd_congruence(config : 'JobConfig')->int:
    return Congruence().run(config)
