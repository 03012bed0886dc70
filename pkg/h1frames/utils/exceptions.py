"""
Every failure the library can raise. Each class carries the exit
code the `h1` command reports when it escapes a subcommand.
"""
from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:
    from .reports import ResidualReport, NormalityReport

class H1Error(RuntimeError):
    exit_code : int = 2

class InvalidInput(H1Error):
    """ Malformed files, configs or arguments """
    exit_code = 2

class NoRecordError(H1Error):
    pass

# h1-core

class NotInContactPlane(H1Error):
    pass

class BasePointMismatch(H1Error):
    pass

class NotInGroup(H1Error):
    pass

# numerics

class NonFiniteState(H1Error):
    pass

class TooFewSamples(H1Error):
    pass

class GridTooSmall(H1Error):
    pass

class TooFarFromGroup(H1Error):
    pass

class NonUniformGrid(H1Error):
    pass

# curves

class NotHorizontallyRegular(H1Error):
    exit_code = 3

    def __init__(self, message : str, index : Optional[int] = None):
        super().__init__(message)
        self.index = index

class NotCongruent(H1Error):
    exit_code = 4

    def __init__(self, message : str, max_deviation : float):
        super().__init__(f"{message} (max deviation {max_deviation:.3e})")
        self.max_deviation = max_deviation

class DegenerateParams(H1Error):
    pass

# surfaces

class Singular(H1Error):
    """ The tangent plane coincides with the contact plane """
    exit_code = 3

class SingularCell(Singular):
    pass

class FlowLeftPatch(H1Error):
    exit_code = 3

class NotNormal(H1Error):
    exit_code = 3

    def __init__(self, message : str, report : 'Optional[NormalityReport]' = None):
        super().__init__(message)
        self.report = report

class IntegrabilityViolation(H1Error):
    exit_code = 5

    def __init__(self, message : str, report : 'Optional[ResidualReport]' = None):
        if report is not None:
            message = (
                f"{message}: worst residual {report.max_residual:.3e} "
                f"at cell {report.argmax_cell}"
            )
        super().__init__(message)
        self.report = report

class DegenerateReparam(H1Error):
    pass

class DegenerateMetric(H1Error):
    pass

class ClosedSurfaceUnsupported(H1Error):
    pass
