from abc import ABC, abstractmethod
from typing import TYPE_CHECKING

from .utils.mixins import (
    ReadsCurvesMixin, ReadsPatchMixin, ReadsCoefficientsMixin, WritesReportMixin,
)

if TYPE_CHECKING:
    from .utils.config import JobConfig

class JobProtocol(ABC):
    """
    Superclass of all `h1` subcommands.

    Provides a single common interface so that the command line can
    find and run any subcommand without knowing much about it: each
    protocol names itself, says what it reads through its mixins and
    does its work in `run`, which returns the exit status.
    """

    name : str = "Job protocol superclass"
    description : str = ""
    aliases : list[str] = []

    @abstractmethod
    def run(self, config : 'JobConfig')->int:
        """
        The main method of the protocol.
        """
        raise NotImplementedError()

    def matches(self, subcommand : str)->bool:
        return subcommand == self.name or subcommand in self.aliases

    @property
    def reads_curves(self)->bool:
        return isinstance(self, ReadsCurvesMixin)

    @property
    def reads_patch(self)->bool:
        return isinstance(self, ReadsPatchMixin)

    @property
    def reads_coefficients(self)->bool:
        return isinstance(self, ReadsCoefficientsMixin)

    @property
    def writes_report(self)->bool:
        return isinstance(self, WritesReportMixin)
