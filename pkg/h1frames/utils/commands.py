from enum import Enum
from dataclasses import dataclass
from typing import Optional
import inspect

from ..job_protocol import JobProtocol

class GroupEnum(Enum):
    CURVES = 'Curves'
    SURFACES = 'Surfaces'

@dataclass
class CommandGroup():
    alias_list : list[str]
    module : object
    group_enum : GroupEnum

    @property
    def protocols(self)->list[JobProtocol]:
        return list(
            protocol[1]()
            for protocol in
            inspect.getmembers(self.module, inspect.isclass)
            if (
                issubclass(protocol[1], JobProtocol) and
                protocol[1] != JobProtocol and
                not inspect.isabstract(protocol[1])
            )
        )

    @property
    def subcommands(self)->list[str]:
        return sorted(protocol.name for protocol in self.protocols)

    def find(self, subcommand : str)->Optional[JobProtocol]:
        return next(
            (protocol for protocol in self.protocols if protocol.matches(subcommand)),
            None,
        )
