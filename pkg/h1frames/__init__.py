from pathlib import Path
from typing import TYPE_CHECKING, Optional
import re

from .group import (
    H1Point, TangentVector, HeisenbergMotion, OrientedFrame, MaurerCartanValue,
)
from .record import GridRecord
from .job_protocol import JobProtocol
from .utils.exceptions import H1Error, NoRecordError
from .utils.commands import GroupEnum, CommandGroup
from . import curves, surfaces, io
from .curves import protocols as curve_protocols
from .surfaces import protocols as surface_protocols

try:
    from ._version import __version__, version, version_tuple, __version_tuple__
except ImportError:
    # source checkout that was never built
    __version__ = version = "0.0.1"
    __version_tuple__ = version_tuple = (0, 0, 1)

if TYPE_CHECKING:
    from .utils.types import PathLike

COMMAND_GROUPS = [
    CommandGroup(
        ['curves', 'curve', 'Curves'],
        curve_protocols,
        GroupEnum.CURVES,
    ),
    CommandGroup(
        ['surfaces', 'surface', 'Surfaces'],
        surface_protocols,
        GroupEnum.SURFACES,
    ),
]

def find_protocol(subcommand : str)->Optional[JobProtocol]:
    """ The protocol answering to `subcommand`, or None """
    for group in COMMAND_GROUPS:
        protocol = group.find(subcommand)
        if protocol is not None:
            return protocol
    return None

def load_records(path : 'PathLike', pattern : Optional[str] = None)->list['GridRecord']:
    """
    Every .h1rec file below `path`, searched recursively and loaded in
    sorted path order. With a regex `pattern`, only files whose path it
    matches (re.search) are loaded.
    """
    matches = re.compile(pattern).search if pattern is not None else (lambda _ : True)
    found = sorted(Path(path).rglob(f"*.{GridRecord.FILE_EXTENSION}"))
    return [GridRecord.load(record_path) for record_path in found if matches(str(record_path))]
