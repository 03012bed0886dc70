"""
Tolerances, environment settings and the validated configuration
handed to every `h1` subcommand.
"""
from dataclasses import dataclass, field
from logging import warning
from pathlib import Path
from typing import Optional
import os

from .exceptions import InvalidInput

THREADS_ENV_VAR = "H1_NUM_THREADS"

@dataclass(frozen=True)
class Tolerances():
    contact : float = 1e-9
    group : float = 1e-9
    reproject : float = 1e-10
    analytic : float = 1e-6
    fd : float = 1e-3
    curve_analytic : float = 1e-8
    curve_fd : float = 1e-4
    # relative to the curve's speed scale
    regular : float = 1e-8
    # relative to median |c|
    singular : float = 1e-6
    geodesic : float = 1e-5

TOLERANCES = Tolerances()

def num_threads()->int:
    """ Worker cap for fiber-parallel integration, from H1_NUM_THREADS """
    raw = os.environ.get(THREADS_ENV_VAR, "")
    if raw.strip() == "":
        return 1
    try:
        n = int(raw)
    except ValueError:
        warning(f"Ignoring {THREADS_ENV_VAR}={raw!r}: not an integer")
        return 1
    if n < 1:
        warning(f"Ignoring {THREADS_ENV_VAR}={raw!r}: must be positive")
        return 1
    return n

def parse_grid(text : Optional[str])->Optional[tuple[int, int]]:
    """ 'NxM' -> (N, M) """
    if text is None:
        return None
    try:
        n, m = (int(part) for part in text.lower().split('x'))
    except ValueError:
        raise InvalidInput(f"Grid must look like NxM, got {text!r}")
    return n, m

@dataclass(frozen=True)
class JobConfig():
    """
    Everything a subcommand needs, parsed from the command line.

    `tol` is None when the caller did not override it; subcommands then
    pick the analytic or finite-difference default from `derivatives`.
    """
    subcommand : str
    inputs : tuple[Path, ...]
    output : Optional[Path] = None
    report : Optional[Path] = None
    plot : Optional[Path] = None
    tol : Optional[float] = None
    grid : Optional[tuple[int, int]] = None
    derivatives : str = "analytic"
    orientation : int = 1
    eps_regular : Optional[float] = None
    eps_singular : Optional[float] = None
    t_end : Optional[float] = None
    n_steps : int = 1000
    tolerances : Tolerances = field(default_factory=Tolerances)

    def __post_init__(self):
        if not self.subcommand:
            raise InvalidInput("No subcommand given")
        object.__setattr__(self, 'inputs', tuple(Path(p) for p in self.inputs))
        for path in self.inputs:
            if str(path) == "":
                raise InvalidInput("Empty input path")
        for name in ('output', 'report', 'plot'):
            value = getattr(self, name)
            if value is not None:
                if str(value) == "":
                    raise InvalidInput(f"Empty {name} path")
                object.__setattr__(self, name, Path(value))
        for name in ('tol', 'eps_regular', 'eps_singular'):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise InvalidInput(f"--{name.replace('_', '-')} must be positive, got {value}")
        if self.grid is not None and min(self.grid) < 5:
            raise InvalidInput(f"Grid resolutions must be at least 5, got {self.grid}")
        if self.derivatives not in ("analytic", "fd"):
            raise InvalidInput(f"--derivatives must be 'analytic' or 'fd', got {self.derivatives!r}")
        if self.orientation not in (1, -1):
            raise InvalidInput("--orientation must be + or -")
        if self.n_steps < 1:
            raise InvalidInput("--steps must be at least 1")

    @property
    def use_analytic(self)->bool:
        return self.derivatives == "analytic"
