"""
Pass/fail reports for the grid checks. Residuals are judged on
interior cells; boundary cells (one-sided differences) are reported
alongside but never decide the verdict.
"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

@dataclass
class ResidualReport():
    max_residual : float
    argmax_cell : Optional[tuple[int, int]]
    per_equation : dict[str, float]
    boundary_max_residual : float
    tol : float
    extra : dict[str, float] = field(default_factory=dict)

    @property
    def passed(self)->bool:
        return bool(self.max_residual <= self.tol)

    @classmethod
    def from_residuals(
            cls,
            residuals : dict[str, np.ndarray],
            tol : float,
            mask : Optional[np.ndarray] = None,
        )->'ResidualReport':
        """
        Arguments
        ---------
        residuals : dict[str, np.ndarray]

            Named (nu, nv) residual grids.

        mask : np.ndarray, optional

            True on cells to ignore (singular cells). Boundary cells are
            always split off.
        """
        first = next(iter(residuals.values()))
        interior = np.zeros(first.shape, dtype=bool)
        interior[1:-1, 1:-1] = True
        if mask is not None:
            interior &= ~mask
            boundary = ~interior & ~mask
        else:
            boundary = ~interior

        per_equation = {}
        worst = np.zeros(first.shape)
        for name, grid in residuals.items():
            grid = np.abs(np.asarray(grid, dtype=float))
            grid = np.where(np.isfinite(grid), grid, np.inf)
            per_equation[name] = float(np.max(grid[interior])) if np.any(interior) else 0.0
            worst = np.maximum(worst, grid)

        if np.any(interior):
            masked = np.where(interior, worst, -np.inf)
            argmax = np.unravel_index(int(np.argmax(masked)), worst.shape)
            max_residual = float(worst[argmax])
            argmax_cell = (int(argmax[0]), int(argmax[1]))
        else:
            max_residual, argmax_cell = 0.0, None
        boundary_max = float(np.max(worst[boundary])) if np.any(boundary) else 0.0
        return cls(max_residual, argmax_cell, per_equation, boundary_max, tol)

    def to_json(self)->dict:
        out = {
            "max_residual" : self.max_residual,
            "argmax_cell" : None if self.argmax_cell is None else list(self.argmax_cell),
            "per_equation" : dict(self.per_equation),
            "boundary_max_residual" : self.boundary_max_residual,
            "tol" : self.tol,
            "passed" : self.passed,
        }
        if self.extra:
            out["extra"] = dict(self.extra)
        return out

@dataclass
class NormalityReport():
    """ The three conditions for (u, v) to be normal coordinates """
    nonsingular : bool
    characteristic : bool
    unit_speed : bool
    max_contact : float
    max_speed_error : float
    singular_cells : int
    tol : float

    @property
    def passed(self)->bool:
        return self.nonsingular and self.characteristic and self.unit_speed

    def to_json(self)->dict:
        return {
            "passed" : self.passed,
            "nonsingular" : self.nonsingular,
            "characteristic" : self.characteristic,
            "unit_speed" : self.unit_speed,
            "max_contact" : self.max_contact,
            "max_speed_error" : self.max_speed_error,
            "singular_cells" : self.singular_cells,
            "tol" : self.tol,
        }
