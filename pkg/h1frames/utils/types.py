from typing import Union, Any, Callable
from pathlib import Path

import numpy as np

PathLike = Union[str, Path]

# (..., 3) arrays of points or vector components
PointArray = np.ndarray[Any, np.dtype[np.float64]]
VectorArray = np.ndarray[Any, np.dtype[np.float64]]
# (..., 4, 4) arrays of PSH(1) matrices
FrameMatrix = np.ndarray[Any, np.dtype[np.float64]]
# (nu, nv) scalar grids, axis 0 along u
Grid = np.ndarray[Any, np.dtype[np.float64]]

RHS = Callable[[float, np.ndarray], np.ndarray]
