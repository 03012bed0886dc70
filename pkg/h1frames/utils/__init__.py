"""
Helpers with no geometry of their own: numerical kernels, reports,
configuration and the exception hierarchy.
"""
import numpy as np

def uniform_step(grid : np.ndarray, rtol : float = 1e-9)->float:
    """
    Step of a uniform, strictly increasing grid. Raises NonUniformGrid
    when consecutive spacings differ by more than `rtol` of the mean.
    """
    from .exceptions import NonUniformGrid
    grid = np.asarray(grid, dtype=float)
    if grid.size < 2:
        raise NonUniformGrid("A grid needs at least two points")
    steps = np.diff(grid)
    mean = float(np.mean(steps))
    if mean <= 0 or np.any(steps <= 0):
        raise NonUniformGrid("Grid must be strictly increasing")
    if np.max(np.abs(steps - mean)) > rtol*max(abs(mean), 1.0):
        raise NonUniformGrid(
            f"Grid spacing varies by {np.max(np.abs(steps - mean)):.3e}"
        )
    return mean
