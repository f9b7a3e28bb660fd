"""plotfig: regenerate trajectory panels and log-log sweep grids from the
simulator's CSV outputs."""

__version__ = "0.1.0"

from .figures import FigureSpec, PanelSpec, plot_relaxation_grid, plot_sweep_grid, plot_trajectory
from .io import SchemaError, read_sweep, read_trajectory

__all__ = [
    "FigureSpec",
    "PanelSpec",
    "SchemaError",
    "plot_relaxation_grid",
    "plot_sweep_grid",
    "plot_trajectory",
    "read_sweep",
    "read_trajectory",
    "__version__",
]
