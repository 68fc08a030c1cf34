"""Minimal surfaces from orthodisk pairs: extremal length, period
problems, height minimization, and mesh export.

The public surface is re-exported from the submodules; see the README
for the map of the pipeline.
"""

from .polygon import Cycle, CycleComponent, ConformalPolygon, quad_modulus
from .scmap import (
    Developed,
    DevelopTarget,
    FitResult,
    OrthodiskSpec,
    develop,
    edge_length,
    period_integral,
    solve_parameter_problem,
)
from .config import (
    BoxWalls,
    Configuration,
    CoordinateCycles,
    CycleSystem,
    GeometricCoordinates,
    ObstructedConfigurationError,
    VertexSpec,
    build_cycle_system,
    build_vertex_sequence,
    coordinate_cycles,
    dh11_color_cycles,
    domain_targets,
    validate_coordinates,
)

__version__ = "0.1.0"

__all__ = [
    "Cycle",
    "CycleComponent",
    "ConformalPolygon",
    "quad_modulus",
    "Developed",
    "DevelopTarget",
    "FitResult",
    "OrthodiskSpec",
    "develop",
    "edge_length",
    "period_integral",
    "solve_parameter_problem",
    "BoxWalls",
    "Configuration",
    "CoordinateCycles",
    "CycleSystem",
    "GeometricCoordinates",
    "ObstructedConfigurationError",
    "VertexSpec",
    "build_cycle_system",
    "build_vertex_sequence",
    "coordinate_cycles",
    "dh11_color_cycles",
    "domain_targets",
    "validate_coordinates",
    "__version__",
]
