"""Real-space iterative tomographic reconstruction.

A gradient-descent solver that forward projects through a Fourier slice
and back projects along an affine map in real space, together with SIRT
and FBP baselines, a vesicle phantom simulator, FSC and R-factor metrics,
MRC2014 I/O and a batch CLI.
"""
from .baselines import FbpConfig, SirtConfig, fbp_solve, sirt_solve
from .errors import (
    DivergenceError,
    FormatError,
    InvalidArgumentError,
    UndefinedMetricError,
    UnsupportedConfigurationError,
)
from .geometry import EulerTriple, rotation_from_euler, slice_map
from .grid import ProjectionStack
from .io import read_mrc, read_stack, read_tilt, write_mrc, write_stack, write_tilt
from .metrics import fsc, rfactor, rfactor_per_angle
from .phantom import NoiseSpec, PhantomSpec, Shell, load_preset, make_vesicle_phantom, simulate_stack, tilt_range
from .projector import ProjectorConfig, back_project, forward_project, forward_project_real
from .solver import SolverConfig, SolveTrace, gradient, resire_solve, sse

__version__ = "0.1.0"

__all__ = [
    "DivergenceError", "EulerTriple", "FbpConfig", "FormatError", "InvalidArgumentError",
    "NoiseSpec", "PhantomSpec", "ProjectionStack", "ProjectorConfig", "Shell", "SirtConfig",
    "SolveTrace", "SolverConfig", "UndefinedMetricError", "UnsupportedConfigurationError",
    "back_project", "fbp_solve", "forward_project", "forward_project_real", "fsc", "gradient",
    "load_preset", "make_vesicle_phantom", "read_mrc", "read_stack", "read_tilt", "resire_solve",
    "rfactor", "rfactor_per_angle", "rotation_from_euler", "simulate_stack", "sirt_solve",
    "slice_map", "sse", "tilt_range", "write_mrc", "write_stack", "write_tilt",
]
