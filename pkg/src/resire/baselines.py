"""SIRT and filtered back projection for single-tilt-axis stacks.

Both reuse the real-space projector pair from :mod:`resire.projector`
(bilinear scatter and its transpose), restricted to tilts about ``y``.
"""
import time
from dataclasses import dataclass

import numpy as np
import scipy.fft

from .errors import InvalidArgumentError, UnsupportedConfigurationError
from .grid import ProjectionStack
from .metrics import rfactor_per_angle
from .projector import back_project_add, forward_project_real
from .solver import SolveTrace

__all__ = [
    "SirtConfig",
    "FbpConfig",
    "FBP_FILTERS",
    "sirt_solve",
    "ramp_filter",
    "filter_projections",
    "fbp_solve",
]

ROW_WEIGHT_FLOOR = 1e-8
FBP_FILTERS = ("ram-lak", "hamming-windowed-ram-lak")


def _require_single_axis(stack, what):
    if not isinstance(stack, ProjectionStack):
        raise InvalidArgumentError("expected a ProjectionStack")
    if not stack.is_single_axis():
        raise UnsupportedConfigurationError(
            f"{what} supports a single tilt axis only (phi = psi = 0 for every tilt)"
        )


def _dims(stack, dims):
    dims = tuple(int(d) for d in dims)
    if len(dims) != 3 or min(dims) < 1:
        raise InvalidArgumentError(f"invalid volume dims {dims}")
    stack.check_dims(dims)
    return dims


@dataclass(frozen=True)
class SirtConfig:
    iterations: int = 400
    relaxation: float = 1.0

    def __post_init__(self):
        if int(self.iterations) != self.iterations or self.iterations < 1:
            raise InvalidArgumentError(f"iterations must be an integer >= 1, got {self.iterations}")
        if not 0 < self.relaxation <= 1:
            raise InvalidArgumentError(f"relaxation must lie in (0, 1], got {self.relaxation}")


class SirtOperator:
    """Row- and column-normalized real-space projector for one stack."""

    def __init__(self, stack, dims):
        self.dims = dims
        self.angles = stack.angles
        self.row_sums = self.project(np.ones(dims))
        self.col_sums = self.back_project(np.ones((len(self.angles),) + dims[:2]))

    def project(self, v):
        return np.stack([forward_project_real(v, e) for e in self.angles])

    def back_project(self, images):
        out = np.zeros(self.dims)
        for e, p in zip(self.angles, images):
            back_project_add(p, e, out)
        return out

    def normalize_rows(self, residuals):
        """Divide each ray residual by its weight sum; rays with no weight are skipped."""
        covered = self.row_sums >= ROW_WEIGHT_FLOOR
        return np.where(covered, residuals / np.where(covered, self.row_sums, 1.0), 0.0)

    def back_project_normalized(self, residuals):
        out = self.back_project(self.normalize_rows(residuals))
        seen = self.col_sums > 0
        return np.where(seen, out / np.where(seen, self.col_sums, 1.0), 0.0)


def sirt_solve(stack, dims, cfg=None):
    """SIRT with row-normalized residuals, averaged over the rays through each voxel.

    The trace records SSE and R-factor under the real-space projector the
    iteration itself uses.
    """
    cfg = cfg or SirtConfig()
    _require_single_axis(stack, "SIRT")
    dims = _dims(stack, dims)
    op = SirtOperator(stack, dims)

    volume = np.zeros(dims)
    trace = SolveTrace()
    for _ in range(cfg.iterations):
        t0 = time.perf_counter()
        calc = op.project(volume)
        res = calc - stack.projections
        err = 0.5 * float(np.sum(res * res))
        rf = float(np.mean(rfactor_per_angle(calc, stack.projections, strict=False)))
        volume = volume - cfg.relaxation * op.back_project_normalized(res)
        trace.append(err, rf, time.perf_counter() - t0)
    return volume, trace


@dataclass(frozen=True)
class FbpConfig:
    filter: str = "ram-lak"

    def __post_init__(self):
        if self.filter not in FBP_FILTERS:
            raise InvalidArgumentError(f"unknown FBP filter {self.filter!r}; choose from {FBP_FILTERS}")


def ramp_filter(n, kind="ram-lak"):
    """Frequency response of the ramp filter on an ``n``-point FFT grid.

    Built from the band-limited spatial Ram-Lak kernel so the DC term is
    not forced to zero by sampling; scaled as ``2|k|``.
    """
    if kind not in FBP_FILTERS:
        raise InvalidArgumentError(f"unknown FBP filter {kind!r}")
    idx = np.concatenate([np.arange(0, n // 2 + 1), np.arange(-(n - n // 2 - 1), 0)])
    kernel = np.zeros(n)
    kernel[0] = 0.25
    odd = idx % 2 == 1
    kernel[odd] = -1.0 / (np.pi * idx[odd]) ** 2
    response = 2.0 * scipy.fft.fft(kernel).real
    if kind == "hamming-windowed-ram-lak":
        response *= 0.54 + 0.46 * np.cos(2.0 * np.pi * scipy.fft.fftfreq(n))
    return response


def filter_projections(projections, kind="ram-lak"):
    """Ramp-filter every detector row along ``x`` (axis 1 of an ``(N, Nx, Ny)`` stack)."""
    projections = np.asarray(projections, dtype=np.float64)
    nx = projections.shape[1]
    n = max(64, int(2 ** np.ceil(np.log2(2 * nx))))
    spec = scipy.fft.fft(projections, n=n, axis=1)
    spec *= ramp_filter(n, kind)[None, :, None]
    return scipy.fft.ifft(spec, axis=1).real[:, :nx, :]


def fbp_solve(stack, dims, cfg=None):
    """Filtered back projection of a single-axis (``y``) tilt series.

    Every ``y``-slice is an independent 2D parallel-beam problem; the
    result is scaled by ``pi / (2 N)`` for ``N`` projections.
    """
    cfg = cfg or FbpConfig()
    _require_single_axis(stack, "FBP")
    dims = _dims(stack, dims)
    filtered = filter_projections(stack.projections, cfg.filter)
    out = np.zeros(dims)
    for e, p in zip(stack.angles, filtered):
        back_project_add(p, e, out)
    return out * (np.pi / (2 * len(stack)))
