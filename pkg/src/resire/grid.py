"""Volume and projection containers, centering and oversampling padding.

Volumes are plain ``float64`` arrays indexed ``[x, y, z]`` with shape
``(Nx, Ny, Nz)``; ``z`` is the beam direction at zero tilt. Projections are
``(Nx, Ny)`` arrays. The coordinate origin of an axis of length ``N`` sits
at index ``N // 2`` (the FFT center), for volumes, projections and their
spectra alike.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError

__all__ = [
    "DEFAULT_OVERSAMPLING",
    "ProjectionStack",
    "as_volume",
    "as_tilt_series",
    "center_index",
    "centered_coords",
    "oversampled_shape",
    "pad_to_oversampled",
    "pad_to_shape",
    "crop_center",
]

DEFAULT_OVERSAMPLING = 2.0


def as_volume(v, ndim=3, name="volume"):
    """Validate and convert to a finite float64 array of the given rank."""
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim != ndim:
        raise InvalidArgumentError(f"{name} must be {ndim}D, got shape {arr.shape}")
    if min(arr.shape) < 1:
        raise InvalidArgumentError(f"{name} has an empty axis: {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(f"{name} contains non-finite values")
    return arr


def as_tilt_series(angles):
    """Return an ``(N, 3)`` float array of ZYX Euler triples in degrees."""
    arr = np.asarray(angles, dtype=np.float64)
    if arr.shape == (3,):
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != 3 or len(arr) < 1:
        raise InvalidArgumentError(f"tilt series must have shape (N, 3), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError("tilt series contains non-finite angles")
    return arr.copy()


@dataclass
class ProjectionStack:
    """Measured projections ``(N, Nx, Ny)`` with their Euler angles ``(N, 3)``."""

    projections: np.ndarray
    angles: np.ndarray

    def __post_init__(self):
        self.projections = as_volume(self.projections, ndim=3, name="projection stack")
        self.angles = as_tilt_series(self.angles)
        if len(self.projections) != len(self.angles):
            raise InvalidArgumentError(
                f"stack holds {len(self.projections)} projections but "
                f"{len(self.angles)} angles"
            )

    def __len__(self):
        return len(self.angles)

    @property
    def image_shape(self):
        return self.projections.shape[1:]

    def check_dims(self, dims):
        if tuple(self.image_shape) != tuple(dims[:2]):
            raise InvalidArgumentError(
                f"projection shape {tuple(self.image_shape)} does not match "
                f"volume (Nx, Ny) = {tuple(dims[:2])}"
            )

    def is_single_axis(self):
        """True when every tilt is a pure rotation about y (phi = psi = 0)."""
        return bool(np.all(self.angles[:, 0] == 0) and np.all(self.angles[:, 2] == 0))


def center_index(n):
    return n // 2


def centered_coords(n):
    """Integer coordinates of an axis of length ``n`` relative to its origin."""
    return np.arange(n, dtype=np.float64) - center_index(n)


def oversampled_shape(shape, ratio):
    """``ceil(ratio * N)`` per axis, rounded up to the next even number."""
    if not ratio >= 1:
        raise InvalidArgumentError(f"oversampling ratio must be >= 1, got {ratio}")
    out = []
    for n in shape:
        m = math.ceil(ratio * n - 1e-9)
        out.append(m + (m % 2))
    return tuple(out)


def pad_to_shape(v, shape):
    """Zero-pad ``v`` to ``shape`` keeping the origin index aligned."""
    v = np.asarray(v)
    if any(m < n for m, n in zip(shape, v.shape)):
        raise InvalidArgumentError(f"cannot pad {v.shape} to smaller shape {shape}")
    out = np.zeros(shape, dtype=v.dtype)
    starts = [center_index(m) - center_index(n) for m, n in zip(shape, v.shape)]
    out[tuple(slice(s, s + n) for s, n in zip(starts, v.shape))] = v
    return out


def pad_to_oversampled(v, ratio=DEFAULT_OVERSAMPLING):
    """Zero-pad a volume by ``ratio`` per axis (even sizes), origin preserved.

    >>> pad_to_oversampled(np.ones((4, 4, 4)), 2).shape
    (8, 8, 8)
    """
    v = as_volume(v, ndim=np.ndim(v))
    return pad_to_shape(v, oversampled_shape(v.shape, ratio))


def crop_center(v, dims):
    """Centered crop honoring the ``N // 2`` origin; inverse of the padding."""
    v = np.asarray(v)
    dims = tuple(int(d) for d in dims)
    if len(dims) != v.ndim:
        raise InvalidArgumentError(f"crop dims {dims} do not match rank of {v.shape}")
    if any(d > n or d < 1 for d, n in zip(dims, v.shape)):
        raise InvalidArgumentError(f"cannot crop {v.shape} to {dims}")
    starts = [center_index(n) - center_index(d) for n, d in zip(v.shape, dims)]
    return v[tuple(slice(s, s + d) for s, d in zip(starts, dims))].copy()
