"""Forward and back projection operators.

``forward_project``
    Fourier-slice projector: zero-pad, 3D FFT, trilinear central-slice
    sampling, inverse 2D FFT, crop.
``back_project``
    Real-space gather: every voxel ``(u, v, w)`` reads the residual at the
    detector point given by :func:`resire.geometry.slice_map`, with bilinear
    interpolation.
``forward_project_real``
    Scatter with the very same bilinear weights, hence the exact matrix
    transpose of ``back_project``.

Volume and detector share their in-plane sampling, so the detector is
``(Nx, Ny)`` with its origin at ``(Nx // 2, Ny // 2)``.

The solver pairs ``forward_project`` with ``back_project``; those two are
*not* adjoint to each other, which is intended.
"""
from dataclasses import dataclass

import numpy as np

from ._kernels import affine_gather, affine_scatter
from .errors import InvalidArgumentError
from .fourier import extract_central_slice, fft3_centered, ifft2_centered
from .geometry import rotation_from_euler, slice_map
from .grid import (
    DEFAULT_OVERSAMPLING,
    as_tilt_series,
    as_volume,
    centered_coords,
    crop_center,
    pad_to_oversampled,
)

__all__ = [
    "ProjectorConfig",
    "forward_project",
    "forward_project_stack",
    "FourierProjector",
    "back_project",
    "back_project_add",
    "forward_project_real",
]


@dataclass(frozen=True)
class ProjectorConfig:
    oversampling_ratio: float = DEFAULT_OVERSAMPLING
    volume_dims: tuple = None

    def __post_init__(self):
        if not 1.0 <= self.oversampling_ratio <= 8.0:
            raise InvalidArgumentError(
                f"oversampling ratio must lie in [1, 8], got {self.oversampling_ratio}"
            )
        if self.volume_dims is not None:
            dims = tuple(int(d) for d in self.volume_dims)
            if len(dims) != 3 or min(dims) < 1:
                raise InvalidArgumentError(f"invalid volume dims {self.volume_dims}")
            object.__setattr__(self, "volume_dims", dims)

    def check(self, v):
        if self.volume_dims is not None and tuple(v.shape) != self.volume_dims:
            raise InvalidArgumentError(
                f"volume shape {v.shape} does not match configured dims {self.volume_dims}"
            )


class FourierProjector:
    """Fourier-slice projections of one volume at many angles.

    The padded 3D spectrum is computed once at construction, so projecting
    a whole tilt series costs a single 3D FFT.
    """

    def __init__(self, v, cfg=None):
        cfg = cfg or ProjectorConfig()
        v = as_volume(v)
        cfg.check(v)
        self.dims = v.shape
        self.spectrum = fft3_centered(pad_to_oversampled(v, cfg.oversampling_ratio))

    def project(self, e):
        s = extract_central_slice(self.spectrum, rotation_from_euler(e))
        return crop_center(ifft2_centered(s), self.dims[:2])


def forward_project(v, e, cfg=None):
    """Projection of ``v`` at Euler triple ``e`` through the Fourier slice theorem."""
    return FourierProjector(v, cfg).project(e)


def forward_project_stack(v, angles, cfg=None):
    """Fourier-slice projections at every angle of a tilt series, ``(N, Nx, Ny)``."""
    fp = FourierProjector(v, cfg)
    return np.stack([fp.project(e) for e in as_tilt_series(angles)])


def _check_dims(dims):
    dims = tuple(int(d) for d in dims)
    if len(dims) != 3 or min(dims) < 1:
        raise InvalidArgumentError(f"invalid volume dims {dims}")
    return dims


def _check_image(p, dims):
    p = as_volume(p, ndim=2, name="projection")
    if p.shape != tuple(dims[:2]):
        raise InvalidArgumentError(
            f"projection shape {p.shape} does not match volume (Nx, Ny) = {tuple(dims[:2])}"
        )
    return p


def _affine(e):
    amap = slice_map(rotation_from_euler(e))
    return np.ascontiguousarray(amap.linear), np.ascontiguousarray(amap.drift)


def back_project_add(residual, e, out):
    """Accumulate the back projection of ``residual`` into volume ``out`` in place."""
    linear, drift = _affine(e)
    affine_gather(np.ascontiguousarray(residual, dtype=np.float64), linear, drift, out.shape[2], out)
    return out


def back_project(residual, e, dims):
    """Distribute a 2D image into a volume of shape ``dims`` along tilt ``e``.

    Each voxel ``(u, v, w)`` takes the bilinear sample of ``residual`` at the
    detector point of its affine slice map; points off the detector, i.e.
    outside ``[0, N - 1]`` on either axis, give zero.
    """
    dims = _check_dims(dims)
    residual = _check_image(residual, dims)
    return back_project_add(residual, e, np.zeros(dims))


def forward_project_real(v, e):
    """Real-space projection by bilinear splatting.

    Uses exactly the weights of :func:`back_project`, so the two are matrix
    transposes of one another.
    """
    v = as_volume(v)
    linear, drift = _affine(e)
    out = np.zeros(v.shape[:2])
    affine_scatter(np.ascontiguousarray(v), linear, drift, out)
    return out
