"""Synthetic phantoms, tilt-series presets and measured-data simulation."""
from dataclasses import dataclass, field
from importlib import resources

import numpy as np
from scipy.ndimage import gaussian_filter

from .config import parse_floats, parse_kv
from .errors import FormatError, InvalidArgumentError
from .grid import ProjectionStack, as_tilt_series, centered_coords
from .projector import FourierProjector, ProjectorConfig

__all__ = [
    "SAFE_RADIUS_FRACTION",
    "Shell",
    "PhantomSpec",
    "NoiseSpec",
    "shell_indicator",
    "make_vesicle_phantom",
    "tilt_range",
    "noise_generator",
    "simulate_stack",
    "load_preset",
    "preset_names",
]

SAFE_RADIUS_FRACTION = 0.45


@dataclass(frozen=True)
class Shell:
    """Ellipsoidal shell; ``center`` is an offset in voxels from the grid origin.

    A thickness at least as large as the smallest radius gives a solid
    ellipsoid.
    """

    center: tuple
    radii: tuple
    thickness: float
    density: float

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        object.__setattr__(self, "radii", tuple(float(r) for r in self.radii))
        if len(self.center) != 3 or len(self.radii) != 3:
            raise InvalidArgumentError("shell center and radii need three components")
        if min(self.radii) <= 0 or self.thickness <= 0:
            raise InvalidArgumentError("shell radii and thickness must be positive")


@dataclass(frozen=True)
class PhantomSpec:
    dims: tuple
    shells: tuple = ()
    smoothing_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != 3 or min(dims) < 1:
            raise InvalidArgumentError(f"invalid phantom dims {self.dims}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "shells", tuple(self.shells))
        if self.smoothing_sigma < 0:
            raise InvalidArgumentError("smoothing sigma must be nonnegative")
        safe = SAFE_RADIUS_FRACTION * min(dims)
        for i, s in enumerate(self.shells):
            reach = float(np.linalg.norm(s.center)) + max(s.radii)
            if reach > safe:
                raise InvalidArgumentError(
                    f"shell {i} reaches {reach:.2f} voxels from the center, "
                    f"beyond the safe radius {safe:.2f}"
                )


@dataclass(frozen=True)
class NoiseSpec:
    sigma_fraction: float = 0.05
    seed: int = 0
    kind: str = field(default="gaussian")

    def __post_init__(self):
        if self.kind != "gaussian":
            raise InvalidArgumentError(f"unsupported noise kind {self.kind!r}")
        if not self.sigma_fraction >= 0:
            raise InvalidArgumentError("sigma_fraction must be nonnegative")


def shell_indicator(shell, dims):
    """Binary mask of one ellipsoidal shell on a grid of shape ``dims``."""
    u = centered_coords(dims[0])[:, None, None] - shell.center[0]
    v = centered_coords(dims[1])[None, :, None] - shell.center[1]
    w = centered_coords(dims[2])[None, None, :] - shell.center[2]
    rx, ry, rz = shell.radii
    outer = (u / rx) ** 2 + (v / ry) ** 2 + (w / rz) ** 2 <= 1.0
    inner_radii = [r - shell.thickness for r in shell.radii]
    if min(inner_radii) <= 0:
        return outer
    ix, iy, iz = inner_radii
    inner = (u / ix) ** 2 + (v / iy) ** 2 + (w / iz) ** 2 < 1.0
    return outer & ~inner


def make_vesicle_phantom(spec):
    """Sum of density-weighted shell masks, optionally Gaussian-smoothed."""
    out = np.zeros(spec.dims)
    for shell in spec.shells:
        out += shell.density * shell_indicator(shell, spec.dims)
    if spec.smoothing_sigma > 0:
        out = gaussian_filter(out, spec.smoothing_sigma, mode="constant")
    return out


def tilt_range(start_deg, end_deg, step_deg):
    """Single-axis tilt series ``(0, theta, 0)`` from ``start`` to ``end`` inclusive.

    >>> len(tilt_range(-70, 70, 3.5))
    41
    """
    if not step_deg > 0:
        raise InvalidArgumentError(f"tilt step must be positive, got {step_deg}")
    if end_deg < start_deg:
        raise InvalidArgumentError(f"tilt end {end_deg} is below start {start_deg}")
    count = int(np.floor((end_deg - start_deg) / step_deg + 1e-9)) + 1
    thetas = start_deg + step_deg * np.arange(count)
    return np.column_stack([np.zeros(count), thetas, np.zeros(count)])


def noise_generator(seed, index):
    """PCG64 stream for projection ``index``, spawned from ``SeedSequence(seed)``."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.PCG64(ss))


def simulate_stack(v, angles, noise=None, cfg=None):
    """Fourier-slice projections of ``v`` plus seeded Gaussian noise.

    Noise on projection ``i`` has standard deviation ``sigma_fraction``
    times the mean of the positive pixels of the noiseless projection and
    is drawn from :func:`noise_generator` ``(seed, i)``.
    """
    noise = noise or NoiseSpec(sigma_fraction=0.0)
    angles = as_tilt_series(angles)
    fp = FourierProjector(v, cfg or ProjectorConfig())
    projections = []
    for i, e in enumerate(angles):
        p = fp.project(e)
        if noise.sigma_fraction > 0:
            positive = p[p > 0]
            level = positive.mean() if positive.size else 0.0
            p = p + noise.sigma_fraction * level * noise_generator(noise.seed, i).standard_normal(p.shape)
        projections.append(p)
    return ProjectionStack(np.stack(projections), angles)


_PRESET_KEYS = {"dims", "smoothing_sigma", "seed", "noise_sigma_fraction", "noise_seed"}


def preset_names():
    return sorted(
        p.name[: -len(".cfg")]
        for p in resources.files("resire.presets").iterdir()
        if p.name.endswith(".cfg")
    )


def parse_preset(text, source="<preset>"):
    """Parse a phantom preset document into ``(PhantomSpec, NoiseSpec)``.

    Shell lines read ``shell_<i> = cx, cy, cz, rx, ry, rz, thickness, density``.
    """
    kv = parse_kv(text, allowed=lambda k: k in _PRESET_KEYS or k.startswith("shell_"), source=source)
    if "dims" not in kv:
        raise FormatError(f"{source}: missing 'dims'")
    shell_keys = sorted((k for k in kv if k.startswith("shell_")), key=lambda k: int(k[6:]))
    shells = []
    for key in shell_keys:
        vals = parse_floats(kv[key])
        if len(vals) != 8:
            raise FormatError(f"{source}: {key} needs 8 numbers, got {len(vals)}")
        shells.append(Shell(vals[0:3], vals[3:6], vals[6], vals[7]))
    phantom = PhantomSpec(
        dims=tuple(int(x) for x in parse_floats(kv["dims"])),
        shells=tuple(shells),
        smoothing_sigma=float(kv.get("smoothing_sigma", 0.0)),
        seed=int(kv.get("seed", 0)),
    )
    noise = NoiseSpec(
        sigma_fraction=float(kv.get("noise_sigma_fraction", 0.05)),
        seed=int(kv.get("noise_seed", 0)),
    )
    return phantom, noise


def load_preset(name):
    """Load a shipped preset (``vesicle64``, ``ball32``)."""
    if name not in preset_names():
        raise InvalidArgumentError(f"unknown preset {name!r}; available: {preset_names()}")
    text = resources.files("resire.presets").joinpath(f"{name}.cfg").read_text()
    return parse_preset(text, source=name)
