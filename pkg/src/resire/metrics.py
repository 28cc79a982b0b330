"""R-factor and Fourier shell correlation."""
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, UndefinedMetricError
from .fourier import fft3_centered, frequency_axis
from .grid import as_volume
from .projector import ProjectorConfig, forward_project_stack

__all__ = [
    "RFactorReport",
    "FscCurve",
    "rfactor_per_angle",
    "rfactor",
    "fsc",
]


@dataclass
class RFactorReport:
    per_angle: np.ndarray
    aggregate: float


def rfactor_per_angle(calculated, measured, strict=True):
    """Per-projection L1 relative error ``sum| |calc| - |b| | / sum|b|``.

    Magnitudes are compared on both sides, so the error vanishes exactly
    when the calculated projections reproduce ``b`` in absolute value. For
    nonnegative ``b`` this is ``sum| |calc| - b |``, and for nonnegative
    calculated projections it is the usual ``sum|calc - b| / sum|b|``.
    Negative ringing in noiseless Fourier-slice data therefore does not
    count against the volume that generated it.

    With ``strict=False`` an all-zero measured projection yields ``nan``
    instead of raising :class:`UndefinedMetricError`.
    """
    calculated = np.asarray(calculated, dtype=np.float64)
    measured = np.asarray(measured, dtype=np.float64)
    if calculated.shape != measured.shape:
        raise InvalidArgumentError(
            f"calculated {calculated.shape} and measured {measured.shape} shapes differ"
        )
    axes = tuple(range(1, measured.ndim))
    num = np.abs(np.abs(calculated) - np.abs(measured)).sum(axis=axes)
    den = np.abs(measured).sum(axis=axes)
    empty = den == 0
    if strict and np.any(empty):
        idx = np.flatnonzero(empty).tolist()
        raise UndefinedMetricError(f"measured projection(s) {idx} are identically zero")
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(empty, np.nan, num / np.where(empty, 1.0, den))


def rfactor(stack, v, cfg=None):
    """R-factor of volume ``v`` against a measured :class:`ProjectionStack`."""
    v = as_volume(v)
    stack.check_dims(v.shape)
    calc = forward_project_stack(v, stack.angles, cfg or ProjectorConfig())
    per_angle = rfactor_per_angle(calc, stack.projections)
    return RFactorReport(per_angle=per_angle, aggregate=float(per_angle.mean()))


@dataclass
class FscCurve:
    """Shell centers (cycles/pixel), correlations and voxel counts."""

    freq: np.ndarray
    fsc: np.ndarray
    count: np.ndarray

    def __len__(self):
        return len(self.freq)

    @property
    def nonempty(self):
        return self.count > 0


def fsc(a, b, shell_width=None):
    """Fourier shell correlation between two volumes of equal shape.

    Shells are ``|k|`` rounded to multiples of ``shell_width`` (default
    ``1 / N`` with ``N`` the largest axis), reported from the first shell
    past DC up to 0.5 cycles/pixel. Uses the real part of the cross
    spectrum. Empty shells report correlation 0 and count 0.
    """
    a = as_volume(a)
    b = as_volume(b)
    if a.shape != b.shape:
        raise InvalidArgumentError(f"volume shapes differ: {a.shape} vs {b.shape}")
    if shell_width is None:
        shell_width = 1.0 / max(a.shape)
    if not shell_width > 0:
        raise InvalidArgumentError(f"shell width must be positive, got {shell_width}")

    fa = fft3_centered(a)
    fb = fft3_centered(b)
    kx, ky, kz = (frequency_axis(n) for n in a.shape)
    radius = np.sqrt(kx[:, None, None] ** 2 + ky[None, :, None] ** 2 + kz[None, None, :] ** 2)
    shell = np.rint(radius / shell_width).astype(np.intp).ravel()
    n_shells = int(np.floor(0.5 / shell_width + 1e-9))

    keep = shell <= n_shells
    shell = shell[keep]
    fa = fa.ravel()[keep]
    fb = fb.ravel()[keep]
    size = n_shells + 1
    cross = np.bincount(shell, weights=(fa * np.conj(fb)).real, minlength=size)
    pa = np.bincount(shell, weights=np.abs(fa) ** 2, minlength=size)
    pb = np.bincount(shell, weights=np.abs(fb) ** 2, minlength=size)
    count = np.bincount(shell, minlength=size)

    denom = np.sqrt(pa * pb)
    with np.errstate(invalid="ignore", divide="ignore"):
        corr = np.where(denom > 0, cross / np.where(denom > 0, denom, 1.0), 0.0)
    corr = np.clip(corr, -1.0, 1.0)
    sl = slice(1, size)
    return FscCurve(
        freq=np.arange(1, size) * shell_width,
        fsc=corr[sl],
        count=count[sl],
    )
