"""Centered discrete Fourier transforms and central-slice extraction.

Normalization: forward transforms are unnormalized, inverse transforms carry
``1 / N``. The zero frequency sits at index ``N // 2`` on every axis, so the
centered coefficient of index ``j`` corresponds to ``(j - N // 2) / N``
cycles per sample. Centering is done with index shifts only.
"""
import numpy as np
import scipy.fft

from ._kernels import plane_sample

__all__ = [
    "fft3_centered",
    "ifft3_centered",
    "fft2_centered",
    "ifft2_centered",
    "frequency_axis",
    "extract_central_slice",
]


def _fftn_centered(a):
    return scipy.fft.fftshift(scipy.fft.fftn(scipy.fft.ifftshift(a)))


def _ifftn_centered(s):
    return scipy.fft.fftshift(scipy.fft.ifftn(scipy.fft.ifftshift(s)))


def fft3_centered(v):
    """Forward 3D DFT of a volume with origin and zero frequency centered."""
    return _fftn_centered(np.asarray(v))


def ifft3_centered(s):
    return _ifftn_centered(np.asarray(s))


def fft2_centered(p):
    return _fftn_centered(np.asarray(p))


def ifft2_centered(s):
    """Real part of the centered inverse 2D DFT.

    The imaginary residue, nonzero only through slice interpolation error,
    is discarded.
    """
    return _ifftn_centered(np.asarray(s)).real


def frequency_axis(n):
    """Centered frequencies of an ``n``-point axis in cycles per sample."""
    return (np.arange(n) - n // 2) / n


def extract_central_slice(s, r, out_shape=None):
    """Sample a centered 3D spectrum on the plane through the origin set by ``r``.

    Output pixel ``(i, j)`` with centered frequencies ``(kx, ky)`` reads the
    spectrum at ``kx * r[:, 0] + ky * r[:, 1]`` by trilinear interpolation;
    frequencies beyond the grid are zero.

    Parameters
    ----------
    s : complex ndarray, shape (Mx, My, Mz)
        Centered spectrum, e.g. from :func:`fft3_centered`.
    r : ndarray, shape (3, 3)
        Rotation matrix of the tilt.
    out_shape : tuple, optional
        Shape of the 2D slice; defaults to ``(Mx, My)``.
    """
    s = np.ascontiguousarray(s, dtype=np.complex128)
    if out_shape is None:
        out_shape = s.shape[:2]
    r = np.asarray(r, dtype=np.float64)
    out = np.empty(tuple(out_shape), dtype=np.complex128)
    plane_sample(s, np.ascontiguousarray(r[:, 0]), np.ascontiguousarray(r[:, 1]), out)
    return out
