import numpy as np
import pytest

from resire.fourier import (
    extract_central_slice,
    fft2_centered,
    fft3_centered,
    ifft2_centered,
    ifft3_centered,
)
from resire.geometry import rotation_from_euler
from resire.grid import crop_center, pad_to_oversampled


def test_zero_volume():
    np.testing.assert_array_equal(fft3_centered(np.zeros((4, 5, 6))), 0)


@pytest.mark.parametrize("shape", [(8, 8, 8), (7, 6, 5)])
def test_centered_delta_is_flat(shape):
    v = np.zeros(shape)
    v[tuple(n // 2 for n in shape)] = 1.0
    np.testing.assert_allclose(fft3_centered(v), 1.0, atol=1e-15)


def test_dc_is_sum(rng):
    v = rng.random((6, 7, 8))
    s = fft3_centered(v)
    assert s[3, 3, 4] == pytest.approx(v.sum(), rel=1e-14)


def test_round_trip_and_parseval(rng):
    v = rng.standard_normal((8, 8, 8))
    s = fft3_centered(v)
    back = ifft3_centered(s)
    assert np.linalg.norm(back - v) / np.linalg.norm(v) < 1e-12
    assert np.sum(np.abs(s) ** 2) / v.size == pytest.approx(np.sum(v**2), rel=1e-10)


def test_conjugate_symmetry(rng):
    v = rng.random((7, 7, 7))
    s = fft3_centered(v)
    flipped = s[::-1, ::-1, ::-1]
    np.testing.assert_allclose(s, np.conj(flipped), rtol=1e-10, atol=1e-12)


def test_ifft2_flat_gives_delta():
    p = ifft2_centered(np.ones((6, 6)))
    expected = np.zeros((6, 6))
    expected[3, 3] = 1.0
    np.testing.assert_allclose(p, expected, atol=1e-15)


def test_2d_round_trip(rng):
    p = rng.random((9, 12))
    np.testing.assert_allclose(ifft2_centered(fft2_centered(p)), p, rtol=1e-12, atol=1e-14)


def naive_slice(s, r, out_shape):
    """Trilinear plane sampling written out with explicit neighbor loops."""
    out = np.zeros(out_shape, dtype=complex)
    m = s.shape
    for i in range(out_shape[0]):
        for j in range(out_shape[1]):
            k = (i - out_shape[0] // 2) / out_shape[0] * r[:, 0] + (j - out_shape[1] // 2) / out_shape[1] * r[:, 1]
            p = k * np.array(m) + np.array(m) // 2
            if np.any(p < 0) or np.any(p > np.array(m) - 1):
                continue
            base = np.floor(p).astype(int)
            for corner in np.ndindex(2, 2, 2):
                idx = base + corner
                if np.any(idx > np.array(m) - 1):
                    continue
                w = np.prod(1 - np.abs(p - idx))
                if w > 0:
                    out[i, j] += w * s[tuple(idx)]
    return out


@pytest.mark.parametrize("angles", [(0, 20, 0), (33, -61, 12), (0, 0, 90)])
def test_slice_against_naive_trilinear(rng, angles):
    s = fft3_centered(rng.random((8, 10, 6)))
    r = rotation_from_euler(angles)
    for out_shape in [(8, 10), (5, 7)]:
        np.testing.assert_allclose(
            extract_central_slice(s, r, out_shape), naive_slice(s, r, out_shape), atol=1e-12 * np.abs(s).max()
        )


def test_identity_slice_is_kz_plane(rng):
    s = fft3_centered(rng.random((8, 10, 12)))
    np.testing.assert_array_equal(extract_central_slice(s, np.eye(3)), s[:, :, 6])


def test_90_degree_y_tilt_is_grid_aligned(rng):
    m = 16
    s = fft3_centered(rng.random((m, m, m)))
    out = extract_central_slice(s, rotation_from_euler((0, 90, 0)))
    expected = np.zeros((m, m), dtype=complex)
    for i in range(1, m):
        expected[i, :] = s[m // 2, :, m - i]
    np.testing.assert_allclose(out, expected, atol=1e-10 * np.abs(s).max())


@pytest.mark.parametrize("angles", [(0, 35, 0), (20, -50, 70), (45, 45, 45)])
def test_spherically_symmetric_slice_is_orientation_free(angles):
    # trilinear error falls as 1/ratio**2; 8x oversampling keeps it under 1e-3
    n = 20
    g = np.arange(n) - n // 2
    r2 = g[:, None, None] ** 2 + g[None, :, None] ** 2 + g[None, None, :] ** 2
    blob = np.exp(-r2 / (2 * 1.5**2))
    s = fft3_centered(pad_to_oversampled(blob, 8))
    ref = extract_central_slice(s, np.eye(3))
    out = extract_central_slice(s, rotation_from_euler(angles))
    assert np.linalg.norm(out - ref) / np.linalg.norm(ref) < 1e-3


def test_zero_tilt_slice_theorem(rng):
    v = rng.random((10, 12, 9))
    s = fft3_centered(pad_to_oversampled(v, 2))
    p = crop_center(ifft2_centered(extract_central_slice(s, np.eye(3))), v.shape[:2])
    np.testing.assert_allclose(p, v.sum(axis=2), atol=1e-12 * v.sum())
