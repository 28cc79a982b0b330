import numpy as np
import pytest

from resire.baselines import (
    FbpConfig,
    SirtConfig,
    SirtOperator,
    fbp_solve,
    filter_projections,
    ramp_filter,
    sirt_solve,
)
from resire.errors import InvalidArgumentError, UnsupportedConfigurationError
from resire.grid import ProjectionStack
from resire.metrics import rfactor
from resire.phantom import simulate_stack, tilt_range
from resire.solver import SolverConfig, resire_solve


@pytest.fixture(scope="module")
def ball_stack(ball32):
    return simulate_stack(ball32, tilt_range(-70, 70, 3.5))


def disk_sinogram(n, radius, thetas, ny=2):
    """Exact line integrals of a unit disk in the x-z plane, constant along y."""
    x = np.arange(n) - n // 2
    chord = 2.0 * np.sqrt(np.clip(radius**2 - x.astype(float) ** 2, 0.0, None))
    proj = np.repeat(chord[:, None], ny, axis=1)
    angles = np.column_stack([np.zeros(len(thetas)), thetas, np.zeros(len(thetas))])
    return ProjectionStack(np.repeat(proj[None], len(thetas), axis=0), angles)


def test_ramp_filter_is_even_and_zero_free_at_dc():
    r = ramp_filter(128)
    assert r[0] > 0
    np.testing.assert_allclose(r[1:64], r[:64:-1], atol=1e-14)
    k = np.fft.fftfreq(128)
    mid = (np.abs(k) > 0.05) & (np.abs(k) < 0.4)
    np.testing.assert_allclose(r[mid], 2 * np.abs(k[mid]), rtol=0.05)


def test_hamming_window_attenuates_high_frequencies():
    plain = ramp_filter(64)
    windowed = ramp_filter(64, "hamming-windowed-ram-lak")
    assert windowed[32] < 0.1 * plain[32]
    assert windowed[0] == pytest.approx(plain[0])


def test_unknown_filter_rejected():
    with pytest.raises(InvalidArgumentError):
        FbpConfig("shepp-logan")
    with pytest.raises(InvalidArgumentError):
        ramp_filter(16, "cosine")


def test_fbp_dense_angle_disk():
    n, radius = 64, 20
    stack = disk_sinogram(n, radius, np.arange(0.0, 180.0, 1.0))
    v = fbp_solve(stack, (n, 2, n))
    x = np.arange(n) - n // 2
    r = np.sqrt(x[:, None] ** 2 + x[None, :] ** 2)
    disk = (r <= radius).astype(float)
    # field of view is the inscribed circle; skip the band around the edge
    mask = (r <= n // 2 - 1) & (np.abs(r - radius) > 2)
    slice_ = v[:, 0, :]
    err = np.linalg.norm((slice_ - disk)[mask]) / np.linalg.norm(disk[mask])
    assert err < 0.05


def test_fbp_is_linear(rng):
    angles = tilt_range(-60, 60, 15)
    a = ProjectionStack(rng.standard_normal((len(angles), 16, 8)), angles)
    b = ProjectionStack(rng.standard_normal((len(angles), 16, 8)), angles)
    combo = ProjectionStack(2.0 * a.projections - 3.0 * b.projections, angles)
    dims = (16, 8, 12)
    lhs = fbp_solve(combo, dims)
    rhs = 2.0 * fbp_solve(a, dims) - 3.0 * fbp_solve(b, dims)
    np.testing.assert_allclose(lhs, rhs, atol=1e-10)


def test_filter_projections_preserves_shape(rng):
    p = rng.standard_normal((3, 20, 5))
    assert filter_projections(p).shape == p.shape


@pytest.mark.parametrize("solve", [fbp_solve, lambda s, d: sirt_solve(s, d, SirtConfig(3))[0]])
def test_zero_stack_gives_zero_volume(solve):
    angles = tilt_range(-30, 30, 10)
    stack = ProjectionStack(np.zeros((len(angles), 12, 10)), angles)
    np.testing.assert_array_equal(solve(stack, (12, 10, 8)), 0)


@pytest.mark.parametrize("solve", [fbp_solve, sirt_solve])
def test_multi_axis_stack_rejected(solve):
    stack = ProjectionStack(np.zeros((2, 8, 8)), [(0, 10, 0), (5, 20, 0)])
    with pytest.raises(UnsupportedConfigurationError):
        solve(stack, (8, 8, 8))


def test_sirt_row_normalization_of_ones():
    angles = tilt_range(-60, 60, 20)
    stack = ProjectionStack(np.zeros((len(angles), 12, 12)), angles)
    op = SirtOperator(stack, (12, 12, 12))
    normalized = op.normalize_rows(op.row_sums)
    covered = op.row_sums >= 1e-8
    np.testing.assert_allclose(normalized[covered], 1.0, rtol=1e-12)
    assert np.all(normalized[~covered] == 0)


def test_sirt_single_zero_tilt_converges_in_one_step():
    v_true = np.zeros((10, 8, 6))
    v_true[3:7, 2:6, :] = 2.0
    stack = simulate_stack(v_true, [(0, 0, 0)])
    v, _ = sirt_solve(stack, v_true.shape, SirtConfig(iterations=1))
    np.testing.assert_allclose(v, v_true, atol=1e-12)


def test_sirt_config_validation():
    with pytest.raises(InvalidArgumentError):
        SirtConfig(iterations=0)
    with pytest.raises(InvalidArgumentError):
        SirtConfig(relaxation=1.5)


def test_sirt_noiseless_ball(ball32, ball_stack):
    _, trace = sirt_solve(ball_stack, ball32.shape, SirtConfig(iterations=200))
    assert trace.rfactor_history[-1] < 0.06


def test_fbp_rfactor_above_resire_on_missing_wedge(ball32, ball_stack):
    resire, _ = resire_solve(ball_stack, ball32.shape, SolverConfig(iterations=100))
    fbp = fbp_solve(ball_stack, ball32.shape)
    assert rfactor(ball_stack, fbp).aggregate > rfactor(ball_stack, resire).aggregate
