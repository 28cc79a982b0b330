import numpy as np
import pytest

from resire.errors import DivergenceError, FormatError, InvalidArgumentError
from resire.grid import ProjectionStack
from resire.io import solver_config_from_text, solver_config_to_text
from resire.phantom import simulate_stack, tilt_range
from resire.projector import back_project, forward_project, forward_project_real
from resire.solver import SolverConfig, gradient, resire_solve, sse, step_size

from conftest import smooth_ball


def stack_of(projections, angles):
    return ProjectionStack(np.asarray(projections, float), np.asarray(angles, float))


@pytest.fixture(scope="module")
def ball16_stack():
    v = smooth_ball(16, 5)
    return v, simulate_stack(v, tilt_range(-70, 70, 7))


def test_step_size_product_is_t():
    s = step_size(41, 64, 2.0)
    assert s.lipschitz == 41 * 64
    assert s.effective * s.lipschitz == 2.0


@pytest.mark.parametrize(
    "kwargs",
    [dict(iterations=0), dict(iterations=2.5), dict(step_t=0), dict(step_t=-1),
     dict(rfactor_target=0), dict(rfactor_target=1.5), dict(oversampling_ratio=0.5)],
)
def test_config_rejects_bad_values(kwargs):
    with pytest.raises(InvalidArgumentError):
        SolverConfig(**kwargs)


def test_sse_matches_naive_loop(rng):
    v = rng.standard_normal((6, 6, 5))
    angles = [(0, 20, 0), (10, -30, 5)]
    b = rng.standard_normal((2, 6, 6))
    stack = stack_of(b, angles)
    total = 0.0
    for e, bi in zip(angles, b):
        calc = forward_project(v, e)
        for i in range(6):
            for j in range(6):
                total += (calc[i, j] - bi[i, j]) ** 2
    assert sse(stack, v) == pytest.approx(0.5 * total, rel=1e-12)


def test_sse_zero_volume_is_half_data_norm(rng):
    b = rng.standard_normal((3, 8, 8))
    stack = stack_of(b, tilt_range(-10, 10, 10))
    assert sse(stack, np.zeros((8, 8, 8))) == pytest.approx(0.5 * np.sum(b**2), rel=1e-12)


def test_sse_vanishes_at_truth(ball16_stack):
    v, stack = ball16_stack
    assert sse(stack, v) < 1e-10 * np.sum(stack.projections**2)


def test_gradient_at_zero_tilt_is_z_broadcast(rng):
    v = rng.standard_normal((8, 7, 5))
    b = rng.standard_normal((1, 8, 7))
    g = gradient(stack_of(b, [(0, 0, 0)]), v)
    expected = np.broadcast_to((v.sum(axis=2) - b[0])[:, :, None], v.shape)
    np.testing.assert_allclose(g, expected, atol=1e-10)


def test_gradient_zero_for_consistent_data(ball16_stack):
    v, stack = ball16_stack
    assert np.max(np.abs(gradient(stack, v))) < 1e-9 * np.max(np.abs(stack.projections))


def test_exact_adjoint_gradient_matches_central_differences(rng):
    angles = [(0, -40, 0), (15, 10, -5), (0, 55, 20)]
    v = rng.standard_normal((8, 8, 8))
    b = [rng.standard_normal((8, 8)) for _ in angles]

    def objective(x):
        return 0.5 * sum(np.sum((forward_project_real(x, e) - bi) ** 2) for e, bi in zip(angles, b))

    grad = sum(back_project(forward_project_real(v, e) - bi, e, v.shape) for e, bi in zip(angles, b))
    h = 1e-4 * np.max(np.abs(v))
    worst = 0.0
    for _ in range(5):
        d = rng.standard_normal(v.shape)
        fd = (objective(v + h * d) - objective(v - h * d)) / (2 * h)
        an = np.vdot(grad, d)
        worst = max(worst, abs(fd - an) / abs(an))
    assert worst < 1e-6


def test_zero_stack_gives_zero_volume():
    stack = stack_of(np.zeros((5, 8, 8)), tilt_range(-20, 20, 10))
    v, trace = resire_solve(stack, (8, 8, 6), SolverConfig(iterations=4))
    np.testing.assert_array_equal(v, 0)
    assert trace.sse_history == [0.0] * 4


def test_first_step_closed_form(rng):
    b = rng.random((1, 8, 6))
    nz = 5
    v, trace = resire_solve(stack_of(b, [(0, 0, 0)]), (8, 6, nz), SolverConfig(iterations=1, step_t=1.0))
    expected = np.broadcast_to(b[0][:, :, None] / nz, (8, 6, nz))
    np.testing.assert_allclose(v, expected, rtol=1e-12)
    assert len(trace) == 1


def test_single_zero_tilt_recovers_z_constant_object():
    v_true = np.zeros((8, 8, 4))
    v_true[2:6, 3:7, :] = 1.5
    stack = simulate_stack(v_true, [(0, 0, 0)])
    v, _ = resire_solve(stack, v_true.shape, SolverConfig(iterations=1, step_t=1.0))
    np.testing.assert_allclose(v, v_true, atol=1e-12)


def test_sse_monotone_for_unit_step(ball16_stack):
    _, stack = ball16_stack
    _, trace = resire_solve(stack, (16, 16, 16), SolverConfig(iterations=60, step_t=1.0))
    s = np.asarray(trace.sse_history)
    assert np.all(s[1:] <= s[:-1] * 1.001)
    assert s[-1] < 0.05 * s[0]


def test_history_lengths_match(ball16_stack):
    _, stack = ball16_stack
    _, trace = resire_solve(stack, (16, 16, 16), SolverConfig(iterations=7))
    assert len(trace.sse_history) == len(trace.rfactor_history) == len(trace.wall_time) == 7


def test_runs_are_bitwise_reproducible(ball16_stack):
    _, stack = ball16_stack
    cfg = SolverConfig(iterations=10)
    a, ta = resire_solve(stack, (16, 16, 16), cfg)
    b, tb = resire_solve(stack, (16, 16, 16), cfg)
    assert a.tobytes() == b.tobytes()
    assert ta.sse_history == tb.sse_history


def test_rfactor_target_stops_early(ball16_stack):
    _, stack = ball16_stack
    _, trace = resire_solve(stack, (16, 16, 16), SolverConfig(iterations=200, rfactor_target=0.2))
    assert len(trace) < 200
    assert trace.rfactor_history[-1] <= 0.2
    assert all(r > 0.2 for r in trace.rfactor_history[:-1])


def test_nonnegativity_clamp(ball16_stack):
    _, stack = ball16_stack
    v, _ = resire_solve(stack, (16, 16, 16), SolverConfig(iterations=20, nonnegativity=True))
    assert v.min() >= 0.0


def test_large_step_diverges(ball16_stack):
    _, stack = ball16_stack
    with pytest.raises(DivergenceError) as info:
        resire_solve(stack, (16, 16, 16), SolverConfig(iterations=50, step_t=40.0))
    assert info.value.iteration > 0


def test_callback_sees_each_iteration(ball16_stack):
    _, stack = ball16_stack
    seen = []
    resire_solve(stack, (16, 16, 16), SolverConfig(iterations=3), callback=lambda k, v, t: seen.append((k, len(t))))
    assert seen == [(0, 1), (1, 2), (2, 3)]


def test_dimension_mismatch_rejected(ball16_stack):
    _, stack = ball16_stack
    with pytest.raises(InvalidArgumentError):
        resire_solve(stack, (16, 12, 16), SolverConfig(iterations=1))


def test_config_text_round_trip():
    cfg = SolverConfig(iterations=12, step_t=1.5, oversampling_ratio=3.0, nonnegativity=True, rfactor_target=0.25)
    text = solver_config_to_text(cfg)
    assert solver_config_from_text(text) == cfg
    assert solver_config_from_text(solver_config_to_text(SolverConfig())) == SolverConfig()


def test_config_text_rejects_unknown_key():
    with pytest.raises(FormatError):
        solver_config_from_text("iterations = 5\nmomentum = 0.9\n")
