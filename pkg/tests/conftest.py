import numpy as np
import pytest
from scipy.ndimage import gaussian_filter


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def smooth_ball(n, radius, sigma=1.0):
    g = np.arange(n) - n // 2
    r2 = g[:, None, None] ** 2 + g[None, :, None] ** 2 + g[None, None, :] ** 2
    return gaussian_filter((r2 <= radius**2).astype(float), sigma, mode="constant")


@pytest.fixture(scope="session")
def ball32():
    return smooth_ball(32, 9)


@pytest.fixture(scope="session")
def vesicle_protocol():
    """Vesicle preset, 41 tilts from -70 to 70 degrees, 5% noise, all three solvers at 400 iterations."""
    import time

    from resire.baselines import SirtConfig, fbp_solve, sirt_solve
    from resire.phantom import NoiseSpec, load_preset, make_vesicle_phantom, simulate_stack, tilt_range
    from resire.solver import SolverConfig, resire_solve

    spec, _ = load_preset("vesicle64")
    truth = make_vesicle_phantom(spec)
    stack = simulate_stack(truth, tilt_range(-70, 70, 3.5), NoiseSpec(sigma_fraction=0.05, seed=0))
    t0 = time.perf_counter()
    recs = {
        "resire": resire_solve(stack, truth.shape, SolverConfig(iterations=400))[0],
        "sirt": sirt_solve(stack, truth.shape, SirtConfig(iterations=400))[0],
        "fbp": fbp_solve(stack, truth.shape),
    }
    return {"truth": truth, "stack": stack, "recs": recs, "seconds": time.perf_counter() - t0}


_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1][len("test_criterion_"):]
        detail = dict(report.user_properties).get("measured", "")
        _ACCEPTANCE[name] = (report.outcome, detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda n: int(n.split("_")[0])):
        outcome, detail = _ACCEPTANCE[name]
        number, _, label = name.partition("_")
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number} ({label.replace('_', ' ')}): {status}  {detail}")
