"""
Choosing the step size
======================

The step is ``t / (N * Nz)``. ``t <= 1`` is the provably safe regime,
``t = 2`` is the default and usually converges faster. Push much further
and the solver stops with a divergence error.
"""

from resire import DivergenceError, SolverConfig, load_preset, make_vesicle_phantom, resire_solve
from resire import simulate_stack, tilt_range

spec, _ = load_preset("ball32")
ball = make_vesicle_phantom(spec)
stack = simulate_stack(ball, tilt_range(-70, 70, 3.5))

for t in (0.5, 1.0, 2.0, 4.0, 40.0):
    try:
        _, trace = resire_solve(stack, ball.shape, SolverConfig(iterations=50, step_t=t))
    except DivergenceError as exc:
        print(f"t={t:5.1f}  diverged at iteration {exc.iteration}")
        continue
    print(f"t={t:5.1f}  R_F after 50 iterations {trace.rfactor_history[-1]:.4f}")

# An R-factor target stops the run once the data are fit well enough.
_, trace = resire_solve(stack, ball.shape, SolverConfig(iterations=400, rfactor_target=0.02))
print(f"reached R_F <= 0.02 after {len(trace)} iterations")
