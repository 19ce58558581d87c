"""Side-by-side timing of the numpy and numba kernel backends.

Runs every per-grid-point kernel on identical random inputs through
both implementations, checks that they agree to roundoff, and prints a
small table with the speedup. Example:

    python3 benchmarks/bench_kernels.py --n 48 --repeats 7

The integrator spends most of its time in FFTs, so kernel speedups do
not translate one-to-one into run speedups. To compare whole steps,
time the same stepping workload under each backend:

    SMAGBOX_NUMBA=0 python3 benchmarks/bench_kernels.py --steps 20
    SMAGBOX_NUMBA=1 python3 benchmarks/bench_kernels.py --steps 20
"""

import argparse
import time

import numpy as np

from smagbox import kernels
from smagbox.kernels import get_backend


def best_of(repeats, fn, *args):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def agreement(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    scale = max(np.max(np.abs(a)), 1e-300)
    return float(np.max(np.abs(a - b)) / scale)


def bench_kernels(n, repeats, seed):
    npts = n**3
    rng = np.random.default_rng(seed)
    vec = np.ascontiguousarray(rng.standard_normal((3, npts)))
    grad = np.ascontiguousarray(rng.standard_normal((9, npts)))
    cases = [
        ("sum_sq", (grad,)),
        ("dot_sum", (vec, vec)),
        ("sum_magnitude_cubed", (grad,)),
        ("max_magnitude", (grad,)),
        ("strain_magnitude_cubed", (grad,)),
        ("gradient_flux", (grad, 0.0123)),
        ("strain_flux", (grad, 0.0123)),
        ("convective", (vec, grad)),
        ("outer_product_sym", (vec,)),
    ]

    ref = get_backend("numpy")
    try:
        jit = get_backend("numba")
    except ImportError:
        print("numba is not importable; nothing to compare against")
        return

    print(f"kernel timings, n={n}^3 points, best of {repeats}")
    header = f"{'kernel':<24}{'numpy ms':>10}{'numba ms':>10}{'speedup':>9}{'max rel diff':>14}"
    print(header)
    print("-" * len(header))
    for name, args in cases:
        f_ref = getattr(ref, name)
        f_jit = getattr(jit, name)
        f_jit(*args)  # compile before timing
        t_ref = best_of(repeats, f_ref, *args)
        t_jit = best_of(repeats, f_jit, *args)
        diff = agreement(f_ref(*args), f_jit(*args))
        print(f"{name:<24}{t_ref * 1e3:>10.3f}{t_jit * 1e3:>10.3f}"
              f"{t_ref / t_jit:>9.2f}{diff:>14.1e}")


def bench_steps(n, steps, seed):
    from smagbox.forcing import make_force
    from smagbox.grid import Grid
    from smagbox.integrator import cfl_dt, initial_state, step
    from smagbox.model import ModelParams

    grid = Grid(n)
    p = ModelParams(nu=0.006, cs=0.1, delta=grid.length / 16.0)
    force = make_force("taylor_green", 1.0, 1, grid)
    state = initial_state("random", grid, seed=seed)
    # one untimed step settles FFT planning and kernel compilation
    state = step(state, force.field, p, 1e-4)

    t0 = time.perf_counter()
    for _ in range(steps):
        dt = cfl_dt(state.u, grid, p, safety=0.4, dt_max=0.05)
        state = step(state, force.field, p, dt)
    elapsed = time.perf_counter() - t0
    print(f"backend={kernels.BACKEND}: {steps} steps on {n}^3 "
          f"in {elapsed:.3f} s ({elapsed / steps * 1e3:.1f} ms/step)")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=48, help="grid points per axis")
    ap.add_argument("--repeats", type=int, default=5, help="timing repeats per kernel")
    ap.add_argument("--steps", type=int, default=0,
                    help="also time this many integrator steps on the active backend")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    bench_kernels(args.n, args.repeats, args.seed)
    if args.steps > 0:
        bench_steps(args.n, args.steps, args.seed)


if __name__ == "__main__":
    main()
