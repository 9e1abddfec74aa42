"""Timing comparison of the compiled kernels against the pure fallback.

Both implementations are importable side by side, so each kernel is
timed on identical inputs without re-running the interpreter.  Reported
numbers are medians over repeated calls; the first call is discarded as
warmup.  A whole RK4 step is timed as well for whichever implementation
the package dispatched to at import.

Usage: python3 benchmarks/bench_kernels.py [--nx 512] [--ny 512]
       [--repeats 20] [--json]
"""

import argparse
import json
import statistics
import time

import numpy as np

from sgn2d import kernels
from sgn2d import _fallback


def _time_call(fn, repeats):
    fn()  # warmup
    samples = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - start)
    return statistics.median(samples)


def _kernel_cases(nx, ny):
    rng = np.random.default_rng(7)
    shape = (nx, ny)
    a, b, c, d, e = (rng.standard_normal(shape) for _ in range(5))
    h = 1.5 + 0.2 * np.tanh(rng.standard_normal(shape))
    inv_h = 1.0 / h
    chat = np.fft.rfft2(a)
    out = np.empty(shape)
    outx, outy = np.empty(shape), np.empty(shape)

    return [
        ("sigma_combine", lambda impl: impl.sigma_combine(a, h, b, out)),
        ("scale_pair", lambda impl: impl.scale_pair(a, b, inv_h, outx, outy)),
        ("bernoulli_head",
         lambda impl: impl.bernoulli_head(a, b, c, d, e, h, 1.0, out)),
        ("rk4_combine",
         lambda impl: impl.rk4_combine(a, b, c, d, e, 0.01, out)),
        ("krasny_zero", lambda impl: impl.krasny_zero(chat.copy(), 1e-12)),
    ]


def _bench_step(nx, ny, repeats):
    from sgn2d.dynamics import PhysicalParams, rk4_step
    from sgn2d.initdata import gaussian_hump
    from sgn2d.spectral import make_grid

    grid = make_grid(nx, ny, 5.0, 5.0)
    state = gaussian_hump(grid, 2.0, PhysicalParams())
    state, _ = rk4_step(state, 1e-3, PhysicalParams())  # warm sigma cache

    def step():
        rk4_step(state, 1e-3, PhysicalParams())

    return _time_call(step, repeats)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--nx", type=int, default=512)
    parser.add_argument("--ny", type=int, default=512)
    parser.add_argument("--repeats", type=int, default=20)
    parser.add_argument("--json", action="store_true",
                        help="machine-readable output")
    args = parser.parse_args(argv)

    impls = [("fallback", _fallback)]
    if kernels.using_compiled_kernels():
        from sgn2d import _speedups

        impls.append(("compiled", _speedups))

    results = {}
    for name, case in _kernel_cases(args.nx, args.ny):
        results[name] = {
            impl_name: _time_call(lambda: case(impl), args.repeats)
            for impl_name, impl in impls
        }

    active = "compiled" if kernels.using_compiled_kernels() else "fallback"
    step_time = _bench_step(args.nx, args.ny, max(3, args.repeats // 4))

    if args.json:
        print(json.dumps({
            "grid": [args.nx, args.ny],
            "kernels_us": {
                k: {n: t * 1e6 for n, t in v.items()} for k, v in results.items()
            },
            "rk4_step_ms": {"impl": active, "median": step_time * 1e3},
        }, indent=2))
        return 0

    print(f"grid {args.nx}x{args.ny}, median of {args.repeats} calls")
    header = f"{'kernel':<16}" + "".join(f"{n:>12}" for n, _ in impls)
    if len(impls) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for name, times in results.items():
        row = f"{name:<16}"
        for impl_name, _ in impls:
            row += f"{times[impl_name] * 1e6:>10.1f}us"
        if len(impls) == 2:
            row += f"{times['fallback'] / times['compiled']:>9.2f}x"
        print(row)
    print(f"\nrk4_step ({active}): {step_time * 1e3:.2f} ms")
    if len(impls) == 1:
        print("compiled extension not available; showing fallback only")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
