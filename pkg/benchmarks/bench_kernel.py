"""Benchmark the compiled decomposition-search kernel against the numpy fallback.

Times single objective/gradient evaluations for the three decomposition sizes
that occur for two-qubit channels, then one full quantumness computation per
backend.  Run as: python benchmarks/bench_kernel.py
"""

import time

import numpy as np

from phasedamp import _fallback, kernel
from phasedamp.assistance import OptimizerConfig, quantumness_of_assistance
from phasedamp.sampling import random_channel

try:
    from phasedamp import _native
except ImportError:
    _native = None


def time_call(fn, *args, reps):
    fn(*args)  # warm up
    start = time.perf_counter()
    for _ in range(reps):
        fn(*args)
    return (time.perf_counter() - start) / reps


def bench_evals():
    rng = np.random.default_rng(7)
    print(f"{'size':>14} {'python':>12} {'native':>12} {'speedup':>9}")
    for k, q in ((4, 2), (9, 3), (16, 4)):
        amp = rng.standard_normal((4, q)) + 1j * rng.standard_normal((4, q))
        amp = np.asfortranarray(amp / np.linalg.norm(amp))
        theta = rng.standard_normal(k * k)
        py = time_call(_fallback.avg_ent_grad, amp, theta, k, q, reps=300)
        line = f"k={k:2d} (q={q})   {py * 1e6:10.1f} us"
        if _native is not None:
            nat = time_call(_native.avg_ent_grad, amp, theta, k, q, reps=3000)
            line += f" {nat * 1e6:10.1f} us {py / nat:8.1f}x"
        else:
            line += "     (native kernel not built)"
        print(line)


def bench_end_to_end():
    channel = random_channel(4, 4, np.random.default_rng(3))
    cfg = OptimizerConfig(restarts=10, seed=11)
    backends = ["python"] + (["native"] if _native is not None else [])
    for name in backends:
        kernel.use(name)
        start = time.perf_counter()
        result = quantumness_of_assistance(channel, cfg)
        elapsed = time.perf_counter() - start
        print(
            f"rank-4 quantumness, 10 restarts, {name:>6}: "
            f"{elapsed:6.2f} s   q_a={result.q_a:.6f}"
        )
    kernel.use(backends[-1])


if __name__ == "__main__":
    print(f"active backend: {kernel.backend()}")
    bench_evals()
    bench_end_to_end()
