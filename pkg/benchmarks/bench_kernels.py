"""Benchmark the compiled kernel against the pure-Python fallback.

Two views:
  * kernel-level: time per right-hand-side evaluation (the hot call of the
    integrators), each backend exercised directly;
  * end-to-end: wall time of a long autonomous integration, run in a
    subprocess per backend so the import-time selection applies everywhere.

Usage: python benchmarks/bench_kernels.py [--evals N] [--reps N]
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from hhlax.kernels import CompiledPolySet, available_backends
from hhlax.model import hamiltonian_vector_field, hamiltonians

# The t1 flow blows up in finite time (the cubic potential is unbounded), so
# the end-to-end workload repeats the standard duration-2 run instead of
# integrating further.
_END_TO_END_SNIPPET = """
import time
from hhlax.dynamics import IntegratorConfig, PhaseState, integrate_autonomous
from hhlax.kernels import active_backend

cfg = IntegratorConfig(alpha=0.1)
start = time.perf_counter()
samples = 0
for _ in range({reps}):
    trajectory = integrate_autonomous(1, PhaseState(1.0, 1.0, 0.0, 0.0), 2.0, cfg)
    samples += len(trajectory.samples)
elapsed = time.perf_counter() - start
print(f"{{active_backend()}} {{elapsed:.4f}} {{samples}}")
"""


def bench_kernel(evals: int) -> None:
    fields = hamiltonians(True)
    polys = list(hamiltonian_vector_field(fields.h1).components) + list(
        hamiltonian_vector_field(fields.h2).components
    )
    vals = np.array([1.0, 1.0, 0.2, -0.3, 0.1, 0.05, 1.0, 0.1])
    out = np.empty(len(polys))
    print(f"kernel-level: {len(polys)} polynomials per call, {evals} calls")
    timings = {}
    for backend in available_backends():
        table = CompiledPolySet(polys, backend=backend)
        table(vals, out)  # warm up
        start = time.perf_counter()
        for _ in range(evals):
            table(vals, out)
        elapsed = time.perf_counter() - start
        timings[backend] = elapsed
        print(f"  {backend:>8}: {elapsed / evals * 1e6:8.2f} us/call")
    if "compiled" in timings:
        print(f"  speedup: {timings['python'] / timings['compiled']:.1f}x")


def bench_end_to_end(reps: int) -> None:
    print(f"end-to-end: {reps} repetitions of the duration-2 run, tol 1e-12")
    script = _END_TO_END_SNIPPET.format(reps=reps)
    timings = {}
    for backend in available_backends():
        env = dict(os.environ)
        env["HHLAX_PURE_PYTHON"] = "1" if backend == "python" else "0"
        result = subprocess.run(
            [sys.executable, "-c", script], capture_output=True, text=True, env=env
        )
        if result.returncode != 0:
            print(result.stderr, file=sys.stderr)
            raise SystemExit(1)
        name, elapsed, samples = result.stdout.split()
        assert name == backend, f"expected backend {backend}, subprocess used {name}"
        timings[backend] = float(elapsed)
        print(f"  {backend:>8}: {float(elapsed):8.4f} s   ({samples} samples)")
    if "compiled" in timings:
        print(f"  speedup: {timings['python'] / timings['compiled']:.1f}x")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--evals", type=int, default=200_000)
    parser.add_argument("--reps", type=int, default=25)
    args = parser.parse_args()
    bench_kernel(args.evals)
    bench_end_to_end(args.reps)


if __name__ == "__main__":
    main()
