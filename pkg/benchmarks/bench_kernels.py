"""Compare the compiled and numpy evolution kernels.

Run ``python3 benchmarks/bench_kernels.py [--sites M] [--steps N] [--repeat R]``.
Without ``--sites``/``--steps`` two workloads are timed: the window scale
used by the acceptance suite and a wide window.  Prints the best wall time
per backend, the speed-up, and the largest difference between outputs.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from qwstat import _pykernel
from qwstat.nstate import jump_offsets
from qwstat.sampling import random_unitary

try:
    from qwstat import _ckernel
except ImportError:  # pragma: no cover
    _ckernel = None


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sites", type=int, default=None)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    if args.sites is None and args.steps is None:
        workloads = [(65, 64), (2001, 500)]
    else:
        workloads = [(args.sites or 65, args.steps or 64)]
    for sites, steps in workloads:
        run(sites, steps, args.repeat, np.random.default_rng(args.seed))


def run(sites: int, steps: int, repeat: int, rng: np.random.Generator) -> None:
    print(f"\nsites={sites} steps={steps} repeat={repeat} (best of, milliseconds)")
    print(f"{'N':>2} {'kernel':>15} {'python':>10} {'cython':>10} {'speed-up':>9} {'max diff':>9}")
    for N in (2, 3, 5):
        U = random_unitary(N, rng)
        offs = jump_offsets(N)
        reach = int(np.abs(offs).max())
        m = sites + 2 * steps * reach
        vals = rng.standard_normal((m, N)) + 1j * rng.standard_normal((m, N))
        jobs = {
            "evolve_window": lambda k: k.evolve_window(vals, U, offs, steps),
            "measure_series": lambda k: k.measure_series(vals, U, offs, steps, steps * reach, sites),
        }
        for name, job in jobs.items():
            t_py = 1e3 * min(timeit.repeat(lambda: job(_pykernel), number=1, repeat=repeat))
            if _ckernel is None:
                print(f"{N:>2} {name:>15} {t_py:>10.3f} {'n/a':>10} {'n/a':>9} {'n/a':>9}")
                continue
            t_c = 1e3 * min(timeit.repeat(lambda: job(_ckernel), number=1, repeat=repeat))
            diff = float(np.abs(job(_pykernel) - job(_ckernel)).max())
            print(f"{N:>2} {name:>15} {t_py:>10.3f} {t_c:>10.3f} {t_py / t_c:>8.1f}x {diff:>9.1e}")

if __name__ == "__main__":
    main()
