"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N] [--paths N]

Each row reports the best-of-N wall time per backend and the speedup.  The random
streams are identical, so the exit-step arrays are also compared for equality.
"""

import argparse
import math
import timeit

import numpy as np

from triheat import kernels
from triheat.forward import triangle_domain
from triheat.moduli import Triangle


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--paths", type=int, default=20_000)
    args = ap.parse_args()

    py = kernels.python_backend
    try:
        cy = kernels.get_backend("cython")
    except ImportError:
        print("compiled kernels are not built; only the fallback is available")
        return

    xi = np.linspace(0.0, 40.0, 200_000)
    dom = triangle_domain(Triangle((1.0, 1.0, math.sqrt(2.0))))
    x0, y0 = dom.sample_starts(args.paths, 0, 8)
    keys = kernels.stream_key(0, 1, np.arange(args.paths, dtype=np.uint64))
    ctr = np.arange(1_000_000, dtype=np.uint64)
    key1 = kernels.stream_key(0, 2, np.zeros(1, dtype=np.uint64))

    cases = [
        ("phi_integrand (2e5 nodes)", lambda b: b.phi_integrand(1.1, xi)),
        ("phi_panel x 200", lambda b: [b.phi_panel(0.3 + 0.01 * i, 0.0, 8.0)
                                       for i in range(200)]),
        ("counter_uniform (1e6)", lambda b: b.counter_uniform(key1, ctr)),
        (f"exit_steps ({args.paths} paths)",
         lambda b: b.exit_steps(x0, y0, keys, 1e-4, 20_000, dom.planes, dom.disk, True)),
    ]
    print(f"{'kernel':<28}{'python [s]':>12}{'cython [s]':>12}{'speedup':>10}")
    for name, fn in cases:
        tp = best(lambda: fn(py), args.repeat)
        tc = best(lambda: fn(cy), args.repeat)
        print(f"{name:<28}{tp:>12.4f}{tc:>12.4f}{tp / tc:>9.1f}x")

    same = np.array_equal(cases[3][1](py), cases[3][1](cy))
    print(f"exit_steps identical across backends: {same}")


if __name__ == "__main__":
    main()
