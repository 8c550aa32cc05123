"""Time the compiled core against the numpy fallback on the same inputs.

    python3 benchmarks/bench_backends.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from jacobimult import _pycore

try:
    from jacobimult import _core
except ImportError:
    _core = None


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases(rng):
    x = np.cos(np.linspace(0.01, 3.13, 2000))
    f = rng.standard_normal(4096)
    w = (np.arange(1500) + 1.0) ** 0.5
    return [
        ("orthonormal_table n=500 x=2000", lambda m: m.orthonormal_table(0.5, 1.3, 500, x)),
        ("christoffel_sums count=2000", lambda m: m.christoffel_sums(0.0, -0.5, 2000, x)),
        ("hilbert_naive N=4096", lambda m: m.hilbert_naive(f)),
        ("q_naive N=4096", lambda m: m.q_naive(f, 1.0)),
        ("ap_windows N=1500 p=2", lambda m: m.ap_windows(w, 2.0)),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if _core is None:
        raise SystemExit("compiled core not built; run `pip install -e . --no-build-isolation`")
    print(f"{'kernel':34s} {'cython_s':>10s} {'python_s':>10s} {'speedup':>8s}")
    for name, call in cases(np.random.default_rng(0)):
        tc = best_of(lambda: call(_core), args.repeat)
        tp = best_of(lambda: call(_pycore), args.repeat)
        print(f"{name:34s} {tc:10.4g} {tp:10.4g} {tp / tc:8.2f}")


if __name__ == "__main__":
    main()
