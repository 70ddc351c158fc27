"""Time the numba and numpy kernel backends on the sweeps that dominate runtime.

    python benchmarks/bench_kernels.py [--repeat 3]

Each kernel is warmed up once (this triggers numba compilation) before timing;
results from the two backends are also checked against each other.
"""

import argparse
import time

import numpy as np

from definetti import kernels
from definetti.combinatorics import log_factorials
from definetti.families import generate, polya


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def cases():
    lf = log_factorials(2048)
    mass = generate(polya(2, 5), 1024).mass
    yield "cmi_table n=128", lambda k: k.cmi_table(128, lf)
    yield "cmi_table n=256", lambda k: k.cmi_table(256, lf)
    yield "cond_div_table n=128", lambda k: k.cond_div_table(128, lf)
    yield "lemma sweep n<=64", lambda k: [k.cmi_table(n, lf) for n in range(2, 65)]
    yield "log_marginal n=1024 k=256", lambda k: k.log_marginal(mass, 256, lf)
    yield "log_mixture n=1024 k=256", lambda k: k.log_mixture(mass, 256)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    nb, np_ = kernels.get("numba"), kernels.get("numpy")
    print(f"{'kernel':<28}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}")
    for name, fn in cases():
        t_nb, a = best_of(lambda: fn(nb), args.repeat)
        t_np, b = best_of(lambda: fn(np_), args.repeat)
        a = np.concatenate([np.ravel(x) for x in a]) if isinstance(a, list) else a
        b = np.concatenate([np.ravel(x) for x in b]) if isinstance(b, list) else b
        fin = np.isfinite(a)
        dev = float(np.max(np.abs(a[fin] - b[fin]))) if fin.any() else 0.0
        print(f"{name:<28}{t_nb:>12.4f}{t_np:>12.4f}{t_np / t_nb:>9.1f}x   max|diff|={dev:.1e}")


if __name__ == "__main__":
    main()
