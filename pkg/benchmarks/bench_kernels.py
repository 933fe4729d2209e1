"""Time the numba kernels against the numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 5] [--quick]

Both backends run in one process; the switch is the SIEVEKIT_DISABLE_NUMBA
environment flag, which the kernels read on every call. Results are checked
to agree before anything is timed.
"""
import argparse
import os
import timeit

import numpy as np

from sievekit import catalog, kernels
from sievekit._accel import DISABLE_ENV


def comp_table(C):
    idx = {f: i for i, f in enumerate(C.morphisms)}
    comp = np.full((len(idx), len(idx)), -1, dtype=np.int64)
    for (g, f), h in C.composition_items():
        comp[idx[g], idx[f]] = idx[h]
    return comp


def random_horn(n_bits, n_clauses, seed):
    rng = np.random.default_rng(seed)
    clauses = []
    for _ in range(n_clauses):
        body = rng.choice(n_bits, size=int(rng.integers(1, 3)), replace=False)
        clauses.append(([int(b) for b in body], int(rng.integers(n_bits))))
    return n_bits, clauses


def workloads(quick):
    k = 1 if quick else 2
    yield "assoc Z/%d" % (40 * k), kernels.first_nonassociative, (comp_table(catalog.cyclic_group(40 * k)),)
    yield "assoc chain(%d)" % (12 * k), kernels.first_nonassociative, (comp_table(catalog.chain(12 * k)),)
    for n_bits in ((14, 18) if quick else (16, 20, 22)):
        yield "horn %d bits" % n_bits, kernels.horn_models, random_horn(n_bits, 2 * n_bits, seed=n_bits)


def timed(fn, args, disable, repeat):
    old = os.environ.get(DISABLE_ENV)
    os.environ[DISABLE_ENV] = "1" if disable else "0"
    try:
        out = fn(*args)  # warm up (and compile)
        best = min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))
    finally:
        if old is None:
            os.environ.pop(DISABLE_ENV, None)
        else:
            os.environ[DISABLE_ENV] = old
    return out, best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--quick", action="store_true", help="smaller workloads")
    args = ap.parse_args(argv)
    print(f"{'workload':<18}{'numba s':>12}{'numpy s':>12}{'speedup':>10}")
    for name, fn, fargs in workloads(args.quick):
        a, t_nb = timed(fn, fargs, False, args.repeat)
        b, t_np = timed(fn, fargs, True, args.repeat)
        if not np.array_equal(a, b):
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:<18}{t_nb:>12.5f}{t_np:>12.5f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
