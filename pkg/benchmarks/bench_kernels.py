"""Timings for the hot kernels: jitted loops against the numpy fallbacks.

Run from the repository root:

    python3 benchmarks/bench_kernels.py --repeat 5

With RACKCOVER_NO_NUMBA=1 only the numpy column is produced.  The jitted
column includes a warmup call so compilation time is not billed to the
measurement; the reported number is the best of the repeats.
"""

import argparse
import itertools
import time

import numpy as np

from rackcover import _kernels, core, terms


def _best(fn, repeat):
    out = fn()  # warmup (and JIT compile on the numba path)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        got = fn()
        best = min(best, time.perf_counter() - t0)
        assert np.all(got == out)
    return best, out


def workloads():
    perms4 = np.asarray(sorted(itertools.permutations(range(4))), dtype=np.int64)
    big = core.affine(127, 126)
    ident = terms.builtin("medial")
    names = terms._identity_vars(ident)
    index = {v: i for i, v in enumerate(names)}
    lcode = np.asarray(terms._postfix(ident.lhs, index), dtype=np.int64)
    rcode = np.asarray(terms._postfix(ident.rhs, index), dtype=np.int64)
    med = core.affine(31, 5)
    coc = core.affine(48, 47)
    theta = np.broadcast_to(np.arange(4, dtype=np.int64), (48, 48, 4)).copy()

    return [
        ("rack tables n=4 (331776 candidates)", "rack_table_mask", (perms4, 4)),
        ("left distributivity, 127 elements", "ld_violation", (big.mul,)),
        (
            "medial check, 31 elements (923521 rows)",
            "identity_counterexample",
            (med.mul, med.ldiv, lcode, rcode, len(names)),
        ),
        (
            "cocycle condition, 48 elements x fiber 4",
            "rack_cocycle_ok",
            (coc.mul, theta),
        ),
    ]


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3, help="timed repeats per kernel")
    args = parser.parse_args(argv)

    jitted = _kernels.backend() == "numba"
    header = f"{'workload':<44} {'numpy':>10}"
    if jitted:
        header += f" {'numba':>10} {'speedup':>8}"
    print(f"backend: {_kernels.backend()}")
    print(header)
    print("-" * len(header))
    for label, name, kargs in workloads():
        py = getattr(_kernels, name + "_py")
        t_py, out_py = _best(lambda: py(*kargs), args.repeat)
        row = f"{label:<44} {t_py * 1e3:>8.1f}ms"
        if jitted:
            nb = getattr(_kernels, name + "_nb")
            t_nb, out_nb = _best(lambda: nb(*kargs), args.repeat)
            assert np.all(out_py == out_nb), name
            row += f" {t_nb * 1e3:>8.1f}ms {t_py / t_nb:>7.1f}x"
        print(row)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
