"""Compare the compiled coefficient kernel against the pure-Python twin.

Run with no arguments: the script re-executes itself under both backends
(ISOLAB_PURE unset / ISOLAB_PURE=1) and prints a side-by-side table.

    python3 benchmarks/bench_kernels.py
"""

import json
import os
import subprocess
import sys
import time
from fractions import Fraction


def _workloads():
    from isolab import FieldSpec, Isocrystal, PadicScalar, newton_slopes

    spec = FieldSpec(3, 3, 96)
    a = PadicScalar.from_fraction(spec, Fraction(7, 5))
    b = PadicScalar.from_fraction(spec, Fraction(11, 4))

    def scalar_mul(n=20000):
        c = a
        for _ in range(n):
            c = c * b
        return c

    def scalar_invert(n=2000):
        c = b
        for _ in range(n):
            c = c.invert()
        return c

    def frobenius_twist(n=5000):
        c = a
        for _ in range(n):
            c = c.sigma()
        return c

    spec2 = FieldSpec(2, 2, 64)
    rows = [[Fraction((i * 7 + j * 3) % 5 - 2, 1 + ((i + j) % 2))
             for j in range(6)] for i in range(6)]
    for i in range(6):
        rows[i][i] += Fraction(1, 2)
    M = Isocrystal.from_rationals(spec2, rows)

    def slope_rank6(n=20):
        out = None
        for _ in range(n):
            out = newton_slopes(M)
        return out

    return [("scalar mul x20000", scalar_mul),
            ("invert x2000", scalar_invert),
            ("sigma x5000", frobenius_twist),
            ("rank-6 slopes x20", slope_rank6)]


def _run_worker():
    from isolab._speedups import BACKEND

    results = {"backend": BACKEND, "timings": {}}
    for name, fn in _workloads():
        fn()  # warm up
        best = min(_timed(fn) for _ in range(3))
        results["timings"][name] = best
    print(json.dumps(results))


def _timed(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def main():
    if "--worker" in sys.argv:
        _run_worker()
        return

    outs = {}
    for label, pure in (("compiled", "0"), ("pure", "1")):
        env = dict(os.environ, ISOLAB_PURE=pure)
        r = subprocess.run([sys.executable, __file__, "--worker"],
                           capture_output=True, text=True, env=env,
                           check=True)
        outs[label] = json.loads(r.stdout)

    print(f"backends: compiled={outs['compiled']['backend']!r}  "
          f"pure={outs['pure']['backend']!r}")
    print(f"{'workload':<24}{'compiled':>12}{'pure':>12}{'speedup':>10}")
    for name in outs["compiled"]["timings"]:
        tc = outs["compiled"]["timings"][name]
        tp = outs["pure"]["timings"][name]
        print(f"{name:<24}{tc:>11.4f}s{tp:>11.4f}s{tp / tc:>9.2f}x")


if __name__ == "__main__":
    main()
