"""Compare the compiled and numpy backends on the hot per-point kernels.

    python3 benchmarks/bench_core.py [--n 1000000] [--repeat 5] [--json]

Per-kernel timings call both backends in one process; the end-to-end row
runs a Monte Carlo volume estimate in a subprocess per backend, since the
default backend is chosen at import.
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np

from bergman_lab import _core

KERNELS = {
    "opnorm_sq": lambda t, s, b: _core.opnorm_sq(t, backend=b),
    "tetra_norm_sq": lambda t, s, b: _core.tetra_norm_sq(t, backend=b),
    "rii_kernel": lambda t, s, b: _core.rii_kernel(t, s, 0.2, backend=b),
    "tetra_kernel": lambda t, s, b: _core.tetra_kernel(t, s, 0.2, backend=b),
}

E2E = ("import time, bergman_lab as b; from bergman_lab import kernels; t=time.perf_counter();"
       "kernels.rii_volume({n}, seed=0); print(b.BACKEND, time.perf_counter()-t)")


def best_of(fn, repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def end_to_end(n: int, pure: bool) -> tuple[str, float]:
    env = dict(os.environ)
    if pure:
        env["BERGMAN_LAB_PURE_PYTHON"] = "1"
    out = subprocess.run([sys.executable, "-c", E2E.format(n=n)], env=env, check=True,
                         capture_output=True, text=True).stdout.split()
    return out[0], float(out[1])


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=10**6, help="points per call")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", action="store_true", help="print JSON instead of a table")
    args = ap.parse_args(argv)

    rng = np.random.default_rng(0)
    t = 0.4 * (rng.standard_normal((args.n, 3)) + 1j * rng.standard_normal((args.n, 3)))
    s = 0.4 * (rng.standard_normal((args.n, 3)) + 1j * rng.standard_normal((args.n, 3)))
    have = sorted(_core.backends())
    rows = []
    for name, fn in KERNELS.items():
        row = {"kernel": name}
        for b in have:
            row[b] = best_of(lambda fn=fn, b=b: fn(t, s, b), args.repeat)
        rows.append(row)
    e2e = {"kernel": f"rii_volume(n={args.n})"}
    for pure in ([False, True] if "cython" in have else [True]):
        backend, sec = end_to_end(args.n, pure)
        e2e[backend] = sec
    rows.append(e2e)

    if args.json:
        print(json.dumps({"n": args.n, "repeat": args.repeat, "rows": rows}, indent=2))
        return 0
    print(f"n = {args.n}, best of {args.repeat} (seconds)")
    print(f"{'kernel':<24}" + "".join(f"{b:>10}" for b in have) + f"{'speedup':>10}")
    for row in rows:
        cells = "".join(f"{row.get(b, float('nan')):>10.4f}" for b in have)
        sp = row["numpy"] / row["cython"] if "cython" in row else float("nan")
        print(f"{row['kernel']:<24}{cells}{sp:>9.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
