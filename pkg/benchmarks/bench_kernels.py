"""Time the correlation-spectrum kernel: compiled extension against the numpy fallback.

    python benchmarks/bench_kernels.py --primes 31,53,101 --threads 1,4
"""

import argparse
import json
import statistics
import time

import numpy as np

from tracelab import _pykernels
from tracelab.correlation import pgl_arrays
from tracelab.fp import prime_context
from tracelab.weights import dft, kloosterman_weight

try:
    from tracelab import _ckernels
except ImportError:
    _ckernels = None


def time_kernel(fn, args, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        times.append(time.perf_counter() - t0)
    return statistics.median(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--primes", default="31,53,101")
    ap.add_argument("--threads", default="1,4")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true", help="print rows as JSON")
    args = ap.parse_args(argv)

    backends = [("numpy", _pykernels.corr_batch)]
    if _ckernels is not None:
        backends.append(("cython", _ckernels.corr_batch))
    else:
        print("compiled extension not built; timing the fallback only")

    rows = []
    for p in (int(x) for x in args.primes.split(",")):
        ctx = prime_context(p)
        khat = dft(kloosterman_weight(ctx)).values
        a, b, c, d = pgl_arrays(p)
        for threads in (int(x) for x in args.threads.split(",")):
            ref = None
            for name, fn in backends:
                t, vals = time_kernel(fn, (khat, ctx.inv, a, b, c, d, threads), args.repeat)
                ref = vals if ref is None else ref
                rows.append({
                    "p": p,
                    "classes": len(a),
                    "threads": threads,
                    "backend": name,
                    "seconds": t,
                    "max_abs_diff": float(np.max(np.abs(vals - ref))),
                })

    if args.json:
        print(json.dumps(rows, indent=2))
        return
    print(f"{'p':>5} {'classes':>9} {'thr':>4} {'backend':>8} {'seconds':>9} {'speedup':>8} {'max diff':>9}")
    base = {}
    for r in rows:
        key = (r["p"], r["threads"])
        base.setdefault(key, r["seconds"])
        print(f"{r['p']:>5} {r['classes']:>9} {r['threads']:>4} {r['backend']:>8} {r['seconds']:>9.3f} "
              f"{base[key] / r['seconds']:>7.1f}x {r['max_abs_diff']:>9.1e}")


if __name__ == "__main__":
    main()
