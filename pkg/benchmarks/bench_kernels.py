"""Compiled vs pure-Python kernels.

Times each kernel on both backends, checks that they agree, and prints a
table.  Usage: python benchmarks/bench_kernels.py [--repeat R] [--json out.json]
"""
import argparse
import json
import time

import numpy as np

from ncball import _kernels
from ncball.metric import omega_delta_d


def _best(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def cases(rng):
    def cg(*s):
        return rng.standard_normal(s) + 1j * rng.standard_normal(s)

    n, d, e = 2, 10, 2
    N = int(_kernels.level_offsets(n, d)[-1])
    A, B = cg(N, e, e) * 0.3, cg(N, e, e) * 0.3
    yield "free_convolve n=2 d=10 e=2", lambda k: k.free_convolve(A, B, n, d)

    A0inv = np.linalg.inv(np.eye(e) + A[0])
    yield "free_inverse n=2 d=10 e=2", lambda k: k.free_inverse(A, A0inv, n, d)

    n, d, h = 3, 8, 2
    N = int(_kernels.level_offsets(n, d)[-1])
    v = cg(N, h)
    Bs = cg(n, h, h) * 0.2
    Bh = np.conj(np.transpose(Bs, (0, 2, 1)))
    yield "raise_solve n=3 d=8 h=2", lambda k: k.raise_solve(v, Bs, n, d)
    yield "lower_solve n=3 d=8 h=2", lambda k: k.lower_solve(v, Bh, n, d)

    X = cg(2, 2, 2)
    X *= 0.6 / np.linalg.norm(np.concatenate(list(X), axis=1), 2)
    Y = cg(2, 2, 2)
    Y *= 0.5 / np.linalg.norm(np.concatenate(list(Y), axis=1), 2)
    yield "tree metric n=2 h=2 D=1024", lambda k: _with_backend(k, X, Y, 1024)


def _with_backend(mod, X, Y, D):
    """omega_delta_d with the riccati kernel taken from mod."""
    saved = _kernels._active
    _kernels._active = mod
    try:
        return np.array(omega_delta_d(X, Y, D))
    finally:
        _kernels._active = saved


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--json")
    args = p.parse_args(argv)
    backends = _kernels.backends()
    if "compiled" not in backends:
        print("compiled extension not built; timing the python backend only")
    rows = []
    for name, fn in cases(np.random.default_rng(0)):
        row = {"kernel": name}
        outs = {}
        for bname, mod in backends.items():
            row[bname], outs[bname] = _best(lambda: fn(mod), args.repeat)
        if len(outs) == 2:
            a, b = (np.asarray(o) for o in outs.values())
            row["max_diff"] = float(np.max(np.abs(a - b))) if a.size else 0.0
            row["speedup"] = row["python"] / row["compiled"]
        rows.append(row)
    print(f"{'kernel':32s} {'compiled s':>11s} {'python s':>11s} {'speedup':>8s} {'max diff':>9s}")
    for r in rows:
        c = f"{r['compiled']:.4f}" if "compiled" in r else "-"
        s = f"{r['speedup']:.1f}x" if "speedup" in r else "-"
        md = f"{r['max_diff']:.1e}" if "max_diff" in r else "-"
        print(f"{r['kernel']:32s} {c:>11s} {r['python']:11.4f} {s:>8s} {md:>9s}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=1)


if __name__ == "__main__":
    main()
