"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--json]

Both backends run on the same inputs; results are checked for equality
before timings are reported.
"""

from __future__ import annotations

import argparse
import json
import sys
import timeit

import numpy as np

from systolic import _pykernels, kernels
from systolic.generators import euclid_patch, hyperbolic_patch
from systolic.metric import ball_vertices


def cases():
    for label, X in (("euclid_patch(6)", euclid_patch(6).complex), ("hyperbolic_patch(7,4)", hyperbolic_patch(7, 4).complex)):
        ip, ix = X.csr
        D = _pykernels.all_pairs_distances(ip, ix)
        verts = np.asarray(ball_vertices(X, 0, 2), dtype=np.int32)
        far = X.vertices[-1]
        yield label, "all_pairs_distances", (ip, ix), lambda r: r
        yield label, "bigon_thinness", (ip, ix, D, 0, far), lambda r: r[0]
        yield label, f"scan_bigons[{len(verts)}]", (ip, ix, D, verts), lambda r: r[0]
        yield label, f"scan_triangles[{len(verts)}]", (ip, ix, D, verts), lambda r: r[0]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)

    compiled = kernels.compiled_module()
    if compiled is None:
        print("compiled extension not built; run `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 1

    rows = []
    for label, kernel, inputs, key in cases():
        name = kernel.split("[")[0]
        fns = {"cython": getattr(compiled, name), "python": getattr(_pykernels, name)}
        out = {b: key(f(*inputs)) for b, f in fns.items()}
        if not np.array_equal(np.asarray(out["cython"]), np.asarray(out["python"])):
            print(f"backends disagree on {kernel} for {label}", file=sys.stderr)
            return 1
        t = {b: min(timeit.repeat(lambda f=f: f(*inputs), number=1, repeat=args.repeat)) for b, f in fns.items()}
        rows.append({"complex": label, "kernel": kernel, "cython_s": t["cython"], "python_s": t["python"],
                     "speedup": t["python"] / t["cython"] if t["cython"] else float("inf")})

    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        print(f"{'complex':<24}{'kernel':<22}{'cython (s)':>12}{'python (s)':>12}{'speedup':>10}")
        for r in rows:
            print(f"{r['complex']:<24}{r['kernel']:<22}{r['cython_s']:>12.5f}{r['python_s']:>12.5f}{r['speedup']:>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
