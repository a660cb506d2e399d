"""Compare the compiled and pure-Python kernels on a KL build and a product.

    python3 benchmarks/bench_kernels.py [--radius 20] [--repeat 3]

Each implementation runs in a fresh interpreter (the kernel choice is fixed
at import), and the two results are checked to be identical.
"""

import argparse
import hashlib
import json
import os
import subprocess
import sys

CHILD = r"""
import hashlib, json, sys, time
from affcell import kernels
from affcell.coxeter import CoxeterSystem
from affcell.klbasis import KLCache
kind, w, radius, repeat = sys.argv[1], tuple(map(int, sys.argv[2].split(","))), int(sys.argv[3]), int(sys.argv[4])
best_build = best_mult = float("inf")
for _ in range(repeat):
    t = time.perf_counter()
    cache = KLCache(CoxeterSystem(kind, w), radius).build()
    best_build = min(best_build, time.perf_counter() - t)
    b = cache.ball
    x, y = b.layer_start[radius // 2], b.layer_start[radius // 2 + 1] - 1
    t = time.perf_counter()
    prod = cache.c_mult_raw(x, y)
    best_mult = min(best_mult, time.perf_counter() - t)
digest = hashlib.sha256(json.dumps([sorted((k, sorted(v.items())) for k, v in c.items()) for c in cache.C]).encode()).hexdigest()
pd = hashlib.sha256(json.dumps(sorted((k, sorted(v.items())) for k, v in prod.items())).encode()).hexdigest()
print(json.dumps({"impl": kernels.IMPLEMENTATION, "build": best_build, "mult": best_mult, "n": len(b), "digest": digest, "prod": pd}))
"""


def run(pure: bool, args) -> dict:
    env = dict(os.environ)
    env.pop("AFFCELL_PURE_PYTHON", None)
    if pure:
        env["AFFCELL_PURE_PYTHON"] = "1"
    out = subprocess.run([sys.executable, "-c", CHILD, args.type, args.weights, str(args.radius), str(args.repeat)],
                         env=env, check=True, capture_output=True, text=True)
    return json.loads(out.stdout)


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--type", default="g2")
    p.add_argument("--weights", default="5,2")
    p.add_argument("--radius", type=int, default=20)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    py = run(True, args)
    cy = run(False, args)
    print(f"{args.type} {args.weights} radius {args.radius}: {py['n']} elements")
    for r in (py, cy):
        print(f"  {r['impl']:>7}: build {r['build']:.3f}s  product {r['mult'] * 1e3:.1f}ms")
    if cy["impl"] == "python":
        print("  compiled kernels not built; only the fallback was timed")
    else:
        print(f"  speedup: build x{py['build'] / cy['build']:.2f}, product x{py['mult'] / cy['mult']:.2f}")
    same = py["digest"] == cy["digest"] and py["prod"] == cy["prod"]
    print("  results identical" if same else "  RESULTS DIFFER")
    return 0 if same else 1


if __name__ == "__main__":
    sys.exit(main())
