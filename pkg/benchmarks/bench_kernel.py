"""Compare the compiled and pure-Python product kernels.

Each backend runs in its own interpreter, since the kernel is chosen at
import time.  Usage::

    python benchmarks/bench_kernel.py [--repeat 3]
"""
import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, random, sys, timeit
import ncs4
from ncs4.algebra import random_element
from ncs4.curvature import compute
from ncs4.geometry import Perturbation
from ncs4.linalg import multiplication_rank
from ncs4.algebra import CentralFactor

repeat = int(sys.argv[1])
rng = random.Random(0)
pairs = [(random_element(rng, 6, 12), random_element(rng, 6, 12)) for _ in range(200)]

def products():
    for a, b in pairs:
        a * b

def pipeline():
    compute(Perturbation.one_plus_t2(2))

def rank():
    multiplication_rank(CentralFactor.ONE_PLUS_T2, 5)

out = {"backend": ncs4.BACKEND}
for name, fn in [("products", products), ("pipeline", pipeline), ("rank", rank)]:
    out[name] = min(timeit.repeat(fn, number=1, repeat=repeat))
print(json.dumps(out))
"""


def run(pure: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("NCS4_PURE_PYTHON", None)
    if pure:
        env["NCS4_PURE_PYTHON"] = "1"
    res = subprocess.run([sys.executable, "-c", WORKLOAD, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    fast, slow = run(False, args.repeat), run(True, args.repeat)
    if fast["backend"] != "cython":
        print("compiled kernel not built; both runs use the pure-Python kernel")
    print(f"{'workload':<10} {fast['backend']:>10} {slow['backend']:>10} {'speedup':>8}")
    for key in ("products", "pipeline", "rank"):
        print(f"{key:<10} {fast[key]:>9.3f}s {slow[key]:>9.3f}s {slow[key] / fast[key]:>7.2f}x")


if __name__ == "__main__":
    main()
