"""Time the numba and pure-numpy kernel backends side by side.

Each backend runs in its own interpreter because the backend is chosen at
import time from ``QUASIDIM_DISABLE_NUMBA``. Usage::

    python benchmarks/bench_kernels.py [--repeat 3] [--depth 18]
"""

import argparse
import json
import os
import subprocess
import sys

CHILD = r"""
import json, sys, timeit
import numpy as np
import quasidim
from quasidim import kernels
from quasidim.dynamics import fixed_point_alpha
from quasidim.pressure import PreimageTree

depth, repeat = int(sys.argv[1]), int(sys.argv[2])
c = 0.1j
alpha = fixed_point_alpha(c)
xi, ls = kernels.grow_tree(alpha, 0.0, c, depth)
bits = np.random.default_rng(0).integers(0, 2, 10 ** 6).astype(bool)
kernels.inverse_chain(alpha, c, bits[:10], 0)
kernels.shifted_exp_sum(ls, 1.0, 0.0)

cases = {
    "grow_tree": lambda: kernels.grow_tree(alpha, 0.0, c, depth),
    "leaf_step": lambda: kernels.leaf_step(xi, ls, c),
    "shifted_exp_sum": lambda: kernels.shifted_exp_sum(ls, 1.0036, 0.0),
    "inverse_chain_1e6": lambda: kernels.inverse_chain(alpha, c, bits, 0),
    "delta_n_end_to_end": lambda: PreimageTree(c, depth + 1).log_delta(1.0036),
}
out = {"backend": quasidim.BACKEND}
for name, fn in cases.items():
    out[name] = min(timeit.repeat(fn, number=1, repeat=repeat))
print(json.dumps(out))
"""


def run_backend(disable, depth, repeat):
    env = dict(os.environ, QUASIDIM_DISABLE_NUMBA="1" if disable else "0")
    proc = subprocess.run([sys.executable, "-c", CHILD, str(depth), str(repeat)],
                          env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--depth", type=int, default=18, help="tree depth (2**depth nodes)")
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--json", action="store_true", help="print raw timings as JSON")
    args = parser.parse_args(argv)

    fast = run_backend(False, args.depth, args.repeat)
    slow = run_backend(True, args.depth, args.repeat)
    if args.json:
        print(json.dumps({"numba": fast, "numpy": slow}, indent=2))
        return 0
    if fast["backend"] != "numba":
        print("numba is not installed; only the numpy backend was timed")
    print(f"{'kernel':<22}{fast['backend'] + ' [s]':>14}{'numpy [s]':>14}{'speedup':>10}")
    for name in fast:
        if name == "backend":
            continue
        print(f"{name:<22}{fast[name]:>14.4f}{slow[name]:>14.4f}{slow[name] / fast[name]:>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
