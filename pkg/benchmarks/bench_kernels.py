"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from ou_bounds import _pykernels

try:
    from ou_bounds import _ckernels
except ImportError:
    _ckernels = None


def _cases():
    rng = np.random.default_rng(0)
    n = 4096
    off = rng.uniform(-1, 1, n - 1)
    diag = np.abs(off).sum() + rng.uniform(1, 2, n)
    z = rng.standard_normal((256, 600))
    decay = np.exp(-rng.uniform(0.001, 0.01, 599))
    innov = np.sqrt(1 - decay**2)
    return {
        f"tridiag_inverse_band n={n}": lambda k: k.tridiag_inverse_band(diag, off),
        "ar1_paths 256x600": lambda k: k.ar1_paths(z, decay, innov, 1.0),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = {"python": _pykernels}
    if _ckernels is not None:
        backends["cython"] = _ckernels
    else:
        print("compiled extension not available; timing the Python kernels only")
    for name, fn in _cases().items():
        times = {}
        for label, mod in backends.items():
            number = 1 if label == "python" else 20
            best = min(timeit.repeat(lambda: fn(mod), number=number, repeat=args.repeat)) / number
            times[label] = best
        line = "  ".join(f"{k}={v * 1e3:9.3f} ms" for k, v in times.items())
        if "cython" in times:
            line += f"  speedup={times['python'] / times['cython']:7.1f}x"
        print(f"{name:32s} {line}")


if __name__ == "__main__":
    main()
