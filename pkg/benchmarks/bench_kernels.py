"""Compare the compiled and numpy kernels on a figure-sized grid scan.

    python benchmarks/bench_kernels.py [--repeat 20]
"""
import argparse
import timeit

import numpy as np

from previval import _kernels_py
from previval.scenarios import PRESETS
from previval.states import truncated_field

try:
    from previval import _kernels_ext
except ImportError:
    _kernels_ext = None


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=20)
    args = parser.parse_args()

    s = PRESETS["fig1"]
    a = truncated_field(s.field)
    ts = s.grid.points()
    x = np.array([0.0, 1.0], complex)
    y = np.array([1.0, 0.0], complex)
    print(f"grid {ts.size} points, n_max {a.size - 1}, {args.repeat} repeats")

    backends = {"numpy": _kernels_py}
    if _kernels_ext is not None:
        backends["cython"] = _kernels_ext
    times, results = {}, {}
    for name, mod in backends.items():
        def run():
            return mod.cross_reduced_grid(a, x, y, s.detuning, s.coupling, ts)
        results[name] = run()
        times[name] = timeit.timeit(run, number=args.repeat)
        print(f"{name:>7}: {times[name]:.3f} s ({1e3 * times[name] / args.repeat:.1f} ms per scan)")
    if "cython" in times:
        diff = np.max(np.abs(results["cython"] - results["numpy"]))
        print(f"speedup {times['numpy'] / times['cython']:.1f}x, max difference {diff:.1e}")
    else:
        print("compiled kernel not built; only the numpy backend was timed")


if __name__ == "__main__":
    main()
