"""Compare the compiled and NumPy kernel backends.

Run ``python benchmarks/bench_kernels.py [--steps N] [--points N]``. Prints
the median wall time of each kernel per backend and the largest difference
between backend outputs.
"""

import argparse
import timeit

import numpy as np

from parosc.kernels import available_backends


def cn_case(points, steps):
    x = np.linspace(-20.0, 20.0, points)
    psi0 = (np.pi ** -0.25 * np.exp(-0.5 * x * x)).astype(np.complex128)
    t = (np.arange(steps) + 0.5) * 1e-3
    om2 = 1.0 + 0.5 * np.tanh(0.5 * t)
    return psi0, x, om2, 0.1 * np.cos(t), np.zeros(steps), 1e-3, 1.0, 1.0


def hyp_case(size):
    z = np.linspace(0.01, 0.6, size).astype(np.complex128)
    return -1.3j, 1.0 - 1.3j, 1.0 - 2.1j, z, 1e-16, 2000


def bench(fun, args, repeat):
    times = timeit.repeat(lambda: fun(*args), number=1, repeat=repeat)
    return float(np.median(times))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=2048)
    ap.add_argument("--steps", type=int, default=2000)
    ap.add_argument("--hyp-size", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    backends = available_backends()
    cases = {
        "cn_propagate": cn_case(args.points, args.steps),
        "hyp2f1_series": hyp_case(args.hyp_size),
    }
    print(f"backends: {', '.join(backends)}")
    for kernel, case in cases.items():
        results, timings = {}, {}
        for name, mod in backends.items():
            fun = getattr(mod, kernel)
            results[name] = np.asarray(fun(*case)[0] if kernel == "hyp2f1_series" else fun(*case))
            timings[name] = bench(fun, case, args.repeat)
        line = "  ".join(f"{n}={t * 1e3:9.2f} ms" for n, t in timings.items())
        if "cython" in timings:
            ref = results["python"]
            diff = np.abs(results["cython"] - ref).max() / np.abs(ref).max()
            line += f"  speedup={timings['python'] / timings['cython']:6.1f}x  max_rel_diff={diff:.1e}"
        print(f"{kernel:14s} {line}")


if __name__ == "__main__":
    main()
