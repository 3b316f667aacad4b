"""Time the exhaustive delta_s search on each available backend.

    python3 benchmarks/bench_rip.py [--m 20] [--n 40] [--s 3 4 5] [--repeat 3]
"""
import argparse
import math
import time

import numpy as np

from orbit_rip import _backend


def gram_matrix(m, n, seed):
    rng = np.random.default_rng(seed)
    phi = (rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))) / np.sqrt(2 * m)
    return np.ascontiguousarray(phi.conj().T @ phi)


def best_time(kernel, gram, s, repeat):
    times, out = [], None
    for _ in range(repeat):
        start = time.perf_counter()
        out = kernel.rip_search(gram, s)
        times.append(time.perf_counter() - start)
    return min(times), out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--m", type=int, default=20)
    parser.add_argument("--n", type=int, default=40)
    parser.add_argument("--s", type=int, nargs="+", default=[2, 3, 4, 5])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    gram = gram_matrix(args.m, args.n, args.seed)
    names = sorted(_backend.BACKENDS)
    print(f"Gram of a {args.m}x{args.n} complex Gaussian matrix; best of {args.repeat}")
    print(f"{'s':>3} {'supports':>10} " + " ".join(f"{name + ' [s]':>14}" for name in names)
          + ("   speedup" if len(names) == 2 else ""))
    for s in args.s:
        results = {name: best_time(_backend.get_backend(name), gram, s, args.repeat) for name in names}
        deltas = [r[1][0] for r in results.values()]
        assert max(deltas) - min(deltas) <= 1e-12, "backends disagree"
        row = f"{s:>3} {math.comb(args.n, s):>10} " + " ".join(f"{results[n][0]:>14.4f}" for n in names)
        if len(names) == 2:
            row += f"   {results['python'][0] / results['compiled'][0]:>7.1f}x"
        print(row)


if __name__ == "__main__":
    main()
