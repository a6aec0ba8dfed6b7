"""Time the pure-Python kernels against the compiled ones on fixed workloads.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit
from itertools import product

from hmetric import algebra as A
from hmetric import fixpoint as X
from hmetric import kernels
from hmetric import metric as M
from hmetric.discrete import Poset, encode_poset
from hmetric.forms import distinct_balls


def boolean(k):
    names = ["".join(b) for b in product("01", repeat=k)]
    return Poset(names, {(a, b) for a in names for b in names
                         if a != b and all(x <= y for x, y in zip(a, b))})


def workloads():
    P4 = A.poset4()
    cube = encode_poset(boolean(3))
    square = encode_poset(boolean(2))
    leq = P4.leq_array
    op = [[P4.oplus(p, q) for q in range(P4.n)] for p in range(P4.n)]
    inv = [P4.inv(p) for p in range(P4.n)]
    crt = X.crt_space(60)
    crt_masks = [m for m, _ in distinct_balls(crt)]
    L = boolean(3)
    maps = [tuple(L.elements.index(f[x]) for x in L.elements) for f in X.monotone_maps(L)]
    v5 = encode_poset(Poset("abcde", {("a", "c"), ("b", "c"), ("c", "d"), ("c", "e")}))
    return {
        "triangle 2^3": lambda: kernels.triangle_violation(cube.table, op, leq),
        "strong forms 2^3": lambda: kernels.enum_forms(cube.table, op, leq, inv, True, 10**6),
        "self-maps 2^2": lambda: kernels.enum_maps(square.table, square.table, leq,
                                                   [-1] * 4, 10**6),
        "2-Helly Z_60": lambda: kernels.helly2_violation(crt_masks, crt.n, None),
        "commuting 2^3": lambda: kernels.commuting_check(maps),
        "holes 5-poset": lambda: M.holes(v5),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = kernels.available()
    before = kernels.backend()
    print(f"{'workload':<20}" + "".join(f"{b:>12}" for b in backends) + "     speedup")
    for name, fn in workloads().items():
        times = []
        for b in backends:
            kernels.use_backend(b)
            times.append(min(timeit.repeat(fn, number=1, repeat=args.repeat)))
        row = f"{name:<20}" + "".join(f"{t * 1e3:10.1f}ms" for t in times)
        if len(times) == 2 and times[1] > 0:
            row += f"  {times[0] / times[1]:8.1f}x"
        print(row)
    kernels.use_backend(before)


if __name__ == "__main__":
    main()
