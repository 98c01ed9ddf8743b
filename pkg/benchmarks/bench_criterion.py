"""Compare the compiled and pure-Python criterion kernels.

Run with ``python benchmarks/bench_criterion.py [--sizes 1000 10000 100000]``.
Times are the best of ``--repeat`` runs of the kernel call alone; graph
construction is excluded.
"""

from __future__ import annotations

import argparse
import random
import timeit

from starnet.criterion import kernel
from starnet.linking import identity, proof_graph, switched_tensors
from starnet.randgen import random_linking
from starnet.shape import right_comb


def best(fn, repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def bench_contract(sizes: list[int], repeat: int) -> None:
    print(f"{'leaves':>8} {'cython s':>10} {'python s':>10} {'speedup':>8}")
    for n in sizes:
        arrays = proof_graph(identity(right_comb(["a"] * n))).arrays()
        cy = best(lambda: kernel("cython").contract(*arrays), repeat)
        py = best(lambda: kernel("python").contract(*arrays), repeat)
        print(f"{n:>8} {cy:>10.4f} {py:>10.4f} {py / cy:>8.1f}")


def bench_random(count: int, repeat: int) -> None:
    rng = random.Random(0)
    graphs = [proof_graph(random_linking(rng, 12)).arrays() for _ in range(count)]
    for name in ("contract", "bruteforce"):
        sub = graphs
        if name == "bruteforce":
            rng2 = random.Random(1)
            fs = [random_linking(rng2, 12) for _ in range(count)]
            sub = [proof_graph(f).arrays() for f in fs if len(switched_tensors(f)) <= 12]
        cy = best(lambda: [getattr(kernel("cython"), name)(*a) for a in sub], repeat)
        py = best(lambda: [getattr(kernel("python"), name)(*a) for a in sub], repeat)
        print(f"{name:>10} x{len(sub):<5} cython {cy:.4f}s  python {py:.4f}s  speedup {py / cy:.1f}")


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[1_000, 10_000, 100_000])
    p.add_argument("--random", type=int, default=500, help="number of random linkings")
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    print("contraction on identity right combs")
    bench_contract(args.sizes, args.repeat)
    print("\nrandom linkings with up to 12 leaves per side")
    bench_random(args.random, args.repeat)


if __name__ == "__main__":
    main()
