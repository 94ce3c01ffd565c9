"""Compiled vs pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--seed 0]

Times the posted-price purchase loop on a large market and the batched
rank matching used by the matching-concentration Monte Carlo, checks that
both backends agree, and prints the speed-up.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from allowance_auctions._kernels import backends
from allowance_auctions.generators import mixed_allowances, sorted_ctrs
from allowance_auctions.rng import make_rng


def _best_of(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def purchase_case(rng, n=4000, k=200):
    values = rng.uniform(1.0, 2.0, size=n)
    ctrs = sorted_ctrs(k, rng, 0.3)
    allowances = mixed_allowances(values, ctrs[0], rng)
    prices = 0.5 * np.sort(rng.uniform(1.0, 2.0, size=k))[::-1]
    order = np.arange(n)
    return lambda mod: mod.sequential_purchase(order, values, allowances, prices, ctrs)


def matching_case(rng, rows=20_000, ell=200):
    w = np.sort(rng.uniform(0.5, 1.0, size=ell))[::-1]
    masks = rng.integers(0, 2, size=(rows, ell), dtype=np.uint8)
    return lambda mod: mod.batch_rank_matching(w, masks)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    mods = backends()
    if "compiled" not in mods:
        print("compiled extension not built; only the fallback is available")
    rng = make_rng(args.seed)
    cases = {"sequential_purchase": purchase_case(rng), "batch_rank_matching": matching_case(rng)}
    print(f"{'kernel':<22}{'backend':<10}{'seconds':>12}{'speedup':>10}")
    for name, case in cases.items():
        times, results = {}, {}
        for backend, mod in mods.items():
            times[backend], results[backend] = _best_of(lambda: case(mod), args.repeat)
        if "compiled" in results:
            a, b = results["python"], results["compiled"]
            same = all(np.allclose(x, y) for x, y in zip(a, b)) if isinstance(a, tuple) \
                else np.allclose(a, b)
            if not same:
                raise SystemExit(f"{name}: backends disagree")
        for backend, t in times.items():
            speed = times["python"] / t
            print(f"{name:<22}{backend:<10}{t:>12.5f}{speed:>9.1f}x")


if __name__ == "__main__":
    main()
