"""Compiled vs pure-Python kernels on a recorded workload.

The workload (evaluation plus vectorized hom search over corpus modules) is
run once with the kernel entry points wrapped, so every call and its
arguments are captured.  Each captured call is then replayed against every
available implementation.

    python3 benchmarks/bench_kernels.py --formulas 30 --repeat 3
"""
import argparse
import random
import time

import numpy as np

from ppbass import kernels
from ppbass.corpus import corpus_modules, corpus_rings
from ppbass.modules import Submodule, hom_search_many, is_direct_summand
from ppbass.pp import _EVAL_CACHE, evaluate, free_realization, random_formula

NAMES = ("span_mask", "search", "search_batch")


def record(nformulas, seed):
    calls = {name: [] for name in NAMES}
    saved = {name: getattr(kernels, name) for name in NAMES}

    def wrap(name):
        def run(*args):
            calls[name].append(args)
            return saved[name](*args)
        return run

    for name in NAMES:
        setattr(kernels, name, wrap(name))
    try:
        rings = [r for n, r in corpus_rings() if n != "UT2(F2)"]
        rng = random.Random(seed)
        for f in range(nformulas):
            R = rings[f % len(rings)]
            phi = random_formula(R, rng)
            C, abar = free_realization(phi)
            for M in corpus_modules(R):
                _EVAL_CACHE.clear()
                evaluate(phi, M)
                s = M.size
                codes = np.arange(s ** phi.arity)
                tg = np.stack([(codes // s ** i) % s for i in range(phi.arity)], axis=1)
                hom_search_many(C, abar, M, tg)
                for c in range(0, M.size, max(1, M.size // 4)):
                    is_direct_summand(Submodule(M, [M.element(c)]), M)
    finally:
        for name in NAMES:
            setattr(kernels, name, saved[name])
    return calls


def replay(impl, calls, repeat):
    out = {}
    for name, arglist in calls.items():
        if not arglist:
            continue
        fn = getattr(impl, name)
        best = None
        for _ in range(repeat):
            t0 = time.perf_counter()
            for args in arglist:
                fn(*args)
            dt = time.perf_counter() - t0
            best = dt if best is None else min(best, dt)
        out[name] = best
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--formulas", type=int, default=30)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    calls = record(args.formulas, args.seed)
    print("recorded calls: " + ", ".join(f"{k} {len(v)}" for k, v in calls.items()))
    times = {label: replay(impl, calls, args.repeat) for label, impl in kernels.IMPLEMENTATIONS.items()}
    print(f"{'kernel':14s}" + "".join(f"{label:>12s}" for label in times) + "     speedup")
    for name in NAMES:
        if name not in times["python"]:
            continue
        row = [times[label][name] for label in times]
        line = f"{name:14s}" + "".join(f"{t:11.4f}s" for t in row)
        if "compiled" in times:
            line += f"  {times['python'][name] / max(times['compiled'][name], 1e-9):9.1f}x"
        print(line)
    if "compiled" not in times:
        print("compiled extension not available; only the fallback was timed")


if __name__ == "__main__":
    main()
