"""Small rings and modules used as a shared test and demonstration corpus."""
import numpy as np

from .modules import cyclic, direct_sum
from .rings import matrix_ring, product_ring, truncated_poly, upper_triangular, zmod

RING_NAMES = ["Z/2", "Z/4", "Z/8", "F2xF2", "F2[x]/(x^2)", "M2(F2)", "UT2(F2)"]

_CACHE = {}


def corpus_ring(name):
    R = _CACHE.get(name)
    if R is None:
        F2 = zmod(2)
        build = {
            "Z/2": lambda: zmod(2),
            "Z/4": lambda: zmod(4),
            "Z/8": lambda: zmod(8),
            "F2xF2": lambda: product_ring(F2, F2, label="F2xF2"),
            "F2[x]/(x^2)": lambda: truncated_poly(2, 2),
            "M2(F2)": lambda: matrix_ring(F2, 2),
            "UT2(F2)": lambda: upper_triangular(F2, 2),
        }
        if name not in build:
            raise KeyError(f"unknown corpus ring {name!r}; choose from {RING_NAMES}")
        R = _CACHE[name] = build[name]()
    return R


def corpus_rings(names=None):
    return [(n, corpus_ring(n)) for n in (names or RING_NAMES)]


def cyclic_modules(R):
    """R / R r, one per distinct principal left ideal R r."""
    seen, out = set(), []
    for r in range(R.size):
        ideal = tuple(np.flatnonzero(np.bincount(R.mul_t[:, r], minlength=R.size)).tolist())
        if ideal in seen:
            continue
        seen.add(ideal)
        out.append(cyclic(R, r))
    return out


def corpus_modules(R, max_size=64, include_zero=False):
    """Cyclic modules and their pairwise direct sums, up to ``max_size`` elements."""
    key = ("modules", R, max_size, include_zero)
    hit = _CACHE.get(key)
    if hit is not None:
        return hit
    cyc = [M for M in cyclic_modules(R) if include_zero or M.size > 1]
    out = [M for M in cyc if M.size <= max_size]
    for i, A in enumerate(cyc):
        for B in cyc[i:]:
            if A.size * B.size <= max_size and A.size > 1 and B.size > 1:
                out.append(direct_sum(A, B))
    _CACHE[key] = out
    return out
