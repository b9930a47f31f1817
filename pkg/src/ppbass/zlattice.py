"""Subgroups of finite abelian groups Z/d_0 x ... x Z/d_{t-1} via Hermite form.

Every lattice handled here contains ``E * Z^t`` with ``E = lcm(d_i)``, so all
arithmetic is reduced modulo ``E`` and entries never grow.
"""
from math import gcd

import numpy as np


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


class SubgroupLattice:
    """Preimage in Z^t of a subgroup of prod Z/radices, kept in row echelon form."""

    def __init__(self, radices):
        self.radices = [int(d) for d in radices]
        E = 1
        for d in self.radices:
            E = E * d // gcd(E, d)
        self.E = E
        t = len(self.radices)
        self.rows = [[0] * t for _ in range(t)]
        for c in range(t):
            self.rows[c][c] = E
        for c, d in enumerate(self.radices):
            v = [0] * t
            v[c] = d
            self.add(v)

    def add(self, v):
        E = self.E
        v = [int(x) % E for x in v]
        for c in range(len(v)):
            a = v[c]
            if a == 0:
                continue
            h = self.rows[c]
            p = h[c]
            g, x, y = _xgcd(p, a)
            pg, ag = p // g, a // g
            new_h = [(x * hc + y * vc) % E for hc, vc in zip(h, v)]
            new_v = [(ag * hc - pg * vc) % E for hc, vc in zip(h, v)]
            new_h[c] = g
            new_v[c] = 0
            self.rows[c] = new_h
            v = new_v

    def contains(self, v):
        E = self.E
        v = [int(x) % E for x in v]
        for c in range(len(v)):
            a = v[c]
            if a == 0:
                continue
            h = self.rows[c]
            p = h[c]
            if a % p:
                return False
            q = a // p
            v = [(vc - q * hc) % E for vc, hc in zip(v, h)]
        return True

    def contains_many(self, V):
        """Row-wise membership for an integer array of shape (m, t)."""
        E = self.E
        V = np.asarray(V, dtype=np.int64) % E
        ok = np.ones(V.shape[0], dtype=bool)
        for c in range(len(self.radices)):
            h = np.asarray(self.rows[c], dtype=np.int64)
            p = int(h[c])
            a = V[:, c]
            ok &= a % p == 0
            V = (V - np.outer(a // p, h)) % E
        return ok

    def order(self):
        """Size of the subgroup: |L / diag(radices) Z^t|."""
        total = 1
        for d in self.radices:
            total *= d
        det = 1
        for c in range(len(self.radices)):
            det *= self.rows[c][c]
        return total // det
