"""Finitely presented left modules R^m / (left submodule generated by rows).

Elements are handled as representative vectors (tuples of ring elements of
length m).  Finite modules also number their elements: the additive group is
put in the form Z/d_0 x ... x Z/d_{t-1} (``radices``) and every element gets
a mixed-radix *code*, lowest digit first.  Code 0 is the zero element.
"""
import itertools
import json
from functools import cached_property, lru_cache

import numpy as np

from . import caps, kernels
from .errors import CapExceeded, InternalError, ParseError, PreconditionError
from .rings import Ring, _weights, construct_ring
from .snf import smith_normal_form


class FpModule:
    """``R^m`` modulo the left submodule generated by ``rels``."""

    def __init__(self, ring, ngens, rels=()):
        if not isinstance(ring, Ring):
            raise TypeError("ring must be a Ring")
        if not ring.finite and not ring.euclidean:
            raise PreconditionError("modules need a finite or Euclidean ring")
        if ngens < 0:
            raise PreconditionError("generator count must be non-negative")
        rows = []
        for row in rels:
            row = tuple(ring.coerce(a) for a in row)
            if len(row) != ngens:
                raise PreconditionError(f"relation {row!r} has length {len(row)}, expected {ngens}")
            rows.append(row)
        self.ring = ring
        self.ngens = ngens
        self.rels = tuple(rows)
        self._act_cache = {}
        self._pre_cache = {}

    # -- identity

    def __eq__(self, other):
        return (isinstance(other, FpModule) and self.ngens == other.ngens
                and self.rels == other.rels and self.ring == other.ring)

    @cached_property
    def _hash(self):
        return hash((self.ring, self.ngens, self.rels))

    def __hash__(self):
        return self._hash

    def __repr__(self):
        R = self.ring
        rels = "; ".join(",".join(R.fmt(a) for a in row) for row in self.rels)
        return f"FpModule({R!r}, {self.ngens}, [{rels}])"

    # -- structure

    @cached_property
    def _structure(self):
        if self.ring.finite:
            return _FiniteRingStructure(self)
        return _EuclideanStructure(self)

    @property
    def finite(self):
        return self._structure.finite

    @property
    def size(self):
        """Number of elements, or ``None`` for infinite modules."""
        return self._structure.size if self._structure.finite else None

    @property
    def radices(self):
        return self._structure.radices

    def invariants(self):
        """Canonical invariants: nontrivial cyclic orders (d_i) for Euclidean
        rings, with 0 for each free summand; radices for finite rings."""
        return self._structure.invariants()

    def zero(self):
        return self.ring.vzero(self.ngens)

    def gen(self, i):
        return self.ring.vbasis(self.ngens, i)

    def gens(self):
        return [self.gen(i) for i in range(self.ngens)]

    # -- element arithmetic on representatives

    def add(self, u, v):
        return self.ring.vadd(u, v)

    def smul(self, r, u):
        return self.ring.vsmul(r, u)

    def combine(self, coeffs, vectors):
        return self.ring.lincomb(coeffs, vectors, self.ngens)

    def canonical(self, u):
        """Canonical form of an element; equal iff the elements are equal."""
        if self.finite:
            return self.to_code(u)
        return self._structure.canonical(u)

    def is_zero(self, u):
        if self.finite:
            return self.to_code(u) == 0
        return self._structure.is_zero(u)

    def eq(self, u, v):
        return self.is_zero(self.ring.vsub(u, v))

    # -- finite-module numbering

    def _require_finite(self):
        if not self.finite:
            raise PreconditionError(f"{self!r} is infinite")

    def _require_enumerable(self):
        self._require_finite()
        if self.size > caps.get("enum"):
            raise CapExceeded("module enumeration", self.size, caps.get("enum"))

    def elements(self):
        self._require_finite()
        return range(self.size)

    def to_code(self, u):
        if isinstance(u, (int, np.integer)):
            return int(u)
        self._require_finite()
        return int(self._structure.codes([tuple(u)])[0])

    def to_codes(self, vectors):
        self._require_finite()
        return self._structure.codes([tuple(v) for v in vectors])

    def element(self, code):
        """Canonical representative vector of the element with this code."""
        self._require_finite()
        return self._structure.lift(self.code_digits(code))

    def code_digits(self, code):
        code, out = int(code), []
        for d in self.radices:
            out.append(code % d)
            code //= d
        return np.asarray(out, dtype=np.int64)

    def coords(self, vectors):
        """Digit vectors (one row per element) of representative vectors."""
        self._require_finite()
        return self._structure.coords([tuple(v) for v in vectors])

    @cached_property
    def weights(self):
        return _weights(self.radices)

    @cached_property
    def digits(self):
        """``digits[c]`` = coordinates of the element with code c."""
        self._require_enumerable()
        size = self.size
        rad = np.asarray(self.radices, dtype=np.int64)
        codes = np.arange(size, dtype=np.int64)
        out = np.empty((size, len(rad)), dtype=np.int64)
        for i, d in enumerate(rad):
            out[:, i] = codes % d
            codes //= d
        return out

    def encode(self, digits):
        return np.asarray(digits, dtype=np.int64) @ self.weights

    def act_matrix(self, r):
        """Integer matrix of ``x -> r x`` on coordinates (row i = image of e_i)."""
        return self._structure.act_matrix(r)

    def act_codes(self, r):
        """Array ``a`` with ``a[c]`` = code of ``r * element(c)``."""
        cached = self._act_cache.get(r)
        if cached is None:
            A = self.act_matrix(r)
            rad = np.asarray(self.radices, dtype=np.int64)
            cached = ((self.digits @ A) % rad) @ self.weights if len(rad) else np.zeros(self.size, dtype=np.int64)
            cached = cached.astype(np.int64)
            self._act_cache[r] = cached
        return cached

    def preimages(self, r):
        """CSR form of the fibres of :meth:`act_codes`: ``(order, start)``."""
        cached = self._pre_cache.get(r)
        if cached is None:
            a = self.act_codes(r)
            order = np.argsort(a, kind="stable").astype(np.int64)
            start = np.searchsorted(a[order], np.arange(self.size + 1)).astype(np.int64)
            cached = (order, start)
            self._pre_cache[r] = cached
        return cached

    def add_codes(self, a, b):
        rad = np.asarray(self.radices, dtype=np.int64)
        return ((self.digits[a] + self.digits[b]) % rad) @ self.weights

    def neg_codes(self, a):
        rad = np.asarray(self.radices, dtype=np.int64)
        return ((-self.digits[a]) % rad) @ self.weights

    @cached_property
    def neg_table(self):
        return self.neg_codes(np.arange(self.size)).astype(np.int64)

    # -- serialization

    def to_spec(self):
        R = self.ring
        return {
            "ring": R.to_spec(),
            "gens": self.ngens,
            "rels": [[R.elem_to_json(a) for a in row] for row in self.rels],
        }


class _FiniteRingStructure:
    """Coordinates for modules over finite rings via an integer Smith form."""

    finite = True

    def __init__(self, M):
        R = M.ring
        add = R.additive
        m, s = M.ngens, add.rank
        T = m * s
        c = list(add.orders) * m
        rows = []
        for j in range(T):
            v = [0] * T
            v[j] = c[j]
            rows.append(v)
        coordR = add.coords
        for rho in M.rels:
            for beta in add.basis:
                v = []
                for a in rho:
                    v.extend(int(x) for x in coordR[R.mul(beta, a)])
                if any(v):
                    rows.append(v)
        if T:
            _, D, V, Vinv = smith_normal_form(_int_ring(), rows, T, with_inverse=True)
            diag = [abs(D[i][i]) for i in range(T)]
        else:
            diag, V, Vinv = [], [], []
        keep = [i for i in range(T) if diag[i] != 1]
        self.radices = [diag[i] for i in keep]
        size = 1
        for d in self.radices:
            size *= d
        self.size = size
        rad = np.asarray(self.radices, dtype=np.int64)
        cvec = np.asarray(c, dtype=np.int64)
        self.V = (np.asarray([[V[j][i] for i in keep] for j in range(T)], dtype=object) % rad).astype(np.int64) \
            if keep else np.zeros((T, 0), dtype=np.int64)
        self.Vinv = (np.asarray([Vinv[i] for i in keep], dtype=object) % cvec).astype(np.int64) \
            if keep else np.zeros((0, T), dtype=np.int64)
        self.rad = rad
        self.cvec = cvec
        self.M = M
        self.R = R
        self.s = s
        self.add = add
        self._act = {}

    def invariants(self):
        return list(self.radices)

    def _ambient_coords(self, vectors):
        coordR = self.add.coords
        arr = np.asarray(vectors, dtype=np.int64).reshape(len(vectors), self.M.ngens)
        return coordR[arr].reshape(len(vectors), -1)

    def coords(self, vectors):
        if not len(vectors):
            return np.zeros((0, len(self.radices)), dtype=np.int64)
        return (self._ambient_coords(vectors) @ self.V) % self.rad

    def codes(self, vectors):
        if not self.radices:
            return np.zeros(len(vectors), dtype=np.int64)
        return self.coords(vectors) @ self.M.weights

    def lift(self, digits):
        digits = np.asarray(digits, dtype=np.int64)
        amb = (digits @ self.Vinv) % self.cvec if len(self.radices) else np.zeros(len(self.cvec), dtype=np.int64)
        s = self.s
        return tuple(int(self.add.from_coords(amb[j * s:(j + 1) * s])) if s else self.R.zero
                     for j in range(self.M.ngens))

    def act_matrix(self, r):
        A = self._act.get(r)
        if A is None:
            t = len(self.radices)
            if t == 0:
                A = np.zeros((0, 0), dtype=np.int64)
            else:
                basis = [self.lift(np.eye(t, dtype=np.int64)[i]) for i in range(t)]
                images = [self.R.vsmul(r, b) for b in basis]
                A = self.coords(images)
            self._act[r] = A
        return A


class _EuclideanStructure:
    """Smith-form coordinates for modules over Z or F_p[x]."""

    def __init__(self, M):
        R = M.ring
        m = M.ngens
        U, D, V, Vinv = smith_normal_form(R, [list(r) for r in M.rels], m, with_inverse=True)
        diag = [D[i][i] if i < len(D) else R.zero for i in range(m)]
        self.R = R
        self.M = M
        self.V = V
        self.Vinv = Vinv
        self.diag = diag
        self.comps = [i for i in range(m) if not R.is_unit(diag[i])]
        self.finite = all(not R.is_zero(diag[i]) for i in self.comps)
        self.poly = not isinstance(R.zero, int)
        # digit layout of the finite part
        self.layout = []
        radices = []
        for i in self.comps:
            d = diag[i]
            if R.is_zero(d):
                continue
            if self.poly:
                width = R.degree(d)
                self.layout.append((i, len(radices), width))
                radices.extend([R.p] * width)
            else:
                self.layout.append((i, len(radices), 1))
                radices.append(d)
        self.radices = radices if self.finite else []
        size = 1
        for d in radices:
            size *= d
        self.size = size
        self._act = {}

    def invariants(self):
        R = self.R
        return [self.diag[i] for i in self.comps]

    def _transform(self, u):
        R = self.R
        return [_dot(R, u, [row[j] for row in self.V]) for j in range(self.M.ngens)]

    def canonical(self, u):
        R = self.R
        w = self._transform(u)
        out = []
        for i in self.comps:
            d = self.diag[i]
            out.append(w[i] if R.is_zero(d) else R.divmod(w[i], d)[1])
        return tuple(out)

    def is_zero(self, u):
        return all(self.R.is_zero(x) for x in self.canonical(u))

    def coords(self, vectors):
        R = self.R
        out = np.zeros((len(vectors), len(self.radices)), dtype=np.int64)
        for k, u in enumerate(vectors):
            w = self._transform(u)
            for i, off, width in self.layout:
                rem = R.divmod(w[i], self.diag[i])[1]
                if self.poly:
                    for e, cf in enumerate(rem):
                        out[k, off + e] = cf
                else:
                    out[k, off] = rem
        return out

    def codes(self, vectors):
        if not self.radices:
            return np.zeros(len(vectors), dtype=np.int64)
        return self.coords(vectors) @ self.M.weights

    def lift(self, digits):
        R = self.R
        m = self.M.ngens
        w = [R.zero] * m
        for i, off, width in self.layout:
            if self.poly:
                w[i] = R.make(int(x) for x in digits[off:off + width])
            else:
                w[i] = int(digits[off])
        return tuple(_dot(R, w, [row[j] for row in self.Vinv]) for j in range(m))

    def act_matrix(self, r):
        A = self._act.get(r)
        if A is None:
            R = self.R
            t = len(self.radices)
            A = np.zeros((t, t), dtype=np.int64)
            for i, off, width in self.layout:
                d = self.diag[i]
                for e in range(width):
                    basis = R.x_power(e) if self.poly else 1
                    img = R.divmod(R.mul(r, basis), d)[1]
                    if self.poly:
                        for k, cf in enumerate(img):
                            A[off + e, off + k] = cf
                    else:
                        A[off, off] = img
            self._act[r] = A
        return A


def _dot(R, u, v):
    acc = R.zero
    for a, b in zip(u, v):
        if not R.is_zero(a) and not R.is_zero(b):
            acc = R.add(acc, R.mul(a, b))
    return acc


@lru_cache(maxsize=None)
def _int_ring():
    from .rings import INTEGERS
    return INTEGERS


# ---------------------------------------------------------------------------
# construction


def present_module(ring, ngens, rels=()):
    """Validated module ``R^ngens / <rels>``; finite ones must fit the enumeration cap."""
    M = FpModule(ring, ngens, rels)
    if M.finite:
        M._require_enumerable()
    return M


def module_from_spec(spec):
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(spec, dict) or "ring" not in spec or "gens" not in spec:
        raise ParseError("module spec must be an object with 'ring' and 'gens'")
    R = construct_ring(spec["ring"])
    m = spec["gens"]
    if not isinstance(m, int) or isinstance(m, bool) or m < 0:
        raise ParseError(f"'gens' must be a non-negative integer, got {m!r}", path="gens")
    rels = spec.get("rels", [])
    if not isinstance(rels, list):
        raise ParseError("'rels' must be a list of rows", path="rels")
    rows = []
    for k, row in enumerate(rels):
        if not isinstance(row, list) or len(row) != m:
            raise ParseError(f"relation {k} must be a list of {m} ring elements", path=f"rels[{k}]")
        rows.append(tuple(R.elem_from_json(x) for x in row))
    return present_module(R, m, rows)


def cyclic(ring, *rels):
    """R / (left ideal generated by ``rels``)."""
    return present_module(ring, 1, [(r,) for r in rels])


def free_module(ring, m):
    return present_module(ring, m, ())


def direct_sum(A, B):
    """Block presentation of A (+) B; generators of A come first."""
    if A.ring != B.ring:
        raise PreconditionError("direct sum of modules over different rings")
    R = A.ring
    zb, za = R.vzero(B.ngens), R.vzero(A.ngens)
    rels = [tuple(r) + zb for r in A.rels] + [za + tuple(r) for r in B.rels]
    return present_module(R, A.ngens + B.ngens, rels)


def direct_power(M, k):
    out = present_module(M.ring, 0, ())
    for _ in range(k):
        out = direct_sum(out, M)
    return out


def injections(A, B, S=None):
    """Canonical injections A -> A (+) B and B -> A (+) B."""
    S = S or direct_sum(A, B)
    R = A.ring
    ia = ModHom(A, S, [S.gen(i) for i in range(A.ngens)])
    ib = ModHom(B, S, [S.gen(A.ngens + j) for j in range(B.ngens)])
    return ia, ib


# ---------------------------------------------------------------------------
# homomorphisms


class ModHom:
    """Homomorphism given by the images of the source generators."""

    def __init__(self, source, target, images, check=True):
        if len(images) != source.ngens:
            raise PreconditionError("one image per source generator is required")
        self.source = source
        self.target = target
        self.images = [tuple(target.element(x) if isinstance(x, (int, np.integer)) else x)
                       for x in images]
        if check:
            for row in source.rels:
                if not target.is_zero(self(row)):
                    raise InternalError(f"relation {row!r} does not map to zero")

    def __call__(self, u):
        """Image of the element with representative vector ``u``."""
        if isinstance(u, (int, np.integer)):
            u = self.source.element(u)
        return self.target.combine(u, self.images)

    def compose(self, other):
        """``other`` after ``self``."""
        return ModHom(self.source, other.target, [other(v) for v in self.images], check=False)

    def __repr__(self):
        return f"ModHom({self.source!r} -> {self.target!r}, {self.images!r})"


# ---------------------------------------------------------------------------
# linear systems


class _SearchPlan:
    """Precomputed tables for solving ``rows * y = rhs`` in a finite module."""

    def __init__(self, M, rows, m):
        R = M.ring
        coeffs = sorted({a for row in rows for a in row if not R.is_zero(a)}, key=repr)
        index = {a: k for k, a in enumerate(coeffs)}
        r = len(rows)
        coef = np.full((r, m), -1, dtype=np.int64)
        for i, row in enumerate(rows):
            for j, a in enumerate(row):
                if not R.is_zero(a):
                    coef[i, j] = index[a]
        s = M.size
        if coeffs:
            self.act = np.stack([M.act_codes(a) for a in coeffs])
            pres = [M.preimages(a) for a in coeffs]
            self.pre_order = np.stack([p[0] for p in pres])
            self.pre_start = np.stack([p[1] for p in pres])
        else:
            self.act = np.zeros((0, s), dtype=np.int64)
            self.pre_order = np.zeros((0, s), dtype=np.int64)
            self.pre_start = np.zeros((0, s + 1), dtype=np.int64)
        ends = [[] for _ in range(m)]
        self.empty_rows = []
        for i in range(r):
            nz = np.flatnonzero(coef[i] >= 0)
            if len(nz):
                ends[int(nz[-1])].append(i)
            else:
                self.empty_rows.append(i)
        self.end_start = np.asarray([0] + list(itertools.accumulate(len(e) for e in ends)), dtype=np.int64)
        self.end_list = np.asarray([i for e in ends for i in e], dtype=np.int64)
        self.coef = coef
        self.m = m
        self.M = M
        self.digits = M.digits
        self.radices = np.asarray(M.radices, dtype=np.int64)
        self.neg = M.neg_table

    def run(self, rhs_codes, allowed=None):
        M = self.M
        for i in self.empty_rows:
            if rhs_codes[i] != 0:
                return None
        if allowed is None:
            allowed = np.ones(M.size, dtype=np.uint8)
        cap = caps.get("search")
        status, sol, nodes = kernels.search(
            self.coef, self.act, self.pre_order, self.pre_start,
            np.asarray(rhs_codes, dtype=np.int64), self.digits, self.radices, self.neg,
            np.asarray(allowed, dtype=np.uint8), self.end_start, self.end_list, cap)
        if status < 0:
            raise CapExceeded("linear-system search nodes", nodes, cap)
        if status == 0:
            return None
        return [int(x) for x in sol]


    def run_batch(self, rhs_rows, allowed=None):
        """Statuses (1 found, 0 none) and solutions for many right-hand sides."""
        M = self.M
        rhs_rows = np.asarray(rhs_rows, dtype=np.int64).reshape(-1, len(self.coef))
        if allowed is None:
            allowed = np.ones(M.size, dtype=np.uint8)
        cap = caps.get("search")
        status, sols, nodes = kernels.search_batch(
            self.coef, self.act, self.pre_order, self.pre_start, rhs_rows, self.digits,
            self.radices, self.neg, np.asarray(allowed, dtype=np.uint8),
            self.end_start, self.end_list, cap)
        if (status < 0).any():
            raise CapExceeded("linear-system search nodes", int(nodes.max()), cap)
        for i in self.empty_rows:
            status[rhs_rows[:, i] != 0] = 0
        return status, sols


_PLANS = {}


def _plan(M, rows, m):
    key = (M, m, tuple(tuple(r) for r in rows))
    plan = _PLANS.get(key)
    if plan is None:
        plan = _SearchPlan(M, [tuple(r) for r in rows], m)
        if len(_PLANS) > 4096:
            _PLANS.clear()
        _PLANS[key] = plan
    return plan


def solve_linear(M, A, b, allowed=None, nvars=None):
    """A tuple y of M-elements with ``A y = b``, or ``None`` when there is none.

    ``A`` is a list of rows of ring elements, ``b`` a list of M-elements
    (vectors, or codes for finite modules).  Finite rings: bounded search in
    ascending code order with fibre pruning, so the first solution in that
    order is returned as codes' representative vectors.  Euclidean rings:
    Smith form of the lifted system.  ``allowed`` optionally restricts the
    unknowns to a mask of codes (finite modules only).
    """
    if len(A) != len(b):
        raise PreconditionError("one right-hand side per equation is required")
    if nvars is None:
        if not A:
            raise PreconditionError("nvars is needed for an empty system")
        nvars = len(A[0])
    if M.ring.finite:
        codes = _solve_codes(M, A, b, nvars, allowed)
        return None if codes is None else [M.element(c) for c in codes]
    if allowed is not None:
        raise PreconditionError("restricted solving needs a finite ring")
    return _solve_euclidean(M, A, [tuple(x) for x in b], nvars)


def _solve_codes(M, A, b, m, allowed=None):
    rhs = [M.to_code(x) for x in b]
    return _plan(M, A, m).run(rhs, allowed)


def _solve_euclidean(M, A, b, m):
    R = M.ring
    r = len(A)
    mp = M.ngens
    Q = M.rels
    nY, nZ = m * mp, r * len(Q)
    mat, rhs = [], []
    for i in range(r):
        for c in range(mp):
            row = [R.zero] * (nY + nZ)
            for j in range(m):
                row[j * mp + c] = A[i][j]
            for l, q in enumerate(Q):
                row[nY + i * len(Q) + l] = R.neg(q[c])
            mat.append(row)
            rhs.append(b[i][c])
    x = solve_over_ring(R, mat, rhs, nY + nZ)
    if x is None:
        return None
    return [tuple(x[j * mp + c] for c in range(mp)) for j in range(m)]


def solve_over_ring(R, mat, rhs, ncols):
    """Solve ``mat x = rhs`` over a Euclidean ring via Smith form."""
    if not mat:
        return [R.zero] * ncols
    U, D, V = smith_normal_form(R, mat, ncols)
    c = [_dot(R, U[i], rhs) for i in range(len(mat))]
    w = [R.zero] * ncols
    for i in range(len(mat)):
        d = D[i][i] if i < ncols else R.zero
        if R.is_zero(d):
            if not R.is_zero(c[i]):
                return None
        else:
            q, rem = R.divmod(c[i], d)
            if not R.is_zero(rem):
                return None
            w[i] = q
    return [_dot(R, V[j], w) for j in range(ncols)]


def hom_search(A, abar, B, bbar):
    """A homomorphism ``(A, abar) -> (B, bbar)``, or ``None``."""
    if len(abar) != len(bbar):
        raise PreconditionError("tuples must have equal length")
    if A.ring != B.ring:
        raise PreconditionError("modules over different rings")
    R = A.ring
    rows = list(A.rels) + [tuple(a) for a in abar]
    rhs = [B.zero() if not B.finite else 0 for _ in A.rels] + list(bbar)
    if B.finite and R.finite:
        codes = _solve_codes(B, rows, rhs, A.ngens)
        if codes is None:
            return None
        images = [B.element(c) for c in codes]
    else:
        rhs = [B.element(x) if isinstance(x, (int, np.integer)) else tuple(x) for x in rhs]
        images = solve_linear(B, rows, rhs, nvars=A.ngens)
        if images is None:
            return None
    h = ModHom(A, B, images)
    for a, bb in zip(abar, bbar):
        bb = B.element(bb) if isinstance(bb, (int, np.integer)) else bb
        if not B.eq(h(a), bb):
            raise InternalError("hom_search produced a map missing the tuple constraint")
    return h


def hom_search_many(A, abar, B, targets):
    """Vectorized :func:`hom_search` for finite B: one boolean per target tuple.

    ``targets`` is an array of shape (count, len(abar)) of element codes of B.
    Returns ``(found, images)`` where ``images[i]`` lists generator image codes.
    """
    B._require_finite()
    if A.ring != B.ring:
        raise PreconditionError("modules over different rings")
    rows = list(A.rels) + [tuple(a) for a in abar]
    targets = np.asarray(targets, dtype=np.int64).reshape(-1, len(abar))
    rhs = np.zeros((len(targets), len(rows)), dtype=np.int64)
    rhs[:, len(A.rels):] = targets
    status, sols = _plan(B, rows, A.ngens).run_batch(rhs)
    return status == 1, sols


def iter_homs(A, B, abar=(), bbar=(), allowed=None, cap=None):
    """All homomorphisms A -> B (finite B) sending abar to bbar, as image codes."""
    B._require_finite()
    if A.ring != B.ring:
        raise PreconditionError("modules over different rings")
    rows = list(A.rels) + [tuple(a) for a in abar]
    rhs = [0] * len(A.rels) + [B.to_code(x) for x in bbar]
    plan = _plan(B, rows, A.ngens)
    for i in plan.empty_rows:
        if rhs[i]:
            return
    cap = cap or caps.get("search")
    m = A.ngens
    act, coef = plan.act, plan.coef
    s = B.size
    mask = np.ones(s, dtype=bool) if allowed is None else np.asarray(allowed, dtype=bool)
    ends = [plan.end_list[plan.end_start[d]:plan.end_start[d + 1]].tolist() for d in range(m)]
    add, neg = B.add_codes, B.neg_table
    nodes = 0

    def rec(d, partial, sol):
        nonlocal nodes
        if d == m:
            yield list(sol)
            return
        targets = {e: int(add(rhs[e], neg[partial[e]])) for e in ends[d]}
        if ends[d]:
            e0 = ends[d][0]
            order, start = plan.pre_order[coef[e0, d]], plan.pre_start[coef[e0, d]]
            pool = order[start[targets[e0]]:start[targets[e0] + 1]]
        else:
            pool = range(s)
        for y in pool:
            y = int(y)
            if not mask[y] or any(act[coef[e, d], y] != targets[e] for e in ends[d][1:]):
                continue
            nodes += 1
            if nodes > cap:
                raise CapExceeded("homomorphism enumeration", nodes, cap)
            nxt = [int(add(partial[i], act[coef[i, d], y])) if coef[i, d] >= 0 else partial[i]
                   for i in range(len(rows))]
            sol.append(y)
            yield from rec(d + 1, nxt, sol)
            sol.pop()

    yield from rec(0, [0] * len(rows), [])


# ---------------------------------------------------------------------------
# submodules of finite modules


def ring_generators(R):
    """Elements whose action, with addition, generates the whole scalar action."""
    if R.finite:
        return list(R.additive.basis)
    if isinstance(R.zero, int):
        return []
    return [R.x_power(1)]


class Submodule:
    """Submodule of a finite module, given by generators (vectors or codes)."""

    def __init__(self, ambient, gens):
        ambient._require_finite()
        self.ambient = ambient
        codes = [ambient.to_code(g) for g in gens]
        ring_gens = ring_generators(ambient.ring)
        additive = []
        mask = _span(ambient, [])
        queue = list(codes)
        while queue:
            c = queue.pop(0)
            if mask[c]:
                continue
            additive.append(c)
            mask = _span(ambient, additive)
            for r in ring_gens:
                queue.append(int(ambient.act_codes(r)[c]))
            # generated elements already absorbed are skipped on pop
        for c in list(additive):
            for r in ring_gens:
                img = int(ambient.act_codes(r)[c])
                if not mask[img]:
                    raise InternalError("submodule closure incomplete")
        self.gens = codes
        self.additive_gens = additive
        self.mask = mask.astype(bool)
        self.codes = np.flatnonzero(self.mask)
        self.size = len(self.codes)

    def __contains__(self, x):
        return bool(self.mask[self.ambient.to_code(x)])

    def minimal_gens(self):
        """Greedy sub-list of the given generators spanning the same submodule."""
        keep = []
        for c in self.gens:
            if keep and Submodule(self.ambient, keep).mask[c]:
                continue
            keep.append(c)
        return keep

    def intersection_size(self, other):
        return int((self.mask & other.mask).sum())


def _span(M, codes):
    t = len(M.radices)
    gens = M.digits[np.asarray(codes, dtype=np.int64)] if codes else np.zeros((0, t), dtype=np.int64)
    return kernels.span_mask(np.ascontiguousarray(gens, dtype=np.int64),
                             np.asarray(M.radices, dtype=np.int64), M.size)


def span_mask(M, codes):
    """Additive subgroup generated by element codes (boolean mask)."""
    return _span(M, list(codes)).astype(bool)


class SummandResult:
    def __init__(self, is_summand, complement=None, projection=None):
        self.is_summand = is_summand
        self.complement = complement
        self.projection = projection

    def __bool__(self):
        return self.is_summand

    def __repr__(self):
        return f"SummandResult({self.is_summand}, complement={self.complement})"


def is_direct_summand(sub_gens, N):
    """Decide whether the submodule generated by ``sub_gens`` is a summand of N.

    Searches for an endomorphism h of N with h(N) inside the submodule and
    h = id on it; the complement is then the image of 1 - h.
    """
    S = sub_gens if isinstance(sub_gens, Submodule) else Submodule(N, sub_gens)
    gens = S.gens
    vecs = [N.element(c) for c in gens]
    rows = list(N.rels) + vecs
    rhs = [0] * len(N.rels) + list(gens)
    codes = _plan(N, rows, N.ngens).run(rhs, allowed=S.mask.astype(np.uint8))
    if codes is None:
        return SummandResult(False)
    h = ModHom(N, N, [N.element(c) for c in codes])
    comp = [N.to_code(N.ring.vsub(N.gen(j), h(N.gen(j)))) for j in range(N.ngens)]
    C = Submodule(N, comp)
    if S.size * C.size != N.size or S.intersection_size(C) != 1:
        raise InternalError("summand complement check failed")
    return SummandResult(True, [N.element(c) for c in C.minimal_gens()], h)


def find_isomorphism(A, B, cap=None):
    """An isomorphism A -> B of finite modules, or ``None`` (exhaustive search)."""
    A._require_finite()
    B._require_finite()
    if A.ring != B.ring:
        raise PreconditionError("modules over different rings")
    if A.size != B.size:
        return None
    for images in iter_homs(A, B, cap=cap):
        if Submodule(B, images).size == B.size:
            return ModHom(A, B, [B.element(c) for c in images])
    return None


def endomorphisms(M, cap=None):
    """Every endomorphism of a finite module (as ModHom), in search order."""
    for images in iter_homs(M, M, cap=cap):
        yield ModHom(M, M, [M.element(c) for c in images], check=False)
