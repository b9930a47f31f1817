"""Coefficient rings: finite table rings and the Euclidean domains Z and F_p[x].

Finite rings number their elements ``0 .. q-1`` and carry full addition and
multiplication tables.  ``zmod(n)`` numbers residues by themselves, so table
arithmetic and modular arithmetic coincide.  Euclidean rings work with
Python ints (Z) or trimmed coefficient tuples, lowest degree first (F_p[x]).
"""
import itertools
import json
from functools import cached_property

import numpy as np

from . import caps
from .errors import AxiomViolation, CapExceeded, ParseError, PreconditionError


class Ring:
    """Common surface of every coefficient ring."""

    finite = False
    euclidean = False
    commutative = False

    # -- element vectors (rows of relation matrices, module representatives)

    def vzero(self, m):
        return tuple(self.zero for _ in range(m))

    def vbasis(self, m, i):
        return tuple(self.one if j == i else self.zero for j in range(m))

    def vadd(self, u, v):
        return tuple(self.add(a, b) for a, b in zip(u, v))

    def vneg(self, u):
        return tuple(self.neg(a) for a in u)

    def vsub(self, u, v):
        return tuple(self.sub(a, b) for a, b in zip(u, v))

    def vsmul(self, r, u):
        """Left scalar multiple ``r * u``."""
        return tuple(self.mul(r, a) for a in u)

    def lincomb(self, coeffs, vectors, m):
        out = self.vzero(m)
        for c, v in zip(coeffs, vectors):
            if not self.is_zero(c):
                out = self.vadd(out, self.vsmul(c, v))
        return out

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def coerce(self, a):
        """Normalize a user-supplied element (residues are reduced for Z/n)."""
        return a

    def is_zero(self, a):
        return a == self.zero

    def power(self, a, e):
        out = self.one
        for _ in range(e):
            out = self.mul(out, a)
        return out

    def __eq__(self, other):
        return isinstance(other, Ring) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    @cached_property
    def _key(self):
        return json.dumps(self.to_spec(), sort_keys=True)


# ---------------------------------------------------------------------------
# finite rings


class FiniteRing(Ring):
    """A finite ring given by addition and multiplication tables."""

    finite = True

    def __init__(self, names, add, mul, zero, one, kind="table", meta=None, check=True):
        q = len(names)
        if q < 1:
            raise ParseError("a ring needs at least one element")
        if q > caps.get("ring"):
            raise CapExceeded("finite ring size", q, caps.get("ring"))
        self.names = [str(n) for n in names]
        if len(set(self.names)) != q:
            raise ParseError("element names must be distinct")
        self.size = q
        self.kind = kind
        self.meta = meta or {}
        self.add_t = np.asarray(add, dtype=np.int64)
        self.mul_t = np.asarray(mul, dtype=np.int64)
        for label, t in (("add", self.add_t), ("mul", self.mul_t)):
            if t.shape != (q, q):
                raise ParseError(f"{label} table must be {q}x{q}, got {t.shape}")
            if t.min() < 0 or t.max() >= q:
                raise ParseError(f"{label} table entries must lie in 0..{q - 1}")
        if not (0 <= zero < q and 0 <= one < q):
            raise ParseError("zero/one index out of range")
        self.zero = int(zero)
        self.one = int(one)
        if check:
            check_ring_axioms(self)
        self._add = self.add_t.tolist()
        self._mul = self.mul_t.tolist()
        neg = np.empty(q, dtype=np.int64)
        for a in range(q):
            neg[a] = int(np.flatnonzero(self.add_t[a] == self.zero)[0])
        self.neg_t = neg
        self._neg = neg.tolist()
        self.commutative = bool((self.mul_t == self.mul_t.T).all())
        self._index = {n: i for i, n in enumerate(self.names)}

    def add(self, a, b):
        return self._add[a][b]

    def mul(self, a, b):
        return self._mul[a][b]

    def neg(self, a):
        return self._neg[a]

    def elements(self):
        return range(self.size)

    def coerce(self, a):
        if isinstance(a, (int, np.integer)) and not isinstance(a, bool):
            a = int(a)
            if self.kind == "zmod":
                return a % self.size
            if 0 <= a < self.size:
                return a
        raise PreconditionError(f"not an element of {self!r}: {a!r}")

    @cached_property
    def unit_mask(self):
        left = self.mul_t == self.one
        both = left & left.T
        return both.any(axis=1)

    def is_unit(self, a):
        return bool(self.unit_mask[a])

    def inverse(self, a):
        """Two-sided inverse of a unit (verified), or ``None``."""
        for s in range(self.size):
            if self._mul[a][s] == self.one and self._mul[s][a] == self.one:
                return s
        return None

    def from_int(self, n):
        """Image of the integer ``n`` under Z -> R."""
        out = self.zero
        step = self.one if n >= 0 else self.neg(self.one)
        for _ in range(abs(n) % self.characteristic):
            out = self.add(out, step)
        return out

    @cached_property
    def characteristic(self):
        k, x = 1, self.one
        while x != self.zero:
            x = self.add(x, self.one)
            k += 1
        return k

    @cached_property
    def additive(self):
        """Cyclic decomposition of (R, +); see :class:`AdditiveStructure`."""
        return AdditiveStructure(self)

    # -- serialization

    def elem_to_json(self, a):
        if self.kind == "zmod":
            return int(a)
        if self.kind == "matrix":
            base, k = self.meta["base"], self.meta["size"]
            entries = self.meta["entries"][a]
            return [[base.elem_to_json(entries[i * k + j]) for j in range(k)] for i in range(k)]
        return self.names[a]

    def elem_from_json(self, x):
        if self.kind == "zmod" and isinstance(x, int) and not isinstance(x, bool):
            return x % self.size
        if self.kind == "matrix" and isinstance(x, list):
            base, k = self.meta["base"], self.meta["size"]
            if len(x) != k or any(not isinstance(r, list) or len(r) != k for r in x):
                raise ParseError(f"expected a {k}x{k} matrix element, got {x!r}")
            key = tuple(base.elem_from_json(e) for row in x for e in row)
            return self.meta["lookup"][key]
        if isinstance(x, str) and x in self._index:
            return self._index[x]
        if isinstance(x, int) and not isinstance(x, bool) and 0 <= x < self.size:
            return x
        raise ParseError(f"not an element of {self}: {x!r}")

    def fmt(self, a):
        return self.names[a]

    def to_spec(self):
        if self.kind == "zmod":
            return {"kind": "zmod", "n": self.size}
        if self.kind == "matrix":
            return {"kind": "matrix", "base": self.meta["base"].to_spec(), "size": self.meta["size"]}
        return {
            "kind": "table",
            "elements": list(self.names),
            "zero": self.zero,
            "one": self.one,
            "add": self.add_t.tolist(),
            "mul": self.mul_t.tolist(),
            **({"label": self.meta["label"]} if self.meta.get("label") else {}),
        }

    def as_table(self):
        """The same ring re-labelled as a plain table ring."""
        return FiniteRing(self.names, self.add_t, self.mul_t, self.zero, self.one, check=False)

    def __repr__(self):
        if self.kind == "zmod":
            return f"Z/{self.size}"
        if self.kind == "matrix":
            return f"M{self.meta['size']}({self.meta['base']!r})"
        return self.meta.get("label", f"TableRing[{self.size}]")


def check_ring_axioms(R):
    """Exhaustively verify the ring laws; raise :class:`AxiomViolation`."""
    A, M, q = R.add_t, R.mul_t, R.size
    z, e = R.zero, R.one
    idx = np.arange(q)

    def first(mask):
        return tuple(int(v) for v in np.argwhere(~mask)[0])

    if not (A[z] == idx).all() or not (A[:, z] == idx).all():
        raise AxiomViolation("additive identity", (int(np.flatnonzero(A[z] != idx)[0]),))
    if not (A == A.T).all():
        raise AxiomViolation("additive commutativity", first(A == A.T))
    if not (A == z).any(axis=1).all():
        raise AxiomViolation("additive inverse", (int(np.flatnonzero(~(A == z).any(axis=1))[0]),))
    if not (M[e] == idx).all() or not (M[:, e] == idx).all():
        bad = np.flatnonzero((M[e] != idx) | (M[:, e] != idx))[0]
        raise AxiomViolation("multiplicative unit", (int(bad),))
    for a in range(q):
        # (a+b)+c == a+(b+c) over all b, c
        ok = A[A[a]][:, idx] == A[a][A]
        if not ok.all():
            b, c = first(ok)
            raise AxiomViolation("additive associativity", (a, b, c))
        ok = M[M[a]][:, idx] == M[a][M]
        if not ok.all():
            b, c = first(ok)
            raise AxiomViolation("multiplicative associativity", (a, b, c))
        # a(b+c) == ab+ac
        ok = M[a][A] == A[M[a]][:, M[a]]
        if not ok.all():
            b, c = first(ok)
            raise AxiomViolation("left distributivity", (a, b, c))
        # (b+c)a == ba+ca
        ok = M[:, a][A] == A[M[:, a]][:, M[:, a]]
        if not ok.all():
            b, c = first(ok)
            raise AxiomViolation("right distributivity", (b, c, a))


class AdditiveStructure:
    """(R, +) written as a product of cyclic groups Z/c_0 x ... x Z/c_{s-1}.

    ``coords[a]`` are the coordinates of element ``a``; ``basis[k]`` is the
    element with coordinate vector e_k; ``from_coords`` inverts ``coords``.
    """

    def __init__(self, R):
        from .snf import integer_snf

        q = R.size
        add = R._add
        gens, span = [], {R.zero}
        for a in range(q):
            if a not in span:
                gens.append(a)
                frontier = list(span)
                while frontier:
                    nxt = []
                    for x in frontier:
                        for g in gens:
                            y = add[x][g]
                            if y not in span:
                                span.add(y)
                                nxt.append(y)
                    frontier = nxt
        g = len(gens)
        # spanning tree coordinates plus Schreier relations
        coord = {R.zero: (0,) * g}
        order = [R.zero]
        rels = set()
        for x in order:
            for i, gi in enumerate(gens):
                y = add[x][gi]
                step = tuple(c + (1 if j == i else 0) for j, c in enumerate(coord[x]))
                if y not in coord:
                    coord[y] = step
                    order.append(y)
                else:
                    rel = tuple(a - b for a, b in zip(step, coord[y]))
                    if any(rel):
                        rels.add(rel)
        rels = sorted(rels)
        if g == 0:
            self.orders, self.basis = [], []
            self.coords = np.zeros((q, 0), dtype=np.int64)
        else:
            _, D, V, Vinv = integer_snf([list(r) for r in rels], g, with_inverse=True)
            diag = [D[i][i] if i < len(D) else 0 for i in range(g)]
            keep = [i for i in range(g) if abs(diag[i]) != 1]
            self.orders = [abs(diag[i]) for i in keep]
            if 0 in self.orders:
                raise AxiomViolation("finite additive group", ())
            coords = np.zeros((q, len(keep)), dtype=np.int64)
            for x, cx in coord.items():
                for col, i in enumerate(keep):
                    coords[x, col] = sum(c * V[j][i] for j, c in enumerate(cx)) % self.orders[col]
            self.coords = coords
            self.basis = []
            for i in keep:
                lifted = Vinv[i]
                elem = R.zero
                for j, n in enumerate(lifted):
                    elem = R.add(elem, _int_multiple(R, gens[j], n))
                self.basis.append(elem)
        self.rank = len(self.orders)
        weights = _weights(self.orders)
        codes = self.coords @ weights if self.rank else np.zeros(q, dtype=np.int64)
        lookup = np.full(int(np.prod(self.orders, dtype=np.int64)) if self.rank else 1, -1, dtype=np.int64)
        lookup[codes] = np.arange(q)
        if (lookup < 0).any() or len(set(codes.tolist())) != q:
            raise AxiomViolation("additive decomposition", ())
        self.weights = weights
        self.from_code = lookup

    def from_coords(self, coords):
        coords = np.asarray(coords, dtype=np.int64) % np.asarray(self.orders, dtype=np.int64)
        return self.from_code[coords @ self.weights]


def _weights(radices):
    w, acc = [], 1
    for r in radices:
        w.append(acc)
        acc *= int(r)
    return np.asarray(w, dtype=np.int64)


def _int_multiple(R, a, n):
    out, x, n = R.zero, a, n % R.characteristic if R.characteristic else n
    while n:
        if n & 1:
            out = R.add(out, x)
        x = R.add(x, x)
        n >>= 1
    return out


def zmod(n):
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise ParseError(f"modulus must be an integer >= 2, got {n!r}")
    if n > caps.get("ring"):
        raise CapExceeded("finite ring size", n, caps.get("ring"))
    idx = np.arange(n)
    add = (idx[:, None] + idx[None, :]) % n
    mul = (idx[:, None] * idx[None, :]) % n
    return FiniteRing([str(i) for i in range(n)], add, mul, 0, 1, kind="zmod", check=False)


def matrix_ring(base, k):
    if not isinstance(base, FiniteRing):
        raise ParseError("matrix rings need a finite base ring")
    if not isinstance(k, int) or k < 1:
        raise ParseError(f"matrix size must be a positive integer, got {k!r}")
    q = base.size ** (k * k)
    if q > caps.get("ring"):
        raise CapExceeded("matrix ring size", q, caps.get("ring"))
    entries = list(itertools.product(range(base.size), repeat=k * k))
    lookup = {e: i for i, e in enumerate(entries)}
    E = np.asarray(entries, dtype=np.int64).reshape(q, k, k)
    add = np.empty((q, q), dtype=np.int64)
    mul = np.empty((q, q), dtype=np.int64)
    w = _weights([base.size] * (k * k))
    B_add, B_mul = base.add_t, base.mul_t
    for a in range(q):
        s = B_add[E[a][None, :, :], E]
        add[a] = s.reshape(q, -1) @ w
        prod = np.full((q, k, k), base.zero, dtype=np.int64)
        for t in range(k):
            term = B_mul[E[a][None, :, t, None], E[:, None, t, :]]
            prod = B_add[prod, term]
        mul[a] = prod.reshape(q, -1) @ w
    # lookup via mixed radix: entries are enumerated in product order, which is
    # big-endian; re-index to match
    perm = np.asarray(entries, dtype=np.int64) @ w
    inv = np.empty(q, dtype=np.int64)
    inv[perm] = np.arange(q)
    add, mul = inv[add], inv[mul]
    names = [
        "[" + ",".join("[" + ",".join(base.names[e[i * k + j]] for j in range(k)) + "]" for i in range(k)) + "]"
        for e in entries
    ]
    zero = lookup[(base.zero,) * (k * k)]
    one = lookup[tuple(base.one if i == j else base.zero for i in range(k) for j in range(k))]
    meta = {"base": base, "size": k, "entries": entries, "lookup": lookup}
    return FiniteRing(names, add, mul, zero, one, kind="matrix", meta=meta, check=False)


def product_ring(R, S, label=None):
    """Componentwise product R x S as a table ring."""
    pairs = [(a, b) for a in range(R.size) for b in range(S.size)]
    index = {p: i for i, p in enumerate(pairs)}
    add = [[index[(R.add(a, c), S.add(b, d))] for (c, d) in pairs] for (a, b) in pairs]
    mul = [[index[(R.mul(a, c), S.mul(b, d))] for (c, d) in pairs] for (a, b) in pairs]
    names = [f"({R.names[a]},{S.names[b]})" for a, b in pairs]
    return FiniteRing(names, add, mul, index[(R.zero, S.zero)], index[(R.one, S.one)],
                      meta={"label": label} if label else None)


def subring(R, elements, label=None):
    """Table ring on a subset of R closed under the ring operations."""
    elements = sorted(set(elements))
    index = {a: i for i, a in enumerate(elements)}
    try:
        add = [[index[R.add(a, b)] for b in elements] for a in elements]
        mul = [[index[R.mul(a, b)] for b in elements] for a in elements]
        zero, one = index[R.zero], index[R.one]
    except KeyError as exc:
        raise ParseError(f"subset is not a subring (escapes via {exc})") from None
    return FiniteRing([R.names[a] for a in elements], add, mul, zero, one,
                      meta={"label": label} if label else None)


def upper_triangular(base, k=2):
    M = matrix_ring(base, k)
    members = [i for i, e in enumerate(M.meta["entries"])
               if all(e[r * k + c] == base.zero for r in range(k) for c in range(r))]
    return subring(M, members, label=f"UT{k}({base!r})")


def truncated_poly(p, d):
    """F_p[x]/(x^d) as a table ring; elements named by coefficient strings."""
    elems = list(itertools.product(range(p), repeat=d))
    index = {e: i for i, e in enumerate(elems)}

    def mul(a, b):
        out = [0] * d
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                if i + j < d:
                    out[i + j] = (out[i + j] + x * y) % p
        return tuple(out)

    add = [[index[tuple((x + y) % p for x, y in zip(a, b))] for b in elems] for a in elems]
    mult = [[index[mul(a, b)] for b in elems] for a in elems]
    names = [_poly_name(e) for e in elems]
    one = index[(1,) + (0,) * (d - 1)]
    return FiniteRing(names, add, mult, index[(0,) * d], one,
                      meta={"label": f"F{p}[x]/(x^{d})"})


def _poly_name(coeffs):
    terms = []
    for i, c in enumerate(coeffs):
        if not c:
            continue
        mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        if i == 0:
            terms.append(str(c))
        else:
            terms.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(terms) or "0"


# ---------------------------------------------------------------------------
# Euclidean domains


class EuclideanRing(Ring):
    euclidean = True
    commutative = True

    def divides(self, a, b):
        """Does ``a`` divide ``b``?"""
        if self.is_zero(a):
            return self.is_zero(b)
        return self.is_zero(self.divmod(b, a)[1])

    def exact_div(self, b, a):
        q, r = self.divmod(b, a)
        if not self.is_zero(r):
            raise PreconditionError(f"{self.fmt(a)} does not divide {self.fmt(b)}")
        return q


class IntegerRing(EuclideanRing):
    zero = 0
    one = 1

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def divmod(self, a, b):
        return divmod(a, b)

    def norm(self, a):
        return abs(a)

    def is_unit(self, a):
        return a in (1, -1)

    def inverse(self, a):
        return a if a in (1, -1) else None

    def normal_unit(self, a):
        """Unit ``u`` making ``u * a`` the canonical associate."""
        return -1 if a < 0 else 1

    def elem_to_json(self, a):
        return int(a)

    def elem_from_json(self, x):
        if isinstance(x, int) and not isinstance(x, bool):
            return x
        raise ParseError(f"expected an integer, got {x!r}")

    def fmt(self, a):
        return str(a)

    def to_spec(self):
        return {"kind": "integers"}

    def __repr__(self):
        return "Z"


class PolyRing(EuclideanRing):
    """F_p[x]; elements are coefficient tuples, lowest degree first."""

    zero = ()

    def __init__(self, p):
        if not isinstance(p, int) or p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise ParseError(f"poly rings need a prime p, got {p!r}")
        self.p = p
        self.one = (1,)

    def _trim(self, c):
        c = list(c)
        while c and c[-1] == 0:
            c.pop()
        return tuple(c)

    def make(self, coeffs):
        return self._trim(int(x) % self.p for x in coeffs)

    def x_power(self, k):
        return (0,) * k + (1,)

    def coerce(self, a):
        if isinstance(a, int) and not isinstance(a, bool):
            return self.make([a])
        if isinstance(a, (list, tuple)):
            return self.make(a)
        raise PreconditionError(f"not an element of F{self.p}[x]: {a!r}")

    def add(self, a, b):
        n = max(len(a), len(b))
        return self._trim(((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % self.p for i in range(n))

    def neg(self, a):
        return tuple((-c) % self.p for c in a)

    def mul(self, a, b):
        if not a or not b:
            return ()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] = (out[i + j] + x * y) % self.p
        return self._trim(out)

    def divmod(self, a, b):
        if not b:
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        inv = pow(b[-1], -1, p)
        r = list(a)
        q = [0] * max(len(a) - len(b) + 1, 0)
        while len(r) >= len(b) and r:
            shift = len(r) - len(b)
            c = (r[-1] * inv) % p
            q[shift] = c
            for i, y in enumerate(b):
                r[shift + i] = (r[shift + i] - c * y) % p
            while r and r[-1] == 0:
                r.pop()
        return self._trim(q), tuple(r)

    def norm(self, a):
        return len(a) - 1

    def degree(self, a):
        return len(a) - 1

    def is_unit(self, a):
        return len(a) == 1

    def inverse(self, a):
        return (pow(a[0], -1, self.p),) if len(a) == 1 else None

    def normal_unit(self, a):
        return (pow(a[-1], -1, self.p),) if a else self.one

    def elem_to_json(self, a):
        return list(a)

    def elem_from_json(self, x):
        if isinstance(x, list) and all(isinstance(c, int) and not isinstance(c, bool) for c in x):
            return self.make(x)
        if isinstance(x, int) and not isinstance(x, bool):
            return self.make([x])
        raise ParseError(f"expected a coefficient list, got {x!r}")

    def fmt(self, a):
        return _poly_name(a)

    def to_spec(self):
        return {"kind": "poly", "p": self.p}

    def __repr__(self):
        return f"F{self.p}[x]"


INTEGERS = IntegerRing()


# ---------------------------------------------------------------------------
# construction from specs


def construct_ring(spec):
    """Build a validated ring from a spec dict (or its JSON text)."""
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ParseError("ring spec must be an object with a 'kind' field")
    kind = spec["kind"]
    if kind == "zmod":
        return zmod(_field(spec, "n", int))
    if kind == "integers":
        return INTEGERS
    if kind == "poly":
        return PolyRing(_field(spec, "p", int))
    if kind == "matrix":
        base = construct_ring(_field(spec, "base", dict))
        return matrix_ring(base, _field(spec, "size", int))
    if kind == "table":
        names = _field(spec, "elements", list)
        add = _field(spec, "add", list)
        mul = _field(spec, "mul", list)
        return FiniteRing(names, add, mul, _field(spec, "zero", int), _field(spec, "one", int),
                          meta={"label": spec["label"]} if "label" in spec else None)
    raise ParseError(f"unknown ring kind {kind!r}; expected zmod, integers, poly, matrix or table")


def _field(spec, name, typ):
    if name not in spec:
        raise ParseError(f"missing field {name!r}", path=name)
    value = spec[name]
    if not isinstance(value, typ) or isinstance(value, bool):
        raise ParseError(f"field {name!r} must be {typ.__name__}, got {value!r}", path=name)
    return value


def is_unit(R, r):
    """True iff ``r`` has a two-sided inverse in ``R``; the inverse is re-verified."""
    if R.finite:
        s = R.inverse(r)
        if s is None:
            return False
        assert R.mul(r, s) == R.one and R.mul(s, r) == R.one
        return True
    return R.is_unit(r)
