"""Positive-primitive formulas as relation matrices.

A formula of arity n with k bound variables is a list of rows of length
n + k; it reads  exists y_0..y_{k-1}: for every row h,
sum_i h_i x_i + sum_j h_{n+j} y_j = 0.
"""
import json
import random
from functools import cached_property

import numpy as np

from . import caps, kernels
from .errors import CapExceeded, ParseError, PreconditionError
from .modules import FpModule, solve_linear
from .rings import Ring, construct_ring
from .zlattice import SubgroupLattice


class PpFormula:
    def __init__(self, ring, arity, bound, rows):
        if not isinstance(ring, Ring):
            raise TypeError("ring must be a Ring")
        if arity < 1 or bound < 0:
            raise PreconditionError("arity must be >= 1 and bound count >= 0")
        rows = tuple(tuple(ring.coerce(a) for a in r) for r in rows)
        for r in rows:
            if len(r) != arity + bound:
                raise PreconditionError(
                    f"row {r!r} has length {len(r)}, expected {arity + bound}")
        self.ring = ring
        self.arity = arity
        self.bound = bound
        self.rows = rows

    @property
    def width(self):
        return self.arity + self.bound

    def free_part(self, i):
        return self.rows[i][:self.arity]

    def bound_part(self, i):
        return self.rows[i][self.arity:]

    def __eq__(self, other):
        return (isinstance(other, PpFormula) and self.arity == other.arity
                and self.bound == other.bound and self.rows == other.rows
                and self.ring == other.ring)

    @cached_property
    def _hash(self):
        return hash((self.ring, self.arity, self.bound, self.rows))

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"PpFormula({self.ring!r}, n={self.arity}, k={self.bound}, rows={self.describe()})"

    def describe(self):
        """Readable rendering, e.g.  ``exists y0: x0 - 2 y0 = 0``."""
        R = self.ring
        names = [f"x{i}" for i in range(self.arity)] + [f"y{j}" for j in range(self.bound)]
        eqs = []
        for row in self.rows:
            text = ""
            for a, v in zip(row, names):
                if R.is_zero(a):
                    continue
                sign = " + "
                if isinstance(a, int) and not R.finite and a < 0:
                    sign, a = " - ", -a
                term = v if a == R.one else f"{R.fmt(a)}*{v}"
                if text:
                    text += sign + term
                else:
                    text = term if sign == " + " else "-" + term
            eqs.append((text or "0") + " = 0")
        body = " & ".join(eqs) if eqs else "true"
        if self.bound:
            body = "exists " + ",".join(names[self.arity:]) + ": " + body
        return body

    def to_spec(self):
        R = self.ring
        return {
            "ring": R.to_spec(),
            "arity": self.arity,
            "bound": self.bound,
            "rows": [[R.elem_to_json(a) for a in row] for row in self.rows],
        }


def make_pp(ring, n, k, rows):
    return PpFormula(ring, n, k, rows)


def div(ring, r):
    """r | x, i.e.  exists y: x - r y = 0."""
    r = ring.coerce(r)
    return PpFormula(ring, 1, 1, [(ring.one, ring.neg(r))])


def ann(ring, r):
    """r x = 0."""
    return PpFormula(ring, 1, 0, [(r,)])


def top(ring, n=1):
    """x = x."""
    return PpFormula(ring, n, 0, [])


def bottom(ring, n=1):
    """x = 0."""
    return PpFormula(ring, n, 0, [ring.vbasis(n, i) for i in range(n)])


def _same(phi, psi):
    if phi.ring != psi.ring:
        raise PreconditionError("formulas over different rings")
    if phi.arity != psi.arity:
        raise PreconditionError(f"arity mismatch: {phi.arity} vs {psi.arity}")


def conj(phi, psi):
    _same(phi, psi)
    R, n = phi.ring, phi.arity
    kp, kq = phi.bound, psi.bound
    rows = [r[:n] + r[n:] + R.vzero(kq) for r in phi.rows]
    rows += [r[:n] + R.vzero(kp) + r[n:] for r in psi.rows]
    return PpFormula(R, n, kp + kq, rows)


def pp_sum(phi, psi):
    """phi + psi:  exists v: phi(x - v) & psi(v)."""
    _same(phi, psi)
    R, n = phi.ring, phi.arity
    kp, kq = phi.bound, psi.bound
    rows = [r[:n] + R.vneg(r[:n]) + r[n:] + R.vzero(kq) for r in phi.rows]
    rows += [R.vzero(n) + r[:n] + R.vzero(kp) + r[n:] for r in psi.rows]
    return PpFormula(R, n, n + kp + kq, rows)


# ---------------------------------------------------------------------------
# evaluation in modules


class PpSet:
    """phi(M) for a finite M: sorted tuple codes plus a generating set.

    A tuple (m_0, .., m_{n-1}) of element codes has code sum m_i |M|^i.
    """

    def __init__(self, formula, module, mask):
        self.formula = formula
        self.module = module
        self.mask = mask
        self.codes = np.flatnonzero(mask)
        self.size = len(self.codes)

    def tuples(self):
        s, n = self.module.size, self.formula.arity
        out = []
        for c in self.codes.tolist():
            t = []
            for _ in range(n):
                t.append(c % s)
                c //= s
            out.append(tuple(t))
        return out

    def elements(self):
        """Element codes (arity 1) or tuples of element codes."""
        if self.formula.arity == 1:
            return self.codes.tolist()
        return self.tuples()

    def __contains__(self, tup):
        return bool(self.mask[tuple_code(self.module, tup)])

    def __len__(self):
        return self.size

    @cached_property
    def gens(self):
        """Greedy additive generating set (tuple codes)."""
        M, n = self.module, self.formula.arity
        rad = list(M.radices) * n
        gens, span = [], None
        for c in self.codes.tolist():
            if c == 0 or (span is not None and span[c]):
                continue
            gens.append(c)
            dig = np.asarray([_digits(g, rad) for g in gens], dtype=np.int64)
            span = kernels.span_mask(dig, np.asarray(rad, dtype=np.int64), M.size ** n)
        return gens


def _digits(code, radices):
    out = []
    for d in radices:
        out.append(code % d)
        code //= d
    return out


def tuple_code(M, tup):
    code, w = 0, 1
    for x in tup:
        code += M.to_code(x) * w
        w *= M.size
    return code


def _bound_generators(phi, M):
    """Digit vectors in M^r spanning the image of the bound variables."""
    t = len(M.radices)
    R = phi.ring
    out = []
    for j in range(phi.bound):
        col = [row[phi.arity + j] for row in phi.rows]
        if all(R.is_zero(a) for a in col):
            continue
        mats = [None if R.is_zero(a) else M.act_matrix(a) for a in col]
        for e in range(t):
            v = np.zeros(len(col) * t, dtype=np.int64)
            for i, A in enumerate(mats):
                if A is not None:
                    v[i * t:(i + 1) * t] = A[e]
            if v.any():
                out.append(v)
    return out


def _free_image_digits(phi, M, xdigits):
    """Digits in M^r of (sum_l h_il x_l)_i for digit vectors x_l (one row per x)."""
    R = phi.ring
    t = len(M.radices)
    rad = np.asarray(M.radices, dtype=np.int64)
    count = xdigits[0].shape[0] if phi.arity else 0
    out = np.zeros((count, len(phi.rows) * t), dtype=np.int64)
    for i, row in enumerate(phi.rows):
        acc = np.zeros((count, t), dtype=np.int64)
        for l in range(phi.arity):
            a = row[l]
            if not R.is_zero(a):
                acc += xdigits[l] @ M.act_matrix(a)
        out[:, i * t:(i + 1) * t] = acc % rad if t else acc
    return out


def _membership(gens, yrad, yspace, count):
    """Membership test for the span of ``gens`` in prod Z/yrad, applied to digit rows.

    A full table over the group is used when it is small next to the number
    of queries; otherwise rows are reduced against a Hermite basis.
    """
    if yspace <= caps.get("mask") and yspace <= max(16 * count, 1 << 12):
        rad = np.asarray(yrad, dtype=np.int64)
        gmat = np.asarray(gens, dtype=np.int64).reshape(len(gens), len(rad))
        ymask = kernels.span_mask(gmat, rad, yspace).astype(bool)
        weights = np.asarray(_mixed_weights(rad), dtype=np.int64)
        return lambda target: ymask[target @ weights]
    L = SubgroupLattice(yrad)
    for g in gens:
        L.add(g)
    return L.contains_many


_EVAL_CACHE = {}


def evaluate(phi, M):
    """phi(M) by brute force over M^n (finite M only)."""
    if phi.ring != M.ring:
        raise PreconditionError("formula and module over different rings")
    M._require_enumerable()
    key = (phi, M)
    hit = _EVAL_CACHE.get(key)
    if hit is not None:
        return hit
    n, r = phi.arity, len(phi.rows)
    total = M.size ** n
    if total > caps.get("enum"):
        raise CapExceeded("tuple enumeration", total, caps.get("enum"))
    yrad = list(M.radices) * r
    gens = _bound_generators(phi, M)
    member = _membership(gens, yrad, M.size ** r, total)
    codes = np.arange(total, dtype=np.int64)
    xd = []
    for _ in range(n):
        xd.append(M.digits[codes % M.size])
        codes = codes // M.size
    if r:
        mask = member(_free_image_digits(phi, M, xd))
    else:
        mask = np.ones(total, dtype=bool)
    result = PpSet(phi, M, mask)
    if len(_EVAL_CACHE) > 65536:
        _EVAL_CACHE.clear()
    _EVAL_CACHE[key] = result
    return result


def evaluate_in(phi, S):
    """phi(S) for a submodule S of a finite module, as a mask over ambient tuples."""
    M = S.ambient
    if phi.ring != M.ring:
        raise PreconditionError("formula and module over different rings")
    n, r = phi.arity, len(phi.rows)
    total = M.size ** n
    if total > caps.get("enum"):
        raise CapExceeded("tuple enumeration", total, caps.get("enum"))
    R = phi.ring
    t = len(M.radices)
    yrad = list(M.radices) * r
    gens = []
    for j in range(phi.bound):
        col = [row[n + j] for row in phi.rows]
        for c in S.additive_gens:
            v = np.zeros(r * t, dtype=np.int64)
            for i, a in enumerate(col):
                if not R.is_zero(a):
                    v[i * t:(i + 1) * t] = M.digits[int(M.act_codes(a)[c])]
            if v.any():
                gens.append(v)
    member = _membership(gens, yrad, M.size ** r, total)
    codes = np.arange(total, dtype=np.int64)
    xd, inside = [], np.ones(total, dtype=bool)
    for _ in range(n):
        comp = codes % M.size
        inside &= S.mask[comp]
        xd.append(M.digits[comp])
        codes = codes // M.size
    if r:
        mask = member(_free_image_digits(phi, M, xd))
    else:
        mask = np.ones(total, dtype=bool)
    return mask & inside


def _mixed_weights(radices):
    w, acc = [], 1
    for d in radices:
        w.append(acc)
        acc *= int(d)
    return w


def satisfies(phi, M, xbar):
    """Whether the tuple ``xbar`` (vectors, or codes for finite M) lies in phi(M)."""
    if phi.ring != M.ring:
        raise PreconditionError("formula and module over different rings")
    if len(xbar) != phi.arity:
        raise PreconditionError("tuple length differs from arity")
    if M.finite:
        return _satisfies_lattice(phi, M, xbar)
    vecs = [tuple(x) for x in xbar]
    R = phi.ring
    A = [phi.bound_part(i) for i in range(len(phi.rows))]
    b = [R.vneg(M.combine(phi.free_part(i), vecs)) for i in range(len(phi.rows))]
    if not phi.bound:
        return all(M.is_zero(v) for v in b)
    return solve_linear(M, A, b, nvars=phi.bound) is not None


def _satisfies_lattice(phi, M, xbar):
    r = len(phi.rows)
    if r == 0:
        return True
    xd = []
    for x in xbar:
        if isinstance(x, (int, np.integer)):
            xd.append(M.code_digits(x).reshape(1, -1))
        else:
            xd.append(M.coords([x]))
    target = _free_image_digits(phi, M, xd)[0]
    if not target.any():
        return True
    lat = SubgroupLattice(list(M.radices) * r)
    for g in _bound_generators(phi, M):
        lat.add(g.tolist())
    return lat.contains(target.tolist())


def free_realization(phi):
    """(C, abar): R^{n+k} modulo the rows, with the images of the first n basis vectors."""
    C = FpModule(phi.ring, phi.width, phi.rows)
    abar = [C.gen(i) for i in range(phi.arity)]
    return C, abar


class Implication:
    """Verdict of ``implies``; a false verdict carries the counterexample pair."""

    def __init__(self, verdict, witness=None):
        self.verdict = verdict
        self.witness = witness

    def __bool__(self):
        return self.verdict

    def __repr__(self):
        return f"Implication({self.verdict})"


def implies(phi, psi):
    """phi <= psi, decided by membership of the free-realization tuple."""
    _same(phi, psi)
    C, abar = free_realization(phi)
    if satisfies(psi, C, abar):
        return Implication(True)
    return Implication(False, (C, abar))


def equivalent(phi, psi):
    return bool(implies(phi, psi)) and bool(implies(psi, phi))


class PpPair:
    """phi / psi, with psi <= phi intended."""

    def __init__(self, phi, psi):
        _same(phi, psi)
        self.phi = phi
        self.psi = psi

    def check(self):
        if not implies(self.psi, self.phi):
            raise PreconditionError("pair denominator does not imply numerator")
        return self

    def index(self, M):
        """|phi(M) / (phi & psi)(M)| for finite M."""
        top_ = evaluate(self.phi, M).size
        low = evaluate(conj(self.phi, self.psi), M).size
        return top_ // low

    def __eq__(self, other):
        return isinstance(other, PpPair) and (self.phi, self.psi) == (other.phi, other.psi)

    def __hash__(self):
        return hash((self.phi, self.psi))

    def __repr__(self):
        return f"PpPair({self.phi.describe()} / {self.psi.describe()})"


# ---------------------------------------------------------------------------
# random formulas and serialization


def element_pool(R, size=16):
    """Fixed small pool of ring elements used by the random generators."""
    if R.finite:
        elems = list(range(R.size))
        if len(elems) <= size:
            return elems
        rng = random.Random(f"pool:{R.size}")
        rest = rng.sample([e for e in elems if e not in (R.zero, R.one)], size - 2)
        return [R.zero, R.one] + sorted(rest)
    if isinstance(R.zero, int):
        return list(range(-4, 5))
    return [R.make(c) for c in ([], [1], [0, 1], [1, 1], [0, 0, 1], [1, 0, 1], [0, 1, 1])]


def random_formula(R, rng, max_arity=2, max_bound=2, max_rows=3, max_width=4):
    """Random formula with entries drawn uniformly from ``element_pool``."""
    pool = element_pool(R)
    n = rng.randint(1, max_arity)
    k = rng.randint(0, min(max_bound, max_width - n))
    rows = [tuple(rng.choice(pool) for _ in range(n + k)) for _ in range(rng.randint(0, max_rows))]
    return PpFormula(R, n, k, rows)


def random_formula_of_arity(R, rng, n, max_bound=2, max_rows=3):
    pool = element_pool(R)
    k = rng.randint(0, max_bound)
    rows = [tuple(rng.choice(pool) for _ in range(n + k)) for _ in range(rng.randint(0, max_rows))]
    return PpFormula(R, n, k, rows)


def formula_from_spec(spec, ring=None):
    """Parse a formula object; ``ring`` is used when the object has no "ring"."""
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(spec, dict):
        raise ParseError("formula spec must be an object")
    if "ring" in spec:
        ring = construct_ring(spec["ring"])
    if ring is None:
        raise ParseError("formula spec needs a 'ring'", path="ring")
    if "div" in spec or "ann" in spec:
        key = "div" if "div" in spec else "ann"
        r = _elem(ring, spec[key], key)
        return div(ring, r) if key == "div" else ann(ring, r)
    for key in ("arity", "bound", "rows"):
        if key not in spec:
            raise ParseError(f"formula spec is missing '{key}'", path=key)
    n, k, rows = spec["arity"], spec["bound"], spec["rows"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError(f"'arity' must be a positive integer, got {n!r}", path="arity")
    if not isinstance(k, int) or isinstance(k, bool) or k < 0:
        raise ParseError(f"'bound' must be a non-negative integer, got {k!r}", path="bound")
    if not isinstance(rows, list):
        raise ParseError("'rows' must be a list", path="rows")
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n + k:
            raise ParseError(f"row {i} must list {n + k} ring elements", path=f"rows[{i}]")
        out.append(tuple(_elem(ring, x, f"rows[{i}]") for x in row))
    return PpFormula(ring, n, k, out)


def _elem(ring, x, path):
    try:
        return ring.elem_from_json(x)
    except ParseError:
        raise
    except (ValueError, TypeError, KeyError, IndexError) as exc:
        raise ParseError(f"bad ring element {x!r}: {exc}", path=path) from None


def formula_to_json(phi):
    return json.dumps(phi.to_spec(), sort_keys=True, separators=(",", ":"))
