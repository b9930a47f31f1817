"""Decomposition data of finite rings: J, primitive idempotents, n(R), deg(R)."""
import numpy as np

from .errors import InternalError, PreconditionError
from .modules import ModHom, Submodule, direct_sum, find_isomorphism, present_module
from .rings import FiniteRing


def _require_finite(R):
    if not isinstance(R, FiniteRing):
        raise PreconditionError("classification needs a finite ring")


def jacobson_radical(R):
    """Sorted list of x with 1 - r x a unit for every r."""
    _require_finite(R)
    units = R.unit_mask
    one = R.one
    # 1 - r x for all r, x at once: column x of the product table is r x
    one_minus = R.add_t[one][R.neg_t[R.mul_t]]
    good = units[one_minus].all(axis=0)
    J = [int(x) for x in np.flatnonzero(good)]
    _check_ideal(R, J)
    return J


def _check_ideal(R, elems):
    S = set(elems)
    for a in elems:
        for b in elems:
            if R.add(a, b) not in S:
                raise InternalError("radical not closed under addition")
        for r in range(R.size):
            if R.mul(r, a) not in S or R.mul(a, r) not in S:
                raise InternalError("radical is not a two-sided ideal")


def idempotents(R):
    sq = R.mul_t[np.arange(R.size), np.arange(R.size)]
    return [int(e) for e in np.flatnonzero(sq == np.arange(R.size))]


def _corner_split(R, e, idem):
    """An idempotent f of eRe other than 0 and e (smallest index), or None."""
    for f in idem:
        if f in (R.zero, e):
            continue
        if R.mul(e, f) == f and R.mul(f, e) == f:
            return f
    return None


def primitive_idempotents(R):
    """Complete set of orthogonal primitive idempotents, by splitting corners of 1."""
    _require_finite(R)
    idem = idempotents(R)
    done, todo = [], [R.one]
    while todo:
        e = todo.pop(0)
        f = _corner_split(R, e, idem)
        if f is None:
            done.append(e)
        else:
            todo[:0] = [f, R.sub(e, f)]
    _check_idempotents(R, done, idem)
    return done


def _check_idempotents(R, es, idem):
    total = R.zero
    for i, e in enumerate(es):
        total = R.add(total, e)
        if R.mul(e, e) != e:
            raise InternalError(f"{R.fmt(e)} is not idempotent")
        for j, f in enumerate(es):
            if i != j and R.mul(e, f) != R.zero:
                raise InternalError("idempotents are not orthogonal")
        if _corner_split(R, e, idem) is not None:
            raise InternalError(f"{R.fmt(e)} is not primitive")
    if total != R.one:
        raise InternalError("idempotents do not sum to 1")


def projective_summand(R, e):
    """R e, presented as R / R(1 - e)."""
    return present_module(R, 1, [(R.sub(R.one, e),)])


class Decomposition:
    def __init__(self, idempotents, summands, groups):
        self.idempotents = idempotents
        self.summands = summands
        # groups: list of (representative index, member indices)
        self.groups = groups

    @property
    def n(self):
        return len(self.groups)

    @property
    def deg(self):
        return len(self.summands)

    def multiplicities(self):
        return [len(m) for _, m in self.groups]

    def parts(self):
        return [(self.summands[rep], len(m)) for rep, m in self.groups]


def decompose_regular(R):
    """Left regular module as a sum of R e_i, grouped into isomorphism classes."""
    es = primitive_idempotents(R)
    summands = [projective_summand(R, e) for e in es]
    groups = []
    for i, P in enumerate(summands):
        for rep, members in groups:
            if summands[rep].size == P.size and find_isomorphism(summands[rep], P) is not None:
                members.append(i)
                break
        else:
            groups.append((i, [i]))
    # deterministic order: by size, then first idempotent index
    groups.sort(key=lambda g: (summands[g[0]].size, es[g[0]]))
    _check_reassembly(R, summands)
    return Decomposition(es, summands, groups)


def _check_reassembly(R, summands):
    """1 -> (1, .., 1) is an isomorphism R -> sum of the R/R(1 - e_i)."""
    S = summands[0]
    for P in summands[1:]:
        S = direct_sum(S, P)
    if S.size != R.size:
        raise InternalError("summand sizes do not multiply to |R|")
    Rreg = present_module(R, 1, ())
    h = ModHom(Rreg, S, [tuple(R.one for _ in summands)])
    if Submodule(S, [h(Rreg.gen(0))]).size != S.size:
        raise InternalError("regular module does not reassemble from the summands")
    return h


def quotient_by_radical(R, J=None):
    """R/J as a table ring; elements are cosets named by their least member."""
    J = jacobson_radical(R) if J is None else J
    coset = {}
    reps = []
    for a in range(R.size):
        if a in coset:
            continue
        k = len(reps)
        reps.append(a)
        for j in J:
            coset[R.add(a, j)] = k
    q = len(reps)
    add = [[coset[R.add(a, b)] for b in reps] for a in reps]
    mul = [[coset[R.mul(a, b)] for b in reps] for a in reps]
    return FiniteRing([R.names[a] for a in reps], add, mul, coset[R.zero], coset[R.one],
                      meta={"label": f"{R!r}/J"})


def _ideal_generated(R, a):
    """Two-sided ideal generated by a: additive span of every s a t."""
    prods = {R.mul(R.mul(s, a), t) for s in range(R.size) for t in range(R.size)}
    span = {R.zero}
    frontier = [R.zero]
    while frontier:
        nxt = []
        for x in frontier:
            for p in prods:
                y = R.add(x, p)
                if y not in span:
                    span.add(y)
                    nxt.append(y)
        frontier = nxt
    return span


def is_simple(R):
    if R.size < 2:
        return False
    return all(len(_ideal_generated(R, a)) == R.size for a in range(R.size) if a != R.zero)


def rj_simple(R):
    return is_simple(quotient_by_radical(R))


def is_local(R):
    """Non-units closed under addition (finite rings: unique maximal left ideal)."""
    _require_finite(R)
    non = [a for a in range(R.size) if not R.is_unit(a)]
    mask = ~R.unit_mask
    idx = np.asarray(non, dtype=np.int64)
    if not len(idx):
        return False
    return bool(mask[R.add_t[np.ix_(idx, idx)]].all())


class ClassificationReport:
    def __init__(self, ring, label, J, decomposition, local, rj, assertions):
        self.ring = ring
        self.label = label
        self.size = ring.size
        self.J = J
        self.decomposition = decomposition
        self.local = local
        self.rj_simple = rj
        self.assertions = assertions

    @property
    def semisimple(self):
        return self.J == [self.ring.zero]

    @property
    def n(self):
        return self.decomposition.n

    @property
    def deg(self):
        return self.decomposition.deg

    def perfectness(self):
        return "left perfect (finite ring: dcc on principal right ideals holds trivially)"

    def to_dict(self):
        R = self.ring
        return {
            "ring": self.label,
            "size": self.size,
            "J": [R.fmt(x) for x in self.J],
            "semisimple": self.semisimple,
            "local": self.local,
            "rj_simple": self.rj_simple,
            "n": self.n,
            "deg": self.deg,
            "idempotents": [R.fmt(e) for e in self.decomposition.idempotents],
            "summands": [{"size": P.size, "multiplicity": m,
                          "idempotent": R.fmt(self.decomposition.idempotents[rep])}
                         for (P, m), (rep, _) in zip(self.decomposition.parts(),
                                                     self.decomposition.groups)],
            "perfect": self.perfectness(),
            "assertions": self.assertions,
        }


def classify(R, label=None):
    _require_finite(R)
    J = jacobson_radical(R)
    dec = decompose_regular(R)
    local = is_local(R)
    rj = rj_simple(R)
    if local != (quotient_by_radical(R, J).unit_mask.sum() == R.size // len(J) - 1):
        raise InternalError("local flag disagrees with R/J being a division ring")
    assertions = {
        "n=1 iff R/J simple": (dec.n == 1) == rj,
        "n=deg=1 iff local": (dec.n == 1 and dec.deg == 1) == local,
    }
    for name, ok in assertions.items():
        if not ok:
            raise InternalError(f"consistency assertion failed for {R!r}: {name}")
    return ClassificationReport(R, label or repr(R), J, dec, local, rj, assertions)
