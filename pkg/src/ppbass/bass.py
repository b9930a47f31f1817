"""Descending pp chains, their staged direct-limit data, and stabilization."""
import json

from .errors import InternalError, ParseError, PreconditionError
from .modules import FpModule, ModHom, hom_search
from .pp import PpPair, bottom, div, equivalent, formula_from_spec, free_realization, implies, satisfies, top
from .rings import construct_ring

DEFAULT_WINDOW = 10


class PpChain:
    """phi_0 >= phi_1 >= ... (a finite window), validated with ``implies``."""

    def __init__(self, formulas, classical=None, check=True):
        formulas = list(formulas)
        if not formulas:
            raise PreconditionError("a chain needs at least one formula")
        R, n = formulas[0].ring, formulas[0].arity
        for f in formulas:
            if f.ring != R or f.arity != n:
                raise PreconditionError("chain formulas must share ring and arity")
        if check:
            for i in range(len(formulas) - 1):
                if not implies(formulas[i + 1], formulas[i]):
                    raise PreconditionError(f"chain is not descending at position {i + 1}")
        self.ring = R
        self.arity = n
        self.formulas = formulas
        # (b, a) for chains of divisibility formulas a_n | x with a_{n+1} = a_n b_{n+1}
        self.classical = classical

    def __len__(self):
        return len(self.formulas)

    def __eq__(self, other):
        return (isinstance(other, PpChain) and self.formulas == other.formulas
                and (self.classical is None) == (other.classical is None))

    def __hash__(self):
        return hash(tuple(self.formulas))

    def __getitem__(self, i):
        return self.formulas[i]

    def to_spec(self):
        R = self.ring
        if self.classical:
            b, _ = self.classical
            return {"classical": {"ring": R.to_spec(), "b": [R.elem_to_json(x) for x in b]}}
        return {"pp": [f.to_spec() for f in self.formulas]}


def classical_chain(R, b):
    """a_0 = 1, a_{n+1} = a_n b_{n+1}; formulas a_n | x."""
    b = [R.coerce(x) for x in b]
    if not b:
        raise PreconditionError("b must be nonempty")
    a = [R.one]
    for x in b:
        a.append(R.mul(a[-1], x))
    return PpChain([div(R, x) for x in a], classical=(b, a))


def chain_from_spec(spec):
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(spec, dict):
        raise ParseError("chain spec must be an object")
    if "classical" in spec:
        body = spec["classical"]
        if not isinstance(body, dict) or "ring" not in body or "b" not in body:
            raise ParseError("classical chain needs 'ring' and 'b'", path="classical")
        R = construct_ring(body["ring"])
        if not isinstance(body["b"], list) or not body["b"]:
            raise ParseError("'b' must be a nonempty list", path="classical.b")
        return classical_chain(R, [R.elem_from_json(x) for x in body["b"]])
    if "pp" in spec:
        ring = construct_ring(spec["ring"]) if "ring" in spec else None
        if not isinstance(spec["pp"], list) or not spec["pp"]:
            raise ParseError("'pp' must be a nonempty list of formulas", path="pp")
        return PpChain([formula_from_spec(f, ring) for f in spec["pp"]])
    raise ParseError("chain spec needs 'classical' or 'pp'")


class BassChain:
    """Stages (A_i, abar_i) with connecting maps g_i, built up to stage N."""

    def __init__(self, chain, modules, tuples, maps):
        self.chain = chain
        self.modules = modules
        self.tuples = tuples
        self.maps = maps

    @property
    def stages(self):
        return len(self.modules) - 1

    def image_of_first(self, N=None):
        """Image of abar_0 in A_N under g_{N-1} ... g_0 (representative vectors)."""
        N = self.stages if N is None else N
        tup = list(self.tuples[0])
        for g in self.maps[:N]:
            tup = [g(x) for x in tup]
        return tup

    def regular_image(self, N=None):
        """For classical chains: the composite image as an element of R."""
        if not self.chain.classical:
            raise PreconditionError("regular coordinates exist only for classical chains")
        N = self.stages if N is None else N
        return _regular(self.chain, N, self.image_of_first(N)[0])

    def profile(self):
        return PureFreeProfile(self.modules)


def _regular(chain, i, v):
    """C_i = R^2/(1, -a_i) is identified with R via e_x -> a_i, e_y -> 1."""
    R = chain.ring
    _, a = chain.classical
    u, w = v
    return R.add(R.mul(u, a[i]), w)


def build_stages(chain, N=None):
    N = len(chain) - 1 if N is None else N
    if N < 0 or N >= len(chain):
        raise PreconditionError(f"stage count {N} outside the window 0..{len(chain) - 1}")
    modules, tuples, maps = [], [], []
    for i in range(N + 1):
        C, abar = free_realization(chain[i])
        modules.append(C)
        tuples.append(abar)
    for i in range(N):
        A, a, B, b = modules[i], tuples[i], modules[i + 1], tuples[i + 1]
        found = hom_search(A, a, B, b)
        if found is None:
            raise InternalError(f"no connecting map at stage {i}, though the chain is descending")
        if chain.classical:
            # direct construction; hom_search above is the cross-check
            maps.append(_right_multiplication(chain, i, A, B))
        else:
            maps.append(found)
        g = maps[-1]
        for x, y in zip(a, b):
            if not B.eq(g(x), y):
                raise InternalError(f"g_{i} does not send abar_{i} to abar_{i + 1}")
    B = BassChain(chain, modules, tuples, maps)
    if chain.classical:
        _check_classical(B)
    for n in range(N + 1):
        img = B.image_of_first(n)
        for i in range(n + 1):
            if not satisfies(chain[i], modules[n], img):
                raise InternalError(f"stage {n} image fails phi_{i}")
    return B


def _right_multiplication(chain, i, A, B):
    """e_x -> e_x', e_y -> b_{i+1} e_y': right multiplication by b_{i+1} on R."""
    R = chain.ring
    b, _ = chain.classical
    return ModHom(A, B, [(R.one, R.zero), (R.zero, b[i])])


def _check_classical(B):
    chain = B.chain
    R = chain.ring
    b, a = chain.classical
    Rreg = FpModule(R, 1, ())
    for i, C in enumerate(B.modules):
        to_r = ModHom(C, Rreg, [(a[i],), (R.one,)])
        from_r = ModHom(Rreg, C, [(R.zero, R.one)])
        for j in range(2):
            if not C.eq(from_r(to_r(C.gen(j))), C.gen(j)):
                raise InternalError(f"stage {i} is not identified with R")
        if _regular(chain, i, B.tuples[i][0]) != a[i]:
            raise InternalError(f"abar_{i} is not a_{i}")
    for i, g in enumerate(B.maps):
        for v in B.modules[i].gens():
            if _regular(chain, i + 1, g(v)) != R.mul(_regular(chain, i, v), b[i]):
                raise InternalError(f"g_{i} is not right multiplication by b_{i + 1}")


class StabilizationReport:
    """``window`` counts connecting steps: a window of W covers phi_0 .. phi_W."""

    def __init__(self, window, index, matrix):
        self.window = window
        self.index = index
        self.matrix = matrix

    @property
    def stabilizes(self):
        return self.index is not None

    def verdict(self):
        if self.index is None:
            return f"no stabilization within window {self.window}"
        return f"stabilizes at i = {self.index}"

    def to_dict(self):
        return {"window": self.window, "stabilizes": self.stabilizes,
                "index": self.index, "verdict": self.verdict(),
                "implication_matrix": [[int(x) for x in row] for row in self.matrix]}


def implication_matrix(formulas):
    return [[bool(implies(f, g)) for g in formulas] for f in formulas]


def stabilization_check(chain):
    """Least i with phi_i equivalent to every later phi_j in the window.

    The last window entry only counts when it is equivalent to x = 0, since
    equivalence with nothing is otherwise vacuous.
    """
    fs = chain.formulas
    W = len(fs)
    mat = implication_matrix(fs)
    zero = bottom(chain.ring, chain.arity)
    index = None
    for i in range(W):
        if all(mat[i][j] and mat[j][i] for j in range(i, W)):
            if i < W - 1 or equivalent(fs[i], zero):
                index = i
                break
    return StabilizationReport(W - 1, index, mat)


class TypeWindowReport:
    def __init__(self, family, first_stage, stages, generator, reasons):
        self.family = family
        self.first_stage = first_stage
        self.stages = stages
        self.generator = generator
        self.reasons = reasons

    @property
    def finitely_generated(self):
        return self.generator is not None

    def verdict(self):
        if self.generator is None:
            return f"not finitely generated within window {self.stages}"
        return f"finitely generated; generator phi_{self.generator}"

    def growth_stages(self):
        """Stages at which some family formula becomes satisfied for the first time."""
        return sorted({s for s in self.first_stage if s is not None and s > 0})

    def to_dict(self):
        return {"verdict": self.verdict(), "generator": self.generator,
                "first_stage": self.first_stage, "growth": self.growth_stages(),
                "reasons": self.reasons}


def satisfaction_table(B, family):
    """``table[n][k]``: does the stage-n image of abar_0 satisfy family[k]."""
    out = []
    for n in range(B.stages + 1):
        img = B.image_of_first(n)
        out.append([satisfies(f, B.modules[n], img) for f in family])
    return out


def certified_generator(family, table, label="phi"):
    """Index of a family formula generating the satisfied part, or None.

    A candidate must hold at the last stage, imply every formula that holds
    there, and be certified: already satisfied one stage earlier, or
    equivalent to x = 0 or to x = x.  Rejection reasons are returned per
    candidate.
    """
    last = table[-1]
    sat = [k for k, s in enumerate(last) if s]
    reasons = {}
    if not family:
        return None, reasons
    R, n = family[0].ring, family[0].arity
    zero, one = bottom(R, n), top(R, n)
    for k in range(len(family)):
        tag = f"{label}_{k}"
        if not last[k]:
            reasons[tag] = "not satisfied at the last stage"
            continue
        missing = [j for j in sat if not implies(family[k], family[j])]
        if missing:
            reasons[tag] = f"does not imply {label}_{missing[0]}"
            continue
        early = len(table) > 1 and table[-2][k]
        if early or equivalent(family[k], zero) or equivalent(family[k], one):
            return k, reasons
        reasons[tag] = "first satisfied at the last stage of the window"
    return None, reasons


def pp_type_window(B, family=None):
    family = list(B.chain.formulas if family is None else family)
    table = satisfaction_table(B, family)
    first = []
    for k in range(len(family)):
        col = [row[k] for row in table]
        # stably satisfied from the first stage onward where it holds
        first.append(next((n for n, s in enumerate(col) if s), None))
    gen, reasons = certified_generator(family, table)
    return TypeWindowReport(family, first, B.stages, gen, reasons)


class PureFreeProfile:
    """F = direct sum of countably many copies of each component, kept symbolic."""

    def __init__(self, components):
        self.components = list(components)

    def opens(self, pair):
        return any(pair.index(A) > 1 for A in self.components)

    def __repr__(self):
        return f"PureFreeProfile({len(self.components)} components)"


class ProfileReport:
    def __init__(self, rows):
        self.rows = rows

    @property
    def inconsistencies(self):
        return sum(1 for r in self.rows if r["opens_in_stage"] and not r["opens_in_profile"])

    def to_dict(self):
        return {"pairs": len(self.rows), "inconsistencies": self.inconsistencies, "rows": self.rows}


def profile_equiv_check(P, B, pairs):
    """Per pair: index table over the profile components and over the stages."""
    rows = []
    for pair in pairs:
        comp = [pair.index(A) for A in P.components]
        stage = [pair.index(A) for A in B.modules]
        rows.append({
            "pair": [pair.phi.describe(), pair.psi.describe()],
            "component_index": comp,
            "stage_index": stage,
            "opens_in_profile": any(x > 1 for x in comp),
            "opens_in_stage": any(x > 1 for x in stage),
        })
    return ProfileReport(rows)


class PerfectnessWitness:
    def __init__(self, ring, r, chain, certificates, bass):
        self.ring = ring
        self.r = r
        self.chain = chain
        self.certificates = certificates
        self.bass = bass

    @property
    def window(self):
        return len(self.certificates)

    def verdict(self):
        return f"{self.ring!r} is not left perfect (chain checked within window {self.window})"

    def to_dict(self):
        R = self.ring
        return {"verdict": self.verdict(), "r": R.elem_to_json(self.r),
                "certificates": [{"i": c["i"], "power": R.elem_to_json(c["power"]),
                                  "next": R.elem_to_json(c["next"]), "in_next_ideal": c["in_next_ideal"]}
                                 for c in self.certificates]}


def perfectness_witness(R, r, window=DEFAULT_WINDOW):
    """Non-stabilizing chain rR > r^2 R > ... over a Euclidean domain."""
    if not R.euclidean:
        raise PreconditionError("perfectness witnesses need a Euclidean domain")
    r = R.coerce(r)
    if R.is_zero(r) or R.is_unit(r):
        raise PreconditionError(f"{R.fmt(r)} must be neither zero nor a unit")
    chain = classical_chain(R, [r] * window)
    B = build_stages(chain)
    certs = []
    for i in range(window):
        p, q = R.power(r, i), R.power(r, i + 1)
        inside = R.divides(q, p)
        if inside or implies(div(R, p), div(R, q)):
            raise InternalError(f"r^{i} lies in r^{i + 1}R")
        if B.regular_image(i) != p:
            raise InternalError(f"stage {i} image differs from r^{i}")
        certs.append({"i": i, "power": p, "next": q, "in_next_ideal": inside})
    return PerfectnessWitness(R, r, chain, certs, B)
