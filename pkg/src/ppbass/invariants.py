"""pp-pair indices, weak-power profiles, purity, and bounded finite-generation checks."""
import itertools

import numpy as np

from .bass import certified_generator, satisfaction_table
from .errors import PreconditionError
from .modules import Submodule, direct_sum, find_isomorphism, is_direct_summand
from .pp import (PpFormula, PpPair, ann, conj, div, element_pool, equivalent, evaluate,
                 evaluate_in, free_realization)


def pp_index(M, pair):
    """|phi(M) / (phi(M) & psi(M))| for finite M."""
    if not M.finite:
        raise PreconditionError("indices are computed for finite modules only")
    return pair.index(M)


class WeakPowerProfile:
    """one/many verdict per pair: the pair-restricted theory of M^(omega)."""

    def __init__(self, modules, pairs, indices):
        self.modules = modules
        self.pairs = list(pairs)
        self.indices = indices
        self.verdicts = ["many" if i > 1 else "one" for i in indices]

    def __eq__(self, other):
        return (isinstance(other, WeakPowerProfile) and self.pairs == other.pairs
                and self.verdicts == other.verdicts)

    def __getitem__(self, pair):
        return self.verdicts[self.pairs.index(pair)]

    def table(self):
        return [{"pair": [p.phi.describe(), p.psi.describe()], "index": i, "verdict": v}
                for p, i, v in zip(self.pairs, self.indices, self.verdicts)]


def weak_power_profile(M, pairs):
    pairs = list(pairs)
    return WeakPowerProfile([M], pairs, [pp_index(M, p) for p in pairs])


class FamilyVerdict:
    """A yes/no answer that only speaks about the supplied pair family."""

    def __init__(self, value, differing):
        self.value = value
        self.differing = differing
        self.label = "relative to family"

    def __bool__(self):
        return self.value

    def __repr__(self):
        return f"FamilyVerdict({self.value}, {self.label})"


def equiv_weak_powers(M, N, pairs):
    if M.ring != N.ring:
        raise PreconditionError("modules over different rings")
    pairs = list(pairs)
    pm, pn = weak_power_profile(M, pairs), weak_power_profile(N, pairs)
    diff = [p for p, a, b in zip(pairs, pm.verdicts, pn.verdicts) if a != b]
    return FamilyVerdict(not diff, diff)


# ---------------------------------------------------------------------------
# purity


def refuter_family(R, pool=None):
    """div r, ann r and pairwise conjunctions over a small element pool."""
    pool = element_pool(R) if pool is None else pool
    base = []
    for r in pool:
        base.append(div(R, r))
        base.append(ann(R, r))
    out = list(base)
    for f, g in itertools.combinations(base, 2):
        out.append(conj(f, g))
    return out


class PurityVerdict:
    def __init__(self, pure, complement, witness, witness_detail):
        self.pure = pure
        self.complement = complement
        self.witness = witness
        self.witness_detail = witness_detail

    @property
    def consistent(self):
        """The family refuter never contradicts the summand criterion."""
        return not (self.pure and self.witness is not None)

    def __bool__(self):
        return self.pure


def family_refutation(S, family):
    """First phi in the family with phi(N) & S not inside phi(S), or None."""
    N = S.ambient
    for phi in family:
        if phi.arity != 1:
            continue
        big = evaluate(phi, N).mask & S.mask
        small = evaluate_in(phi, S)
        bad = np.flatnonzero(big & ~small)
        if len(bad):
            return phi, int(bad[0])
    return None, None


def is_pure_submodule(sub_gens, N, family=None):
    """Purity of the submodule generated by ``sub_gens`` inside finite N.

    Decided by splitting (finite modules are pure-injective); a bounded
    formula family is run independently as a refuter.
    """
    S = sub_gens if isinstance(sub_gens, Submodule) else Submodule(N, sub_gens)
    split = is_direct_summand(S, N)
    family = refuter_family(N.ring) if family is None else family
    phi, elem = family_refutation(S, family)
    return PurityVerdict(bool(split), split.complement, phi, elem)


# ---------------------------------------------------------------------------
# finite generation of pp types on a window


class MlCertificate:
    def __init__(self, stage, family, generator, trace):
        self.stage = stage
        self.family = family
        self.generator = generator
        self.trace = trace
        self.label = "relative to family"

    @property
    def certified(self):
        return self.generator is not None

    def verdict(self):
        if self.generator is None:
            return f"no generator in the family at stage {self.stage} ({self.label})"
        return f"generator {self.family[self.generator].describe()} ({self.label})"


def ml_certificate(B, N=None, family=None):
    """Look for a family formula generating the satisfied part of the pp type of
    the stage-N image of abar_0.  Without one, ``trace`` gives the reason each
    candidate fails."""
    N = B.stages if N is None else N
    if N > B.stages:
        raise PreconditionError(f"stage {N} has not been built")
    family = list(B.chain.formulas[:N + 1] if family is None else family)
    table = satisfaction_table(B, family)[:N + 1]
    gen, reasons = certified_generator(family, table, label="f")
    return MlCertificate(N, family, gen, reasons)


# ---------------------------------------------------------------------------
# Gamma_A


def bounded_formulas(R, arity=1, max_bound=1, max_rows=2, pool=None):
    """Every formula with entries from the pool within the size bounds."""
    pool = element_pool(R) if pool is None else pool
    for k in range(max_bound + 1):
        rowset = list(itertools.product(pool, repeat=arity + k))
        for nrows in range(max_rows + 1):
            for rows in itertools.combinations(rowset, nrows):
                yield PpFormula(R, arity, k, rows)


def _sums_of_size(modules, size):
    """Multisets from ``modules`` (as index tuples) whose sizes multiply to ``size``."""
    out = []

    def rec(start, remaining, chosen):
        if remaining == 1:
            out.append(tuple(chosen))
            return
        for i in range(start, len(modules)):
            s = modules[i].size
            if s > 1 and remaining % s == 0:
                rec(i, remaining // s, chosen + [i])

    rec(0, size, [])
    return out


def in_add_class(C, modules):
    """A direct sum of ``modules`` isomorphic to finite C, or None."""
    if C.size == 1:
        return ()
    for combo in _sums_of_size(modules, C.size):
        if not combo:
            continue
        S = modules[combo[0]]
        for i in combo[1:]:
            S = direct_sum(S, modules[i])
        if find_isomorphism(C, S) is not None:
            return combo
    return None


def gamma_family(modules, arity=1, max_bound=1, max_rows=2, pool=None):
    """Bounded formulas, up to equivalence, freely realized by a sum of ``modules``."""
    if not modules:
        return []
    R = modules[0].ring
    reps, kept = [], []
    for phi in bounded_formulas(R, arity, max_bound, max_rows, pool):
        if any(equivalent(phi, g) for g in reps):
            continue
        reps.append(phi)
        C, _ = free_realization(phi)
        if C.finite and in_add_class(C, modules) is not None:
            kept.append(phi)
    return kept
