import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ppbass.corpus import RING_NAMES, corpus_modules, corpus_ring
from ppbass.errors import PreconditionError
from ppbass.modules import endomorphisms, free_module, present_module
from ppbass.pp import (PpFormula, PpPair, _EVAL_CACHE, ann, bottom, conj, div, equivalent, evaluate,
                       evaluate_in, formula_from_spec, free_realization, implies, make_pp, pp_sum,
                       random_formula, random_formula_of_arity, satisfies, top)
from ppbass.rings import INTEGERS, zmod
from ppbass.modules import Submodule

Z4, Z8 = zmod(4), zmod(8)


def naive(phi, M):
    """phi(M) by checking every (x, y) in M^(n+k); returns sorted element-code tuples."""
    R, n = phi.ring, phi.arity
    elems = [M.element(c) for c in range(M.size)]
    out = set()
    for tup in itertools.product(range(M.size), repeat=phi.width):
        vecs = [elems[c] for c in tup]
        if all(M.is_zero(M.combine(row, vecs)) for row in phi.rows):
            out.add(tup[:n])
    return sorted(out)


def as_tuples(S):
    return sorted(tuple(t) for t in S.tuples())


def codes_of(S):
    return sorted(S.elements())


def regular(R):
    return present_module(R, 1)


def test_constructor_shapes():
    assert div(INTEGERS, 2).rows == ((1, -2),)
    assert ann(Z4, 2).rows == ((2,),) and ann(Z4, 2).bound == 0
    phi = make_pp(INTEGERS, 1, 1, [[1, -2], [0, 4]])
    assert phi.arity == 1 and phi.bound == 1 and len(phi.rows) == 2
    with pytest.raises(Exception):
        make_pp(INTEGERS, 1, 1, [[1, 2, 3]])


def test_small_evaluations():
    assert codes_of(evaluate(div(Z4, 2), regular(Z4))) == [0, 2]
    assert codes_of(evaluate(ann(Z4, 2), regular(Z4))) == [0, 2]
    phi = make_pp(Z8, 1, 1, [[1, -2], [0, 4]])
    assert codes_of(evaluate(phi, regular(Z8))) == [0, 4]
    Z12 = zmod(12)
    assert codes_of(evaluate(conj(div(Z12, 2), div(Z12, 3)), regular(Z12))) == [0, 6]
    assert codes_of(evaluate(pp_sum(ann(Z4, 2), div(Z4, 2)), regular(Z4))) == [0, 2]


def test_free_realizations():
    C, abar = free_realization(div(INTEGERS, 3))
    assert C.invariants() == [0]
    phi = make_pp(INTEGERS, 1, 1, [[1, -2], [0, 4]])
    C, abar = free_realization(phi)
    assert C.invariants() == [4] and satisfies(phi, C, abar)
    # the tuple is twice a generator of Z/4
    assert not C.is_zero(abar[0]) and C.is_zero(C.smul(2, abar[0]))
    C, abar = free_realization(top(INTEGERS))
    assert C.invariants() == [0]


def test_implication_examples():
    assert implies(div(INTEGERS, 4), div(INTEGERS, 2))
    res = implies(div(INTEGERS, 2), div(INTEGERS, 4))
    assert not res
    C, abar = res.witness
    assert C.invariants() == [0]
    assert satisfies(div(INTEGERS, 2), C, abar) and not satisfies(div(INTEGERS, 4), C, abar)
    phi = make_pp(Z8, 2, 1, [[1, 1, 2], [0, 3, 4]])
    assert implies(phi, phi)


def test_equivalence_examples():
    assert equivalent(div(Z8, 8), div(Z8, 0))
    assert equivalent(div(INTEGERS, 2), div(INTEGERS, -2))
    assert not equivalent(div(INTEGERS, 2), div(INTEGERS, 4))
    assert equivalent(bottom(Z4), ann(Z4, 1))


def test_arity_mismatch():
    with pytest.raises(PreconditionError):
        implies(top(Z4, 1), top(Z4, 2))


@pytest.mark.parametrize("name", RING_NAMES)
def test_evaluate_matches_naive(name):
    R = corpus_ring(name)
    rng = random.Random(hash(name) % 1000)
    for _ in range(12):
        phi = random_formula(R, rng, max_width=3)
        for M in corpus_modules(R, max_size=16):
            if M.size ** phi.width > 5000:
                continue
            assert as_tuples(evaluate(phi, M)) == naive(phi, M)


@pytest.mark.parametrize("name", RING_NAMES)
def test_subgroup_and_endomorphism_closure(name):
    R = corpus_ring(name)
    rng = random.Random(3)
    for _ in range(8):
        phi = random_formula_of_arity(R, rng, 1)
        for M in corpus_modules(R, max_size=16):
            S = evaluate(phi, M)
            mask = S.mask
            assert mask[0]
            codes = S.codes
            for a in codes:
                assert mask[M.neg_codes(np.array([a]))[0]]
                assert mask[M.add_codes(np.full(len(codes), a), codes)].all()
            for h in itertools.islice(endomorphisms(M), 40):
                for a in codes:
                    assert mask[M.to_code(h(M.element(int(a))))]


@pytest.mark.parametrize("name", ["Z/4", "Z/8", "F2xF2", "UT2(F2)", "M2(F2)"])
def test_lattice_contracts(name):
    R = corpus_ring(name)
    rng = random.Random(4)
    mods = corpus_modules(R, max_size=64)
    for _ in range(10):
        phi = random_formula_of_arity(R, rng, 1, max_bound=1, max_rows=2)
        psi = random_formula_of_arity(R, rng, 1, max_bound=1, max_rows=2)
        for M in mods:
            a, b = evaluate(phi, M).mask, evaluate(psi, M).mask
            assert np.array_equal(evaluate(conj(phi, psi), M).mask, a & b)
            ca, cb = np.flatnonzero(a), np.flatnonzero(b)
            sums = np.zeros(M.size, dtype=bool)
            sums[M.add_codes(np.repeat(ca, len(cb)), np.tile(cb, len(ca)))] = True
            assert np.array_equal(evaluate(pp_sum(phi, psi), M).mask, sums)
            assert np.array_equal(evaluate(conj(phi, top(R)), M).mask, a)


def test_satisfies_infinite():
    F = free_module(INTEGERS, 1)
    assert satisfies(div(INTEGERS, 3), F, [(9,)])
    assert not satisfies(div(INTEGERS, 3), F, [(10,)])
    M = present_module(INTEGERS, 2, [(3, 0)])  # Z/3 + Z
    assert satisfies(div(INTEGERS, 2), M, [(1, 4)])


def test_satisfies_matches_evaluate():
    R = corpus_ring("UT2(F2)")
    rng = random.Random(5)
    for _ in range(20):
        phi = random_formula(R, rng)
        for M in corpus_modules(R, max_size=16):
            S = evaluate(phi, M)
            s = M.size
            for c in range(min(s ** phi.arity, 64)):
                tup = [(c // s ** i) % s for i in range(phi.arity)]
                assert satisfies(phi, M, tup) == bool(S.mask[c])


def test_evaluate_in_submodule():
    R4 = regular(Z4)
    S = Submodule(R4, [(2,)])
    mask = evaluate_in(div(Z4, 2), S)
    assert np.flatnonzero(mask).tolist() == [0]
    assert np.flatnonzero(evaluate_in(ann(Z4, 2), S)).tolist() == [0, 2]


def test_pair_index():
    p = PpPair(top(Z4), div(Z4, 2))
    assert p.index(regular(Z4)) == 2
    assert PpPair(div(Z4, 2), bottom(Z4)).index(regular(Z4)) == 2


def test_spec_round_trip():
    rng = random.Random(6)
    for name in RING_NAMES:
        R = corpus_ring(name)
        for _ in range(5):
            phi = random_formula(R, rng)
            assert formula_from_spec(phi.to_spec()) == phi
    assert formula_from_spec({"div": 2}, INTEGERS) == div(INTEGERS, 2)


def test_describe():
    assert div(INTEGERS, 2).describe() == "exists y0: x0 - 2*y0 = 0"
    assert ann(Z4, 2).describe() == "2*x0 = 0"


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_implies_is_transitive_and_sound(seed):
    rng = random.Random(seed)
    R = corpus_ring(RING_NAMES[seed % len(RING_NAMES)])
    f, g, h = (random_formula_of_arity(R, rng, 1, max_bound=1, max_rows=2) for _ in range(3))
    if implies(f, g) and implies(g, h):
        assert implies(f, h)
    assert implies(conj(f, g), f) and implies(f, pp_sum(f, g))
