import pytest

from ppbass.classifier import (classify, decompose_regular, idempotents, is_local, is_simple,
                               jacobson_radical, primitive_idempotents, quotient_by_radical, rj_simple)
from ppbass.corpus import RING_NAMES, corpus_ring
from ppbass.errors import PreconditionError
from ppbass.modules import find_isomorphism
from ppbass.rings import INTEGERS, matrix_ring, product_ring, truncated_poly, upper_triangular, zmod


def names(R, xs):
    return [R.names[x] for x in xs]


def brute_radical(R):
    """Intersection of maximal left ideals, found by enumerating left ideals by hand."""
    ideals = set()
    for a in range(R.size):
        for b in range(R.size):
            span = {R.zero}
            todo = [R.zero]
            while todo:
                x = todo.pop()
                for r in range(R.size):
                    for g in (a, b):
                        y = R.add(x, R.mul(r, g))
                        if y not in span:
                            span.add(y)
                            todo.append(y)
            ideals.add(frozenset(span))
    proper = [I for I in ideals if len(I) < R.size]
    maximal = [I for I in proper if not any(I < K for K in proper)]
    out = set(range(R.size))
    for I in maximal:
        out &= I
    return sorted(out)


@pytest.mark.parametrize("name", RING_NAMES)
def test_radical_against_maximal_ideals(name):
    R = corpus_ring(name)
    assert jacobson_radical(R) == brute_radical(R)


def test_radical_examples():
    R = zmod(4)
    assert jacobson_radical(R) == [0, 2]
    F = corpus_ring("F2xF2")
    assert jacobson_radical(F) == [F.zero]
    M = corpus_ring("M2(F2)")
    assert jacobson_radical(M) == [M.zero]


def test_decompositions():
    d = decompose_regular(zmod(4))
    assert (d.n, d.deg) == (1, 1)
    d = decompose_regular(corpus_ring("F2xF2"))
    assert (d.n, d.deg, d.multiplicities()) == (2, 2, [1, 1])
    d = decompose_regular(corpus_ring("M2(F2)"))
    assert (d.n, d.deg, d.multiplicities()) == (1, 2, [2])
    assert d.summands[0].size == 4


def test_upper_triangular_summands_differ():
    R = corpus_ring("UT2(F2)")
    d = decompose_regular(R)
    assert d.n == 2
    A, B = d.summands
    assert find_isomorphism(A, B) is None


@pytest.mark.parametrize("name", RING_NAMES)
def test_idempotents_complete(name):
    R = corpus_ring(name)
    es = primitive_idempotents(R)
    total = R.zero
    for e in es:
        total = R.add(total, e)
    assert total == R.one
    assert set(es) <= set(idempotents(R))


def test_simplicity():
    assert rj_simple(zmod(4))
    assert not rj_simple(corpus_ring("F2xF2"))
    assert rj_simple(corpus_ring("M2(F2)"))
    assert is_simple(quotient_by_radical(zmod(8)))
    assert not is_simple(zmod(6))


def test_local():
    assert is_local(zmod(4)) and is_local(zmod(8)) and is_local(truncated_poly(2, 2))
    assert not is_local(zmod(6))
    assert not is_local(upper_triangular(zmod(2)))


EXTRA = [zmod(6), zmod(9), zmod(12), truncated_poly(3, 2), truncated_poly(2, 3),
         product_ring(zmod(2), zmod(4)), upper_triangular(zmod(3)), matrix_ring(zmod(3), 2)]


@pytest.mark.parametrize("R", EXTRA, ids=repr)
def test_biconditionals_beyond_corpus(R):
    rep = classify(R)
    assert (rep.n == 1) == rep.rj_simple
    assert (rep.n == 1 and rep.deg == 1) == rep.local


def test_report_fields():
    d = classify(corpus_ring("M2(F2)"), "M2(F2)").to_dict()
    assert d["semisimple"] and d["n"] == 1 and d["deg"] == 2 and d["rj_simple"]
    assert d["ring"] == "M2(F2)" and d["size"] == 16
    assert d["summands"] == [{"size": 4, "multiplicity": 2, "idempotent": d["idempotents"][0]}]
    assert all(d["assertions"].values())


def test_infinite_rejected():
    with pytest.raises(PreconditionError):
        classify(INTEGERS)
