import pytest

from ppbass.bass import (PpChain, build_stages, chain_from_spec, classical_chain, implication_matrix,
                         perfectness_witness, pp_type_window, profile_equiv_check,
                         stabilization_check)
from ppbass.errors import ParseError, PreconditionError
from ppbass.modules import find_isomorphism, present_module
from ppbass.pp import PpPair, ann, bottom, conj, div, equivalent, top
from ppbass.rings import INTEGERS, PolyRing, zmod

Z8 = zmod(8)
P2 = PolyRing(2)
X = P2.coerce([0, 1])


def test_classical_chain_formulas():
    ch = classical_chain(INTEGERS, [2, 2, 2])
    assert [f for f in ch.formulas] == [div(INTEGERS, a) for a in (1, 2, 4, 8)]
    ch = classical_chain(Z8, [2, 2, 2])
    assert equivalent(ch[3], bottom(Z8))
    ch = classical_chain(P2, [X, X])
    assert ch[2] == div(P2, P2.mul(X, X))


def test_chain_must_descend():
    with pytest.raises(PreconditionError):
        PpChain([div(INTEGERS, 4), div(INTEGERS, 2)])


def test_integer_images():
    B = build_stages(classical_chain(INTEGERS, [2] * 10))
    assert [B.regular_image(n) for n in range(11)] == [2 ** n for n in range(11)]


def test_poly_images():
    B = build_stages(classical_chain(P2, [X] * 6))
    assert [B.regular_image(n) for n in range(7)] == [P2.power(X, n) for n in range(7)]


def test_stage_maps_respect_tuples():
    B = build_stages(classical_chain(INTEGERS, [3, 2, 5]))
    for i, g in enumerate(B.maps):
        for a, b in zip(B.tuples[i], B.tuples[i + 1]):
            assert B.modules[i + 1].eq(g(a), b)


def test_general_chain():
    """div 2 >= (div 2 & ann 4) over Z: the second stage is (Z/8, 2)."""
    ch = PpChain([div(INTEGERS, 2), conj(div(INTEGERS, 2), ann(INTEGERS, 4))])
    B = build_stages(ch)
    A1 = B.modules[1]
    assert A1.invariants() == [8]
    img = B.image_of_first(1)[0]
    target = present_module(INTEGERS, 1, [(8,)])
    # the image is twice a generator
    assert A1.is_zero(A1.smul(4, img)) and not A1.is_zero(A1.smul(2, img))
    assert find_isomorphism(A1, target) is not None


@pytest.mark.parametrize("R,b,expect", [
    (Z8, [2, 2, 2], 3),
    (Z8, [3, 3, 3], 0),
    (Z8, [4, 2, 1, 1], 2),
    (INTEGERS, [2] * 10, None),
    (INTEGERS, [1, 1, 1], 0),
    (INTEGERS, [2, 1, 1], 1),
])
def test_stabilization(R, b, expect):
    rep = stabilization_check(classical_chain(R, b))
    assert rep.index == expect
    assert rep.window == len(b)
    if expect is None:
        assert rep.verdict() == f"no stabilization within window {len(b)}"
    else:
        assert rep.verdict() == f"stabilizes at i = {expect}"


def test_last_entry_needs_bottom():
    # Z: 1 | x >= 2 | x, nothing after it: not a stabilization
    assert stabilization_check(classical_chain(INTEGERS, [2])).index is None


def test_implication_matrix_is_upper():
    fs = classical_chain(INTEGERS, [2, 3]).formulas
    m = implication_matrix(fs)
    assert m == [[True, False, False], [True, True, False], [True, True, True]]


def test_type_window():
    rep = pp_type_window(build_stages(classical_chain(Z8, [3, 3, 3])))
    assert rep.verdict() == "finitely generated; generator phi_0"
    rep = pp_type_window(build_stages(classical_chain(INTEGERS, [2] * 5)))
    assert rep.verdict() == "not finitely generated within window 5"
    assert rep.growth_stages() == [1, 2, 3, 4, 5]


def test_profile_examples():
    B = build_stages(classical_chain(Z8, [2, 2]))
    rep = profile_equiv_check(B.profile(), B, [PpPair(div(Z8, 2), div(Z8, 4))])
    row = rep.rows[0]
    assert row["stage_index"][0] == 2 and row["opens_in_profile"]
    assert rep.inconsistencies == 0
    Z2 = zmod(2)
    B = build_stages(classical_chain(Z2, [1, 1]))
    rep = profile_equiv_check(B.profile(), B, [PpPair(top(Z2), div(Z2, 0))])
    assert rep.rows[0]["component_index"] == [2, 2, 2]


def test_perfectness():
    w = perfectness_witness(INTEGERS, 2)
    assert w.window == 10
    assert [c["power"] for c in w.certificates] == [2 ** i for i in range(10)]
    assert not any(c["in_next_ideal"] for c in w.certificates)
    w = perfectness_witness(P2, X)
    assert [c["power"] for c in w.certificates] == [P2.power(X, i) for i in range(10)]
    for bad in (1, -1, 0):
        with pytest.raises(PreconditionError):
            perfectness_witness(INTEGERS, bad)
    with pytest.raises(PreconditionError):
        perfectness_witness(Z8, 2)


def test_chain_spec_round_trip():
    for ch in (classical_chain(INTEGERS, [2, 3]), PpChain([top(Z8), div(Z8, 2), bottom(Z8)])):
        assert chain_from_spec(ch.to_spec()) == ch
    with pytest.raises(ParseError):
        chain_from_spec({"nothing": 1})
