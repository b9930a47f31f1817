from hypothesis import given, settings, strategies as st

from ppbass.rings import INTEGERS, PolyRing
from ppbass.snf import diagonal, identity, integer_snf, matmul, smith_normal_form


def check_snf(R, M, ncols):
    U, D, V, Vi = smith_normal_form(R, M, ncols, with_inverse=True)
    assert matmul(R, matmul(R, U, M), V) == D if M else True
    assert matmul(R, V, Vi) == identity(R, ncols)
    for i, row in enumerate(D):
        for j, a in enumerate(row):
            if i != j:
                assert R.is_zero(a)
    d = diagonal(D)
    for a, b in zip(d, d[1:]):
        if not R.is_zero(b):
            assert R.divides(a, b)
    return d


def test_diag_2_3():
    assert diagonal(integer_snf([[2, 0], [0, 3]])[1]) == [1, 6]


def test_already_diagonal():
    assert integer_snf([[4]])[1] == [[4]]


def test_poly_row():
    P = PolyRing(2)
    x, x2 = P.coerce([0, 1]), P.coerce([0, 0, 1])
    d = check_snf(P, [[x, x2]], 2)
    assert d == [x]


def test_presentation_example():
    assert check_snf(INTEGERS, [[1, -2], [0, 4]], 2) == [1, 4]


def test_empty_matrix():
    U, D, V = integer_snf([], ncols=3)
    assert D == [] and V == identity(INTEGERS, 3)


ints = st.integers(-20, 20)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_integer_snf_property(m, n, data):
    M = [[data.draw(ints) for _ in range(n)] for _ in range(m)]
    d = check_snf(INTEGERS, M, n)
    assert all(a >= 0 for a in d)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_poly_snf_property(m, n, data):
    P = PolyRing(3)
    poly = st.lists(st.integers(0, 2), max_size=4).map(P.coerce)
    M = [[data.draw(poly) for _ in range(n)] for _ in range(m)]
    check_snf(P, M, n)
