from hypothesis import given
from hypothesis import strategies as st

from rdptwist.bipoly import (
    BivariatePoly,
    Mat2,
    TrivariatePoly,
    act,
    invariant_space,
    kernel,
    molien_coefficients,
    reynolds,
    substitute,
)
from rdptwist.fieldtower import FieldTower, adjoin_cyclotomic
from rdptwist.groupmodels import build_bd2

Q = FieldTower.rationals()
x, y = BivariatePoly.gens(Q)


def test_act_examples():
    T, z3 = adjoin_cyclotomic(Q, 3)
    X, Y = BivariatePoly.gens(T)
    assert act(Mat2.diag(z3, z3.inverse()), X**2 * Y**2) == X**2 * Y**2
    assert act(Mat2(0, 1, -1, 0, Q), x * y) == -(x * y)
    f = x**3 + 2 * x * y
    assert act(Mat2.identity(Q), f) == f


def test_reynolds_bd2():
    G = build_bd2()
    X, Y = BivariatePoly.gens(G.tower)
    assert reynolds(G, X**4) == (X**4 + Y**4).scale(G.tower.coerce("1/2"))
    assert reynolds(G, X**2 * Y**2) == X**2 * Y**2
    assert [len(invariant_space(G, d)) for d in (2, 4)] == [0, 2]


def test_kernel_examples():
    assert len(kernel([[1, 1], [1, 1]], 2)) == 1
    assert kernel([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3) == []
    assert len(kernel([[2, -1, 0]], 3)) == 2


def test_substitute():
    F = TrivariatePoly(Q, {(1, 1, 0): 1, (0, 0, 4): -1})
    assert substitute(F, x**4, y**4, x * y).is_zero()
    G = TrivariatePoly(Q, {(1, 0, 0): 1})
    assert substitute(G, x + y, x, y) == x + y


def test_molien_bd2():
    assert [int(c) for c in molien_coefficients(build_bd2(), 8)] == [1, 0, 0, 0, 2, 0, 1, 0, 3]


small = st.integers(-3, 3)


@given(small, small, small, small, small, small, small, small)
def test_act_composes(a, b, c, d, e, f, g, h):
    A, B = Mat2(a, b, c, d, Q), Mat2(e, f, g, h, Q)
    p = x**3 - 2 * x * y**2 + y
    # f((x, y)AB) = (act(B, f))((x, y)A)
    assert act(A * B, p) == act(A, act(B, p))


@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(-5, 5)), max_size=5))
def test_poly_ring_laws(terms):
    p = BivariatePoly(Q, {(i, j): c for i, j, c in terms})
    q = x * y - 3 * y**2 + 1
    assert (p + q) * q == p * q + q * q
    assert (p - p).is_zero()
