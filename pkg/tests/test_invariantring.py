import pytest
from hypothesis import given
from hypothesis import strategies as st

from rdptwist import invariantring as inv
from rdptwist.bipoly import BivariatePoly, Mat2, TrivariatePoly
from rdptwist.fieldtower import Automorphism, FieldTower, adjoin
from rdptwist.groupmodels import build_bd2

Q = FieldTower.rationals()


def test_split_cases_all_vanish():
    cases = inv.split_identity_cases()
    assert len(cases) == 15
    for name, F, triple in cases:
        ok, res = inv.verify_identity(F, triple)
        assert ok, (name, str(res))


def test_perturbed_relation_leaves_residual():
    tr = inv.fundamental_invariants("mu", 3)
    F = TrivariatePoly(Q, {(1, 1, 0): 1, (0, 0, 3): -1, (0, 0, 0): 1}, tr.weights)
    ok, res = inv.verify_identity(F, tr)
    assert not ok and res == BivariatePoly.constant(Q, 1)


def test_identity_projection():
    tr = inv.fundamental_invariants("mu", 2)
    ok, res = inv.verify_identity(TrivariatePoly(Q, {(1, 0, 0): 1}, tr.weights), tr)
    assert res == tr[0]


def test_bd2_generators_invariant():
    G = build_bd2()
    tr = inv.fundamental_invariants("bd2")
    assert tr.is_invariant_under(G)


def test_bi_klein_form():
    f, H, T = inv.bi_invariants()
    x, y = BivariatePoly.gens(Q)
    assert f == x * y * (x**10 - 11 * x**5 * y**5 - y**10)
    assert H.total_degree() == 20 and T.total_degree() == 30


@pytest.mark.parametrize("kind,n,expected", [("mu", 4, {(1, 1, 0), (0, 0, 4)}), ("bd-star", 3, {(2, 1, 0), (0, 4, 0), (0, 0, 2)})])
def test_syzygy_search(kind, n, expected):
    rel = inv.syzygy_search(inv.fundamental_invariants(kind, n))
    assert set(rel.poly.terms) == expected
    assert rel.kernel_dimension == 1


def test_bi_syzygy_matches_normal_form():
    tr = inv.fundamental_invariants("bi")
    rel = inv.syzygy_search(tr)
    F = TrivariatePoly(Q, {(0, 0, 2): 1, (0, 3, 0): 1, (5, 0, 0): 1728}, tr.weights)
    assert rel.poly.proportional_to(F) is not None


def test_wrong_characteristic():
    with pytest.raises(inv.WrongCharacteristic):
        inv.fundamental_invariants("bi", tower=FieldTower.prime_field(5))


def _quadratic_action(n, d):
    L = adjoin(Q, "s", [-d, 0, 1])
    s = L.gen(1)
    sigma = Automorphism(L, [-s])
    basis = inv.fundamental_invariants("mu", n).polys
    return L, s, inv.SemilinearAction.from_matrices(L, 0, [sigma], [Mat2(0, 1, 1, 0, Q)], basis)


def test_eigen_descent_mu():
    L, s, action = _quadratic_action(3, 2)
    tr = inv.descend(inv.InvariantTriple(action.basis), action, "eigen", s=s)
    x, y = BivariatePoly.gens(L)
    assert tr[0] == x**3 + y**3
    assert tr[1] == (x**3 - y**3).scale(s)
    # dA^2 - B^2 = 4d C^n
    F = TrivariatePoly(Q, {(2, 0, 0): 2, (0, 2, 0): -1, (0, 0, 3): -8}, tr.degrees)
    assert inv.verify_identity(F.to_tower(L), tr)[0]
    rel = inv.syzygy_search(tr)
    assert inv.relation_over_base(rel, Q).proportional_to(F) is not None


def test_trace_descent_char2():
    F2 = FieldTower.prime_field(2)
    L = adjoin(F2, "a", [1, 1, 1])
    a = L.gen(1)
    basis = inv.fundamental_invariants("mu", 5).polys
    action = inv.SemilinearAction.from_matrices(L, 0, [Automorphism(L, [a + 1])], [Mat2(0, 1, 1, 0, Q)], basis)
    tr = inv.descend(inv.InvariantTriple(action.basis), action, "trace")
    # dA^2 + AB + B^2 = C^n with d = 1
    F = TrivariatePoly(F2, {(2, 0, 0): 1, (1, 1, 0): 1, (0, 2, 0): 1, (0, 0, 5): 1}, tr.degrees)
    assert inv.verify_identity(F.to_tower(L), tr)[0]


def test_unfixed_vectors_rejected():
    L, s, action = _quadratic_action(3, 2)
    with pytest.raises(inv.NotRational):
        inv.descend(inv.InvariantTriple(action.basis), action, "vectors", vectors=[[s, 0, 0], [1, 1, 0], [0, 0, 1]])


def test_trivial_descent():
    tr = inv.fundamental_invariants("bd-star", 3)
    action = inv.SemilinearAction.trivial(Q, tr.polys)
    assert inv.descend(tr, action).polys == tr.polys


@given(st.integers(2, 7), st.sampled_from([2, 3, 5, 6, 7, -1, -3]))
def test_quadratic_descent_is_rational(n, d):
    L, s, action = _quadratic_action(n, d)
    tr = inv.descend(inv.InvariantTriple(action.basis), action, "eigen", s=s)
    rel = inv.syzygy_search(tr)
    assert rel.poly.coefficients_in(0)
