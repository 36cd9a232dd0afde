import pytest

from rdptwist.bipoly import Mat2
from rdptwist.fieldtower import FieldTower, adjoin_cyclotomic
from rdptwist.groupmodels import (
    GroupModelError,
    MuGroup,
    bd2_inside,
    bi_generators,
    bo_case,
    bo_generators,
    build_bd2,
    build_bd_star,
    build_bd_twisted,
    build_bi,
    build_bo,
    build_bt_star,
    check_bi_presentation,
    cyclic_subgroup,
    group_closure,
    normalizer_in,
    permutation_sign,
    sample_mu_normalizer,
    sign_map,
    verify_descended_reps,
)

Q = FieldTower.rationals()


@pytest.fixture(scope="module")
def bo():
    return build_bo()


def test_identity_closure():
    assert group_closure([Mat2.identity(Q)], tower=Q).order == 1


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_bd_star_orders(n):
    assert build_bd_star(n).order == 4 * n


def test_quaternion_group():
    G = build_bd_star(2)
    assert not G.is_abelian()
    assert len(G.center()) == 2
    assert sorted(G.element_order(i) for i in range(G.order)) == [1, 2, 4, 4, 4, 4, 4, 4]


def test_bo_bt_bi_orders(bo):
    assert bo.order == 48
    assert build_bt_star(bo=bo).order == 24
    assert build_bi().order == 120


def test_bi_presentation():
    T, _ = adjoin_cyclotomic(Q, 5)
    rep = check_bi_presentation(*bi_generators(T))
    assert all(rep.values())


def test_bo_contains_bd4_star(bo):
    diag = [g for g in bo.elements if (g.b.is_zero() and g.c.is_zero()) or (g.a.is_zero() and g.d.is_zero())]
    assert len(diag) == 16


def test_trichotomy_covers_bo(bo):
    kinds = {bo_case(g)[0] for g in bo.elements}
    assert kinds == {"diagonal", "antidiagonal", "generic"}


def test_bo_case_rejects_outsider():
    T, z = adjoin_cyclotomic(Q, 8)
    with pytest.raises(GroupModelError):
        bo_case(Mat2(T.one(), T.one(), T.zero(), T.one(), T))


def test_sign_map(bo):
    perms = sign_map(bo)
    inside = bd2_inside(bo)
    assert all(perms[k] == (0, 1, 2) for k in inside)
    zeta_diag = bo_generators(bo.tower)[2]
    assert perms[bo.index(zeta_diag)] == (1, 0, 2)
    assert len(set(perms)) == 6
    assert sum(1 for p in perms if permutation_sign(p) == 1) == 24


def test_normalizers(bo):
    assert normalizer_in(bo, build_bd2(bo.tower)).order == 48
    assert normalizer_in(bo, build_bt_star(bo=bo)).order == 48
    bi = build_bi()
    t, _ = bi_generators(bi.tower)
    assert normalizer_in(bi, cyclic_subgroup(bi, t)).order == 20


def test_mu_normalizer_samples():
    T, _ = adjoin_cyclotomic(Q, 5)
    mu = MuGroup(5, T)
    assert all(mu.normalizes(g) for g in sample_mu_normalizer(T))
    assert not mu.normalizes(Mat2(1, 1, 0, 1, T))


def test_bd_twisted():
    model, twist = build_bd_twisted(3)
    assert model.order == 12
    twist.verify(model)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_descended_reps(n):
    rep = verify_descended_reps(n)
    assert rep and all(r["multiplicative"] and r["equivariant"] for r in rep)
