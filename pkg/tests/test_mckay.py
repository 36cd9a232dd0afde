import pytest

from rdptwist.groupmodels import MuGroup, build_bd2, build_bd_star, build_bi, build_bo, build_bt_star
from rdptwist.mckay import (
    DynkinLabel,
    McKayGraph,
    UnsupportedFold,
    beta,
    character_table,
    classify_dynkin,
    classify_shape,
    describe_group,
    fold,
    graph_automorphisms,
    mckay_graph,
    normalizer_action_on_graph,
)


@pytest.fixture(scope="module")
def bo():
    return build_bo()


def test_character_dims(bo):
    assert sorted(character_table(build_bd2()).dims) == [1, 1, 1, 1, 2]
    assert sorted(character_table(bo).dims) == [1, 1, 2, 2, 2, 3, 3, 4]
    assert sorted(character_table(build_bi()).dims) == [1, 2, 2, 3, 3, 4, 4, 5, 6]


def test_orthonormal(bo):
    assert character_table(bo).is_orthonormal()


@pytest.mark.parametrize("n", range(2, 10))
def test_mu_cycle(n):
    g = mckay_graph(MuGroup(n))
    assert str(classify_dynkin(g)) == f"A{n - 1}~"
    assert g.null_vector_holds()


@pytest.mark.parametrize("n", range(2, 6))
def test_bd_star_graphs(n):
    g = mckay_graph(build_bd_star(n))
    assert str(classify_dynkin(g)) == f"D{n + 2}~"
    assert str(classify_dynkin(g, remove_trivial=True)) == f"D{n + 2}"
    assert sum(d * d for d in g.dims) == 4 * n


def test_exceptional_graphs(bo):
    assert str(classify_dynkin(mckay_graph(build_bt_star(bo=bo)))) == "E6~"
    assert str(classify_dynkin(mckay_graph(bo))) == "E7~"
    bi = mckay_graph(build_bi())
    assert str(classify_dynkin(bi)) == "E8~"
    assert bi.size == 9


def test_bd2_reduced_star():
    g = mckay_graph(build_bd2())
    r = g.remove_vertex(g.trivial)
    assert sum(r.adjacency[r.rho]) == 3


def test_path_is_a3():
    assert classify_shape([[0, 1, 0], [1, 0, 1], [0, 1, 0]]) == DynkinLabel("A", 3)


def test_automorphism_groups(bo):
    def aut(G):
        g = mckay_graph(G)
        return graph_automorphisms(g.remove_vertex(g.trivial))

    assert describe_group(aut(build_bd2())) == "S3"
    assert describe_group(aut(build_bd_star(3))) == "Z/2"
    assert describe_group(aut(bo)) == "trivial"


def test_dimension_labels_respected():
    # two leaves with different dimensions may not be swapped
    g = McKayGraph([1, 2, 1], [[0, 1, 0], [1, 0, 1], [0, 1, 0]])
    assert len(graph_automorphisms(g)) == 2
    g = McKayGraph([1, 2, 3], [[0, 1, 0], [1, 0, 1], [0, 1, 0]])
    assert len(graph_automorphisms(g)) == 1


def test_normalizer_actions(bo):
    act = normalizer_action_on_graph(bo, build_bd2(bo.tower))
    assert act.bijective and act.quotient_name == "S3"
    act = normalizer_action_on_graph(bo, build_bt_star(bo=bo))
    assert act.bijective and act.quotient_name == "Z/2"
    big = build_bd_star(6)
    act = normalizer_action_on_graph(big, build_bd_star(3, big.tower))
    assert act.bijective and act.quotient_name == "Z/2"


def test_beta():
    assert [beta(n) for n in range(2, 9)] == [1, 1, 2, 2, 3, 3, 4]


def test_fold():
    assert fold(DynkinLabel("A", 5), 2) == DynkinLabel("B", 3)
    assert fold(DynkinLabel("D", 4), 6) == DynkinLabel("G", 2)
    assert fold(DynkinLabel("D", 4), 2) == DynkinLabel("C", 3)
    assert fold(DynkinLabel("D", 6), 2) == DynkinLabel("C", 5)
    assert fold(DynkinLabel("E", 6), 2) == DynkinLabel("F", 4)
    assert fold(DynkinLabel("E", 8), 1) == DynkinLabel("E", 8)
    with pytest.raises(UnsupportedFold):
        fold(DynkinLabel("E", 7), 2)


def test_label_parse():
    assert DynkinLabel.parse("E6~") == DynkinLabel("E", 6, True)
    assert str(DynkinLabel("G", 2)) == "G2"
