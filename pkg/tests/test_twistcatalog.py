import pytest
from hypothesis import given
from hypothesis import strategies as st

from rdptwist import twistcatalog as tc
from rdptwist.fieldtower import FieldTower, adjoin_cyclotomic
from rdptwist.mckay import DynkinLabel

Q = FieldTower.rationals()
F2, F3 = FieldTower.prime_field(2), FieldTower.prime_field(3)


def test_table_rows():
    rows = tc.classification_table()
    assert len(rows) == 12
    assert [r.printed for r in tc.classification_table(2)] == ["XY = Z^n", "dX^2 + XY + Y^2 = Z^n"]
    e7 = next(r for r in rows if r.label == DynkinLabel("E", 7))
    assert e7.printed == "X^2 + 4Y^3 = YZ^3"
    assert {r.label.family for r in tc.classification_table(3)} == {"A", "B", "C", "D", "G"}


@pytest.mark.parametrize("key,n,expected", [("A", 4, "XY - Z^4"), ("E7", None, "X^2 + 4Y^3 - YZ^3"), ("E8", None, "X^2 + Y^3 + Z^5")])
def test_split_equations(key, n, expected):
    eq = tc.build_split(key, n)
    assert eq.equation == expected
    assert eq.transcript["verified"]


def test_b_examples():
    eq = tc.build_b(3, 2)
    assert eq.equation == "2X^2 - Y^2 - 8Z^3"
    eq = tc.build_b(4, 2)
    assert eq.label == DynkinLabel("B", 2)
    assert eq.equation == "2X^2 - Y^2 - 8Z^4"
    assert tc.base_change_check(eq) == {"split_label": "A3", "relation": "XY - Z^4", "matches": True}


def test_b_char2():
    eq = tc.build_b(5, 1, F2)
    assert eq.equation == "X^2 + XY + Y^2 + Z^5"  # = Z^5 in characteristic 2
    with pytest.raises(tc.SplitParameter):
        tc.build_b(5, 0, F2)


def test_c_example():
    eq = tc.build_c(3, 2)
    assert eq.label == DynkinLabel("C", 4)
    assert eq.poly == tc.template("C", Q, eq.poly.weights, d=2, n=3)
    assert tc.base_change_check(eq)["matches"]


def test_f4_and_e6():
    eq = tc.build_f4(2)
    assert eq.label == DynkinLabel("F", 4)
    assert eq.equation == "X^2 - 8Y^4 - Z^3"
    assert tc.base_change_check(eq)["matches"]
    assert tc.build_f4(4).label == DynkinLabel("E", 6)
    # -3d a square: no extension needed
    assert tc.build_f4(-3).transcript["verified"]


def test_c3_identity():
    eq = tc.build_c3(2)
    assert eq.transcript["identity 4C^2 = A(dA^2 - B^2)"]
    for j in (1, 2):
        assert tc.build_c3(3, fixed=j).transcript["verified"]


def test_g2_s3_cubic():
    eq = tc.build_g2(-1, -1)
    t = eq.transcript
    assert t["cubic_galois"] == "S3"
    assert t["D"] == "-23"
    assert t["substitution"][0] == "X = 3*A"
    assert eq.equation == "-23X^3 + 23X^2Y - 9XY^2 + Y^3 - 2Z^2"


def test_g2_cyclic_cubic():
    eq = tc.build_g2(-3, 1)  # discriminant 81
    assert eq.transcript["cubic_galois"] == "Z/3"
    assert eq.transcript["verified"]


def test_g2_kummer():
    K, _ = adjoin_cyclotomic(Q, 3)
    eq = tc.build_g2(0, -2, K)
    assert eq.equation == "2X^3 + 1/2Y^3 + Z^2"
    with pytest.raises(tc.UnsupportedCase):
        tc.build_g2(0, -2)


@pytest.mark.parametrize("b,expected", [(1, "-X^3 + X^2Y - Y^3 + Z^2"), (-1, "X^3 + X^2Y - Y^3 + Z^2")])
def test_g2_char3(b, expected):
    assert tc.build_g2(-1, b, F3).equation == expected


def test_g2_char3_over_f9():
    F9 = tc.adjoin(F3, "c", [1, 0, 1])
    assert tc.build_g2(-1, 1, F9).transcript["verified"]


def test_degenerate_cubics():
    with pytest.raises(tc.DegenerateCubic):
        tc.build_g2(-1, 0)  # t^3 - t has the root 0
    with pytest.raises(tc.DegenerateCubic):
        tc.build_g2(0, 1, F3)
    with pytest.raises(tc.UnsupportedCharacteristic):
        tc.build_f4(2, F3)


def test_split_parameter():
    with pytest.raises(tc.SplitParameter):
        tc.build_b(3, 9)


def test_equivalence():
    assert tc.equivalence_of_parameters("B", 2, 8) is True
    assert tc.equivalence_of_parameters("B", 2, 3) is False
    assert tc.equivalence_of_parameters("B2", 1, 0, F2) is False
    assert tc.equivalence_of_parameters("G2", 1, 2) is None
    with pytest.raises(tc.LabelMismatch):
        tc.equivalence_of_parameters("E8", 1, 2)


S3_TARGET = [(0, 1, 2), (1, 0, 2), (0, 2, 1), (2, 1, 0), (1, 2, 0), (2, 0, 1)]
Z2_TARGET = [(0, 1), (1, 0)]


@pytest.mark.parametrize(
    "gal,target,count",
    [
        (tc.PermGroup.trivial(), S3_TARGET, 1),
        (tc.PermGroup.cyclic(2), S3_TARGET, 2),
        (tc.PermGroup.cyclic(3), S3_TARGET, 2),
        (tc.PermGroup.symmetric3(), S3_TARGET, 3),
        (tc.PermGroup.cyclic(2), Z2_TARGET, 2),
        (tc.PermGroup.cyclic(3), Z2_TARGET, 1),
        (tc.PermGroup.symmetric3(), Z2_TARGET, 2),
        (tc.PermGroup.cyclic(2), [(0,)], 1),
    ],
)
def test_hom_counts(gal, target, count):
    assert len(tc.enumerate_homomorphism_classes(gal, target)) == count


def test_raw_hom_count():
    assert len(tc.homomorphisms(tc.PermGroup.cyclic(2), S3_TARGET)) == 4
    assert len(tc.homomorphisms(tc.PermGroup.symmetric3(), S3_TARGET)) == 10


def test_twists_of_d4_fold_correctly():
    ext = {"kind": "cubic", "a": -1, "b": -1}
    gal = tc.galois_of_extension(ext)
    ts = tc.enumerate_twists("bd2", gal, extension=ext, target=S3_TARGET)
    labels = [str(tc.build_twisted_equation(t).label) for t in ts]
    assert labels == ["D4", "C3", "G2"]
    assert [str(t.folded_label) for t in ts] == labels


@given(st.sampled_from([2, 3, 5, 6, 7, 10, -1, -2, -5]), st.integers(2, 7))
def test_b_family(d, n):
    eq = tc.build_b(n, d)
    assert eq.transcript["verified"]
    assert eq.label == DynkinLabel("B", n // 2)


@given(st.sampled_from([2, 3, 5, -1, -2]), st.integers(3, 5))
def test_c_family(d, n):
    assert tc.build_c(n, d).transcript["verified"]


@given(st.sampled_from([2, 3, 5, -1, -2, 6]))
def test_f4_family(d):
    assert tc.build_f4(d).transcript["verified"]


@given(st.sampled_from([(-1, -1), (-4, 1), (1, 1), (-3, 1), (-7, 7), (2, 5)]))
def test_g2_family(ab):
    a, b = ab
    eq = tc.build_g2(a, b)
    assert eq.transcript["verified"]
