import pytest

from stablab.errors import DualityViolation, UnknownEntry
from stablab.symspace import (PoincarePolynomial, SymmetricSpaceEntry,
                              catalog_entry, exception_entries,
                              instability_verdict,
                              is_odd_rational_homology_sphere, kunneth_product,
                              load_catalog, poincare_polynomial, _validated)


def test_polynomial_arithmetic():
    p = PoincarePolynomial((1, 0, 1))
    q = PoincarePolynomial((1, 1))
    assert (p * q).to_list() == [1, 1, 1, 1]
    assert p.degree == 2
    assert p.euler_characteristic() == 2
    assert q.euler_characteristic() == 0
    assert p.is_palindromic()
    assert not PoincarePolynomial((1, 2, 3)).is_palindromic()


def test_catalog_loads_and_validates():
    cat = load_catalog()
    assert len(cat) >= 30
    for e in cat.values():
        p = poincare_polynomial(e)
        assert p.coefficient(0) == 1
        assert p.degree == e.dim
        assert p.is_palindromic()


def test_entry_lookup_by_group_label():
    assert catalog_entry("SO(3,1)").name == "S3"
    assert catalog_entry("SU3_SO3").group == "SL(3,R)"
    with pytest.raises(UnknownEntry):
        catalog_entry("E8")


def test_sphere_polynomials():
    s5 = poincare_polynomial(catalog_entry("S5"))
    assert s5.to_list() == [1, 0, 0, 0, 0, 1]
    assert is_odd_rational_homology_sphere(s5, 5)
    s4 = poincare_polynomial(catalog_entry("S4"))
    assert not is_odd_rational_homology_sphere(s4, 4)


def test_su_so_dimensions():
    # dim SU(n)/SO(n) = (n-1)(n+2)/2, exterior degrees 5,9,...
    e = catalog_entry("SU5_SO5")
    assert e.dim == 4 * 7 // 2
    p = poincare_polynomial(e)
    assert p.coefficient(5) == 1 and p.coefficient(9) == 1


def test_su16_so16_degree_14():
    # 14 = 5 + 9 from the two lowest exterior generators
    p = poincare_polynomial(catalog_entry("SU16_SO16"))
    assert p.coefficient(14) == 1


def test_exception_list():
    assert sorted(exception_entries()) == ["S3", "S5", "S7", "S9", "SU3_SO3"]
    groups = {catalog_entry(n).group for n in exception_entries()}
    assert groups == {"SO(3,1)", "SO(5,1)", "SO(7,1)", "SO(9,1)", "SL(3,R)"}


def test_verdicts():
    v = instability_verdict(["SO(4,1)"])
    assert v["verdict"] == "cocompact lattices not operator stable"
    v = instability_verdict(["SL(3,R)"])
    assert v["verdict"] == "exception case"
    # every 2-factor product is unstable
    names = list(load_catalog())
    for a in names[::5]:
        for b in names[::7]:
            v = instability_verdict([a, b])
            assert v["verdict"] == "cocompact lattices not operator stable"


def test_kunneth_is_multiplication():
    p = poincare_polynomial(catalog_entry("S3"))
    assert kunneth_product(p, p).to_list() == [1, 0, 0, 2, 0, 0, 1]


def test_bad_entry_rejected():
    with pytest.raises(DualityViolation):
        _validated(SymmetricSpaceEntry("bad", "X", 2, "explicit", (1, 1, 2)))
    with pytest.raises(ValueError):
        _validated(SymmetricSpaceEntry("bad2", "X", 3, "sphere", (4,)))
