import pytest
from hypothesis import given
from hypothesis import strategies as st

from quadknot.laurent import LaurentPoly

polys = st.dictionaries(st.integers(-12, 12), st.integers(-5, 5), max_size=5).map(LaurentPoly)


def test_zero_terms_dropped():
    p = LaurentPoly({1: 0, 2: 3})
    assert p.terms == {2: 3} and len(p) == 1
    assert not LaurentPoly({4: 0})


def test_arithmetic_examples():
    a = LaurentPoly({1: 1, -1: 1})
    assert a * a == LaurentPoly({2: 1, 0: 2, -2: 1})
    assert a - a == LaurentPoly()
    assert a + 1 == LaurentPoly({1: 1, -1: 1, 0: 1})
    assert a ** 3 == a * a * a
    assert LaurentPoly.monomial(3, -1) ** -1 == LaurentPoly({-3: -1})
    with pytest.raises(ValueError):
        a ** -1


def test_substitution():
    p = LaurentPoly({-4: 1, -12: 1, -16: -1})
    assert p.substitute_power(-1) == LaurentPoly({4: 1, 12: 1, 16: -1})
    assert p.divide_exponents(-4) == LaurentPoly({1: 1, 3: 1, 4: -1})
    with pytest.raises(ValueError):
        LaurentPoly({3: 1}).divide_exponents(2)
    assert (p.min_degree(), p.max_degree()) == (-16, -4)


def test_format_and_json():
    p = LaurentPoly({5: -1, -3: -1, -7: 1})
    assert p.format() == "-A^5 - A^-3 + A^-7"
    assert LaurentPoly.from_json(p.to_json()) == p
    assert LaurentPoly().format() == "0"


@given(polys, polys, polys)
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == LaurentPoly()


@given(polys, polys)
def test_mirror_is_a_ring_map(a, b):
    assert (a * b).substitute_power(-1) == a.substitute_power(-1) * b.substitute_power(-1)
    assert a.substitute_power(-1).substitute_power(-1) == a
