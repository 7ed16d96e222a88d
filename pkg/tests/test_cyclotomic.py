import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffhgf.cyclotomic import CycloNumber, cyclo_sum, cyclotomic_poly, euler_phi, root_of_unity, try_rational

ORDERS = [1, 2, 3, 4, 5, 6, 8, 9, 12, 15, 20, 24]


def numeric(order, exps):
    return sum(c * cmath.exp(2j * cmath.pi * k / order) for k, c in exps)


@st.composite
def cyclo(draw, orders=ORDERS):
    n = draw(st.sampled_from(orders))
    terms = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(-5, 5)), max_size=6))
    x = CycloNumber.rational(0, n)
    for k, c in terms:
        x = x + root_of_unity(n, k) * c
    return x, numeric(n, terms)


def test_euler_phi_small():
    assert [euler_phi(n) for n in range(1, 13)] == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]


def test_cyclotomic_poly_degree_and_root():
    for n in range(1, 40):
        poly = cyclotomic_poly(n)
        assert poly.degree() == euler_phi(n)
        z = cmath.exp(2j * cmath.pi / n)
        val = sum(int(c) * z**i for i, c in enumerate(poly.coeffs()))
        assert abs(val) < 1e-9


@settings(max_examples=150, deadline=None)
@given(cyclo(), cyclo())
def test_ring_ops_match_complex(x, y):
    (a, za), (b, zb) = x, y
    assert abs(complex(a + b) - (za + zb)) < 1e-8
    assert abs(complex(a - b) - (za - zb)) < 1e-8
    assert abs(complex(a * b) - za * zb) < 1e-7
    if not b.is_zero():
        assert abs(complex(a / b) - za / zb) < 1e-6 * max(1, abs(za / zb))


@settings(max_examples=100, deadline=None)
@given(cyclo())
def test_embed_restrict_round_trip(x):
    a, _ = x
    big = a.embed(a.order * 6)
    assert big == a
    assert big.restrict(a.order) == a


def test_restrict_rejects_outside_subfield():
    i = root_of_unity(4)
    assert i.embed(12).restrict(6) is None
    # sqrt(-3) = 2 zeta_3 + 1 lives in Q(zeta_3) inside Q(zeta_12)
    s = root_of_unity(12, 4) * 2 + 1
    assert s.restrict(3) == root_of_unity(3) * 2 + 1


def test_equality_across_orders():
    assert root_of_unity(6, 2) == root_of_unity(3, 1)
    assert root_of_unity(4, 2) == CycloNumber.rational(-1)
    assert root_of_unity(5, 1) != root_of_unity(10, 1)


def test_sum_of_all_roots_vanishes():
    for n in range(2, 20):
        assert cyclo_sum([root_of_unity(n, k) for k in range(n)], n).is_zero()


def test_galois_and_conjugate():
    z = root_of_unity(7)
    x = z * 3 + z**2 - Fraction(1, 2)
    assert abs(complex(x.conjugate()) - complex(x).conjugate()) < 1e-12
    assert x.galois(3) == root_of_unity(7, 3) * 3 + root_of_unity(7, 6) - Fraction(1, 2)
    norm = x * x.conjugate()
    assert abs(complex(norm).imag) < 1e-12


def test_try_rational():
    assert try_rational(root_of_unity(3) + root_of_unity(3, 2)) == Fraction(-1)
    assert try_rational(root_of_unity(3)) is None


def test_pow_and_inverse():
    z = root_of_unity(9)
    assert z**9 == CycloNumber.rational(1)
    assert (z + 2) ** -2 * (z + 2) ** 2 == CycloNumber.rational(1)
    with pytest.raises(ZeroDivisionError):
        CycloNumber.rational(0, 5).inverse()


def test_json_round_trip():
    x = root_of_unity(12, 5) * Fraction(3, 7) - 2
    assert CycloNumber.from_json(x.to_json()) == x


def test_immutable():
    x = root_of_unity(5)
    with pytest.raises(AttributeError):
        x.order = 10
