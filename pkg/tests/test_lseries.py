from fractions import Fraction

import pytest

from ffhgf.cyclotomic import CycloNumber, root_of_unity
from ffhgf.finite_field import make_field
from ffhgf.lseries import (
    LPolynomial,
    TruncSeries,
    artin_l,
    default_order,
    detect_polynomial,
    dual_symmetry,
    exp_series,
    l_from_theorem,
    weil_check,
    zeta_series,
)
from ffhgf.varieties import VarietySpec

F3 = make_field(3)
F4 = make_field(2, 2)
F5 = make_field(5)


def test_exp_series_of_geometric_counts():
    # N_r = a^r gives 1/(1 - a t)
    a = 3
    s = exp_series([a**r for r in range(1, 7)])
    assert s == TruncSeries([a**k for k in range(7)])


def test_exp_series_of_polynomial():
    # N_r = -(x^r + y^r) gives (1 - x t)(1 - y t)
    x, y = 2, 5
    s = exp_series([-(x**r + y**r) for r in range(1, 6)])
    assert s == TruncSeries.from_poly([1, -(x + y), x * y], 5)


def test_series_algebra():
    z = root_of_unity(3)
    s = TruncSeries([1, z, Fraction(1, 2), 0, 7])
    assert s * s.inverse() == TruncSeries.one(4)
    assert s**3 == s * s * s
    assert s**-2 * s**2 == TruncSeries.one(4)
    with pytest.raises(ZeroDivisionError):
        TruncSeries([0, 1]).inverse()
    assert s.to_json()["R"] == 4


def test_detect_polynomial_needs_guard_terms():
    s = TruncSeries.from_poly([1, 2, 3], 5)
    p = detect_polynomial(s, 2)
    assert p.degree == 2
    assert detect_polynomial(s, 1) is None
    with pytest.raises(ValueError):
        detect_polynomial(TruncSeries.from_poly([1, 2, 3], 4), 2)


def test_detect_polynomial_trims_trailing_zeros():
    s = TruncSeries.from_poly([1, -1], 6)
    assert detect_polynomial(s, 3).degree == 1


def test_weil_check():
    # 1 + 5 t^2 has reciprocal roots +-sqrt(-5)
    good = LPolynomial([CycloNumber.rational(c) for c in (1, 0, 5)], {})
    assert weil_check(good, 5, 1).ok
    bad = LPolynomial([CycloNumber.rational(c) for c in (1, 1, 1)], {})
    report = weil_check(bad, 5, 1)
    assert not report.ok and len(report.moduli) == 2
    assert weil_check(LPolynomial([CycloNumber.rational(1)], {}), 5, 1).ok
    with pytest.raises(ValueError):
        weil_check(good, 5, 1, tol=0)


def test_product_of_l_functions_is_zeta():
    for spec in (
        VarietySpec.make("CD", F5, 2, [2], a=1, b=[1], c=1),
        VarietySpec.make("SD", F3, 2, [2, 2], a=1, b=[1, 1], c=1),
        VarietySpec.make("XD", F5, 4, [2], a=1, b=[1], c=1),
    ):
        R = 3
        prod = TruncSeries.one(R)
        for m in range(spec.d):
            prod = prod * artin_l(spec, m, R)
        assert prod == zeta_series(spec, R)


def test_trivial_l_function():
    spec = VarietySpec.make("SD", F3, 2, [2, 2], a=1, b=[1, 1], c=1)
    assert l_from_theorem(spec, 0, 4) == artin_l(spec, 0, 4)
    x = VarietySpec.make("XD", F5, 2, [2], a=1, b=[1], c=1)
    assert l_from_theorem(x, 0, 4) == artin_l(x, 0, 4)


def test_curve_l_function_matches_theorem():
    spec = VarietySpec.make("CD", F3, 2, [2], a=1, b=[1], c=1)
    assert l_from_theorem(spec, 1, 4) == artin_l(spec, 1, 4)


def test_elliptic_curve_l_polynomial():
    # y^2 = x(1-x)(1-3x) over F_7, with its point at infinity
    spec = VarietySpec.make("XD", make_field(7), 2, [3], a=1, b=[1], c=1)
    s = artin_l(spec, 1, default_order(spec))
    poly = detect_polynomial(s, 2)
    assert poly is not None and poly.degree == 2
    assert poly.coeffs[2] == 7
    assert weil_check(poly, 7, 1).ok


def test_uncorrected_s4_factor_disagrees():
    spec = VarietySpec.make("S4", F4, 3, [F4.generator] * 2, a=1, b=1, c1=3, c2=3)
    truth = artin_l(spec, 1, 1)
    assert l_from_theorem(spec, 1, 1) == truth
    assert l_from_theorem(spec, 1, 1, uncorrected=True) != truth


def test_unsigned_closed_form_disagrees_for_one_variable():
    spec = VarietySpec.make("SA", F5, 2, [2], a=1, b=[1], c=[1])
    truth = artin_l(spec, 1, 2)
    assert l_from_theorem(spec, 1, 2) == truth
    assert l_from_theorem(spec, 1, 2, uncorrected=True) != truth


def test_dual_symmetry_is_observed_on_weil_polynomials():
    spec = VarietySpec.make("XD", make_field(7), 3, [2, 3], a=1, b=[1, 1], c=1)
    poly = detect_polynomial(artin_l(spec, 1, 8), 3)
    assert dual_symmetry(poly, 7, 1)
    fake = LPolynomial([CycloNumber.rational(c) for c in (1, 1, 1)], {})
    assert not dual_symmetry(fake, 5, 1)
