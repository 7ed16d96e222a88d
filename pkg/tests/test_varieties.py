import itertools
import logging

import pytest

from ffhgf.cyclotomic import CycloNumber
from ffhgf.finite_field import make_field
from ffhgf.varieties import (
    BudgetError,
    HypothesisError,
    VarietyError,
    VarietySpec,
    brute_count,
    chi_char_sum,
    chi_count,
    chi_fixed_point,
    chi_formula,
    chi_table,
    formula_parts,
    hypothesis_violations,
)

F3 = make_field(3)
F4 = make_field(2, 2)
F5 = make_field(5)
F7 = make_field(7)

INSTANCES = {
    "CD": VarietySpec.make("CD", F5, 2, [2], a=1, b=[1], c=1),
    "XD": VarietySpec.make("XD", F7, 3, [2, 3], a=1, b=[1, 1], c=1),
    "SD": VarietySpec.make("SD", F5, 2, [2, 3], a=1, b=[1, 2], c=1),
    "SA": VarietySpec.make("SA", F7, 3, [2, 3], a=1, b=[1, 2], c=[1, 2]),
    "SB": VarietySpec.make("SB", F7, 3, [2, 3], a=[1, 2], b=[1, 1], c=1),
    "SC": VarietySpec.make("SC", F5, 2, [2, 3], a=1, b=1, c=[1, 2]),
    "S4": VarietySpec.make("S4", F7, 3, [2, 2], a=1, b=1, c1=3, c2=3),
}


def brute_by_hand(spec, r=1):
    """Point count of y^d = f(x) from a plain loop, for the one-variable families."""
    F = spec.field
    assert r == 1 and spec.dim == 1
    lam = spec.lam[0]
    a, b, c = spec.e("a"), spec.es("b")[0], spec.e("c")
    total = 0
    for x in range(F.q):
        fx = F.mul(F.mul(F.pow(x, a), F.pow(F.sub(1, x), c)), F.pow(F.sub(1, F.mul(lam, x)), b))
        total += sum(1 for y in range(F.q) if F.pow(y, spec.d) == fx)
    return total


@pytest.mark.parametrize("family", sorted(INSTANCES))
def test_three_routes_agree_and_sum_to_brute(family):
    spec = INSTANCES[family]
    total = CycloNumber.rational(0)
    for m in range(spec.d):
        fixed = chi_fixed_point(spec, m).value
        assert fixed == chi_char_sum(spec, m).value
        assert fixed == chi_formula(spec, m).value
        total = total + fixed
    assert total == brute_count(spec)


def test_brute_count_against_plain_loop():
    for lam, a, b, c in itertools.product([2, 3, 4], [1], [1, 2], [1, 3]):
        spec = VarietySpec.make("CD", F5, 2, [lam], a=a, b=[b], c=c)
        assert brute_count(spec) == brute_by_hand(spec)


def test_second_extension_degree():
    for spec in (INSTANCES["CD"], INSTANCES["SD"], VarietySpec.make("SC", F3, 2, [2, 2], a=1, b=1, c=[1, 2])):
        table = chi_table(spec, 2, "fixed")
        for m in range(spec.d):
            assert table[m].value == chi_char_sum(spec, m, 2).value == chi_formula(spec, m, 2).value
        total = CycloNumber.rational(0)
        for row in table:
            total = total + row.value
        assert total == brute_count(spec, 2)


def test_characteristic_two():
    spec = VarietySpec.make("CD", F4, 3, [F4.generator], a=1, b=[1], c=1)
    for m in range(3):
        assert chi_fixed_point(spec, m).value == chi_char_sum(spec, m).value == chi_formula(spec, m).value


@pytest.mark.parametrize("family", sorted(INSTANCES))
def test_conjugation_symmetry(family):
    spec = INSTANCES[family]
    for m in range(1, spec.d):
        assert chi_char_sum(spec, -m).value == chi_char_sum(spec, m).value.conjugate()


@pytest.mark.parametrize("family", sorted(INSTANCES))
@pytest.mark.parametrize("r", [1, 2])
def test_trivial_component(family, r):
    spec = INSTANCES[family]
    q = spec.field.q
    expected = 1 + q**r if family == "XD" else q ** (spec.dim * r)
    assert chi_char_sum(spec, 0, r).value == expected
    if r == 1:
        assert chi_fixed_point(spec, 0, r).value == expected


@pytest.mark.parametrize("family,kw", [
    ("SA", dict(a=1, b=[1], c=[1])),
    ("SB", dict(a=[1], b=[1], c=1)),
    ("SC", dict(a=1, b=1, c=[1])),
])
def test_unsigned_closed_form_fails_for_one_variable(family, kw):
    spec = VarietySpec.make(family, F5, 2, [2], **kw)
    truth = chi_fixed_point(spec, 1).value
    assert chi_formula(spec, 1).value == truth
    assert chi_formula(spec, 1, uncorrected=True).value != truth


def test_formula_refuses_when_gcd_conditions_fail():
    spec = VarietySpec.make("CD", F5, 2, [2], a=1, b=[1], c=2)
    assert hypothesis_violations(spec)
    with pytest.raises(HypothesisError):
        chi_formula(spec, 1)
    # the definitional routes still work
    assert chi_fixed_point(spec, 1).value == chi_char_sum(spec, 1).value


def test_s4_degenerate_instance_is_logged(caplog):
    # d = 4 divides c1 + c2 - a - b = 4 while every gcd condition holds
    spec = VarietySpec.make("S4", F5, 4, [2, 2], a=1, b=1, c1=2, c2=4)
    with caplog.at_level(logging.WARNING):
        formula_parts(spec, 1, 1)
    assert any("drops out" in rec.message for rec in caplog.records)


def test_validation_errors():
    with pytest.raises(VarietyError):
        VarietySpec.make("CD", F5, 3, [2], a=1, b=[1], c=1)
    with pytest.raises(VarietyError):
        VarietySpec.make("CD", F5, 2, [0], a=1, b=[1], c=1)
    with pytest.raises(VarietyError):
        VarietySpec.make("CD", F5, 2, [1], a=1, b=[1], c=1)
    with pytest.raises(VarietyError):
        VarietySpec.make("ZZ", F5, 2, [2], a=1)
    with pytest.raises(VarietyError):
        VarietySpec.make("SD", F5, 2, [2, 3], a=1, b=[1], c=1)


def test_budget_is_enforced():
    spec = INSTANCES["SD"]
    with pytest.raises(BudgetError):
        brute_count(spec, 4, budget=1000)
    with pytest.raises(BudgetError):
        chi_fixed_point(spec, 1, 3, budget=1000)


def test_count_json():
    c = chi_count(INSTANCES["CD"], 1, 1, "charsum")
    out = c.to_json()
    assert out["route"] == "char_sum" and out["m"] == 1 and out["r"] == 1
    with pytest.raises(VarietyError):
        chi_count(INSTANCES["CD"], 1, 1, "guess")
