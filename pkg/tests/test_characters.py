import cmath

import pytest

from ffhgf.characters import (
    AddChar,
    CharacterError,
    MultChar,
    char_of_exact_order,
    delta,
    norm_pullback,
    parse_char,
    trivial,
)
from ffhgf.finite_field import extend, make_field


def c(x):
    return complex(x)


@pytest.mark.parametrize("p,f", [(5, 1), (7, 1), (3, 2), (2, 3)])
def test_multiplicative_and_orthogonal(p, f):
    F = make_field(p, f)
    n = F.q - 1
    for k in range(n):
        chi = MultChar(F, k)
        assert c(chi(0)) == 0
        for x in range(1, F.q):
            for y in range(1, F.q):
                assert abs(c(chi(F.mul(x, y))) - c(chi(x)) * c(chi(y))) < 1e-9
        total = sum(c(chi(x)) for x in range(1, F.q))
        assert abs(total - (n if k == 0 else 0)) < 1e-9


def test_order_conj_and_sugar():
    F = make_field(13)
    chi = parse_char(F, "phi_4^3")
    assert chi.order == 4
    assert chi == char_of_exact_order(F, 4) ** 3
    assert (chi * chi.conj()).is_trivial
    assert parse_char(F, "5") == MultChar(F, 5)
    assert parse_char(F, -1) == MultChar(F, 11)
    assert delta(trivial(F)) == 1 and delta(chi) == 0
    with pytest.raises(CharacterError):
        parse_char(F, "phi_5")
    with pytest.raises(CharacterError):
        parse_char(F, "chi")


def test_additive_character():
    F = make_field(3, 2)
    psi = AddChar(F)
    for x in range(F.q):
        for y in range(F.q):
            assert psi(F.add(x, y)) == psi(x) * psi(y)
    assert abs(sum(c(psi(x)) for x in range(F.q))) < 1e-9
    with pytest.raises(CharacterError):
        AddChar(F, 0)


@pytest.mark.parametrize("p,f,r", [(5, 1, 2), (3, 1, 3), (2, 2, 2), (7, 1, 2)])
def test_norm_pullback_is_chi_of_norm(p, f, r):
    F = make_field(p, f)
    t = extend(F, r)
    for k in range(F.q - 1):
        chi = MultChar(F, k)
        lifted = norm_pullback(chi, t)
        for x in range(1, t.ext.q):
            assert lifted(x) == chi(t.norm(x))
    # exact order is preserved
    chi = MultChar(F, 1)
    assert norm_pullback(chi, t).order == chi.order


def test_root_values_are_exact():
    F = make_field(7)
    chi = MultChar(F, 1)
    g = F.generator
    assert abs(c(chi(g)) - cmath.exp(2j * cmath.pi / 6)) < 1e-12
