import cmath
import itertools
import random

import pytest

from ffhgf.characters import MultChar
from ffhgf.charsums import jacobi_direct
from ffhgf.cyclotomic import CycloNumber
from ffhgf.finite_field import make_field
from ffhgf.hypergeometric import HgfParams, LauricellaParams, appell, hgf, lauricella


class FloatSums:
    """Gauss sums and Pochhammer symbols in floating point, straight from the definitions."""

    def __init__(self, F):
        self.F = F
        self.n = F.q - 1
        self.g = []
        for k in range(self.n):
            total = 0j
            for x in range(1, F.q):
                total += cmath.exp(2j * cmath.pi * (F.trace(x) / F.p + k * F.dlog(x) / self.n))
            self.g.append(-total)

    def gc(self, k):
        k %= self.n
        return self.g[k] * (self.F.q if k == 0 else 1)

    def poch(self, a, k):
        return self.g[(a + k) % self.n] / self.g[a % self.n]

    def pochc(self, a, k):
        return self.gc(a + k) / self.gc(a)

    def chi(self, k, lam):
        return cmath.exp(2j * cmath.pi * k * self.F.dlog(lam) / self.n)


def hgf_float(S, a_list, b_list, lam):
    total = 0j
    for k in range(S.n):
        term = S.chi(k, lam) / S.pochc(0, k)
        for a in a_list:
            term *= S.poch(a, k)
        for b in b_list:
            term /= S.pochc(b, k)
        total += term
    return total / (1 - S.F.q)


def lauricella_float(S, kind, a, b, c, lams):
    n = len(lams)
    total = 0j
    for ks in itertools.product(range(S.n), repeat=n):
        mu = sum(ks)
        term = 1
        for k, lam in zip(ks, lams):
            term *= S.chi(k, lam) / S.pochc(0, k)
        if kind == "A":
            term *= S.poch(a[0], mu)
            for i, k in enumerate(ks):
                term *= S.poch(b[i], k) / S.pochc(c[i], k)
        elif kind == "B":
            term /= S.pochc(c[0], mu)
            for i, k in enumerate(ks):
                term *= S.poch(a[i], k) * S.poch(b[i], k)
        elif kind == "C":
            term *= S.poch(a[0], mu) * S.poch(b[0], mu)
            for i, k in enumerate(ks):
                term /= S.pochc(c[i], k)
        else:
            term *= S.poch(a[0], mu) / S.pochc(c[0], mu)
            for i, k in enumerate(ks):
                term *= S.poch(b[i], k)
        total += term
    return total / (1 - S.F.q) ** n


@pytest.mark.parametrize("p,f", [(5, 1), (7, 1), (3, 2)])
def test_hgf_matches_float_definition(p, f):
    F = make_field(p, f)
    S = FloatSums(F)
    rng = random.Random(p * 10 + f)
    for _ in range(25):
        n = rng.choice([1, 2])
        a = [rng.randrange(F.q - 1) for _ in range(n + 1)]
        b = [rng.randrange(F.q - 1) for _ in range(n)]
        lam = rng.randrange(1, F.q)
        exact = hgf(HgfParams.make(F, a, b), lam)
        assert abs(complex(exact) - hgf_float(S, a, b, lam)) < 1e-8


@pytest.mark.parametrize("kind", "ABCD")
def test_lauricella_matches_float_definition(kind):
    F = make_field(5)
    S = FloatSums(F)
    rng = random.Random(ord(kind))
    for _ in range(12):
        n = 2
        one = [rng.randrange(4)]
        many = lambda: [rng.randrange(4) for _ in range(n)]
        if kind == "A":
            a, b, c = one, many(), many()
        elif kind == "B":
            a, b, c = many(), many(), one
        elif kind == "C":
            a, b, c = one, [rng.randrange(4)], many()
        else:
            a, b, c = one, many(), [rng.randrange(4)]
        lams = [rng.randrange(1, 5) for _ in range(n)]
        params = LauricellaParams.make(F, kind, a, b, c)
        exact = lauricella(params, lams)
        assert exact == lauricella(params, lams, method="naive")
        assert abs(complex(exact) - lauricella_float(S, kind, a, b, c, lams)) < 1e-8


def test_one_f_zero_closed_form():
    F = make_field(7)
    for a in range(6):
        alpha = MultChar(F, a)
        for lam in range(7):
            value = hgf(HgfParams.make(F, [a], []), lam)
            if lam == 0:
                assert value.is_zero()
            elif a == 0 and lam == 1:
                assert value == CycloNumber.rational(1 - 7)
            else:
                assert value == alpha.conj()(F.sub(1, lam))


def test_two_f_one_branch_value_at_one():
    # 2F1(alpha, eps; alpha; 1) = 1 + q^delta(alpha) (1 - q)
    F = make_field(5)
    for a in range(4):
        value = hgf(HgfParams.make(F, [a, 0], [a]), 1)
        assert value == 1 + (5 if a == 0 else 1) * (1 - 5)


def test_kind_d_with_one_variable_is_2f1():
    F = make_field(7)
    for a, b, c in itertools.product(range(6), repeat=3):
        for lam in (1, 3, 5):
            assert lauricella(LauricellaParams.make(F, "D", [a], [b], [c]), [lam]) == hgf(HgfParams.make(F, [a, b], [c]), lam)


def test_zero_argument_kills_everything():
    F = make_field(5)
    for kind in "ABCD":
        params = LauricellaParams.make(F, kind, [1] if kind != "B" else [1, 2], [1, 2] if kind != "C" else [1], [1, 3] if kind in "AC" else [2])
        assert lauricella(params, [0, 3]).is_zero()
    assert hgf(HgfParams.make(F, [1, 2], [3]), 0).is_zero()


def test_fd_against_single_integral():
    # q = 5, a = phi, b_i = phi^2, c = phi^3, lambda = (2, 3)
    F = make_field(5)
    a, b, c, lam = 1, [2, 2], 3, [2, 3]
    value = lauricella(LauricellaParams.make(F, "D", [a], b, [c]), lam)
    chi = lambda k, x: MultChar(F, k)(x)
    total = CycloNumber.rational(0)
    for u in range(F.q):
        term = chi(a, u) * chi(c - a, F.sub(1, u))
        for bi, li in zip(b, lam):
            term = term * chi(-bi, F.sub(1, F.mul(li, u)))
        total = total + term
    j = jacobi_direct(MultChar(F, a), MultChar(F, c - a))
    assert value == total / (-j)


def test_appell_aliases():
    F = make_field(7)
    rng = random.Random(11)
    for _ in range(10):
        a, b1, b2, c1, c2 = (rng.randrange(6) for _ in range(5))
        x, y = rng.randrange(1, 7), rng.randrange(1, 7)
        assert appell(1, F, a, [b1, b2], c1, x, y) == lauricella(LauricellaParams.make(F, "D", [a], [b1, b2], [c1]), [x, y])
        assert appell(4, F, a, b1, [c1, c2], x, y) == lauricella(LauricellaParams.make(F, "C", [a], [b1], [c1, c2]), [x, y])


def test_appell_f2_against_naive_double_sum():
    F = make_field(5)
    S = FloatSums(F)
    for a, b1, b2, c1, c2 in [(1, 2, 3, 1, 2), (0, 1, 1, 3, 3), (2, 0, 3, 1, 0)]:
        exact = appell(2, F, a, [b1, b2], [c1, c2], 2, 4)
        assert abs(complex(exact) - lauricella_float(S, "A", [a], [b1, b2], [c1, c2], [2, 4])) < 1e-8


def test_values_are_in_the_small_field_and_psi_free():
    for p in (5, 7):
        F = make_field(p)
        rng = random.Random(p)
        for _ in range(15):
            params = HgfParams.make(F, [rng.randrange(p - 1) for _ in range(3)], [rng.randrange(p - 1) for _ in range(2)])
            lam = rng.randrange(1, p)
            v = hgf(params, lam)
            assert v.order == p - 1
            for t in range(2, p):
                assert hgf(params, lam, twist=t) == v


def test_bad_arity():
    F = make_field(5)
    with pytest.raises(ValueError):
        HgfParams.make(F, [1, 2], [1, 2])
    with pytest.raises(ValueError):
        LauricellaParams.make(F, "A", [1], [1, 2], [1])
    with pytest.raises(ValueError):
        lauricella(LauricellaParams.make(F, "D", [1], [1, 2], [1]), [2])
    with pytest.raises(ValueError):
        appell(5, F, 1, 1, 1, 2, 3)
