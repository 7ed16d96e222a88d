import itertools

import pytest

from ffhgf.finite_field import FieldError, extend, factorize, is_prime, make_field, norm_to_base

FIELDS = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (5, 2), (2, 4)]


def poly_mul(a, b, mod, p):
    """Schoolbook product of digit lists modulo a monic polynomial."""
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    f = len(mod) - 1
    for k in range(len(out) - 1, f - 1, -1):
        c = out[k]
        if c:
            for i in range(f + 1):
                out[k - f + i] = (out[k - f + i] - c * mod[i]) % p
    return (out + [0] * f)[:f]


def digits(code, p, f):
    return [(code // p**i) % p for i in range(f)]


def test_primes_and_factorize():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert factorize(720) == {2: 4, 3: 2, 5: 1}
    assert factorize(1) == {}


@pytest.mark.parametrize("p,f", FIELDS)
def test_arithmetic_against_polynomial_oracle(p, f):
    F = make_field(p, f)
    mod = list(F.modulus)
    for a, b in itertools.product(range(F.q), repeat=2):
        da, db = digits(a, p, f), digits(b, p, f)
        prod = poly_mul(da, db, mod, p)
        assert digits(F.mul(a, b), p, f) == prod
        assert digits(F.add(a, b), p, f) == [(x + y) % p for x, y in zip(da, db)]


@pytest.mark.parametrize("p,f", FIELDS)
def test_generator_is_primitive_and_logs_invert(p, f):
    F = make_field(p, f)
    seen = {F.exp(k) for k in range(F.q - 1)}
    assert seen == set(range(1, F.q))
    for x in range(1, F.q):
        assert F.exp(F.dlog(x)) == x
        assert F.mul(x, F.inv(x)) == 1


@pytest.mark.parametrize("p,f", FIELDS)
def test_trace_is_additive_and_frobenius_invariant(p, f):
    F = make_field(p, f)
    for a, b in itertools.product(range(F.q), repeat=2):
        assert F.trace(F.add(a, b)) == (F.trace(a) + F.trace(b)) % p
    for a in range(F.q):
        assert F.trace(F.pow(a, p)) == F.trace(a)
    assert any(F.trace(a) for a in range(F.q))


def test_modulus_is_first_irreducible():
    # x^2 + 1 is irreducible over F_3 and is the first monic candidate with nonzero constant
    assert make_field(3, 2).modulus == (1, 0, 1)
    assert make_field(2, 2).modulus == (1, 1, 1)


def test_field_element_ops():
    F = make_field(5, 2)
    x, y = F(7), F(13)
    assert (x * y) / y == x
    assert (x + y) - y == x
    assert x**24 == F(1)
    with pytest.raises(ZeroDivisionError):
        F(0).inverse()


def test_make_field_rejects_bad_input():
    with pytest.raises(FieldError):
        make_field(6)
    with pytest.raises(FieldError):
        make_field(3, 0)
    with pytest.raises(FieldError):
        make_field(2, 30, bound=1000)


@pytest.mark.parametrize("p,f,r", [(3, 1, 2), (5, 1, 2), (2, 2, 2), (3, 1, 3), (2, 1, 4), (7, 1, 2)])
def test_tower_embedding_is_a_field_map(p, f, r):
    base = make_field(p, f)
    t = extend(base, r)
    ext = t.ext
    for a, b in itertools.product(range(base.q), repeat=2):
        assert t(base.mul(a, b)) == ext.mul(t(a), t(b))
        assert t(base.add(a, b)) == ext.add(t(a), t(b))
    # fixed points of Frobenius^f over k_r are exactly the image
    image = {t(a) for a in range(base.q)}
    fixed = {x for x in range(ext.q) if ext.pow(x, base.q) == x}
    assert image == fixed


@pytest.mark.parametrize("p,f,r", [(3, 1, 2), (5, 1, 2), (2, 2, 2), (3, 1, 3)])
def test_norm_is_product_of_conjugates(p, f, r):
    base = make_field(p, f)
    t = extend(base, r)
    ext = t.ext
    for x in range(ext.q):
        prod = 1
        for j in range(r):
            prod = ext.mul(prod, ext.pow(x, base.q**j))
        assert t.norm(x) == t.pull(prod)
        assert norm_to_base(t, ext(x)).value == t.norm(x)
