"""Exact arithmetic in cyclotomic fields Q(zeta_n).

An element of Q(zeta_n) is stored as a rational polynomial of degree
< phi(n), reduced modulo the n-th cyclotomic polynomial.  Reduction makes
the representation canonical, so equality is coefficient comparison.

Polynomial products and remainders are delegated to FLINT (python-flint);
the cyclotomic polynomials themselves are built here from the divisor
recursion and cached per order.
"""

from __future__ import annotations

import cmath
import math
import threading
from fractions import Fraction
from functools import reduce
from numbers import Rational

import mpmath
from flint import fmpq, fmpq_mat, fmpq_poly, fmpz_poly

__all__ = [
    "CycloNumber",
    "cyclotomic_poly",
    "euler_phi",
    "root_of_unity",
    "embed",
    "complex_value",
    "try_rational",
]


def euler_phi(n: int) -> int:
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _divisors(n: int) -> list[int]:
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


_PHI_LOCK = threading.Lock()
_PHI_CACHE: dict[int, fmpz_poly] = {}
_PHI_Q_CACHE: dict[int, fmpq_poly] = {}


def cyclotomic_poly(n: int) -> fmpz_poly:
    """Phi_n as an integer polynomial, via (x^n - 1) / prod_{d | n, d < n} Phi_d."""
    if n < 1:
        raise ValueError(f"cyclotomic order must be positive, got {n}")
    poly = _PHI_CACHE.get(n)
    if poly is not None:
        return poly
    with _PHI_LOCK:
        poly = _PHI_CACHE.get(n)
        if poly is not None:
            return poly
    num = fmpz_poly([-1] + [0] * (n - 1) + [1])
    den = fmpz_poly([1])
    for d in _divisors(n)[:-1]:
        den *= cyclotomic_poly(d)
    quo, rem = divmod(num, den)
    assert rem == 0
    with _PHI_LOCK:
        _PHI_CACHE.setdefault(n, quo)
        _PHI_Q_CACHE.setdefault(n, fmpq_poly(quo))
        return _PHI_CACHE[n]


def _modulus(n: int) -> fmpq_poly:
    mod = _PHI_Q_CACHE.get(n)
    if mod is None:
        cyclotomic_poly(n)
        mod = _PHI_Q_CACHE[n]
    return mod


def _to_fmpq(value) -> fmpq:
    if isinstance(value, fmpq):
        return value
    if isinstance(value, int):
        return fmpq(value)
    if isinstance(value, Rational):
        return fmpq(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot coerce {type(value).__name__} to a rational")


class CycloNumber:
    """Element of Q(zeta_n) in canonical form.

    ``coeffs`` are the coordinates on the basis 1, zeta_n, ..., zeta_n^(phi(n)-1).
    Operands of different orders are lifted to the lcm of the orders.
    Instances are immutable.
    """

    __slots__ = ("order", "poly")

    def __init__(self, order: int, poly: fmpq_poly, *, reduced: bool = False):
        if order < 1:
            raise ValueError(f"order must be positive, got {order}")
        if not reduced:
            poly = poly % _modulus(order)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "poly", poly)

    def __setattr__(self, name, value):
        raise AttributeError("CycloNumber is immutable")

    # -- construction -------------------------------------------------
    @classmethod
    def from_coeffs(cls, order: int, coeffs) -> "CycloNumber":
        return cls(order, fmpq_poly([_to_fmpq(c) for c in coeffs]))

    @classmethod
    def rational(cls, value, order: int = 1) -> "CycloNumber":
        return cls(order, fmpq_poly([_to_fmpq(value)]), reduced=True)

    @classmethod
    def from_exponent_counts(cls, order: int, counts) -> "CycloNumber":
        """sum_k counts[k] * zeta_order^k for a length-``order`` count vector."""
        if len(counts) != order:
            raise ValueError("count vector length must equal the order")
        return cls(order, fmpq_poly(fmpz_poly([int(c) for c in counts])))

    # -- views ----------------------------------------------------------
    @property
    def degree(self) -> int:
        return euler_phi(self.order)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        raw = self.poly.coeffs()
        out = [Fraction(int(c.p), int(c.q)) for c in raw]
        out.extend([Fraction(0)] * (self.degree - len(out)))
        return tuple(out)

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __bool__(self) -> bool:
        return not self.poly.is_zero()

    def __repr__(self) -> str:
        return f"CycloNumber({self.order}, {self.poly.str(var='z')})"

    # -- lifting --------------------------------------------------------
    def embed(self, n: int) -> "CycloNumber":
        """Image under zeta_m -> zeta_n^(n/m); requires m | n."""
        m = self.order
        if n % m:
            raise ValueError(f"order {m} does not divide {n}")
        if n == m:
            return self
        step = n // m
        raw = self.poly.coeffs()
        if len(raw) <= 1:
            return CycloNumber(n, self.poly, reduced=True)
        spread = [fmpq(0)] * ((len(raw) - 1) * step + 1)
        spread[::step] = raw
        return CycloNumber(n, fmpq_poly(spread))

    def restrict(self, m: int) -> "CycloNumber | None":
        """The preimage of self in Q(zeta_m) (m | order), or None if not in that subfield."""
        n = self.order
        if n % m:
            raise ValueError(f"order {m} does not divide {n}")
        if m == n:
            return self
        if self.poly.degree() <= 0:
            return CycloNumber(m, self.poly, reduced=True)
        pivots, inv = _restriction_data(m, n)
        raw = self.coeffs
        rhs = fmpq_mat(len(pivots), 1, [_to_fmpq(raw[i]) for i in pivots])
        sol = inv * rhs
        cand = CycloNumber(m, fmpq_poly([sol[i, 0] for i in range(len(pivots))]))
        return cand if cand.embed(n) == self else None

    def _lift_pair(self, other: "CycloNumber"):
        if self.order == other.order:
            return self.order, self.poly, other.poly
        n = self.order * other.order // math.gcd(self.order, other.order)
        return n, self.embed(n).poly, other.embed(n).poly

    def _coerce(self, other):
        if isinstance(other, CycloNumber):
            return other
        if isinstance(other, (int, Rational, fmpq)):
            return CycloNumber(self.order, fmpq_poly([_to_fmpq(other)]), reduced=True)
        return None

    # -- field operations -----------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n, a, b = self._lift_pair(other)
        return CycloNumber(n, a + b, reduced=True)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n, a, b = self._lift_pair(other)
        return CycloNumber(n, a - b, reduced=True)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self):
        return CycloNumber(self.order, -self.poly, reduced=True)

    def __mul__(self, other):
        if isinstance(other, (int, Rational, fmpq)) and not isinstance(other, bool):
            return CycloNumber(self.order, self.poly * _to_fmpq(other), reduced=True)
        if not isinstance(other, CycloNumber):
            return NotImplemented
        n, a, b = self._lift_pair(other)
        return CycloNumber(n, a * b)

    __rmul__ = __mul__

    def inverse(self) -> "CycloNumber":
        if self.poly.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        if self.poly.degree() == 0:
            return CycloNumber(self.order, 1 / self.poly, reduced=True)
        g, s, _ = self.poly.xgcd(_modulus(self.order))
        # Phi_n is irreducible, so the gcd is a nonzero constant
        return CycloNumber(self.order, s / g[0])

    def __truediv__(self, other):
        if isinstance(other, (int, Rational, fmpq)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return CycloNumber(self.order, self.poly / _to_fmpq(other), reduced=True)
        if not isinstance(other, CycloNumber):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = CycloNumber(self.order, fmpq_poly([1]), reduced=True)
        mod = _modulus(self.order)
        acc = base.poly
        res = result.poly
        while k:
            if k & 1:
                res = (res * acc) % mod
            k >>= 1
            if k:
                acc = (acc * acc) % mod
        return CycloNumber(self.order, res, reduced=True)

    def mul_root(self, k: int) -> "CycloNumber":
        """self * zeta_order^k."""
        k %= self.order
        if k == 0:
            return self
        return CycloNumber(self.order, self.poly.left_shift(k))

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n, a, b = self._lift_pair(other)
        return a == b

    __hash__ = None

    # -- Galois action --------------------------------------------------
    def galois(self, a: int) -> "CycloNumber":
        """Apply zeta_n -> zeta_n^a, gcd(a, n) = 1."""
        n = self.order
        if math.gcd(a, n) != 1:
            raise ValueError(f"{a} is not a unit modulo {n}")
        raw = self.poly.coeffs()
        out = [fmpq(0)] * n
        for i, c in enumerate(raw):
            if c:
                j = (i * a) % n
                out[j] += c
        return CycloNumber(n, fmpq_poly(out))

    def conjugate(self) -> "CycloNumber":
        return self.galois(-1)

    # -- numerics & export ----------------------------------------------
    def complex_value(self, precision: int = 15) -> mpmath.mpc:
        return complex_value(self, precision)

    def __complex__(self) -> complex:
        w = cmath.exp(2j * cmath.pi / self.order)
        acc = 0j
        for c in reversed(self.poly.coeffs()):
            acc = acc * w + float(c.p) / float(c.q)
        return acc

    def try_rational(self) -> Fraction | None:
        return try_rational(self)

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [f"{c.numerator}/{c.denominator}" for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "CycloNumber":
        return cls.from_coeffs(int(data["order"]), [Fraction(s) for s in data["coeffs"]])


def _pq(c: fmpq) -> tuple[int, int]:
    return int(c.p), int(c.q)


_RESTRICT_LOCK = threading.Lock()
_RESTRICT_CACHE: dict[tuple[int, int], tuple[list[int], fmpq_mat]] = {}


def _restriction_data(m: int, n: int):
    key = (m, n)
    hit = _RESTRICT_CACHE.get(key)
    if hit is not None:
        return hit
    phim, phin = euler_phi(m), euler_phi(n)
    # column i: coordinates of zeta_m^i inside Q(zeta_n)
    cols = [root_of_unity(n, i * (n // m)).coeffs for i in range(phim)]
    rows = fmpq_mat(phim, phin, [_to_fmpq(cols[i][j]) for i in range(phim) for j in range(phin)])
    rref, rank = rows.rref()
    assert rank == phim
    pivots = []
    col = 0
    for r in range(rank):
        while rref[r, col] == 0:
            col += 1
        pivots.append(col)
        col += 1
    sub = fmpq_mat(phim, phim, [_to_fmpq(cols[j][pivots[i]]) for i in range(phim) for j in range(phim)])
    data = (pivots, sub.inv())
    with _RESTRICT_LOCK:
        _RESTRICT_CACHE.setdefault(key, data)
    return data


def root_of_unity(n: int, k: int = 1) -> CycloNumber:
    """zeta_n^(k mod n) in canonical form."""
    if n < 1:
        raise ValueError(f"order must be positive, got {n}")
    k %= n
    return CycloNumber(n, fmpq_poly([0] * k + [1]))


def embed(x: CycloNumber, n: int) -> CycloNumber:
    return x.embed(n)


def complex_value(x: CycloNumber, precision: int = 15) -> mpmath.mpc:
    """Evaluate x at zeta_n = exp(2 pi i / n) to ``precision`` decimal digits."""
    if precision < 15:
        raise ValueError("precision must be at least 15 digits")
    with mpmath.workdps(precision + 10):
        w = mpmath.expjpi(mpmath.mpf(2) / x.order)
        acc = mpmath.mpc(0)
        for c in reversed(x.poly.coeffs()):
            acc = acc * w + mpmath.mpf(int(c.p)) / int(c.q)
        return +acc


def try_rational(x: CycloNumber) -> Fraction | None:
    if x.poly.degree() > 0:
        return None
    if x.poly.is_zero():
        return Fraction(0)
    return Fraction(*_pq(x.poly[0]))


def cyclo_sum(values, order: int | None = None) -> CycloNumber:
    values = list(values)
    if not values:
        return CycloNumber.rational(0, order or 1)
    return reduce(lambda a, b: a + b, values)
