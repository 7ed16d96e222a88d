"""Finite fields F_q, q = p^f, backed by full log/antilog tables.

Elements are encoded as integers: the residue c_0 + c_1 x + ... + c_{f-1} x^{f-1}
modulo the defining polynomial has code c_0 + c_1 p + ... + c_{f-1} p^{f-1}.
Prime-field elements therefore keep their usual integer value in every field
of the same characteristic.

Multiplication goes through the discrete-log tables and addition through a
Zech-logarithm table, so both scalar and vectorized (numpy) arithmetic are
table lookups.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "DEFAULT_BOUND",
    "FieldError",
    "FqField",
    "FieldElement",
    "TowerEmbedding",
    "make_field",
    "extend",
    "norm_to_base",
    "trace_to_prime",
    "dlog",
    "is_prime",
    "factorize",
]

DEFAULT_BOUND = 2_000_000
_PY_TABLE_LIMIT = 1 << 17


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in (2, 3, 5, 7, 11, 13):
        if n % d == 0:
            return n == d
    d = 17
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# -- dense polynomial helpers over F_p (coefficient lists, low degree first) --

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        c = (a[-1] * inv_lead) % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _trim(a)
    return a


def _polymulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _polymod(out, m, p)


def _polypowmod(a: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _polymod(a, m, p)
    while e:
        if e & 1:
            result = _polymulmod(result, base, m, p)
        e >>= 1
        if e:
            base = _polymulmod(base, base, m, p)
    return result


def _digits(code: int, p: int, f: int) -> list[int]:
    out = []
    for _ in range(f):
        code, r = divmod(code, p)
        out.append(r)
    return out


def _code(digits, p: int) -> int:
    c = 0
    for d in reversed(digits):
        c = c * p + int(d)
    return c


def _is_irreducible(m: list[int], p: int) -> bool:
    f = len(m) - 1
    if f == 1:
        return True
    if m[0] == 0:
        return False
    for k in range(1, f // 2 + 1):
        for code in range(p**k):
            divisor = _digits(code, p, k) + [1]
            if not _polymod(m, divisor, p):
                return False
    return True


def _first_irreducible(p: int, f: int) -> list[int]:
    # constant term varies fastest: increasing code of (c_0, ..., c_{f-1})
    for code in range(p**f):
        m = _digits(code, p, f) + [1]
        if _is_irreducible(m, p):
            return m
    raise AssertionError("no irreducible polynomial found")


class FqField:
    """The field with q = p^f elements and a fixed primitive element.

    Build with :func:`make_field`; the constructor assumes validated input.
    """

    def __init__(self, p: int, f: int):
        self.p = p
        self.f = f
        self.q = p**f
        self.modulus: tuple[int, ...] = tuple(_first_irreducible(p, f))
        self.generator = self._find_generator()
        self._build_tables()

    # -- construction ---------------------------------------------------
    def _find_generator(self) -> int:
        p, f, q = self.p, self.f, self.q
        m = list(self.modulus)
        primes = list(factorize(q - 1)) if q > 2 else []
        for code in range(1, q):
            a = _digits(code, p, f)
            if all(_polypowmod(a, (q - 1) // ell, m, p) != [1] for ell in primes):
                if q == 2 or _polypowmod(a, q - 1, m, p) == [1]:
                    return code
        raise AssertionError("no primitive element found")

    def _build_tables(self) -> None:
        p, f, q = self.p, self.f, self.q
        order = q - 1
        m = list(self.modulus)
        g = _digits(self.generator, p, f)
        weights = np.array([p**i for i in range(f)], dtype=np.int64)

        def mult_matrix(h: list[int]) -> np.ndarray:
            rows = []
            for i in range(f):
                xi = [0] * i + [1]
                rows.append(_digits(_code(_polymulmod(xi, h, m, p), p), p, f))
            return np.array(rows, dtype=np.int64)

        digits = np.zeros((1, f), dtype=np.int16)
        digits[0, 0] = 1
        h = list(g)
        while digits.shape[0] < order:
            mat = mult_matrix(h)
            blocks = []
            for start in range(0, digits.shape[0], 1 << 20):
                chunk = digits[start:start + (1 << 20)].astype(np.int64)
                blocks.append(((chunk @ mat) % p).astype(np.int16))
            digits = np.concatenate([digits] + blocks)
            h = _polymulmod(h, h, m, p)
        digits = digits[:order]
        antilog = (digits.astype(np.int64) @ weights).astype(np.int64)
        log = np.full(q, -1, dtype=np.int64)
        log[antilog] = np.arange(order, dtype=np.int64)
        if order and (np.count_nonzero(log[1:] < 0) or log[0] != -1):
            raise AssertionError("generator is not primitive")
        self.antilog = antilog
        self.log = log
        d0 = antilog % p
        plus_one = antilog - d0 + (d0 + 1) % p
        self.zech = log[plus_one]
        self.neg_one_log = 0 if p == 2 else order // 2
        self.neg_one = int(antilog[self.neg_one_log]) if order else 0

    @cached_property
    def _py(self):
        return self.log.tolist(), self.antilog.tolist(), self.zech.tolist()

    @cached_property
    def trace_table(self) -> np.ndarray:
        """Tr_{F_q/F_p} for every element code, as integers in [0, p)."""
        # trace is F_p-linear, so it is fixed by its values on the basis x^i
        basis_traces = []
        for i in range(self.f):
            xi = self.p**i
            acc, power = 0, xi
            for _ in range(self.f):
                acc = self.add(acc, power)
                power = self.pow(power, self.p)
            if acc >= self.p:
                raise AssertionError("trace left the prime field")
            basis_traces.append(acc)
        codes = np.arange(self.q, dtype=np.int64)
        out = np.zeros(self.q, dtype=np.int64)
        for t in basis_traces:
            out += (codes % self.p) * t
            codes //= self.p
        return out % self.p

    # -- descriptors -----------------------------------------------------
    def __repr__(self) -> str:
        return f"FqField(p={self.p}, f={self.f})"

    def describe(self) -> dict:
        return {"p": self.p, "f": self.f, "modulus": list(self.modulus), "generator": self.generator}

    def __call__(self, code: int) -> "FieldElement":
        code = int(code)
        if not 0 <= code < self.q:
            raise FieldError(f"code {code} outside F_{self.q}")
        return FieldElement(self, code)

    def from_int(self, n: int) -> "FieldElement":
        """Image of the integer n in the prime field."""
        return FieldElement(self, n % self.p)

    def elements(self):
        return [FieldElement(self, c) for c in range(self.q)]

    @property
    def gen(self) -> "FieldElement":
        return FieldElement(self, self.generator)

    # -- scalar arithmetic on codes ---------------------------------------
    def exp(self, k: int) -> int:
        """Code of g^k."""
        return self._py[1][k % (self.q - 1)] if self.q <= _PY_TABLE_LIMIT else int(self.antilog[k % (self.q - 1)])

    def dlog(self, a: int) -> int:
        if a == 0:
            raise FieldError("discrete log of zero")
        return self._py[0][a] if self.q <= _PY_TABLE_LIMIT else int(self.log[a])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp(self.dlog(a) + self.dlog(b))

    def add(self, a: int, b: int) -> int:
        if a == 0:
            return b
        if b == 0:
            return a
        la, lb = self.dlog(a), self.dlog(b)
        n = self.q - 1
        t = (lb - la) % n
        z = self._py[2][t] if self.q <= _PY_TABLE_LIMIT else int(self.zech[t])
        return 0 if z < 0 else self.exp(la + z)

    def neg(self, a: int) -> int:
        return self.mul(a, self.neg_one) if a else 0

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"inverse of zero in F_{self.q}")
        return self.exp(-self.dlog(a))

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("zero to a negative power")
            return 1 if k == 0 else 0
        return self.exp(self.dlog(a) * k)

    def trace(self, a: int) -> int:
        return int(self.trace_table[a])

    # -- vectorized arithmetic on code arrays ------------------------------
    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        res = self.antilog[(self.log[a] + self.log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, res)

    def vadd(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        n = self.q - 1
        la, lb = self.log[a], self.log[b]
        z = self.zech[(lb - la) % n]
        res = np.where(z < 0, 0, self.antilog[(la + z) % n])
        res = np.where(a == 0, b, res)
        return np.where(b == 0, a, res)

    def vneg(self, a):
        return self.vmul(a, np.full(np.shape(a), self.neg_one, dtype=np.int64))

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vscale(self, c: int, a):
        return self.vmul(np.full(np.shape(a), c, dtype=np.int64), a)

    def vone_minus(self, a):
        """1 - a, elementwise."""
        return self.vadd(np.ones(np.shape(a), dtype=np.int64), self.vneg(a))

    def vpow(self, a, k: int):
        a = np.asarray(a, dtype=np.int64)
        res = self.antilog[(self.log[a] * k) % (self.q - 1)]
        if k == 0:
            return np.ones_like(a)
        return np.where(a == 0, 0, res)

    def vinv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        return self.antilog[(-self.log[a]) % (self.q - 1)]


@dataclass(frozen=True)
class FieldElement:
    field: FqField
    value: int

    def _check(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise FieldError("elements belong to different fields")
            return other.value
        if isinstance(other, int):
            return other % self.field.p
        raise TypeError(f"cannot combine FieldElement with {type(other).__name__}")

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.value, self._check(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.value, self._check(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._check(other), self.value))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.value, self._check(other)))

    __rmul__ = __mul__

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.value))

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.value, self._check(other)))

    def __pow__(self, k: int):
        return FieldElement(self.field, self.field.pow(self.value, k))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"F{self.field.q}({self.value})"


_FIELD_LOCK = threading.Lock()
_FIELD_CACHE: dict[tuple[int, int], FqField] = {}


def make_field(p: int, f: int = 1, *, bound: int = DEFAULT_BOUND) -> FqField:
    """The field F_{p^f} with deterministic modulus and generator (cached)."""
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if f < 1:
        raise FieldError(f"extension degree must be positive, got {f}")
    if p**f > bound:
        raise FieldError(f"field size {p}^{f} exceeds the bound {bound}")
    key = (p, f)
    with _FIELD_LOCK:
        field = _FIELD_CACHE.get(key)
    if field is None:
        field = FqField(p, f)
        with _FIELD_LOCK:
            field = _FIELD_CACHE.setdefault(key, field)
    return field


def dlog(x: FieldElement) -> int:
    return x.field.dlog(x.value)


def trace_to_prime(x: FieldElement) -> int:
    return x.field.trace(x.value)


class TowerEmbedding:
    """Embedding of F_q into F_{q^r}, built on the tables of both fields.

    ``forward[c]`` is the image of base code c; ``backward`` maps extension
    codes in the image back to base codes (-1 elsewhere).
    """

    def __init__(self, base: FqField, ext: FqField, r: int):
        self.base = base
        self.ext = ext
        self.r = r
        q, Q = base.q, ext.q
        self.index = (Q - 1) // (q - 1)
        self.image_log = self._choose_image()
        forward = np.zeros(q, dtype=np.int64)
        forward[base.antilog] = ext.antilog[(self.image_log * np.arange(q - 1)) % (Q - 1)]
        backward = np.full(Q, -1, dtype=np.int64)
        backward[forward] = np.arange(q, dtype=np.int64)
        self.forward = forward
        self.backward = backward
        # sigma(x + 1) = sigma(x) + 1 together with multiplicativity gives additivity
        codes = np.arange(q, dtype=np.int64)
        lhs = forward[base.vadd(codes, np.ones(q, dtype=np.int64))]
        rhs = ext.vadd(forward[codes], np.ones(q, dtype=np.int64))
        if not np.array_equal(lhs, rhs):
            raise AssertionError("embedding is not additive")
        # log_base N(G) for the extension generator G
        self.norm_of_generator_log = base.dlog(int(backward[ext.exp(self.index)]))

    def _minimal_polynomial(self) -> list[int]:
        base = self.base
        conj = [base.pow(base.generator, base.p**j) for j in range(base.f)]
        poly = [1]
        for c in conj:
            # poly * (x - c)
            nxt = [0] * (len(poly) + 1)
            for i, a in enumerate(poly):
                nxt[i + 1] = base.add(nxt[i + 1], a)
                nxt[i] = base.sub(nxt[i], base.mul(a, c))
            poly = nxt
        if any(c >= base.p for c in poly):
            raise AssertionError("minimal polynomial not over the prime field")
        return poly

    def _choose_image(self) -> int:
        base, ext = self.base, self.ext
        if self.r == 1:
            return 1
        minpoly = self._minimal_polynomial()
        q = base.q
        for i in range(1, q - 1 if q > 2 else 2):
            if math.gcd(i, q - 1) != 1:
                continue
            e = i * self.index
            z = ext.exp(e)
            acc = 0
            for c in reversed(minpoly):
                acc = ext.add(ext.mul(acc, z), c)
            if acc == 0:
                return e
        raise AssertionError("no root of the minimal polynomial of order q-1")

    def __call__(self, x):
        if isinstance(x, FieldElement):
            return FieldElement(self.ext, int(self.forward[x.value]))
        return int(self.forward[x])

    def pull(self, code: int) -> int:
        """Base code of an extension code lying in the image."""
        c = int(self.backward[code])
        if c < 0:
            raise FieldError("element is not in the embedded base field")
        return c

    def norm(self, code: int) -> int:
        """N_{k_r/k} of an extension code, as a base code."""
        if code == 0:
            return 0
        return self.pull(self.ext.pow(code, self.index))

    def vnorm(self, codes):
        codes = np.asarray(codes, dtype=np.int64)
        img = self.ext.vpow(codes, self.index)
        out = self.backward[img]
        if np.any(out < 0):
            raise AssertionError("norm left the base field")
        return out

    def describe(self) -> dict:
        return {"base": self.base.describe(), "ext": self.ext.describe(), "image_of_generator_log": self.image_log}


_EXT_LOCK = threading.Lock()
_EXT_CACHE: dict[tuple[int, int, int], TowerEmbedding] = {}


def extend(base: FqField, r: int, *, bound: int = DEFAULT_BOUND) -> TowerEmbedding:
    if r < 1:
        raise FieldError("extension degree must be positive")
    ext = make_field(base.p, base.f * r, bound=bound)
    key = (base.p, base.f, r)
    with _EXT_LOCK:
        emb = _EXT_CACHE.get(key)
    if emb is None:
        emb = TowerEmbedding(base, ext, r)
        with _EXT_LOCK:
            emb = _EXT_CACHE.setdefault(key, emb)
    return emb


def norm_to_base(t: TowerEmbedding, x: FieldElement) -> FieldElement:
    if x.field is not t.ext:
        raise FieldError("element is not in the extension field")
    return FieldElement(t.base, t.norm(x.value))
