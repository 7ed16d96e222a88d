"""Gauss sums, Jacobi sums and the Pochhammer-type quotients built from them.

Gauss sums of F_q live in Q(zeta_N) with N = p(q - 1): inside that field
zeta_p = zeta_N^(q-1) and zeta_{q-1} = zeta_N^p. They are computed from an
exponent histogram, so each value costs one pass over the field.
"""

from __future__ import annotations

import threading
from functools import reduce

import numpy as np

from .characters import AddChar, MultChar
from .cyclotomic import CycloNumber
from .finite_field import FqField

__all__ = [
    "GaussTable",
    "gauss_table",
    "gauss",
    "gauss_circ",
    "jacobi_direct",
    "jacobi_via_gauss",
    "poch",
    "poch_circ",
]


class GaussTable:
    """Lazily filled g(phi^k), k = 0..q-2, for one field and one additive character."""

    def __init__(self, field: FqField, twist: int = 1):
        self.field = field
        self.psi = AddChar(field, twist)
        self.order = field.p * (field.q - 1)
        n = field.q - 1
        codes = field.antilog
        traces = field.trace_table[field.vmul(np.full(n, self.psi.twist, dtype=np.int64), codes)]
        self._additive = (traces * n) % self.order
        self._logs = np.arange(n, dtype=np.int64)
        self._values: dict[int, CycloNumber] = {}
        self._inverses: dict[int, CycloNumber] = {}
        self._lock = threading.Lock()

    def _compute(self, k: int) -> CycloNumber:
        p = self.field.p
        exps = (self._additive + p * k * self._logs) % self.order
        counts = np.bincount(exps, minlength=self.order)
        return -CycloNumber.from_exponent_counts(self.order, counts)

    def value(self, k: int) -> CycloNumber:
        k %= self.field.q - 1
        v = self._values.get(k)
        if v is None:
            v = self._compute(k)
            with self._lock:
                self._values[k] = v
        return v

    def inverse(self, k: int) -> CycloNumber:
        k %= self.field.q - 1
        v = self._inverses.get(k)
        if v is None:
            v = self.value(k).inverse()
            with self._lock:
                self._inverses[k] = v
        return v

    def circ(self, k: int) -> CycloNumber:
        k %= self.field.q - 1
        return self.value(k) * self.field.q if k == 0 else self.value(k)

    def circ_inverse(self, k: int) -> CycloNumber:
        k %= self.field.q - 1
        if k == 0:
            return self.inverse(0) / self.field.q
        return self.inverse(k)

    def poch(self, a: int, k: int) -> CycloNumber:
        """(phi^a)_{phi^k} = g(phi^(a+k)) / g(phi^a)."""
        return self.value(a + k) * self.inverse(a)

    def poch_circ(self, a: int, k: int) -> CycloNumber:
        return self.circ(a + k) * self.circ_inverse(a)

    def poch_row(self, a: int) -> list[CycloNumber]:
        return [self.poch(a, k) for k in range(self.field.q - 1)]

    def poch_circ_row(self, a: int) -> list[CycloNumber]:
        return [self.poch_circ(a, k) for k in range(self.field.q - 1)]


_TABLES: dict[tuple[int, int, int], GaussTable] = {}
_TABLES_LOCK = threading.Lock()


def gauss_table(field: FqField, twist: int = 1) -> GaussTable:
    key = (field.p, field.f, int(twist))
    with _TABLES_LOCK:
        table = _TABLES.get(key)
        if table is None:
            table = _TABLES[key] = GaussTable(field, twist)
    return table


def gauss(eta: MultChar, twist: int = 1) -> CycloNumber:
    """g(eta) = -sum_{x != 0} psi(x) eta(x)."""
    return gauss_table(eta.field, twist).value(eta.exponent)


def gauss_circ(eta: MultChar, twist: int = 1) -> CycloNumber:
    """q^delta(eta) g(eta)."""
    return gauss_table(eta.field, twist).circ(eta.exponent)


def poch(alpha: MultChar, nu: MultChar, twist: int = 1) -> CycloNumber:
    return gauss_table(alpha.field, twist).poch(alpha.exponent, nu.exponent)


def poch_circ(alpha: MultChar, nu: MultChar, twist: int = 1) -> CycloNumber:
    return gauss_table(alpha.field, twist).poch_circ(alpha.exponent, nu.exponent)


def jacobi_direct(*chars: MultChar) -> CycloNumber:
    """(-1)^(n-1) sum over x_1 + ... + x_n = 1, all x_i nonzero, of prod eta_i(x_i)."""
    if len(chars) == 1 and not isinstance(chars[0], MultChar):
        chars = tuple(chars[0])
    if len(chars) < 2:
        raise ValueError("a Jacobi sum needs at least two characters")
    field = chars[0].field
    n = field.q - 1
    units = field.antilog
    logs = np.arange(n, dtype=np.int64)
    # running sums and exponents over the free coordinates x_1..x_{n-1}
    sums = np.zeros(1, dtype=np.int64)
    exps = np.zeros(1, dtype=np.int64)
    for eta in chars[:-1]:
        sums = field.vadd(np.repeat(sums, n), np.tile(units, len(sums)))
        exps = (np.repeat(exps, n) + np.tile(eta.exponent * logs, len(exps))) % n
    last = field.vone_minus(sums)
    keep = last != 0
    exps = (exps[keep] + chars[-1].exponent * field.log[last[keep]]) % n
    value = CycloNumber.from_exponent_counts(n, np.bincount(exps, minlength=n))
    return -value if len(chars) % 2 == 0 else value


def jacobi_via_gauss(*chars: MultChar, twist: int = 1) -> CycloNumber:
    """Jacobi sum as g(eta_1)...g(eta_n) / g°(eta_1...eta_n)."""
    if len(chars) == 1 and not isinstance(chars[0], MultChar):
        chars = tuple(chars[0])
    if len(chars) < 2:
        raise ValueError("a Jacobi sum needs at least two characters")
    field = chars[0].field
    q, n = field.q, len(chars)
    if all(c.is_trivial for c in chars):
        return CycloNumber.rational((1 - (1 - q) ** n) // q)
    table = gauss_table(field, twist)
    num = reduce(lambda acc, c: acc * table.value(c.exponent), chars[1:], table.value(chars[0].exponent))
    total = sum(c.exponent for c in chars)
    value = num * table.circ_inverse(total)
    down = value.restrict(q - 1)
    if down is None:
        raise AssertionError("Jacobi sum outside Q(zeta_{q-1})")
    return down

