"""Hypergeometric functions over F_q: the (n+1)F(n) series, Lauricella's
F_A, F_B, F_C, F_D and the Appell aliases F_1..F_4.

Every value is an exact CycloNumber in Q(zeta_{q-1}). The sums are defined
over n-tuples of characters, but each summand only couples the tuple through
the product nu_1...nu_n, so the default evaluation convolves n single-index
rows over Z/(q-1) and costs O(n (q-1)^2) instead of O((q-1)^n). The literal
tuple sum is kept as ``method="naive"`` for cross-checking.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .characters import parse_char
from .charsums import GaussTable, gauss_table
from .cyclotomic import CycloNumber
from .finite_field import FieldElement, FqField

__all__ = [
    "HgfParams",
    "LauricellaParams",
    "hgf",
    "lauricella",
    "appell",
    "restrict_value",
]


def _exp(field: FqField, c) -> int:
    return parse_char(field, c).exponent


def _code(x) -> int:
    return x.value if isinstance(x, FieldElement) else int(x)


@dataclass(frozen=True)
class HgfParams:
    """Upper characters a_0..a_n and lower characters b_1..b_n, as exponents."""

    field: FqField
    a_list: tuple[int, ...]
    b_list: tuple[int, ...]

    @classmethod
    def make(cls, field: FqField, a_list, b_list) -> "HgfParams":
        a = tuple(_exp(field, c) for c in a_list)
        b = tuple(_exp(field, c) for c in b_list)
        if len(a) != len(b) + 1:
            raise ValueError(f"need n+1 upper and n lower characters, got {len(a)} and {len(b)}")
        return cls(field, a, b)


@dataclass(frozen=True)
class LauricellaParams:
    """Character data of one Lauricella function, stored as exponents.

    A: a; b_1..b_n; c_1..c_n    B: a_1..a_n; b_1..b_n; c
    C: a; b; c_1..c_n           D: a; b_1..b_n; c
    Single characters are stored as 1-tuples.
    """

    field: FqField
    kind: str
    a: tuple[int, ...]
    b: tuple[int, ...]
    c: tuple[int, ...]

    @property
    def n(self) -> int:
        return {"A": len(self.b), "B": len(self.a), "C": len(self.c), "D": len(self.b)}[self.kind]

    @classmethod
    def make(cls, field: FqField, kind: str, a, b, c) -> "LauricellaParams":
        kind = kind.upper()
        if kind not in "ABCD" or len(kind) != 1:
            raise ValueError(f"unknown Lauricella kind {kind!r}")

        def many(x):
            return tuple(_exp(field, v) for v in x)

        def one(x):
            if isinstance(x, (list, tuple)):
                if len(x) != 1:
                    raise ValueError(f"kind {kind} expects a single character here")
                x = x[0]
            return (_exp(field, x),)

        if kind == "A":
            params = cls(field, kind, one(a), many(b), many(c))
            if len(params.b) != len(params.c):
                raise ValueError("F_A needs as many b's as c's")
        elif kind == "B":
            params = cls(field, kind, many(a), many(b), one(c))
            if len(params.a) != len(params.b):
                raise ValueError("F_B needs as many a's as b's")
        elif kind == "C":
            params = cls(field, kind, one(a), one(b), many(c))
        else:
            params = cls(field, kind, one(a), many(b), one(c))
        if params.n < 1:
            raise ValueError("a Lauricella function needs at least one variable")
        return params


def restrict_value(value: CycloNumber, q: int) -> CycloNumber:
    down = value.restrict(q - 1)
    if down is None:
        raise AssertionError("hypergeometric value outside Q(zeta_{q-1})")
    return down


class _Rows:
    """Pochhammer rows over nu = phi^k, k = 0..q-2, for a fixed Gauss table."""

    def __init__(self, table: GaussTable):
        self.t = table
        self.n = table.field.q - 1

    def poch(self, a: int) -> list[CycloNumber]:
        return self.t.poch_row(a)

    def inv_poch_circ(self, a: int) -> list[CycloNumber]:
        t = self.t
        base = t.circ(a)
        return [base * t.circ_inverse(a + k) for k in range(self.n)]

    def char_row(self, lam_code: int) -> list[int]:
        """Exponents e_k with phi^k(lambda) = zeta_{q-1}^{e_k}."""
        j = self.t.field.dlog(lam_code)
        return [(k * j) % self.n for k in range(self.n)]


def _mul_rows(*rows):
    out = list(rows[0])
    for r in rows[1:]:
        out = [x * y for x, y in zip(out, r)]
    return out


def _twist_row(row, exps, order):
    # multiply entry k by zeta_{q-1}^{exps[k]}, inside the Gauss sum field
    step = order // len(row)
    return [v.mul_root(e * step) for v, e in zip(row, exps)]


def hgf(params: HgfParams, lam, *, twist: int = 1) -> CycloNumber:
    """The (n+1)F(n) function at lambda."""
    field = params.field
    q = field.q
    code = _code(lam)
    if code == 0:
        return CycloNumber.rational(0, q - 1)
    table = gauss_table(field, twist)
    rows = _Rows(table)
    parts = [rows.poch(a) for a in params.a_list]
    parts.append(rows.inv_poch_circ(0))
    parts.extend(rows.inv_poch_circ(b) for b in params.b_list)
    terms = _twist_row(_mul_rows(*parts), rows.char_row(code), table.order)
    total = CycloNumber.rational(0, table.order)
    for t in terms:
        total = total + t
    return restrict_value(total / (1 - q), q)


def _lauricella_rows(params: LauricellaParams, lam_codes, rows: _Rows):
    """(outer row over mu, list of inner rows over nu_i)."""
    kind = params.kind
    eps_inv = rows.inv_poch_circ(0)
    inner = []
    for i, code in enumerate(lam_codes):
        if kind == "A":
            parts = [rows.poch(params.b[i]), rows.inv_poch_circ(params.c[i]), eps_inv]
        elif kind == "B":
            parts = [rows.poch(params.a[i]), rows.poch(params.b[i]), eps_inv]
        elif kind == "C":
            parts = [rows.inv_poch_circ(params.c[i]), eps_inv]
        else:
            parts = [rows.poch(params.b[i]), eps_inv]
        inner.append(_twist_row(_mul_rows(*parts), rows.char_row(code), rows.t.order))
    if kind == "A":
        outer = rows.poch(params.a[0])
    elif kind == "B":
        outer = rows.inv_poch_circ(params.c[0])
    elif kind == "C":
        outer = _mul_rows(rows.poch(params.a[0]), rows.poch(params.b[0]))
    else:
        outer = _mul_rows(rows.poch(params.a[0]), rows.inv_poch_circ(params.c[0]))
    return outer, inner


def _convolve(f, g, n, zero):
    out = []
    for m in range(n):
        acc = zero
        for k in range(n):
            acc = acc + f[k] * g[(m - k) % n]
        out.append(acc)
    return out


def lauricella(params: LauricellaParams, lam: Sequence, *, twist: int = 1, method: str = "convolution") -> CycloNumber:
    """F_A, F_B, F_C or F_D at (lambda_1, ..., lambda_n)."""
    field = params.field
    q = field.q
    codes = [_code(x) for x in lam]
    if len(codes) != params.n:
        raise ValueError(f"expected {params.n} arguments, got {len(codes)}")
    if any(c == 0 for c in codes):
        return CycloNumber.rational(0, q - 1)
    table = gauss_table(field, twist)
    rows = _Rows(table)
    n = q - 1
    outer, inner = _lauricella_rows(params, codes, rows)
    zero = CycloNumber.rational(0, table.order)
    total = zero
    if method == "convolution":
        acc = inner[0]
        for r in inner[1:]:
            acc = _convolve(acc, r, n, zero)
        for o, v in zip(outer, acc):
            total = total + o * v
    elif method == "naive":
        for ks in itertools.product(range(n), repeat=len(codes)):
            term = outer[sum(ks) % n]
            for r, k in zip(inner, ks):
                term = term * r[k]
            total = total + term
    else:
        raise ValueError(f"unknown method {method!r}")
    return restrict_value(total / (1 - q) ** len(codes), q)


_APPELL_KIND = {1: "D", 2: "A", 3: "B", 4: "C"}


def appell(i: int, field: FqField, a, b, c, lam1, lam2, *, twist: int = 1) -> CycloNumber:
    """Appell's F_i (i = 1..4) as the two-variable Lauricella function.

    Character arguments follow the Lauricella layout of the matching kind:
    F1: a; (b1, b2); c   F2: a; (b1, b2); (c1, c2)
    F3: (a1, a2); (b1, b2); c   F4: a; b; (c1, c2)
    """
    if i not in _APPELL_KIND:
        raise ValueError("Appell index must be 1, 2, 3 or 4")
    params = LauricellaParams.make(field, _APPELL_KIND[i], a, b, c)
    if params.n != 2:
        raise ValueError("Appell functions take exactly two variables")
    return lauricella(params, (lam1, lam2), twist=twist)

