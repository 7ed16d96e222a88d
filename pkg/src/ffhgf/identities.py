"""Exact verification of the transformation and summation formulas.

Each registered identity has a left-hand side evaluated through the
hypergeometric module and a right-hand side evaluated from its own
expression: Euler-type integrals are direct loops over field points, closed
forms use Gauss and Jacobi sums. A check never derives one side from the
other. Hypotheses are evaluated and recorded; instances that violate them are
still computed but carry no pass/fail claim.

Characters are exponents k of phi^k, arguments are field codes.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field as dc_field
from typing import Callable, Iterator

import numpy as np

from .characters import MultChar
from .charsums import gauss_table, jacobi_direct, jacobi_via_gauss
from .cyclotomic import CycloNumber, root_of_unity
from .finite_field import FqField
from .hypergeometric import HgfParams, LauricellaParams, hgf, lauricella

__all__ = [
    "Instance",
    "IdentityVerdict",
    "Identity",
    "REGISTRY",
    "check",
    "sweep",
    "identity_ids",
    "F4Constants",
    "f4_constants",
    "product_constants",
    "fb_to_fa_prefactor",
    "euler_sign",
    "summarize",
    "enumerate_instances",
    "InstanceError",
]


class InstanceError(ValueError):
    pass


@dataclass(frozen=True)
class Instance:
    """Field, size parameter (n, d, or a flag, depending on the identity),
    characters by name and arguments by name."""

    field: FqField
    chars: dict
    args: dict = dc_field(default_factory=dict)
    size: int = 0
    twist: int = 1

    def to_json(self) -> dict:
        return {
            "q": self.field.q,
            "p": self.field.p,
            "f": self.field.f,
            "size": self.size,
            "chars": dict(self.chars),
            "args": dict(self.args),
        }


@dataclass(frozen=True)
class IdentityVerdict:
    identity_id: str
    hypotheses_met: bool
    lhs: CycloNumber
    rhs: CycloNumber
    equal: bool
    witness: Instance

    @property
    def failed(self) -> bool:
        return self.hypotheses_met and not self.equal

    def to_json(self) -> dict:
        return {
            "identity": self.identity_id,
            "hypotheses_met": self.hypotheses_met,
            "equal": self.equal,
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "witness": self.witness.to_json(),
        }


class _Ctx:
    """Shorthand for the building blocks every formula needs."""

    def __init__(self, inst: Instance):
        self.inst = inst
        self.F = inst.field
        self.q = inst.field.q
        self.n = self.q - 1
        self.T = gauss_table(self.F, inst.twist)
        self.twist = inst.twist
        self.c = {k: v % self.n for k, v in inst.chars.items()}
        self.x = dict(inst.args)
        self._f21: dict = {}

    def cs(self, prefix: str, count: int) -> list[int]:
        return [self.c[f"{prefix}{i}"] for i in range(1, count + 1)]

    def xs(self, prefix: str, count: int) -> list[int]:
        return [self.x[f"{prefix}{i}"] for i in range(1, count + 1)]

    # characters and sums
    def ch(self, k: int, code: int) -> CycloNumber:
        if code == 0:
            return CycloNumber.rational(0, self.n)
        return root_of_unity(self.n, k * self.F.dlog(code))

    def d(self, k: int) -> int:
        return 1 if k % self.n == 0 else 0

    def g(self, k):
        return self.T.value(k)

    def gc(self, k):
        return self.T.circ(k)

    def poch(self, a, k):
        return self.T.poch(a, k)

    def pochc(self, a, k):
        return self.T.poch_circ(a, k)

    def j(self, *ks):
        return jacobi_direct(*[MultChar(self.F, k) for k in ks])

    def hgf(self, a_list, b_list, lam):
        return hgf(HgfParams.make(self.F, list(a_list), list(b_list)), lam, twist=self.twist)

    def f21(self, a, b, c, lam):
        key = (a % self.n, b % self.n, c % self.n, lam)
        v = self._f21.get(key)
        if v is None:
            v = self._f21[key] = self.hgf([a, b], [c], lam)
        return v

    def laur(self, kind, a, b, c, lam):
        return lauricella(LauricellaParams.make(self.F, kind, a, b, c), lam, twist=self.twist)

    def f4(self, a, b, c1, c2, x, y):
        return self.laur("C", a, b, [c1, c2], [x, y])

    # field arithmetic on codes
    def add(self, a, b):
        return self.F.add(a, b)

    def sub(self, a, b):
        return self.F.sub(a, b)

    def mul(self, a, b):
        return self.F.mul(a, b)

    def div(self, a, b):
        return self.F.div(a, b)

    def one_minus(self, a):
        return self.F.sub(1, a)

    @property
    def minus_one(self):
        return self.F.neg_one

    def zero(self):
        return CycloNumber.rational(0, self.n)

    # direct sums over points of (k^x)^m
    def units_grid(self, m: int) -> list[np.ndarray]:
        if m == 0:
            return []
        grids = np.meshgrid(*([self.F.antilog] * m), indexing="ij")
        return [g.ravel() for g in grids]

    def char_sum(self, factors) -> CycloNumber:
        """sum over points of prod chi_k(value); factors are (k, code array)."""
        mask = None
        total = None
        log = self.F.log
        for k, arr in factors:
            arr = np.asarray(arr, dtype=np.int64)
            ok = arr != 0
            mask = ok if mask is None else (mask & ok)
            term = (k % self.n) * log[arr]
            total = term if total is None else total + term
        exps = total[mask] % self.n
        counts = np.bincount(exps, minlength=self.n)
        return CycloNumber.from_exponent_counts(self.n, counts)

    def vsum(self, arrays):
        out = np.zeros_like(arrays[0])
        for a in arrays:
            out = self.F.vadd(out, a)
        return out

    def vone_minus(self, a):
        return self.F.vone_minus(a)


def _sum(values, zero):
    total = zero
    for v in values:
        total = total + v
    return total


# -- shared constants of the F4 expansions ---------------------------------------


@dataclass(frozen=True)
class F4Constants:
    J: CycloNumber
    S0: CycloNumber
    S1: CycloNumber
    S2: CycloNumber
    R1: CycloNumber
    R2: CycloNumber


def f4_constants(field: FqField, a: int, b: int, c1: int, c2: int, x: int, y: int, twist: int = 1) -> F4Constants:
    """J, S_0, S_1, S_2, R_1, R_2 for the F_4 expansion and Euler formula."""
    ctx = _Ctx(Instance(field, {}, {}, 0, twist))
    n = ctx.n
    a, b, c1, c2 = (v % n for v in (a, b, c1, c2))
    J = ctx.j(a, c1 - a) * ctx.j(b, c2 - b)
    sign = ctx.ch(a + b, ctx.minus_one)
    xm1 = ctx.sub(x, 1)
    ym1 = ctx.sub(y, 1)
    S0 = sign * ctx.j(a - c2, b - c1) * ctx.ch(-c1, x) * ctx.ch(-c2, y)
    S1 = ctx.j(c1 + c2 - a - b, b) * ctx.ch(-c1, x) * ctx.ch(c1 - a, xm1) * ctx.ch(-b, y)
    S2 = ctx.j(c1 + c2 - a - b, a) * ctx.ch(-c2, y) * ctx.ch(c2 - b, ym1) * ctx.ch(-a, x)
    R1 = (
        ctx.j(c1 + c2 - a - b, b) * ctx.j(a - c2, c2 - b)
        * ctx.ch(c1 - a, xm1) * ctx.ch(c2 - a, ctx.one_minus(y)) * ctx.ch(-c1, x) * ctx.ch(-c2, y)
    )
    R2 = (
        ctx.j(c1 + c2 - a - b, a) * ctx.j(c1 - a, b - c1)
        * ctx.ch(c1 - b, ctx.one_minus(x)) * ctx.ch(c2 - b, ym1) * ctx.ch(-c1, x) * ctx.ch(-c2, y)
    )
    return F4Constants(J, S0, S1, S2, R1, R2)


def product_constants(field: FqField, a: int, b: int, c1: int, c2: int, twist: int = 1):
    """The constants (C_1, C_2) of the product formula for two 2F1(1) values."""
    T = gauss_table(field, twist)
    q = field.q
    n = q - 1
    dc1 = 1 if c1 % n == 0 else 0
    dc2 = 1 if c2 % n == 0 else 0
    top = T.value(c1 + c2 - a - b)
    C1 = top * T.circ(c2) * T.circ_inverse(c1 + c2 - a) * T.inverse(c2 - b) * q**dc1
    C2 = top * T.circ(c1) * T.circ_inverse(c1 + c2 - b) * T.inverse(c1 - a) * q**dc2
    return C1, C2


# -- the registry ---------------------------------------------------------------


@dataclass(frozen=True)
class Identity:
    id: str
    summary: str
    layout: Callable[[int], tuple[tuple[str, ...], tuple[tuple[str, str], ...]]]
    hypothesis: Callable[[_Ctx], bool]
    lhs: Callable[[_Ctx], CycloNumber]
    rhs: Callable[[_Ctx], CycloNumber]
    default_size: int = 0
    valid_size: Callable[[int, FqField], bool] = lambda s, F: True


REGISTRY: dict[str, Identity] = {}


def _register(ident: Identity) -> None:
    REGISTRY[ident.id] = ident


def identity_ids() -> list[str]:
    return list(REGISTRY)


def _fixed(chars, args=()):
    return lambda size: (tuple(chars), tuple(args))


def _named(prefix: str, count: int) -> list[str]:
    return [f"{prefix}{i}" for i in range(1, count + 1)]


# Gauss sums and Pochhammer symbols

_register(Identity(
    "GAUSS_REFL", "g(e) g°(e^-1) = e(-1) q",
    _fixed(["e"]),
    lambda c: True,
    lambda c: c.g(c.c["e"]) * c.gc(-c.c["e"]),
    lambda c: c.ch(c.c["e"], c.minus_one) * c.q,
))


def _jacobi_layout(size):
    return tuple(_named("e", size)), ()


_register(Identity(
    "JACOBI_GAUSS", "Jacobi sum by enumeration against its Gauss-sum expression",
    _jacobi_layout,
    lambda c: True,
    lambda c: c.j(*c.cs("e", c.inst.size)),
    lambda c: jacobi_via_gauss(*[MultChar(c.F, k) for k in c.cs("e", c.inst.size)], twist=c.twist),
    default_size=2,
    valid_size=lambda s, F: s >= 2,
))


def _poch_chain_lhs(c):
    a, nu, mu = c.c["a"], c.c["nu"], c.c["mu"]
    return c.pochc(a, nu + mu) if c.inst.size else c.poch(a, nu + mu)


def _poch_chain_rhs(c):
    a, nu, mu = c.c["a"], c.c["nu"], c.c["mu"]
    if c.inst.size:
        return c.pochc(a, nu) * c.pochc(a + nu, mu)
    return c.poch(a, nu) * c.poch(a + nu, mu)


_register(Identity(
    "POCH_CHAIN", "(a)_{nu mu} = (a)_nu (a nu)_mu; size 1 selects the circled symbols",
    _fixed(["a", "nu", "mu"]),
    lambda c: True,
    _poch_chain_lhs,
    _poch_chain_rhs,
    valid_size=lambda s, F: s in (0, 1),
))

_register(Identity(
    "POCH_REFL", "(a)_nu (a^-1)°_{nu^-1} = nu(-1)",
    _fixed(["a", "nu"]),
    lambda c: True,
    lambda c: c.poch(c.c["a"], c.c["nu"]) * c.pochc(-c.c["a"], -c.c["nu"]),
    lambda c: c.ch(c.c["nu"], c.minus_one),
))

_register(Identity(
    "POCH_SIGN", "(chi)_phi / ((chi phi)^-1)°_phi = phi(-1)",
    _fixed(["chi", "ph"]),
    lambda c: True,
    lambda c: c.poch(c.c["chi"], c.c["ph"]) / c.pochc(-c.c["chi"] - c.c["ph"], c.c["ph"]),
    lambda c: c.ch(c.c["ph"], c.minus_one),
))

# one-variable functions


def _one_f_zero_rhs(c):
    a, lam = c.c["a"], c.x["lam"]
    if a == 0 and lam == 1:
        return CycloNumber.rational(1 - c.q, c.n)
    return c.ch(-a, c.one_minus(lam))


_register(Identity(
    "ONE_F_ZERO", "1F0(a; lam) in closed form, lam != 0",
    _fixed(["a"], [("lam", "unit")]),
    lambda c: True,
    lambda c: c.hgf([c.c["a"]], [], c.x["lam"]),
    _one_f_zero_rhs,
))


def _euler_2f1_lhs(c):
    a, b, cc, lam = c.c["a"], c.c["b"], c.c["c"], c.x["lam"]
    return -c.j(b, cc - b) * c.f21(a, b, cc, lam)


def _euler_2f1_rhs(c):
    a, b, cc, lam = c.c["a"], c.c["b"], c.c["c"], c.x["lam"]
    (u,) = c.units_grid(1)
    F = c.F
    total = c.char_sum([
        (b, u),
        (cc - b, c.vone_minus(u)),
        (-a, c.vone_minus(F.vscale(lam, u))),
    ])
    if c.d(a):
        total = total + (1 - c.q) * c.ch(-cc, lam) * c.ch(cc - b, c.sub(lam, 1))
    return total


_register(Identity(
    "EULER_2F1", "-j(b, b^-1 c) 2F1(a, b; c; lam) as a sum over u, b != c",
    _fixed(["a", "b", "c"], [("lam", "unit")]),
    lambda c: c.c["b"] != c.c["c"],
    _euler_2f1_lhs,
    _euler_2f1_rhs,
))


def _reduction_layout(size):
    return tuple(_named("a", size) + _named("b", size - 1) + ["c"]), (("lam", "any"),)


def _reduction_lhs(c):
    n = c.inst.size
    a, b, cc = c.cs("a", n), c.cs("b", n - 1), c.c["c"]
    return c.hgf(a + [cc], b + [cc], c.x["lam"])


def _reduction_rhs(c):
    n = c.inst.size
    a, b, cc, lam = c.cs("a", n), c.cs("b", n - 1), c.c["c"], c.x["lam"]
    lower = c.hgf(a, b, lam)
    coef = CycloNumber.rational(1)
    for ai in a:
        coef = coef * c.poch(ai, -cc)
    coef = coef / c.pochc(0, -cc)
    for bi in b:
        coef = coef / c.pochc(bi, -cc)
    tail = coef * c.ch(-cc, lam) / c.q
    return (lower + tail) * c.q ** c.d(cc)


_register(Identity(
    "REDUCTION", "(n+1)F(n) with a repeated character reduces to nF(n-1)",
    _reduction_layout,
    lambda c: True,
    _reduction_lhs,
    _reduction_rhs,
    default_size=1,
    valid_size=lambda s, F: s >= 1,
))


def _two_f1_eps_rhs(c):
    a, cc, lam = c.c["a"], c.c["c"], c.x["lam"]
    if lam == 1 and a == cc:
        return CycloNumber.rational(1 + c.q ** c.d(a) * (1 - c.q), c.n)
    coef = c.g(a - cc) * c.gc(cc) / c.g(a)
    return coef * c.ch(-cc, lam) * c.ch(cc - a, c.one_minus(lam)) + 1


_register(Identity(
    "TWO_F1_EPS", "2F1(a, eps; c; lam) in closed form, lam != 0",
    _fixed(["a", "c"], [("lam", "unit")]),
    lambda c: True,
    lambda c: c.f21(c.c["a"], 0, c.c["c"], c.x["lam"]),
    _two_f1_eps_rhs,
))


def _pfaff_lhs(c):
    a, b, cc, lam = c.c["a"], c.c["b"], c.c["c"], c.x["lam"]
    return c.ch(a, c.one_minus(lam)) * c.f21(a, b, cc, lam)


def _pfaff_rhs(c):
    a, b, cc, lam = c.c["a"], c.c["b"], c.c["c"], c.x["lam"]
    arg = c.div(lam, c.sub(lam, 1))
    out = c.f21(a, cc - b, cc, arg)
    if c.d(cc - b):
        coef = c.gc(cc) / (c.g(a) * c.g(cc - a))
        out = out + (1 - c.q) * coef * c.ch(-cc, lam) * c.ch(a, c.sub(lam, 1))
    return out


_register(Identity(
    "PFAFF", "a(1-lam) 2F1(a, b; c; lam) against 2F1 at lam/(lam-1)",
    _fixed(["a", "b", "c"], [("lam", "not1")]),
    lambda c: c.c["b"] != 0 and c.c["a"] != c.c["c"],
    _pfaff_lhs,
    _pfaff_rhs,
))


def _vandermonde_special(c) -> bool:
    return {c.c["a"], (-c.c["mu"]) % c.n} == {0, c.c["c"]}


def _vandermonde_main(c):
    a, mu, cc = c.c["a"], c.c["mu"], c.c["c"]
    return c.poch(cc - a, mu) / c.pochc(cc, mu) / c.q ** c.d(cc - a)


def _vandermonde_ii_rhs(c):
    cc = c.c["c"]
    correction = CycloNumber.rational((1 - c.q) ** 2 * (1 + c.q) ** c.d(cc), c.n) / c.q
    return _vandermonde_main(c) - correction


_register(Identity(
    "VANDERMONDE_I", "2F1(a, mu^-1; c; 1) as a Pochhammer quotient, generic case",
    _fixed(["a", "mu", "c"]),
    lambda c: not _vandermonde_special(c),
    lambda c: c.f21(c.c["a"], -c.c["mu"], c.c["c"], 1),
    _vandermonde_main,
))

_register(Identity(
    "VANDERMONDE_II", "2F1(a, mu^-1; c; 1) with the correction term, degenerate case",
    _fixed(["a", "mu", "c"]),
    _vandermonde_special,
    lambda c: c.f21(c.c["a"], -c.c["mu"], c.c["c"], 1),
    _vandermonde_ii_rhs,
))


def _saal_lhs(c):
    a, b, cc, nu = c.c["a"], c.c["b"], c.c["c"], c.c["nu"]
    return c.hgf([a, b, -nu], [cc, a + b - cc - nu], 1)


def _saal_rhs(c):
    a, b, cc, nu = c.c["a"], c.c["b"], c.c["c"], c.c["nu"]
    q = c.q
    first = c.poch(cc - a, nu) * c.poch(cc - b, nu) / (c.pochc(cc, nu) * c.poch(cc - a - b, nu))
    first = first / q ** c.d(cc - a)
    second = c.gc(cc) * c.gc(a + b - cc - nu) / (c.g(a) * c.g(b) * c.g(-nu))
    weight = c.d(cc - a) * c.d(nu) + c.d(b) * c.d(cc + nu)
    third = CycloNumber.rational(weight * (1 - q) ** 2, c.n) / q
    return first + second - third


_register(Identity(
    "SAALSCHUTZ", "balanced 3F2 at 1 in closed form",
    _fixed(["a", "b", "c", "nu"]),
    lambda c: c.c["a"] != 0 and c.c["b"] != c.c["c"] and (c.c["a"] + c.c["b"] - c.c["c"]) % c.n != 0,
    _saal_lhs,
    _saal_rhs,
))

# Lauricella Euler-type formulas


def _fd_layout(size):
    return tuple(["a"] + _named("b", size) + ["c"]), tuple((f"l{i}", "unit") for i in range(1, size + 1))


def _fd_lhs_i(c):
    n = c.inst.size
    a, b, cc = c.c["a"], c.cs("b", n), c.c["c"]
    return -c.j(a, cc - a) * c.laur("D", a, b, cc, c.xs("l", n))


def _fd_rhs_i(c):
    n = c.inst.size
    a, b, cc, lam = c.c["a"], c.cs("b", n), c.c["c"], c.xs("l", n)
    (u,) = c.units_grid(1)
    factors = [(-bi, c.vone_minus(c.F.vscale(li, u))) for bi, li in zip(b, lam)]
    factors += [(a, u), (cc - a, c.vone_minus(u))]
    return c.char_sum(factors)


def _fd_lhs_ii(c):
    n = c.inst.size
    a, b, cc = c.c["a"], c.cs("b", n), c.c["c"]
    coef = c.g(cc - sum(b)) / c.gc(cc)
    for bi in b:
        coef = coef * c.g(bi)
    return coef * (-1) ** n * c.laur("D", a, b, cc, c.xs("l", n))


def _fd_rhs_ii(c):
    n = c.inst.size
    a, b, cc, lam = c.c["a"], c.cs("b", n), c.c["c"], c.xs("l", n)
    us = c.units_grid(n)
    lin = c.vsum([c.F.vscale(li, ui) for li, ui in zip(lam, us)])
    factors = [(-a, c.vone_minus(lin))]
    factors += [(bi, ui) for bi, ui in zip(b, us)]
    factors.append((cc - sum(b), c.vone_minus(c.vsum(us))))
    return c.char_sum(factors)


_register(Identity(
    "FD_EULER_I", "F_D as a single integral over u, a != c and b_i != eps",
    _fd_layout,
    lambda c: c.c["a"] != c.c["c"] and all(bi != 0 for bi in c.cs("b", c.inst.size)),
    _fd_lhs_i,
    _fd_rhs_i,
    default_size=2,
    valid_size=lambda s, F: s >= 1,
))

_register(Identity(
    "FD_EULER_II", "F_D as an n-fold integral over the simplex, a != eps and b_1...b_n != c",
    _fd_layout,
    lambda c: c.c["a"] != 0 and (sum(c.cs("b", c.inst.size)) - c.c["c"]) % c.n != 0,
    _fd_lhs_ii,
    _fd_rhs_ii,
    default_size=2,
    valid_size=lambda s, F: s >= 1,
))


def _karlsson_lhs(c):
    d = c.inst.size
    a, b, cc, lam = c.c["a"], c.c["b"], c.c["c"], c.x["lam"]
    xi = c.F.exp(c.n // d)
    args = [c.F.pow(xi, i) for i in range(1, d)] + [c.mul(c.F.pow(xi, i), lam) for i in range(d)]
    return c.laur("D", d * a, [a - cc] * (d - 1) + [b] * d, (d - 1) * a + cc, args)


def _karlsson_rhs(c):
    d = c.inst.size
    a, b, cc, lam = c.c["a"], c.c["b"], c.c["c"], c.x["lam"]
    step = c.n // d
    lam_d = c.F.pow(lam, d)
    terms = []
    for i in range(d):
        coef = c.g(i * step + a) * c.gc((d - 1) * a + cc) / (c.g(d * a) * c.gc(i * step + cc))
        terms.append(coef * c.f21(i * step + a, b, i * step + cc, lam_d))
    return _sum(terms, c.zero())


_register(Identity(
    "KARLSSON", "F_D in 2d-1 variables at roots of unity against d terms of 2F1 at lam^d",
    _fixed(["a", "b", "c"], [("lam", "unit")]),
    lambda c: c.c["a"] != c.c["c"] and c.c["b"] != 0,
    _karlsson_lhs,
    _karlsson_rhs,
    default_size=2,
    valid_size=lambda s, F: s >= 1 and (F.q - 1) % s == 0,
))


def _fa_layout(size):
    return tuple(["a"] + _named("b", size) + _named("c", size)), tuple((f"l{i}", "unit") for i in range(1, size + 1))


def euler_sign(n: int, *, uncorrected: bool = False) -> int:
    """Sign in front of the F_A, F_B and F_C integral formulas.

    Each of the n one-variable Jacobi sums j(a_i^-1, nu_i^-1) (or the single
    (n+1)-term one) contributes a factor -1 when rewritten through Pochhammer
    symbols, exactly as for the second F_D formula. ``uncorrected`` drops it.
    """
    return 1 if uncorrected else (-1) ** n


def _fa_lhs(c):
    n = c.inst.size
    a, b, cs = c.c["a"], c.cs("b", n), c.cs("c", n)
    coef = CycloNumber.rational(1)
    for bi, ci in zip(b, cs):
        coef = coef * c.j(bi, ci - bi)
    return coef * c.laur("A", a, b, cs, c.xs("l", n)) * euler_sign(n)


def _fa_rhs(c):
    n = c.inst.size
    a, b, cs, lam = c.c["a"], c.cs("b", n), c.cs("c", n), c.xs("l", n)
    us = c.units_grid(n)
    lin = c.vsum([c.F.vscale(li, ui) for li, ui in zip(lam, us)])
    factors = [(-a, c.vone_minus(lin))]
    for bi, ci, ui in zip(b, cs, us):
        factors += [(bi, ui), (ci - bi, c.vone_minus(ui))]
    return c.char_sum(factors)


_register(Identity(
    "FA_EULER", "F_A as an n-fold integral, a != eps and b_i != c_i",
    _fa_layout,
    lambda c: c.c["a"] != 0 and all(bi != ci for bi, ci in zip(c.cs("b", c.inst.size), c.cs("c", c.inst.size))),
    _fa_lhs,
    _fa_rhs,
    default_size=2,
    valid_size=lambda s, F: s >= 1,
))


def _fb_layout(size):
    return tuple(_named("a", size) + _named("b", size) + ["c"]), tuple((f"l{i}", "unit") for i in range(1, size + 1))


def _fb_lhs(c):
    n = c.inst.size
    a, b, cc = c.cs("a", n), c.cs("b", n), c.c["c"]
    coef = c.g(cc - sum(b)) / c.gc(cc)
    for bi in b:
        coef = coef * c.g(bi)
    return coef * c.laur("B", a, b, cc, c.xs("l", n)) * euler_sign(n)


def _fb_rhs(c):
    n = c.inst.size
    a, b, cc, lam = c.cs("a", n), c.cs("b", n), c.c["c"], c.xs("l", n)
    us = c.units_grid(n)
    factors = [(-ai, c.vone_minus(c.F.vscale(li, ui))) for ai, li, ui in zip(a, lam, us)]
    factors += [(bi, ui) for bi, ui in zip(b, us)]
    factors.append((cc - sum(b), c.vone_minus(c.vsum(us))))
    return c.char_sum(factors)


_register(Identity(
    "FB_EULER", "F_B as an n-fold integral over the simplex, a_i != eps and b_1...b_n != c",
    _fb_layout,
    lambda c: all(ai != 0 for ai in c.cs("a", c.inst.size)) and (sum(c.cs("b", c.inst.size)) - c.c["c"]) % c.n != 0,
    _fb_lhs,
    _fb_rhs,
    default_size=2,
    valid_size=lambda s, F: s >= 1,
))


def _fc_layout(size):
    return tuple(["a", "b"] + _named("c", size)), tuple((f"l{i}", "unit") for i in range(1, size + 1))


def _fc_lhs(c):
    n = c.inst.size
    a, b, cs = c.c["a"], c.c["b"], c.cs("c", n)
    coef = c.g(sum(cs) - a) / c.gc(-a)
    for ci in cs:
        coef = coef * c.g(-ci)
    return coef * c.laur("C", a, b, cs, c.xs("l", n)) * euler_sign(n)


def _fc_rhs(c):
    n = c.inst.size
    a, b, cs, lam = c.c["a"], c.c["b"], c.cs("c", n), c.xs("l", n)
    us = c.units_grid(n)
    ratios = c.vsum([c.F.vmul(np.full(len(ui), li, dtype=np.int64), c.F.vinv(ui)) for li, ui in zip(lam, us)])
    factors = [(-b, c.vone_minus(ratios))]
    factors += [(-ci, ui) for ci, ui in zip(cs, us)]
    factors.append((sum(cs) - a, c.vone_minus(c.vsum(us))))
    return c.char_sum(factors)


_register(Identity(
    "FC_EULER", "F_C as an n-fold integral, a^-1 c_1...c_n != eps and b != eps",
    _fc_layout,
    lambda c: (sum(c.cs("c", c.inst.size)) - c.c["a"]) % c.n != 0 and c.c["b"] != 0,
    _fc_lhs,
    _fc_rhs,
    default_size=2,
    valid_size=lambda s, F: s >= 1,
))


def fb_to_fa_prefactor(field: FqField, a, b, c, *, uncorrected: bool = False, twist: int = 1) -> CycloNumber:
    """Constant in front of F_A when F_B is rewritten at inverted arguments.

    The correct constant is (c^-1)_{b_1...b_n} prod (a_i)_{b_i^-1};
    ``uncorrected=True`` gives the variant with (b_1...b_n)_{c^-1} in the first
    factor, which does not satisfy the transformation.
    """
    T = gauss_table(field, twist)
    bsum = sum(b)
    coef = T.poch(bsum, -c) if uncorrected else T.poch(-c, bsum)
    for ai, bi in zip(a, b):
        coef = coef * T.poch(ai, -bi)
    return coef


def _fb_to_fa_rhs(c):
    n = c.inst.size
    a, b, cc, lam = c.cs("a", n), c.cs("b", n), c.c["c"], c.xs("l", n)
    coef = fb_to_fa_prefactor(c.F, a, b, cc, twist=c.twist)
    for bi, li in zip(b, lam):
        coef = coef * c.ch(-bi, li)
    inv = [c.F.inv(li) for li in lam]
    return coef * c.laur("A", sum(b) - cc, b, [bi - ai for ai, bi in zip(a, b)], inv)


_register(Identity(
    "FB_TO_FA", "F_B at lam_i against F_A at 1/lam_i",
    _fb_layout,
    lambda c: True,
    lambda c: c.laur("B", c.cs("a", c.inst.size), c.cs("b", c.inst.size), c.c["c"], c.xs("l", c.inst.size)),
    _fb_to_fa_rhs,
    default_size=2,
    valid_size=lambda s, F: s >= 1,
))

# Appell F4


def _f4_chars(c):
    return c.c["a"], c.c["b"], c.c["c1"], c.c["c2"]


def _f4_generic(c) -> bool:
    a, b, c1, c2 = _f4_chars(c)
    return a not in (0, c1, c2) and b not in (0, c1, c2)


def _f4_unbalanced(c) -> bool:
    a, b, c1, c2 = _f4_chars(c)
    return _f4_generic(c) and (a + b - c1 - c2) % c.n != 0


def _f4_at_product(c):
    a, b, c1, c2 = _f4_chars(c)
    x, y = c.x["x"], c.x["y"]
    return c.f4(a, b, c1, c2, c.mul(x, c.one_minus(y)), c.mul(y, c.one_minus(x)))


def _f4_unit_lhs(c):
    a, b, c1, c2 = _f4_chars(c)
    x, y = c.x["x"], c.x["y"]
    den = c.mul(c.one_minus(x), c.one_minus(y))
    u = c.F.neg(c.div(x, den))
    v = c.F.neg(c.div(y, den))
    return c.ch(-a, c.one_minus(x)) * c.ch(-b, c.one_minus(y)) * c.f4(a, b, c1, c2, u, v)


def _f4_unit_rhs(c):
    a, b, c1, c2 = _f4_chars(c)
    x, y = c.x["x"], c.x["y"]
    terms = []
    for mu in range(c.n):
        for nu in range(c.n):
            coef = c.poch(a, mu) * c.poch(b, nu) / (c.pochc(0, mu) * c.pochc(0, nu))
            val = c.f21(b + nu, -mu, c1, 1) * c.f21(a + mu, -nu, c2, 1)
            terms.append(coef * val * c.ch(mu, x) * c.ch(nu, y))
    return _sum(terms, c.zero()) / (1 - c.q) ** 2


_register(Identity(
    "F4_UNIT_ARG", "F_4 at -x/((1-x)(1-y)), -y/((1-x)(1-y)) as a double sum of products of 2F1(1)",
    _fixed(["a", "b", "c1", "c2"], [("x", "not1"), ("y", "not1")]),
    lambda c: True,
    _f4_unit_lhs,
    _f4_unit_rhs,
))


def _prod_lhs(c):
    a, b, c1, c2 = _f4_chars(c)
    mu, nu = c.c["mu"], c.c["nu"]
    return c.f21(b + nu, -mu, c1, 1) * c.f21(a + mu, -nu, c2, 1)


def _prod_rhs(c):
    a, b, c1, c2 = _f4_chars(c)
    mu, nu = c.c["mu"], c.c["nu"]
    q = c.q
    first = c.poch(c1 - b, mu) * c.poch(c2 - a, nu) / (c.pochc(c1, mu) * c.pochc(c2, nu))
    first = first * c.hgf([a + b - c1 - c2, -mu, -nu], [b - c1 - mu, a - c2 - nu], 1)
    second = c.j(a - c2, b - c1) * c.pochc(0, mu) * c.pochc(0, nu) / (c.pochc(c1, mu) * c.pochc(c2, nu))
    C1, C2 = product_constants(c.F, a, b, c1, c2, c.twist)
    third = (C1 * (c.d(c1 + mu) * c.d(b + nu)) + C2 * (c.d(a + mu) * c.d(c2 + nu))) * ((1 - q) ** 2) / q
    return first - second - third


_register(Identity(
    "PRODUCT_3F2", "product of two 2F1(1) values through a 3F2(1)",
    _fixed(["a", "b", "c1", "c2", "mu", "nu"]),
    _f4_unbalanced,
    _prod_lhs,
    _prod_rhs,
))


def _key_lhs(c):
    a, b, c1, c2 = _f4_chars(c)
    K = f4_constants(c.F, a, b, c1, c2, c.x["x"], c.x["y"], c.twist)
    return K.J * _f4_at_product(c)


def _eta_coef(c, eta):
    a, b, c1, c2 = _f4_chars(c)
    num = c.poch(a, eta) * c.poch(b, eta) * c.poch(a + b - c1 - c2, eta)
    return num / (c.pochc(0, eta) * c.pochc(c1, eta) * c.pochc(c2, eta))


def _key_rhs(c):
    a, b, c1, c2 = _f4_chars(c)
    x, y = c.x["x"], c.x["y"]
    K = f4_constants(c.F, a, b, c1, c2, x, y, c.twist)
    xm, ym = c.sub(x, 1), c.sub(y, 1)
    u, v = c.div(x, xm), c.div(y, ym)
    w = c.div(c.mul(x, y), c.mul(xm, ym))
    terms = []
    for eta in range(c.n):
        val = c.f21(a + eta, c1 - b, c1 + eta, u) * c.f21(b + eta, c2 - a, c2 + eta, v)
        terms.append(_eta_coef(c, eta) * c.ch(eta, w) * val)
    main = _sum(terms, c.zero()) * K.J / (1 - c.q)
    main = main * c.ch(-a, c.one_minus(x)) * c.ch(-b, c.one_minus(y))
    return main - K.S0 - K.S1 - K.S2


_register(Identity(
    "KEY_PROP", "J F_4 at (x(1-y), y(1-x)) as a single sum of 2F1 products at x/(x-1), y/(y-1)",
    _fixed(["a", "b", "c1", "c2"], [("x", "unit_not1"), ("y", "unit_not1")]),
    _f4_unbalanced,
    _key_lhs,
    _key_rhs,
))


def _expansion_rhs(c):
    a, b, c1, c2 = _f4_chars(c)
    x, y = c.x["x"], c.x["y"]
    K = f4_constants(c.F, a, b, c1, c2, x, y, c.twist)
    xy = c.mul(x, y)
    terms = []
    for eta in range(c.n):
        val = c.f21(a + eta, b + eta, c1 + eta, x) * c.f21(a + eta, b + eta, c2 + eta, y)
        terms.append(_eta_coef(c, eta) * c.ch(eta, xy) * val)
    main = _sum(terms, c.zero()) * K.J / (1 - c.q)
    return main - K.S0 + K.R1 + K.R2 * c.q ** c.d(a - b)


_register(Identity(
    "F4_EXPANSION", "J F_4 at (x(1-y), y(1-x)) as a single sum of 2F1(x) 2F1(y) products",
    _fixed(["a", "b", "c1", "c2"], [("x", "not1"), ("y", "not1")]),
    _f4_unbalanced,
    _key_lhs,
    _expansion_rhs,
))


def _f4_euler_rhs(c):
    a, b, c1, c2 = _f4_chars(c)
    x, y = c.x["x"], c.x["y"]
    K = f4_constants(c.F, a, b, c1, c2, x, y, c.twist)
    u, v = c.units_grid(2)
    F = c.F
    xu = F.vscale(x, u)
    yv = F.vscale(y, v)
    integral = c.char_sum([
        (a, u), (b, v),
        (c1 - a, c.vone_minus(u)), (c2 - b, c.vone_minus(v)),
        (a - c1 - c2, c.vone_minus(xu)), (b - c1 - c2, c.vone_minus(yv)),
        (c1 + c2 - a - b, c.vone_minus(F.vadd(xu, yv))),
    ])
    return integral - K.S0 - K.S1 - K.S2


_register(Identity(
    "F4_EULER", "J F_4 at (x(1-y), y(1-x)) as a double integral over u, v",
    _fixed(["a", "b", "c1", "c2"], [("x", "unit_not1"), ("y", "unit_not1")]),
    _f4_generic,
    _key_lhs,
    _f4_euler_rhs,
))


def _balanced_rhs(c):
    a, b, c1, c2 = _f4_chars(c)
    x, y = c.x["x"], c.x["y"]
    K = f4_constants(c.F, a, b, c1, c2, x, y, c.twist)
    out = K.J * c.f21(a, b, c1, x) * c.f21(a, b, c2, y)
    if c.add(x, y) == 1:
        out = out - K.S0 * c.q
    return out


_register(Identity(
    "F4_BALANCED", "J F_4 at (x(1-y), y(1-x)) as J 2F1(x) 2F1(y) when a b = c1 c2",
    _fixed(["a", "b", "c1", "c2"], [("x", "unit_not1"), ("y", "unit_not1")]),
    lambda c: _f4_generic(c) and (sum(_f4_chars(c)[:2]) - sum(_f4_chars(c)[2:])) % c.n == 0,
    _key_lhs,
    _balanced_rhs,
))


# -- checking and sweeping ------------------------------------------------------


def _validate(ident: Identity, inst: Instance) -> None:
    if not ident.valid_size(inst.size, inst.field):
        raise InstanceError(f"{ident.id}: size {inst.size} is not valid over F_{inst.field.q}")
    chars, args = ident.layout(inst.size)
    missing = [c for c in chars if c not in inst.chars]
    if missing:
        raise InstanceError(f"{ident.id}: missing characters {missing}")
    extra = [c for c in inst.chars if c not in chars]
    if extra:
        raise InstanceError(f"{ident.id}: unexpected characters {extra}")
    for name, domain in args:
        if name not in inst.args:
            raise InstanceError(f"{ident.id}: missing argument {name}")
        v = int(inst.args[name])
        if not 0 <= v < inst.field.q or not _in_domain(v, domain):
            raise InstanceError(f"{ident.id}: argument {name}={v} outside its domain ({domain})")


def _in_domain(v: int, domain: str) -> bool:
    if domain == "any":
        return True
    if domain == "unit":
        return v != 0
    if domain == "not1":
        return v != 1
    if domain == "unit_not1":
        return v not in (0, 1)
    raise ValueError(domain)


def _domain_values(q: int, domain: str) -> list[int]:
    return [v for v in range(q) if _in_domain(v, domain)]


def check(identity_id: str, instance: Instance) -> IdentityVerdict:
    ident = REGISTRY.get(identity_id)
    if ident is None:
        raise KeyError(f"unknown identity {identity_id!r}")
    if instance.size == 0 and ident.default_size and not ident.valid_size(0, instance.field):
        instance = Instance(instance.field, instance.chars, instance.args, ident.default_size, instance.twist)
    _validate(ident, instance)
    ctx = _Ctx(instance)
    met = bool(ident.hypothesis(ctx))
    lhs = ident.lhs(ctx)
    rhs = ident.rhs(ctx)
    return IdentityVerdict(identity_id, met, lhs, rhs, lhs == rhs, instance)


def enumerate_instances(identity_id: str, field: FqField, size: int | None = None) -> tuple[int, Callable[[int], Instance]]:
    """(count, decoder) for the full instance space in odometer order."""
    ident = REGISTRY[identity_id]
    if size is None:
        size = ident.default_size
    if not ident.valid_size(size, field):
        raise InstanceError(f"{identity_id}: size {size} is not valid over F_{field.q}")
    chars, args = ident.layout(size)
    n = field.q - 1
    radices = [n] * len(chars) + [len(_domain_values(field.q, dom)) for _, dom in args]
    values = [_domain_values(field.q, dom) for _, dom in args]
    count = math.prod(radices)

    def decode(index: int) -> Instance:
        digits = []
        for r in reversed(radices):
            index, dgt = divmod(index, r)
            digits.append(dgt)
        digits.reverse()
        cvals = dict(zip(chars, digits[: len(chars)]))
        avals = {name: vals[dgt] for (name, _), vals, dgt in zip(args, values, digits[len(chars):])}
        return Instance(field, cvals, avals, size)

    return count, decode


def sweep(
    identity_id: str,
    field: FqField,
    *,
    size: int | None = None,
    hypotheses_only: bool = False,
    predicate: Callable[[Instance], bool] | None = None,
    cap: int = 2000,
    seed: int = 0,
    limit: int | None = None,
) -> list[IdentityVerdict]:
    """Verdicts over every instance (or a stratified sample above ``cap``).

    The sample splits the index range into ``cap`` equal strata and draws one
    index from each with a seeded generator, so it is reproducible. With
    ``limit`` the instances are visited in seeded random order instead, and
    the sweep stops after ``limit`` verdicts have passed the filters; ``cap``
    is ignored then.
    """
    count, decode = enumerate_instances(identity_id, field, size)
    if limit is not None:
        indices = _random_order(count, random.Random(seed))
    elif count <= cap:
        indices: Iterator[int] = iter(range(count))
    else:
        rng = random.Random(seed)
        bounds = [count * i // cap for i in range(cap + 1)]
        indices = iter(rng.randrange(lo, hi) for lo, hi in zip(bounds, bounds[1:]) if hi > lo)
    ident = REGISTRY[identity_id]
    out = []
    for idx in indices:
        inst = decode(idx)
        if predicate is not None and not predicate(inst):
            continue
        if hypotheses_only and not ident.hypothesis(_Ctx(inst)):
            continue
        out.append(check(identity_id, inst))
        if limit is not None and len(out) >= limit:
            break
    return out


def _random_order(count: int, rng: random.Random) -> Iterator[int]:
    """Every index below count once, in random order, without building the permutation."""
    if count <= 100_000:
        order = list(range(count))
        rng.shuffle(order)
        yield from order
        return
    seen: set[int] = set()
    while len(seen) < count // 2:
        i = rng.randrange(count)
        if i not in seen:
            seen.add(i)
            yield i
    rest = [i for i in range(count) if i not in seen]
    rng.shuffle(rest)
    yield from rest


def summarize(verdicts) -> dict:
    met = [v for v in verdicts if v.hypotheses_met]
    return {
        "instances": len(verdicts),
        "hypotheses_met": len(met),
        "passed": sum(1 for v in met if v.equal),
        "failed": sum(1 for v in met if not v.equal),
        "boundary_equal": sum(1 for v in verdicts if not v.hypotheses_met and v.equal),
        "boundary_unequal": sum(1 for v in verdicts if not v.hypotheses_met and not v.equal),
    }

