"""Character-decomposed point counts of the superelliptic families.

Each family is a hypersurface y^d = f(x_1, ..., x_n) where f is a product of
powers of simple polynomials, with mu_d acting on y. The count N_r(V; chi^m)
over k_r is available through three independent routes:

fixed_point  the defining Frobenius-twisted fixed-point count, enumerated in
             a working extension that contains every candidate y
char_sum     sum over base points of phi_{d,r}^m(f(x))
formula      the closed form in terms of Jacobi sums and Lauricella functions

XD is the smooth projective model of the CD curve; its counts are the CD
counts plus the single point at infinity in the m = 0 component.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .characters import MultChar, char_of_exact_order, norm_pullback
from .charsums import jacobi_direct
from .cyclotomic import CycloNumber
from .finite_field import FieldElement, FqField, extend
from .hypergeometric import LauricellaParams, appell, lauricella
from .identities import euler_sign, f4_constants

log = logging.getLogger(__name__)

__all__ = [
    "FAMILIES",
    "ROUTES",
    "DEFAULT_BUDGET",
    "VarietyError",
    "BudgetError",
    "HypothesisError",
    "VarietySpec",
    "ChiCount",
    "brute_count",
    "chi_fixed_point",
    "chi_char_sum",
    "chi_formula",
    "FormulaParts",
    "formula_parts",
    "chi_count",
    "chi_table",
    "hypothesis_violations",
]

FAMILIES = ("CD", "SD", "SA", "SB", "SC", "S4", "XD")
DEFAULT_BUDGET = 6_000_000

# exponent names per family; True marks a per-variable list
_LAYOUT = {
    "CD": (("a", False), ("b", True), ("c", False)),
    "XD": (("a", False), ("b", True), ("c", False)),
    "SD": (("a", False), ("b", True), ("c", False)),
    "SA": (("a", False), ("b", True), ("c", True)),
    "SB": (("a", True), ("b", True), ("c", False)),
    "SC": (("a", False), ("b", False), ("c", True)),
    "S4": (("a", False), ("b", False), ("c1", False), ("c2", False)),
}


class VarietyError(ValueError):
    pass


class BudgetError(VarietyError):
    pass


class HypothesisError(VarietyError):
    pass


def _code(x) -> int:
    return x.value if isinstance(x, FieldElement) else int(x)


@dataclass(frozen=True)
class VarietySpec:
    """One member of a family over the base field k = F_q.

    ``exponents`` maps each exponent name to a tuple (length 1 for single
    exponents). S4 exponents are kept reduced mod d.
    """

    family: str
    field: FqField
    d: int
    exponents: dict = dc_field(hash=False)
    lam: tuple[int, ...] = ()

    @classmethod
    def make(cls, family: str, field: FqField, d: int, lam: Sequence, **exponents) -> "VarietySpec":
        family = family.upper()
        if family not in _LAYOUT:
            raise VarietyError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
        exps = {}
        for name, many in _LAYOUT[family]:
            if name not in exponents:
                raise VarietyError(f"{family} needs exponent {name!r}")
            v = exponents.pop(name)
            if many:
                v = tuple(int(x) for x in (v if isinstance(v, (list, tuple)) else [v]))
            else:
                if isinstance(v, (list, tuple)):
                    if len(v) != 1:
                        raise VarietyError(f"{family}: exponent {name!r} is a single integer")
                    v = v[0]
                v = (int(v),)
            exps[name] = v
        if exponents:
            raise VarietyError(f"{family}: unexpected exponents {sorted(exponents)}")
        spec = cls(family, field, int(d), exps, tuple(_code(x) for x in lam))
        spec._validate()
        if family == "S4":
            object.__setattr__(spec, "exponents", {k: (v[0] % spec.d,) for k, v in exps.items()})
        return spec

    # -- shape ---------------------------------------------------------------
    @property
    def n(self) -> int:
        if self.family == "S4":
            return 2
        lists = [self.exponents[name] for name, many in _LAYOUT[self.family] if many]
        return len(lists[0])

    @property
    def dim(self) -> int:
        """Number of base coordinates."""
        return 1 if self.family in ("CD", "XD") else self.n

    def e(self, name: str) -> int:
        return self.exponents[name][0]

    def es(self, name: str) -> tuple[int, ...]:
        return self.exponents[name]

    @property
    def infinity_exponent(self) -> int:
        """|a + sum b_i + c - d| for the CD/XD curve."""
        return abs(self.e("a") + sum(self.es("b")) + self.e("c") - self.d)

    def _validate(self) -> None:
        q, d = self.field.q, self.d
        if d < 1 or (q - 1) % d:
            raise VarietyError(f"d = {d} must divide q - 1 = {q - 1}")
        lists = [(n, v) for n, v in self.exponents.items() if _is_list(self.family, n)]
        if lists and len({len(v) for _, v in lists}) != 1:
            raise VarietyError(f"{self.family}: per-variable exponent lists differ in length")
        if self.n < 1:
            raise VarietyError("at least one variable is needed")
        if self.family != "S4" and any(x < 1 for v in self.exponents.values() for x in v):
            raise VarietyError("exponents must be positive integers")
        if len(self.lam) != self.n:
            raise VarietyError(f"{self.family} with n = {self.n} needs {self.n} lambda values, got {len(self.lam)}")
        if any(not 0 < x < q for x in self.lam):
            raise VarietyError("lambda values must be nonzero field elements")
        if self.family in ("CD", "XD"):
            if 1 in self.lam or len(set(self.lam)) != len(self.lam):
                raise VarietyError("lambda values must be distinct and different from 1")
        if self.family == "S4" and 1 in self.lam:
            raise VarietyError("S4 needs lambda_1, lambda_2 != 1")
        if self.family == "XD":
            e = self.infinity_exponent
            if e == 0:
                raise VarietyError("XD needs a + sum(b) + c != d")
            bad = [x for x in (self.e("a"), *self.es("b"), self.e("c"), e) if math.gcd(d, x) != 1]
            if bad:
                raise VarietyError(f"XD needs a, b_i, c and e coprime to d (offending: {bad})")

    def describe(self) -> dict:
        return {
            "family": self.family,
            "q": self.field.q,
            "d": self.d,
            "exponents": {k: list(v) if _is_list(self.family, k) else v[0] for k, v in self.exponents.items()},
            "lambda": list(self.lam),
        }


def _is_list(family: str, name: str) -> bool:
    return dict(_LAYOUT[family])[name]


@dataclass(frozen=True)
class ChiCount:
    m: int
    r: int
    value: CycloNumber
    route: str

    def to_json(self) -> dict:
        z = complex(self.value)
        return {
            "m": self.m,
            "r": self.r,
            "route": self.route,
            "value": self.value.to_json(),
            "complex": [z.real, z.imag],
        }


# -- base points and the polynomial f --------------------------------------------


def _ext(spec: VarietySpec, r: int, budget: int):
    Q = spec.field.q**r
    if Q > budget:
        raise BudgetError(f"k_{r} has {Q} elements, over the budget of {budget}")
    return extend(spec.field, r, bound=max(budget, Q))


def _grid(kr: FqField, dim: int, budget: int) -> list[np.ndarray]:
    if kr.q**dim > budget:
        raise BudgetError(f"{kr.q}^{dim} base points exceed the budget of {budget}")
    codes = np.arange(kr.q, dtype=np.int64)
    if dim == 1:
        return [codes]
    return [g.ravel() for g in np.meshgrid(*([codes] * dim), indexing="ij")]


def _factors(spec: VarietySpec, kr: FqField, xs: list[np.ndarray], lam: list[int]):
    """(exponent, values) for each factor of f, evaluated at the base points."""
    F = kr
    fam = spec.family
    one_minus = F.vone_minus

    def total(arrs):
        out = arrs[0]
        for a in arrs[1:]:
            out = F.vadd(out, a)
        return out

    if fam in ("CD", "XD"):
        x = xs[0]
        out = [(b, one_minus(F.vscale(l, x))) for b, l in zip(spec.es("b"), lam)]
        return out + [(spec.e("a"), x), (spec.e("c"), one_minus(x))]
    lx = [F.vscale(l, x) for l, x in zip(lam, xs)]
    if fam == "SD":
        out = [(spec.e("a"), one_minus(total(lx)))]
        out += [(b, x) for b, x in zip(spec.es("b"), xs)]
        return out + [(spec.e("c"), one_minus(total(xs)))]
    if fam == "SA":
        out = [(spec.e("a"), one_minus(total(lx)))]
        for b, c, x in zip(spec.es("b"), spec.es("c"), xs):
            out += [(b, x), (c, one_minus(x))]
        return out
    if fam == "SB":
        out = [(a, one_minus(v)) for a, v in zip(spec.es("a"), lx)]
        out += [(b, x) for b, x in zip(spec.es("b"), xs)]
        return out + [(spec.e("c"), one_minus(total(xs)))]
    if fam == "SC":
        out = [(c, x) for c, x in zip(spec.es("c"), xs)]
        out.append((spec.e("a"), one_minus(total(xs))))
        prod_all = xs[0]
        for x in xs[1:]:
            prod_all = F.vmul(prod_all, x)
        others = []
        for i, l in enumerate(lam):
            term = np.full(len(xs[0]), l, dtype=np.int64)
            for j, x in enumerate(xs):
                if j != i:
                    term = F.vmul(term, x)
            others.append(term)
        out.append((spec.e("b"), F.vsub(prod_all, total(others))))
        return out
    if fam == "S4":
        d = spec.d
        a, b, c1, c2 = (spec.e(k) for k in ("a", "b", "c1", "c2"))
        u, v = xs
        lu, lv = lx
        out = [
            (a % d, u), (b % d, v),
            ((c1 - a) % d, one_minus(u)), ((c2 - b) % d, one_minus(v)),
            ((a - c1 - c2) % d, one_minus(lu)), ((b - c1 - c2) % d, one_minus(lv)),
            ((c1 + c2 - a - b) % d, one_minus(F.vadd(lu, lv))),
        ]
        # a factor with reduced exponent 0 is absent from the equation
        return [(e, vals) for e, vals in out if e]
    raise VarietyError(fam)


def _f_values(spec: VarietySpec, kr: FqField, xs, lam) -> np.ndarray:
    """f at every base point, by plain field multiplication."""
    out = np.ones(len(xs[0]), dtype=np.int64)
    for e, vals in _factors(spec, kr, xs, lam):
        out = kr.vmul(out, kr.vpow(vals, e))
    return out


def _lam_in(t, lam) -> list[int]:
    return [int(t.forward[l]) for l in lam]


# -- brute force ------------------------------------------------------------------


def brute_count(spec: VarietySpec, r: int = 1, *, budget: int = DEFAULT_BUDGET) -> int:
    """#V(k_r): affine points for the S/C families, the smooth model for XD."""
    t = _ext(spec, r, budget)
    kr = t.ext
    xs = _grid(kr, spec.dim, budget)
    f = _f_values(spec, kr, xs, _lam_in(t, spec.lam))
    powers = kr.vpow(np.arange(kr.q, dtype=np.int64), spec.d)
    roots = np.bincount(powers, minlength=kr.q)
    count = int(roots[f].sum())
    if spec.family == "XD":
        count += 1
    return count


# -- the three routes -------------------------------------------------------------


def _affine_trivial(spec: VarietySpec, r: int) -> CycloNumber:
    q = spec.field.q
    if spec.family == "XD":
        return CycloNumber.rational(1 + q**r, spec.d)
    return CycloNumber.rational(q ** (spec.dim * r), spec.d)


@lru_cache(maxsize=32)
def _twisted_roots(p: int, f: int, r: int, d: int, bound: int):
    """For each xi in mu_d, a histogram over k_r of y^d for the y with y^(Q-1) = xi.

    y runs over the working extension k_{rd}, which holds mu_{d(Q-1)}.
    """
    from .finite_field import make_field

    k = make_field(p, f)
    t_r = extend(k, r, bound=bound)
    kr = t_r.ext
    t_w = extend(kr, d, bound=bound)
    W = t_w.ext
    Q = kr.q
    step = (k.q - 1) // d
    xi = [int(t_w.forward[t_r.forward[k.exp(i * step)]]) for i in range(d)]
    ys = W.antilog
    frob = W.vpow(ys, Q - 1)
    powers = W.vpow(ys, d)
    tables = []
    for code in xi:
        sel = frob == code
        down = t_w.backward[powers[sel]]
        if np.any(down < 0):
            raise AssertionError("y^d left k_r for a twisted fixed point")
        tables.append(np.bincount(down, minlength=Q))
    return tables


def chi_fixed_point(spec: VarietySpec, m: int, r: int = 1, *, budget: int = DEFAULT_BUDGET) -> ChiCount:
    """(1/d) sum over xi of chi^m(xi) #{(x, y): x in k_r, y^d = f(x), y^(q^r) = xi y}."""
    d = spec.d
    m %= d
    t = _ext(spec, r, budget)
    kr = t.ext
    if kr.q**d > budget:
        raise BudgetError(f"working extension of size {kr.q}^{d} exceeds the budget of {budget}")
    xs = _grid(kr, spec.dim, budget)
    f = _f_values(spec, kr, xs, _lam_in(t, spec.lam))
    zeros = int(np.count_nonzero(f == 0))
    tables = _twisted_roots(spec.field.p, spec.field.f, r, d, max(budget, kr.q**d))
    counts = np.zeros(d, dtype=np.int64)
    for i, table in enumerate(tables):
        # y = 0 is a fixed point for every xi when f(x) = 0
        counts[(m * i) % d] += int(table[f].sum()) + zeros
    value = CycloNumber.from_exponent_counts(d, counts) / d
    if spec.family == "XD" and m == 0:
        value = value + 1
    return ChiCount(m, r, value, "fixed_point")


def chi_char_sum(spec: VarietySpec, m: int, r: int = 1, *, budget: int = DEFAULT_BUDGET) -> ChiCount:
    """sum over base points of phi_{d,r}^m(f(x)), with phi_{d,r} = phi_d o N."""
    d = spec.d
    m %= d
    if m == 0:
        return ChiCount(0, r, _affine_trivial(spec, r), "char_sum")
    t = _ext(spec, r, budget)
    kr = t.ext
    n = kr.q - 1
    chi = norm_pullback(char_of_exact_order(spec.field, d) ** m, t)
    xs = _grid(kr, spec.dim, budget)
    mask = np.ones(len(xs[0]), dtype=bool)
    logs = np.zeros(len(xs[0]), dtype=np.int64)
    for e, vals in _factors(spec, kr, xs, _lam_in(t, spec.lam)):
        mask &= vals != 0
        logs = (logs + e * kr.log[vals]) % n
    exps = (chi.exponent * logs[mask]) % n
    step = n // d
    if np.any(exps % step):
        raise AssertionError("pulled-back character does not have order dividing d")
    value = CycloNumber.from_exponent_counts(d, np.bincount(exps // step, minlength=d))
    return ChiCount(m, r, value, "char_sum")


def hypothesis_violations(spec: VarietySpec) -> list[str]:
    """The gcd conditions of the family's closed form that fail for this instance."""
    d = spec.d
    fam = spec.family

    def need(name, value):
        return [] if math.gcd(d, value) == 1 else [f"gcd(d, {name}) = {math.gcd(d, value)}"]

    out: list[str] = []
    if fam in ("CD", "XD"):
        out += need("c", spec.e("c"))
        for i, b in enumerate(spec.es("b"), 1):
            out += need(f"b{i}", b)
    elif fam in ("SD", "SA", "SC"):
        out += need("a", spec.e("a"))
        if fam == "SD":
            out += need("c", spec.e("c"))
        elif fam == "SA":
            for i, c in enumerate(spec.es("c"), 1):
                out += need(f"c{i}", c)
        else:
            out += need("b", spec.e("b"))
    elif fam == "SB":
        out += need("c", spec.e("c"))
        for i, a in enumerate(spec.es("a"), 1):
            out += need(f"a{i}", a)
    elif fam == "S4":
        a, b, c1, c2 = (spec.e(k) for k in ("a", "b", "c1", "c2"))
        out += need("a", a) + need("b", b)
        out += need("c1-a", c1 - a) + need("c2-a", c2 - a) + need("c1-b", c1 - b) + need("c2-b", c2 - b)
    return out


def _s4_notes(spec: VarietySpec) -> None:
    a, b, c1, c2 = (spec.e(k) for k in ("a", "b", "c1", "c2"))
    if (c1 + c2 - a - b) % spec.d == 0:
        log.warning("S4 instance with d | c1+c2-a-b: the last factor drops out of the equation")
    F = spec.field
    if F.add(*spec.lam) == 1:
        log.warning("S4 instance with lambda_1 + lambda_2 = 1")


@dataclass(frozen=True)
class FormulaParts:
    """Pieces of the closed form for one (m, r):
    count = sign * jacobi**r * hyp + sum(e**r for e in extra).

    ``jacobi`` and ``extra`` are constants over k (their r-th powers are the
    constants over k_r); ``hyp`` is the hypergeometric value over k_r.
    """

    sign: int
    jacobi: CycloNumber
    hyp: CycloNumber
    extra: tuple = ()

    def count(self, r: int) -> CycloNumber:
        value = self.jacobi**r * self.hyp * self.sign
        for e in self.extra:
            value = value + e**r
        return value


def formula_parts(
    spec: VarietySpec, m: int, r: int = 1, *, twist: int = 1, uncorrected: bool = False, budget: int = DEFAULT_BUDGET
) -> FormulaParts:
    """Closed-form pieces for m != 0. SA, SB and SC carry the sign (-1)^n of
    their integral formulas; ``uncorrected`` leaves it out."""
    d = spec.d
    m %= d
    if m == 0:
        raise VarietyError("the closed form is for m != 0")
    bad = hypothesis_violations(spec)
    if bad:
        raise HypothesisError(f"{spec.family}: closed form needs {'; '.join(bad)} to be 1")
    k = spec.field
    t = _ext(spec, r, budget)
    kr = t.ext
    base_step = m * ((k.q - 1) // d)

    def lift(e: int) -> int:
        return norm_pullback(MultChar(k, e * base_step), t).exponent

    def jac(*es) -> CycloNumber:
        return jacobi_direct(*(MultChar(k, e * base_step) for e in es))

    lam = _lam_in(t, spec.lam)
    fam = spec.family
    n = spec.n
    if fam in ("CD", "XD"):
        a, c, bs = spec.e("a"), spec.e("c"), spec.es("b")
        params = LauricellaParams.make(kr, "D", lift(a), [lift(-b) for b in bs], lift(a + c))
        return FormulaParts(-1, jac(a, c), lauricella(params, lam, twist=twist))
    if fam == "SD":
        a, c, bs = spec.e("a"), spec.e("c"), spec.es("b")
        params = LauricellaParams.make(kr, "D", lift(-a), [lift(b) for b in bs], lift(sum(bs) + c))
        return FormulaParts((-1) ** n, jac(*bs, c), lauricella(params, lam, twist=twist))
    sign = euler_sign(n, uncorrected=uncorrected)
    if fam == "SA":
        a, bs, cs = spec.e("a"), spec.es("b"), spec.es("c")
        const = CycloNumber.rational(1)
        for b, c in zip(bs, cs):
            const = const * jac(b, c)
        params = LauricellaParams.make(kr, "A", lift(-a), [lift(b) for b in bs], [lift(b + c) for b, c in zip(bs, cs)])
        return FormulaParts(sign, const, lauricella(params, lam, twist=twist))
    if fam == "SB":
        as_, bs, c = spec.es("a"), spec.es("b"), spec.e("c")
        params = LauricellaParams.make(kr, "B", [lift(-a) for a in as_], [lift(b) for b in bs], lift(sum(bs) + c))
        return FormulaParts(sign, jac(*bs, c), lauricella(params, lam, twist=twist))
    if fam == "SC":
        a, b, cs = spec.e("a"), spec.e("b"), spec.es("c")
        params = LauricellaParams.make(
            kr, "C", lift(-(a + n * b + sum(cs))), lift(-b), [lift(-(b + c)) for c in cs]
        )
        return FormulaParts(sign, jac(a, *(b + c for c in cs)), lauricella(params, lam, twist=twist))
    if fam == "S4":
        _s4_notes(spec)
        a, b, c1, c2 = (spec.e(x) for x in ("a", "b", "c1", "c2"))
        K = f4_constants(k, a * base_step, b * base_step, c1 * base_step, c2 * base_step, *spec.lam, twist)
        l1, l2 = lam
        x = kr.mul(l1, kr.sub(1, l2))
        y = kr.mul(l2, kr.sub(1, l1))
        f4 = appell(4, kr, lift(a), lift(b), [lift(c1), lift(c2)], x, y, twist=twist)
        return FormulaParts(1, K.J, f4, (K.S0, K.S1, K.S2))
    raise VarietyError(fam)


def chi_formula(
    spec: VarietySpec, m: int, r: int = 1, *, twist: int = 1, uncorrected: bool = False, budget: int = DEFAULT_BUDGET
) -> ChiCount:
    """The closed form over k_r: Jacobi constants from k raised to the r-th power
    times a Lauricella (or Appell F_4) value over k_r, plus the S4 constants."""
    m %= spec.d
    if m == 0:
        return ChiCount(0, r, _affine_trivial(spec, r), "formula")
    value = formula_parts(spec, m, r, twist=twist, uncorrected=uncorrected, budget=budget).count(r)
    down = value.restrict(spec.d)
    return ChiCount(m, r, down if down is not None else value, "formula")


ROUTES = {
    "fixed": chi_fixed_point,
    "charsum": chi_char_sum,
    "formula": chi_formula,
}


def chi_count(spec: VarietySpec, m: int, r: int = 1, route: str = "charsum", **kw) -> ChiCount:
    try:
        fn = ROUTES[route]
    except KeyError:
        raise VarietyError(f"unknown route {route!r}; choose from {', '.join(ROUTES)}") from None
    return fn(spec, m, r, **kw)


def chi_table(spec: VarietySpec, r: int = 1, route: str = "charsum", **kw) -> list[ChiCount]:
    return [chi_count(spec, m, r, route, **kw) for m in range(spec.d)]
