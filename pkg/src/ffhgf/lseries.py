"""Zeta functions and Artin L-functions from point counts.

Series are truncated power series with exact CycloNumber coefficients. The
L-function of a family member is exp(sum N_r t^r / r) over the chosen count
route; ``l_from_theorem`` assembles the same series from the closed forms
(Jacobi constant to the r-th power times a hypergeometric value over k_r).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import mpmath

from .cyclotomic import CycloNumber
from .varieties import (
    DEFAULT_BUDGET,
    VarietySpec,
    brute_count,
    chi_count,
    formula_parts,
)

__all__ = [
    "TruncSeries",
    "LPolynomial",
    "WeilReport",
    "exp_series",
    "artin_l",
    "zeta_series",
    "count_table",
    "detect_polynomial",
    "weil_check",
    "l_from_theorem",
    "default_order",
    "dual_symmetry",
]

log = logging.getLogger(__name__)


def _num(x, order: int = 1) -> CycloNumber:
    return x if isinstance(x, CycloNumber) else CycloNumber.rational(x, order)


class TruncSeries:
    """c_0 + c_1 t + ... + c_R t^R, everything above t^R unknown."""

    def __init__(self, coeffs: Sequence, order: int = 1):
        if not coeffs:
            raise ValueError("a series needs at least the constant term")
        self.coeffs = [_num(c, order) for c in coeffs]

    @property
    def R(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def one(cls, R: int) -> "TruncSeries":
        return cls([1] + [0] * R)

    @classmethod
    def from_poly(cls, coeffs: Sequence, R: int) -> "TruncSeries":
        coeffs = list(coeffs)[: R + 1]
        return cls(coeffs + [0] * (R + 1 - len(coeffs)))

    def __getitem__(self, k: int) -> CycloNumber:
        return self.coeffs[k]

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        R = min(self.R, other.R)
        out = []
        for n in range(R + 1):
            acc = self.coeffs[0] * other.coeffs[n]
            for k in range(1, n + 1):
                acc = acc + self.coeffs[k] * other.coeffs[n - k]
            out.append(acc)
        return TruncSeries(out)

    def inverse(self) -> "TruncSeries":
        c0 = self.coeffs[0]
        if c0.is_zero():
            raise ZeroDivisionError("constant term is zero")
        inv0 = c0.inverse()
        out = [inv0]
        for n in range(1, self.R + 1):
            acc = CycloNumber.rational(0)
            for k in range(1, n + 1):
                acc = acc + self.coeffs[k] * out[n - k]
            out.append(-acc * inv0)
        return TruncSeries(out)

    def __pow__(self, k: int) -> "TruncSeries":
        base = self if k >= 0 else self.inverse()
        out = TruncSeries.one(self.R)
        for _ in range(abs(k)):
            out = out * base
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncSeries):
            return NotImplemented
        R = min(self.R, other.R)
        return all(self.coeffs[k] == other.coeffs[k] for k in range(R + 1))

    __hash__ = None

    def __repr__(self) -> str:
        return f"TruncSeries(R={self.R}, {[str(c) for c in self.coeffs]})"

    def to_json(self) -> dict:
        return {"R": self.R, "coeffs": [c.to_json() for c in self.coeffs]}


def exp_series(n_values: Sequence) -> TruncSeries:
    """exp(sum_{r>=1} N_r t^r / r) through t^R, R = len(n_values).

    Uses n c_n = sum_{k=1}^n N_k c_{n-k}, which is exact over Q(zeta).
    """
    if not n_values:
        raise ValueError("need at least N_1")
    N = [_num(v) for v in n_values]
    c = [CycloNumber.rational(1)]
    for n in range(1, len(N) + 1):
        acc = CycloNumber.rational(0)
        for k in range(1, n + 1):
            acc = acc + N[k - 1] * c[n - k]
        c.append(acc / n)
    return TruncSeries(c)


def default_order(spec: VarietySpec) -> int:
    """Truncation 2(n+1) + 2, enough guard terms past the expected degree."""
    return 2 * (spec.n + 1) + 2


def count_table(spec: VarietySpec, m: int, R: int, route: str = "charsum", **kw) -> list[CycloNumber]:
    return [chi_count(spec, m, r, route, **kw).value for r in range(1, R + 1)]


def artin_l(spec: VarietySpec, m: int, R: int, route: str = "charsum", **kw) -> TruncSeries:
    """L(V, chi^m; t) through t^R from the counts of the chosen route."""
    return exp_series(count_table(spec, m, R, route, **kw))


def zeta_series(spec: VarietySpec, R: int, *, budget: int = DEFAULT_BUDGET) -> TruncSeries:
    """Z(V, t) through t^R from brute-force point counts."""
    return exp_series([brute_count(spec, r, budget=budget) for r in range(1, R + 1)])


def _geometric(a, R: int) -> TruncSeries:
    """1 / (1 - a t)."""
    a = _num(a)
    out = [CycloNumber.rational(1)]
    for _ in range(R):
        out.append(out[-1] * a)
    return TruncSeries(out)


def l_from_theorem(
    spec: VarietySpec, m: int, R: int, *, twist: int = 1, uncorrected: bool = False, budget: int = DEFAULT_BUDGET
) -> TruncSeries:
    """The L-function assembled as the closed-form corollaries state it.

    m = 0: 1/(1 - q^n t) for the affine families, 1/((1 - t)(1 - q t)) for XD.
    m != 0: E = exp(sum C^r f_r t^r / r) with C the Jacobi constant over k and
    f_r the hypergeometric value over k_r, raised to the sign of the count
    formula (-1 for CD/XD, (-1)^n otherwise). For S4 the series is multiplied
    by prod_i (1 - S_i t)^-1, the exact inverse of the naive factor
    prod_i (1 - S_i t), which ``uncorrected`` uses instead. ``uncorrected`` also
    drops the (-1)^n exponent for SA, SB and SC.
    """
    m %= spec.d
    q = spec.field.q
    if m == 0:
        if spec.family == "XD":
            return _geometric(1, R) * _geometric(q, R)
        return _geometric(q**spec.dim, R)
    parts = [formula_parts(spec, m, r, twist=twist, uncorrected=uncorrected, budget=budget) for r in range(1, R + 1)]
    inner = exp_series([p.jacobi**r * p.hyp for r, p in enumerate(parts, 1)])
    sign = parts[0].sign
    out = inner if sign == 1 else inner.inverse()
    for s in parts[0].extra:
        factor = TruncSeries.from_poly([1, -s], R)
        out = out * (factor if uncorrected else factor.inverse())
    return out


@dataclass
class LPolynomial:
    coeffs: list
    meta: dict

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def reciprocal_roots(self, dps: int = 50) -> list:
        """alpha_i with L(t) = prod (1 - alpha_i t), found numerically."""
        if self.degree == 0:
            return []
        with mpmath.workdps(dps):
            # t^deg L(1/t) has coefficients c_0, ..., c_deg from the top down
            poly = [c.complex_value(dps) for c in self.coeffs]
            return list(mpmath.polyroots(poly, maxsteps=200, extraprec=2 * dps))

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "coeffs": [c.to_json() for c in self.coeffs],
            "complex": [[complex(c).real, complex(c).imag] for c in self.coeffs],
            **self.meta,
        }


def detect_polynomial(s: TruncSeries, max_deg: int, meta: dict | None = None) -> LPolynomial | None:
    """The polynomial of degree <= max_deg that s equals, if every coefficient
    from t^(max_deg+1) through t^R vanishes; demands three guard terms."""
    if s.R < max_deg + 3:
        raise ValueError(f"need R >= max_deg + 3 = {max_deg + 3}, have R = {s.R}")
    if any(not c.is_zero() for c in s.coeffs[max_deg + 1 :]):
        return None
    deg = max_deg
    while deg > 0 and s.coeffs[deg].is_zero():
        deg -= 1
    return LPolynomial(list(s.coeffs[: deg + 1]), dict(meta or {}))


@dataclass
class WeilReport:
    ok: bool
    target: float
    roots: list
    moduli: list
    error: str | None = None

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "target_modulus": self.target,
            "reciprocal_roots": [[float(z.real), float(z.imag)] for z in self.roots],
            "moduli": [float(x) for x in self.moduli],
            "error": self.error,
        }


def weil_check(poly: LPolynomial, q: int, w: int, tol: float = 1e-9) -> WeilReport:
    """Every reciprocal root has absolute value q^(w/2) within tol."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    target = mpmath.sqrt(mpmath.mpf(q) ** w)
    try:
        roots = poly.reciprocal_roots()
    except mpmath.libmp.NoConvergence as exc:
        return WeilReport(False, float(target), [], [], f"root finding did not converge: {exc}")
    moduli = [abs(z) for z in roots]
    ok = all(abs(m - target) < tol for m in moduli)
    return WeilReport(ok, float(target), roots, moduli)


def dual_symmetry(poly: LPolynomial, q: int, w: int) -> bool:
    """Whether c_(N-k) q^(w k) = c_N conj(c_k) for every k, checked exactly.

    This is what pairing each reciprocal root a with q^w / a = conj(a) forces.
    It is only observed and logged, never required.
    """
    N = poly.degree
    top = poly.coeffs[N]
    ok = all(poly.coeffs[N - k] * q ** (w * k) == top * poly.coeffs[k].conjugate() for k in range(N + 1))
    log.info("L-polynomial of degree %d %s the dual coefficient pattern", N, "shows" if ok else "does not show")
    return ok
