"""Multiplicative and additive characters of a finite field.

A multiplicative character is stored by its exponent k, standing for phi^k
where phi(g^j) = zeta_{q-1}^j and g is the field's fixed generator. Every
character, the trivial one included, vanishes at 0.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .cyclotomic import CycloNumber, root_of_unity
from .finite_field import FieldElement, FqField, TowerEmbedding

__all__ = [
    "CharacterError",
    "MultChar",
    "AddChar",
    "eval_mult",
    "eval_add",
    "delta",
    "trivial",
    "char_of_exact_order",
    "norm_pullback",
    "parse_char",
]


class CharacterError(ValueError):
    pass


def _code(x) -> int:
    return x.value if isinstance(x, FieldElement) else int(x)


@dataclass(frozen=True)
class MultChar:
    field: FqField
    exponent: int

    def __post_init__(self):
        object.__setattr__(self, "exponent", self.exponent % (self.field.q - 1))

    @property
    def modulus(self) -> int:
        return self.field.q - 1

    @property
    def is_trivial(self) -> bool:
        return self.exponent == 0

    @property
    def order(self) -> int:
        from math import gcd

        n = self.modulus
        return n // gcd(n, self.exponent)

    def _same(self, other: "MultChar") -> None:
        if other.field is not self.field:
            raise CharacterError("characters of different fields")

    def __mul__(self, other: "MultChar") -> "MultChar":
        self._same(other)
        return MultChar(self.field, self.exponent + other.exponent)

    def __truediv__(self, other: "MultChar") -> "MultChar":
        self._same(other)
        return MultChar(self.field, self.exponent - other.exponent)

    def __pow__(self, k: int) -> "MultChar":
        return MultChar(self.field, self.exponent * k)

    def conj(self) -> "MultChar":
        return MultChar(self.field, -self.exponent)

    __invert__ = conj

    def log_value(self, x) -> int | None:
        """Exponent e with chi(x) = zeta_{q-1}^e, or None at x = 0."""
        c = _code(x)
        if c == 0:
            return None
        return (self.exponent * self.field.dlog(c)) % self.modulus

    def __call__(self, x) -> CycloNumber:
        return eval_mult(self, x)

    def __repr__(self) -> str:
        return f"phi^{self.exponent} (q={self.field.q})"


@dataclass(frozen=True)
class AddChar:
    """psi_t(x) = zeta_p^{Tr(t x)}; twist 1 is the default character."""

    field: FqField
    twist: int = 1

    def __post_init__(self):
        if _code(self.twist) == 0:
            raise CharacterError("the twist of an additive character must be nonzero")
        object.__setattr__(self, "twist", _code(self.twist))

    def log_value(self, x) -> int:
        """Exponent e in Z/p with psi(x) = zeta_p^e."""
        return self.field.trace(self.field.mul(self.twist, _code(x)))

    def __call__(self, x) -> CycloNumber:
        return eval_add(self, x)


def eval_mult(chi: MultChar, x) -> CycloNumber:
    e = chi.log_value(x)
    if e is None:
        return CycloNumber.rational(0)
    return root_of_unity(chi.modulus, e)


def eval_add(psi: AddChar, x) -> CycloNumber:
    return root_of_unity(psi.field.p, psi.log_value(x))


def delta(chi: MultChar) -> int:
    return 1 if chi.is_trivial else 0


def trivial(field: FqField) -> MultChar:
    return MultChar(field, 0)


def char_of_exact_order(field: FqField, d: int) -> MultChar:
    """phi^((q-1)/d), a character of exact order d."""
    n = field.q - 1
    if d < 1 or n % d:
        raise CharacterError(f"{d} does not divide q - 1 = {n}")
    return MultChar(field, n // d)


_PULLBACK_CHECKED: set[tuple[int, int, int]] = set()


def norm_pullback(chi: MultChar, t: TowerEmbedding) -> MultChar:
    """The character x -> chi(N(x)) on the extension field of t."""
    if chi.field is not t.base:
        raise CharacterError("character does not live on the embedding's base field")
    # N(G) = g^s for the extension generator G
    k = chi.exponent * t.norm_of_generator_log * t.index
    lifted = MultChar(t.ext, k)
    key = (t.base.q, t.r, chi.exponent)
    if t.ext.q <= 10_000 and key not in _PULLBACK_CHECKED:
        for x in range(1, t.ext.q):
            if lifted.log_value(x) != (chi.log_value(t.norm(x)) * t.index) % (t.ext.q - 1):
                raise AssertionError("norm pullback disagrees with chi o N")
        _PULLBACK_CHECKED.add(key)
    return lifted


_SUGAR = re.compile(r"^\s*phi_(\d+)(?:\^(-?\d+))?\s*$")


def parse_char(field: FqField, spec) -> MultChar:
    """Read a character from an integer k (phi^k) or the string 'phi_d^m'."""
    if isinstance(spec, MultChar):
        return spec
    if isinstance(spec, int):
        return MultChar(field, spec)
    text = str(spec).strip()
    m = _SUGAR.match(text)
    if m:
        d = int(m.group(1))
        power = int(m.group(2)) if m.group(2) is not None else 1
        return char_of_exact_order(field, d) ** power
    try:
        return MultChar(field, int(text))
    except ValueError:
        raise CharacterError(f"cannot read a character from {spec!r}") from None
