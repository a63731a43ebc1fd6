"""Coefficient rings over F2.

``R0Elt`` lives in F2[W, Z] and ``R1Elt`` in F2[U, T, T^-1].  Elements are
frozen sets of exponent tuples; addition is symmetric difference, so the
characteristic-two law ``a + a = 0`` is structural.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable


class NotAUnit(ValueError):
    """Raised when a ring element has no inverse in the U-adic completion."""


def _xor_all(pairs: Iterable[tuple[int, int]]) -> frozenset:
    acc: set = set()
    for p in pairs:
        acc ^= {p}
    return frozenset(acc)


def _sup(n: int) -> str:
    return "" if n == 1 else f"^{n}"


@dataclass(frozen=True)
class UPrecision:
    """Terms whose U-exponent is at least ``n`` are discarded."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("U-precision must be at least 1")


def _prec(prec) -> int | None:
    if prec is None:
        return None
    return prec.n if isinstance(prec, UPrecision) else int(prec)


@dataclass(frozen=True)
class R0Elt:
    """Polynomial in W, Z.  The term (i, j) is W^i Z^j."""

    terms: frozenset = frozenset()

    def __post_init__(self):
        for i, j in self.terms:
            if i < 0 or j < 0:
                raise ValueError("negative exponent in F2[W,Z]")

    @classmethod
    def of(cls, *terms: tuple[int, int]) -> "R0Elt":
        return cls(_xor_all(tuple(t) for t in terms))

    @classmethod
    def one(cls) -> "R0Elt":
        return cls(frozenset({(0, 0)}))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: "R0Elt") -> "R0Elt":
        return R0Elt(self.terms ^ other.terms)

    def __mul__(self, other: "R0Elt") -> "R0Elt":
        return R0Elt(_xor_all((a + c, b + d) for a, b in self.terms for c, d in other.terms))

    def __pow__(self, n: int) -> "R0Elt":
        out = R0Elt.one()
        for _ in range(n):
            out = out * self
        return out

    def truncate(self, prec) -> "R0Elt":
        n = _prec(prec)
        if n is None:
            return self
        return R0Elt(frozenset(t for t in self.terms if min(t) < n))

    def sorted_terms(self) -> list[tuple[int, int]]:
        return sorted(self.terms)

    def to_json(self) -> dict:
        return {"ring": "R0", "terms": [list(t) for t in self.sorted_terms()]}

    @classmethod
    def from_json(cls, data: dict) -> "R0Elt":
        if data.get("ring") != "R0":
            raise ValueError("expected an R0 element")
        return cls.of(*(tuple(t) for t in data["terms"]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return "+".join(r0_monomial_str(i, j) for i, j in self.sorted_terms())


def r0_monomial_str(i: int, j: int) -> str:
    u = min(i, j)
    s = ("U" + _sup(u)) if u else ""
    if i > u:
        s += "W" + _sup(i - u)
    if j > u:
        s += "Z" + _sup(j - u)
    return s or "1"


@dataclass(frozen=True)
class R1Elt:
    """Laurent polynomial in T with polynomial U.  The term (k, m) is U^k T^m."""

    terms: frozenset = frozenset()

    def __post_init__(self):
        for k, _ in self.terms:
            if k < 0:
                raise ValueError("negative U exponent")

    @classmethod
    def of(cls, *terms: tuple[int, int]) -> "R1Elt":
        return cls(_xor_all(tuple(t) for t in terms))

    @classmethod
    def one(cls) -> "R1Elt":
        return cls(frozenset({(0, 0)}))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: "R1Elt") -> "R1Elt":
        return R1Elt(self.terms ^ other.terms)

    def __mul__(self, other: "R1Elt") -> "R1Elt":
        return R1Elt(_xor_all((a + c, b + d) for a, b in self.terms for c, d in other.terms))

    def __pow__(self, n: int) -> "R1Elt":
        out = R1Elt.one()
        for _ in range(n):
            out = out * self
        return out

    def truncate(self, prec) -> "R1Elt":
        n = _prec(prec)
        if n is None:
            return self
        return R1Elt(frozenset(t for t in self.terms if t[0] < n))

    def sorted_terms(self) -> list[tuple[int, int]]:
        return sorted(self.terms)

    def to_json(self) -> dict:
        return {"ring": "R1", "terms": [list(t) for t in self.sorted_terms()]}

    @classmethod
    def from_json(cls, data: dict) -> "R1Elt":
        if data.get("ring") != "R1":
            raise ValueError("expected an R1 element")
        return cls.of(*(tuple(t) for t in data["terms"]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return "+".join(r1_monomial_str(k, m) for k, m in self.sorted_terms())


def r1_monomial_str(k: int, m: int) -> str:
    s = ("U" + _sup(k)) if k else ""
    if m:
        s += "T" + _sup(m)
    return s or "1"


def ring_mul(a, b):
    if type(a) is not type(b):
        raise TypeError("ring_mul needs two elements of the same ring")
    return a * b


def _geometric(eps, one, n: int | None):
    # (1 + eps)^-1 = sum eps^k, each eps^k carries U-adic valuation >= k
    if eps.is_zero():
        return one
    if n is None:
        raise NotAUnit("inverting a non-monomial unit needs a U-precision")
    out, power = one, one
    for _ in range(n):
        power = (power * eps).truncate(n)
        if power.is_zero():
            break
        out = out + power
    return out.truncate(n)


def invert_unit(a, prec):
    """Inverse of a unit modulo U^N.

    An ``R1Elt`` unit has the form T^m (1 + eps); an ``R0Elt`` unit has the
    form 1 + eps.  In both cases every term of eps is divisible by U.
    """
    n = _prec(prec)
    if isinstance(a, R1Elt):
        const = [t for t in a.terms if t[0] == 0]
        if len(const) != 1:
            raise NotAUnit(str(a))
        m = const[0][1]
        shifted = R1Elt(frozenset((k, e - m) for k, e in a.terms))
        eps = shifted + R1Elt.one()
        inv = _geometric(eps, R1Elt.one(), n)
        return R1Elt(frozenset((k, e - m) for k, e in inv.terms))
    if isinstance(a, R0Elt):
        if (0, 0) not in a.terms or any(min(t) == 0 for t in a.terms if t != (0, 0)):
            raise NotAUnit(str(a))
        return _geometric(a + R0Elt.one(), R0Elt.one(), n)
    raise TypeError(type(a).__name__)
