"""The two-idempotent surgery algebra K.

Blocks: I0.K.I0 = F2[W,Z], I1.K.I1 = F2[U,T,T^-1], I1.K.I0 is spanned over the
latter by sigma and tau, and I0.K.I1 = 0.  Monomials are small tuples:

    ("00", i, j)   W^i Z^j
    ("11", k, m)   U^k T^m
    ("s", k, m)    U^k T^m sigma
    ("t", k, m)    U^k T^m tau

Right multiplication of sigma by W^i Z^j gives U^i T^(j-i) sigma, and of tau
gives U^j T^(j-i) tau.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .coefficients import R0Elt, R1Elt, r0_monomial_str, r1_monomial_str

KMon = tuple


class NotMonomial(ValueError):
    pass


def idems_of(mon: KMon) -> tuple[int, int]:
    tag = mon[0]
    if tag == "00":
        return (0, 0)
    if tag == "11":
        return (1, 1)
    return (1, 0)


def u_exponent(mon: KMon) -> int:
    if mon[0] == "00":
        return min(mon[1], mon[2])
    return mon[1]


@lru_cache(maxsize=None)
def kmon_mul(a: KMon, b: KMon) -> KMon | None:
    ta, tb = a[0], b[0]
    if ta == "00" and tb == "00":
        return ("00", a[1] + b[1], a[2] + b[2])
    if ta == "11" and tb == "11":
        return ("11", a[1] + b[1], a[2] + b[2])
    if ta in ("s", "t") and tb == "00":
        i, j = b[1], b[2]
        return (ta, a[1] + (i if ta == "s" else j), a[2] + j - i)
    if ta == "11" and tb in ("s", "t"):
        return (tb, a[1] + b[1], a[2] + b[2])
    return None


def _xor(mons: Iterable) -> frozenset:
    acc: set = set()
    for m in mons:
        if m is not None:
            acc ^= {m}
    return frozenset(acc)


@dataclass(frozen=True)
class KElt:
    mons: frozenset = frozenset()

    @classmethod
    def of(cls, *mons: KMon) -> "KElt":
        return cls(_xor(mons))

    @classmethod
    def from_blocks(cls, r00: R0Elt | None = None, r11: R1Elt | None = None,
                    sigma: R1Elt | None = None, tau: R1Elt | None = None) -> "KElt":
        mons = []
        if r00 is not None:
            mons += [("00", i, j) for i, j in r00.terms]
        if r11 is not None:
            mons += [("11", k, m) for k, m in r11.terms]
        if sigma is not None:
            mons += [("s", k, m) for k, m in sigma.terms]
        if tau is not None:
            mons += [("t", k, m) for k, m in tau.terms]
        return cls(frozenset(mons))

    def _block(self, tag: str):
        pairs = frozenset((m[1], m[2]) for m in self.mons if m[0] == tag)
        return R0Elt(pairs) if tag == "00" else R1Elt(pairs)

    @property
    def r00(self) -> R0Elt:
        return self._block("00")

    @property
    def r11(self) -> R1Elt:
        return self._block("11")

    @property
    def sigma(self) -> R1Elt:
        return self._block("s")

    @property
    def tau(self) -> R1Elt:
        return self._block("t")

    def is_zero(self) -> bool:
        return not self.mons

    def __bool__(self) -> bool:
        return bool(self.mons)

    def __add__(self, other: "KElt") -> "KElt":
        return KElt(self.mons ^ other.mons)

    def __mul__(self, other: "KElt") -> "KElt":
        return k_mul(self, other)

    def truncate(self, prec) -> "KElt":
        if prec is None:
            return self
        n = getattr(prec, "n", prec)
        return KElt(frozenset(m for m in self.mons if u_exponent(m) < n))

    def idempotents(self) -> set[tuple[int, int]]:
        return {idems_of(m) for m in self.mons}

    def sorted_mons(self) -> list[KMon]:
        return sorted(self.mons)

    def to_json(self) -> dict:
        blocks = {idems_of(m) for m in self.mons}
        if len(blocks) > 1:
            return {"sum": [KElt(frozenset(m for m in self.mons if idems_of(m) == b)).to_json()
                            for b in sorted(blocks)]}
        if not blocks or blocks == {(0, 0)}:
            return {"block": "00", "terms": [list(t) for t in self.r00.sorted_terms()]}
        if blocks == {(1, 1)}:
            return {"block": "11", "terms": [list(t) for t in self.r11.sorted_terms()]}
        return {"block": "10", "sigma": [list(t) for t in self.sigma.sorted_terms()],
                "tau": [list(t) for t in self.tau.sorted_terms()]}

    @classmethod
    def from_json(cls, data: dict) -> "KElt":
        if "sum" in data:
            out = cls()
            for part in data["sum"]:
                out = out + cls.from_json(part)
            return out
        block = data["block"]
        if block == "00":
            return cls.from_blocks(r00=R0Elt.of(*(tuple(t) for t in data["terms"])))
        if block == "11":
            return cls.from_blocks(r11=R1Elt.of(*(tuple(t) for t in data["terms"])))
        if block == "10":
            return cls.from_blocks(sigma=R1Elt.of(*(tuple(t) for t in data.get("sigma", []))),
                                   tau=R1Elt.of(*(tuple(t) for t in data.get("tau", []))))
        if block == "01":
            raise ValueError("the (0,1) block of K is zero")
        raise ValueError(f"unknown block {block!r}")

    def __str__(self) -> str:
        if not self.mons:
            return "0"
        return "+".join(kmon_str(m) for m in self.sorted_mons())


def kmon_str(m: KMon) -> str:
    tag = m[0]
    if tag == "00":
        return r0_monomial_str(m[1], m[2])
    body = r1_monomial_str(m[1], m[2])
    if tag == "11":
        return body
    letter = "σ" if tag == "s" else "τ"
    return letter if body == "1" else body + letter


def k_mul(a: KElt, b: KElt) -> KElt:
    return KElt(_xor(kmon_mul(x, y) for x in a.mons for y in b.mons))


def unit(idem: int) -> KMon:
    return ("00", 0, 0) if idem == 0 else ("11", 0, 0)


ONE = KElt.of(unit(0), unit(1))
W = KElt.of(("00", 1, 0))
Z = KElt.of(("00", 0, 1))
U0 = KElt.of(("00", 1, 1))
U1 = KElt.of(("11", 1, 0))
T = KElt.of(("11", 0, 1))
T_INV = KElt.of(("11", 0, -1))
SIGMA = KElt.of(("s", 0, 0))
TAU = KElt.of(("t", 0, 0))


def phi_sigma(a: R0Elt) -> R1Elt:
    return R1Elt.of(*((i, j - i) for i, j in a.terms))


def phi_tau(a: R0Elt) -> R1Elt:
    return R1Elt.of(*((j, j - i) for i, j in a.terms))


def _half(x) -> int:
    d = Fraction(x) * 2
    if d.denominator != 1:
        raise ValueError(f"{x} is not a half-integer")
    return int(d)


@dataclass(frozen=True)
class GradingVector:
    """Gradings stored doubled so that half-integers stay exact.

    ``gw``/``gz`` are the two Maslov gradings, ``a1``/``a2`` the Alexander
    gradings and ``g`` the single Maslov grading used in idempotent 1.
    Missing entries are ``None``.
    """

    gw: int | None = None
    gz: int | None = None
    a1: int | None = None
    a2: int | None = None
    g: int | None = None

    @classmethod
    def of(cls, gr_w=None, gr_z=None, a1=None, a2=None, gr=None) -> "GradingVector":
        conv = lambda v: None if v is None else _half(v)
        return cls(conv(gr_w), conv(gr_z), conv(a1), conv(a2), conv(gr))

    @staticmethod
    def _out(v):
        if v is None:
            return None
        f = Fraction(v, 2)
        return int(f) if f.denominator == 1 else f

    @property
    def gr_w(self):
        return self._out(self.gw)

    @property
    def gr_z(self):
        return self._out(self.gz)

    @property
    def A1(self):
        return self._out(self.a1)

    @property
    def A2(self):
        return self._out(self.a2)

    @property
    def gr(self):
        return self._out(self.g)

    def __add__(self, other: "GradingVector") -> "GradingVector":
        add = lambda x, y: None if x is None or y is None else x + y
        return GradingVector(add(self.gw, other.gw), add(self.gz, other.gz),
                             add(self.a1, other.a1), add(self.a2, other.a2),
                             add(self.g, other.g))

    def as_tuple(self) -> tuple:
        return (self.gr_w, self.gr_z, self.A1, self.A2, self.gr)

    def to_json(self) -> dict:
        names = ("gr_w", "gr_z", "A1", "A2", "gr")
        return {k: str(v) for k, v in zip(names, self.as_tuple()) if v is not None}

    @classmethod
    def from_json(cls, data: dict) -> "GradingVector":
        get = lambda k: Fraction(data[k]) if k in data else None
        return cls.of(get("gr_w"), get("gr_z"), get("A1"), get("A2"), get("gr"))


def grading_of(a) -> GradingVector:
    """Grading of a single monomial of K.

    In idempotent 0 the pair (gr_w, gr_z) is recorded together with
    A = (gr_w - gr_z)/2 in the ``A2`` slot.  Idempotent-1 monomials, and the
    sigma/tau monomials, carry a single Maslov grading ``gr`` (U lowers it by
    two) and the T-exponent as Alexander grading.
    """
    if isinstance(a, KElt):
        if len(a.mons) != 1:
            raise NotMonomial(str(a))
        (a,) = a.mons
    tag = a[0]
    if tag == "00":
        i, j = a[1], a[2]
        return GradingVector.of(gr_w=-2 * i, gr_z=-2 * j, a2=j - i)
    return GradingVector.of(gr=-2 * a[1], a2=a[2])
