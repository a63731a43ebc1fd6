"""The Koszul dual K! as a curved dg-algebra over F2.

A monomial is ``(left, right, letters, theta)``.  Letters are drawn from
``w z s t p m`` where ``p`` and ``m`` stand for phi+ and phi-.  The theta flag
records the central element theta (theta^2 = 0).  Normal forms:

* (0,0): alternating word in w, z
* (1,1): alternating word in p, m
* (0,1): one of s, zs, t, wt
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

DMon = tuple

_LETTER_OUT = {"w": "w", "z": "z", "s": "s", "t": "t", "p": "φ+", "m": "φ-"}
_TOKEN = re.compile(r"φ\+|φ-|φ₊|φ₋|[wzstpmθ1]")
_TOKEN_IN = {"φ+": "p", "φ₊": "p", "φ-": "m", "φ₋": "m"}


class ArityUnsupported(ValueError):
    pass


def _alternating(word: str) -> bool:
    return all(a != b for a, b in zip(word, word[1:]))


@lru_cache(maxsize=None)
def normal_form(left: int, right: int, letters: str, theta: bool) -> DMon | None:
    """Rewrite to the basis, or return None for zero."""
    if (left, right) == (1, 0):
        return None
    if (left, right) == (0, 0):
        if set(letters) - {"w", "z"} or not _alternating(letters):
            return None
        return (0, 0, letters, theta)
    if (left, right) == (1, 1):
        if set(letters) - {"p", "m"} or not _alternating(letters):
            return None
        return (1, 1, letters, theta)
    idx = [i for i, c in enumerate(letters) if c in "st"]
    if len(idx) != 1:
        return None
    k = idx[0]
    u, x, v = letters[:k], letters[k], letters[k + 1:]
    if set(u) - {"w", "z"} or set(v) - {"p", "m"}:
        return None
    if not _alternating(u) or not _alternating(v):
        return None
    # s.phi+ = z.s, s.phi- = 0, t.phi- = w.t, t.phi+ = 0
    for c in v:
        if x == "s" and c == "p":
            u += "z"
        elif x == "t" and c == "m":
            u += "w"
        else:
            return None
    allowed = "z" if x == "s" else "w"
    if u not in ("", allowed):
        return None
    return (0, 1, u + x, theta)


@lru_cache(maxsize=None)
def dmon_mul(a: DMon, b: DMon) -> DMon | None:
    if a[1] != b[0] or (a[3] and b[3]):
        return None
    return normal_form(a[0], b[1], a[2] + b[2], a[3] or b[3])


def wt(mon: DMon) -> int:
    return len(mon[2]) + (1 if mon[3] else 0)


def wt_theta(mon: DMon) -> int:
    return 1 if mon[3] else 0


def wt_plus(mon: DMon) -> int:
    return wt(mon) + wt_theta(mon)


@dataclass(frozen=True)
class WeightData:
    wt: int
    wt_theta: int

    @property
    def wt_plus(self) -> int:
        return self.wt + self.wt_theta

    @classmethod
    def of(cls, mon: DMon) -> "WeightData":
        return cls(wt(mon), wt_theta(mon))


def unit(idem: int) -> DMon:
    return (idem, idem, "", False)


def dmon_str(mon: DMon) -> str:
    body = "".join(_LETTER_OUT[c] for c in mon[2]) + ("θ" if mon[3] else "")
    return body or "1"


def parse_word(text: str, idem: int | None = None) -> DMon:
    """Parse a word such as ``"zwθ"``, ``"φ+φ-"`` or ``"1"``.

    Idempotents are read off from the letters; words made only of ``1`` and
    ``θ`` need ``idem``.
    """
    tokens = _TOKEN.findall(text)
    if "".join(tokens) != text:
        raise ValueError(f"cannot parse word {text!r}")
    letters = "".join(_TOKEN_IN.get(t, t) for t in tokens if t not in ("θ", "1"))
    theta = tokens.count("θ")
    if theta > 1:
        raise ValueError("θ^2 = 0")
    if any(c in "st" for c in letters):
        left, right = 0, 1
    elif any(c in "pm" for c in letters):
        left = right = 1
    elif letters:
        left = right = 0
    else:
        left = right = 0 if idem is None else idem
    mon = normal_form(left, right, letters, bool(theta))
    if mon is None:
        raise ValueError(f"word {text!r} is zero in K!")
    return mon


def _xor(mons: Iterable) -> frozenset:
    acc: set = set()
    for m in mons:
        if m is not None:
            acc ^= {m}
    return frozenset(acc)


@dataclass(frozen=True)
class KDualElt:
    """F2-sum of normal-form words, optionally truncated above a weight cap."""

    mons: frozenset = frozenset()
    cap: int | None = None

    def __post_init__(self):
        if self.cap is not None and any(wt(m) > self.cap for m in self.mons):
            object.__setattr__(self, "mons", frozenset(m for m in self.mons if wt(m) <= self.cap))

    @classmethod
    def of(cls, *mons: DMon, cap: int | None = None) -> "KDualElt":
        return cls(_xor(mons), cap)

    @classmethod
    def word(cls, text: str, idem: int | None = None) -> "KDualElt":
        return cls.of(parse_word(text, idem))

    def _cap_with(self, other: "KDualElt"):
        caps = [c for c in (self.cap, other.cap) if c is not None]
        return min(caps) if caps else None

    def __add__(self, other: "KDualElt") -> "KDualElt":
        return KDualElt(self.mons ^ other.mons, self._cap_with(other))

    def __mul__(self, other: "KDualElt") -> "KDualElt":
        return kdual_mul(self, other)

    def __bool__(self) -> bool:
        return bool(self.mons)

    def is_zero(self) -> bool:
        return not self.mons

    def __str__(self) -> str:
        if not self.mons:
            return "0"
        return "+".join(dmon_str(m) for m in sorted(self.mons))


def kdual_mul(a: KDualElt, b: KDualElt) -> KDualElt:
    return KDualElt(_xor(dmon_mul(x, y) for x in a.mons for y in b.mons), a._cap_with(b))


@lru_cache(maxsize=None)
def mu1_mon(mon: DMon) -> frozenset:
    """Differential on a basis word: mu1(theta) = wz + zw, Leibniz elsewhere."""
    left, right, letters, theta = mon
    if (left, right) != (0, 0) or not theta:
        return frozenset()
    return _xor(normal_form(0, 0, letters + tail, False) for tail in ("wz", "zw"))


def mu1(a: KDualElt) -> KDualElt:
    acc: set = set()
    for m in a.mons:
        acc ^= mu1_mon(m)
    return KDualElt(frozenset(acc), a.cap)


def mu0_mons(idem: int) -> frozenset:
    if idem != 1:
        return frozenset()
    return frozenset({(1, 1, "mp", False), (1, 1, "pm", False)})


def mu0(idem: int) -> KDualElt:
    return KDualElt(mu0_mons(idem))


def all_monomials(max_weight: int, blocks: Sequence[tuple[int, int]] = ((0, 0), (0, 1), (1, 1))):
    """Every basis word of weight at most ``max_weight`` in the given blocks."""
    out = []
    for block in blocks:
        for theta in (False, True):
            budget = max_weight - (1 if theta else 0)
            if budget < 0:
                continue
            if block == (0, 1):
                words = [w for w in ("s", "zs", "t", "wt") if len(w) <= budget]
            else:
                a, b = ("w", "z") if block == (0, 0) else ("p", "m")
                words = [""]
                for n in range(1, budget + 1):
                    for first, second in ((a, b), (b, a)):
                        words.append("".join(first if k % 2 == 0 else second for k in range(n)))
            out += [(block[0], block[1], w, theta) for w in words]
    return out


# --- completion bridge -------------------------------------------------------

def prime(mon: DMon) -> DMon:
    """Drop the last two non-theta letters, keeping the theta flag."""
    if mon[0:2] != (0, 0) or len(mon[2]) < 2:
        raise ValueError("prime needs an idempotent-(0,0) word with two letters")
    return (0, 0, mon[2][:-2], mon[3])


@lru_cache(maxsize=None)
def phi1_mon(n_cap: int, mon: DMon) -> DMon | None:
    if mon[0:2] == (0, 0) and wt_plus(mon) > n_cap:
        return None
    return mon


@lru_cache(maxsize=None)
def phi2_mon(n_cap: int, a: DMon, b: DMon) -> DMon | None:
    if a[0:2] != (0, 0) or b[0:2] != (0, 0):
        return None
    ab = dmon_mul(a, b)
    if ab is None or ab[3]:
        return None
    if wt_plus(ab) > n_cap and wt_plus(a) <= n_cap and wt_plus(b) <= n_cap:
        p = prime(ab)
        return (0, 0, p[2], True)
    return None


def bridge_phi(n_cap: int, inputs: Sequence[KDualElt]) -> KDualElt:
    if len(inputs) == 1:
        return KDualElt(_xor(phi1_mon(n_cap, m) for m in inputs[0].mons))
    if len(inputs) == 2:
        return KDualElt(_xor(phi2_mon(n_cap, x, y) for x in inputs[0].mons for y in inputs[1].mons))
    raise ArityUnsupported(f"the bridge has components of arity 1 and 2 only, got {len(inputs)}")


def _phi(n_cap: int, seq: tuple) -> frozenset:
    """phi applied to a tuple of basis-word sets (sums allowed per slot)."""
    if len(seq) == 1:
        return _xor(phi1_mon(n_cap, m) for m in seq[0])
    if len(seq) == 2:
        return _xor(phi2_mon(n_cap, x, y) for x in seq[0] for y in seq[1])
    return frozenset()


def _mul_sets(x: frozenset, y: frozenset) -> frozenset:
    return _xor(dmon_mul(a, b) for a in x for b in y)


def _mu1_set(x: frozenset) -> frozenset:
    acc: set = set()
    for m in x:
        acc ^= mu1_mon(m)
    return frozenset(acc)


def morphism_relation(n_cap: int, word: Sequence[DMon]) -> frozenset:
    """Left side minus right side of the curved A-infinity morphism relation.

    The target is the dg-algebra K!, the source its completion, so only the
    products mu0, mu1, mu2 appear on either side.
    """
    n = len(word)
    slots = tuple(frozenset({m}) for m in word)
    acc: set = set()
    if n == 0:
        return frozenset()
    # target side: mu1(phi_n) and mu2(phi_i, phi_{n-i})
    acc ^= _mu1_set(_phi(n_cap, slots))
    for i in range(1, n):
        acc ^= _mul_sets(_phi(n_cap, slots[:i]), _phi(n_cap, slots[i:]))
    # source side: mu1 and mu2 inside, plus curvature insertions
    for i in range(n):
        acc ^= _phi(n_cap, slots[:i] + (_mu1_set(slots[i]),) + slots[i + 1:])
    for i in range(n - 1):
        acc ^= _phi(n_cap, slots[:i] + (_mul_sets(slots[i], slots[i + 1]),) + slots[i + 2:])
    for i in range(n + 1):
        idem = word[i][0] if i < n else word[-1][1]
        c = mu0_mons(idem)
        if c:
            acc ^= _phi(n_cap, slots[:i] + (c,) + slots[i:])
    return frozenset(acc)


def _composable(word: Sequence[DMon]) -> bool:
    return all(a[1] == b[0] for a, b in zip(word, word[1:]))


def bimodule_map(n_cap: int, inputs: Sequence[DMon]) -> frozenset:
    """Components of the rank-one bimodule maps f and g (same formula).

    Arity one is the identity; the arity-two piece sends a (0,0) word a with
    wt+(a) > N and no theta to a' theta.
    """
    if len(inputs) == 0:
        raise ArityUnsupported("idempotent-dependent unit component")
    if len(inputs) == 1:
        a = inputs[0]
        if a[0:2] == (0, 0) and not a[3] and wt_plus(a) > n_cap:
            return frozenset({(0, 0, prime(a)[2], True)})
        return frozenset()
    return frozenset()


def _compose_unit(n_cap: int, inputs: Sequence[DMon]) -> frozenset:
    """Arity-(n+1) component of f o g, with g acting first.

    The arity-one components are identities, so the outer splits contribute
    f(inputs) and g(inputs), and the mixed splits contribute products.
    """
    f = g = bimodule_map
    acc = set(f(n_cap, inputs)) ^ set(g(n_cap, inputs))
    for i in range(1, len(inputs)):
        acc ^= _mul_sets(f(n_cap, inputs[i:]), g(n_cap, inputs[:i]))
    return frozenset(acc)


@dataclass
class BridgeReport:
    ok: bool
    checked: int
    counterexample: tuple | None = None
    detail: str = ""


def verify_ainfty_morphism(n_cap: int = 4, max_inputs: int = 3, max_weight: int = 10) -> BridgeReport:
    """Exhaustive check of the bridge relations and of f o g = g o f = id."""
    if n_cap < 4:
        raise ValueError("the bridge needs N >= 4")
    if max_inputs > 4:
        raise ArityUnsupported("desk scale is at most four inputs")
    mons = all_monomials(max_weight)
    by_left: dict[int, list] = {0: [], 1: []}
    for m in mons:
        by_left[m[0]].append(m)
    checked = 0
    if mu0_mons(1) != _xor(phi1_mon(n_cap, m) for m in mu0_mons(1)):
        return BridgeReport(False, 0, (), "curvature not preserved")

    def tuples(k):
        if k == 1:
            for m in mons:
                yield (m,)
            return
        for head in tuples(k - 1):
            for m in by_left[head[-1][1]]:
                yield head + (m,)

    for k in range(1, max_inputs + 1):
        for word in tuples(k):
            checked += 1
            res = morphism_relation(n_cap, word)
            if res:
                return BridgeReport(False, checked, word, "A-infinity relation fails")
    # f o g and g o f; both maps share a formula so one composite covers both
    for k in (1, 2):
        for word in tuples(k):
            checked += 1
            if _compose_unit(n_cap, word):
                return BridgeReport(False, checked, word, "f o g is not the identity")
    return BridgeReport(True, checked)
