"""Staircase complexes over F2[W,Z], their maps, and homotopies between maps.

A staircase has generators x0..x2n.  Even generators are cycles and each odd
generator satisfies d(x_{2i+1}) = x_{2i} W^a_i + x_{2i+2} Z^b_i.  Every entry of
a homogeneous map between staircases is a single monomial fixed by gradings,
so maps reduce to F2 matrices and the chain-map and homotopy problems become
linear systems.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import gf2
from .surgery_algebra import GradingVector


class MalformedH(ValueError):
    pass


class NonpositiveExponent(ValueError):
    pass


def _half(x) -> Fraction:
    f = Fraction(x)
    if (2 * f).denominator != 1:
        raise MalformedH(f"{x} is not a half-integer")
    return f


def _int(x: Fraction) -> int:
    if Fraction(x).denominator != 1:
        raise MalformedH(f"expected an integer, got {x}")
    return int(x)


# ---------------------------------------------------------------- staircases


@dataclass(frozen=True)
class Staircase:
    alphas: tuple[int, ...]
    betas: tuple[int, ...]
    gradings: tuple[GradingVector, ...]
    # W-exponent of x_0 and Z-exponent of the last generator in the ideal
    base: tuple[int, int] = (0, 0)

    def __post_init__(self):
        if len(self.alphas) != len(self.betas):
            raise ValueError("alphas and betas differ in length")
        if any(a <= 0 for a in self.alphas + self.betas):
            raise NonpositiveExponent("staircase exponents must be positive")
        if len(self.gradings) != 2 * len(self.alphas) + 1:
            raise ValueError("need one grading per generator")

    @property
    def n(self) -> int:
        return len(self.alphas)

    @property
    def size(self) -> int:
        return 2 * self.n + 1

    def algebraic_grading(self, i: int) -> int:
        return i % 2

    def differential(self, i: int) -> list[tuple[int, tuple[int, int]]]:
        """Targets of d(x_i) with their (W, Z) exponents."""
        if i % 2 == 0:
            return []
        k = i // 2
        return [(i - 1, (self.alphas[k], 0)), (i + 1, (0, self.betas[k]))]

    def even_monomial(self, i: int) -> tuple[int, int]:
        """Ideal generator W^a Z^b that the even generator x_i maps to."""
        k = i // 2
        return (self.base[0] + sum(self.alphas[:k]), self.base[1] + sum(self.betas[k:]))

    def d_squared_zero(self) -> bool:
        # d maps odd generators to cycles, so d∘d vanishes identically;
        # the check confirms the gradings are compatible with d.
        for i in range(1, self.size, 2):
            for j, (p, q) in self.differential(i):
                gi, gj = self.gradings[i], self.gradings[j]
                if (gj.gr_w - 2 * p, gj.gr_z - 2 * q) != (gi.gr_w - 1, gi.gr_z - 1):
                    return False
        return True

    def to_json(self) -> dict:
        return {"alphas": list(self.alphas), "betas": list(self.betas),
                "base": list(self.base), "gradings": [g.to_json() for g in self.gradings]}

    def to_dot(self, name: str = "staircase") -> str:
        lines = [f"digraph {name} {{"]
        for i in range(self.size):
            lines.append(f'  x{i} [label="x{i}"];')
        for i in range(1, self.size, 2):
            for j, (p, q) in self.differential(i):
                lines.append(f'  x{i} -> x{j} [label="{_wz(p, q)}"];')
        lines.append("}")
        return "\n".join(lines)


def _wz(p: int, q: int) -> str:
    out = ""
    if p:
        out += "W" if p == 1 else f"W^{p}"
    if q:
        out += "Z" if q == 1 else f"Z^{q}"
    return out or "1"


def staircase_from_exponents(alphas, betas, anchor: GradingVector | None = None) -> Staircase:
    alphas, betas = tuple(int(a) for a in alphas), tuple(int(b) for b in betas)
    if any(a <= 0 for a in alphas + betas):
        raise NonpositiveExponent("staircase exponents must be positive")
    if anchor is None:
        anchor = GradingVector.of(0, 0)
    grads = [anchor]
    g = anchor
    for a, b in zip(alphas, betas):
        odd = g + GradingVector.of(-2 * a + 1, 1, 0, -a if g.a2 is not None else None)
        nxt = g + GradingVector.of(-2 * a, 2 * b, 0, -a - b if g.a2 is not None else None)
        grads += [odd, nxt]
        g = nxt
    return Staircase(alphas, betas, tuple(grads))


def minimal_generators(points) -> list[tuple[int, int]]:
    """Minimal generators of the monomial ideal spanned by ``points``, sorted by W-exponent."""
    pts = sorted(set(points))
    out: list[tuple[int, int]] = []
    for a, b in pts:
        if not out or b < out[-1][1]:
            out.append((a, b))
    return out


@dataclass(frozen=True)
class MonomialIdealModule:
    generators: tuple[tuple[int, int], ...]

    def __post_init__(self):
        g = self.generators
        for (a0, b0), (a1, b1) in zip(g, g[1:]):
            if not (a0 < a1 and b0 > b1):
                raise ValueError("generators must be minimal and sorted by W-exponent")

    @classmethod
    def from_points(cls, points) -> "MonomialIdealModule":
        return cls(tuple(minimal_generators(points)))

    def contains(self, a: int, b: int) -> bool:
        return any(a >= x and b >= y for x, y in self.generators)

    def resolution(self, s1=None, offset: Fraction = Fraction(0)) -> Staircase:
        """Two-step free resolution.

        When ``s1`` is given, the Alexander gradings of the generator for (a,b)
        are A1 = s1 and A2 = b - a - s1 + offset.
        """
        gens = self.generators
        alphas = tuple(a1 - a0 for (a0, _), (a1, _) in zip(gens, gens[1:]))
        betas = tuple(b0 - b1 for (_, b0), (_, b1) in zip(gens, gens[1:]))
        grads = []

        def gv(a, b, odd):
            e = 1 if odd else 0
            if s1 is None:
                return GradingVector.of(-2 * a + e, -2 * b + e, None, b - a)
            return GradingVector.of(-2 * a + e, -2 * b + e, s1, b - a - s1 + offset)

        for k, (a, b) in enumerate(gens):
            grads.append(gv(a, b, False))
            if k + 1 < len(gens):
                grads.append(gv(gens[k + 1][0], b, True))
        return Staircase(alphas, betas, tuple(grads), (gens[0][0], gens[-1][1]))


# ---------------------------------------------------------------- H-functions


@dataclass(frozen=True)
class KnotH:
    """Eventually stable H-function of a knot: values on [lo, hi], +1 per step left of lo."""

    lo: int
    values: tuple[int, ...]

    @property
    def hi(self) -> int:
        return self.lo + len(self.values) - 1

    def __call__(self, s) -> int:
        s = _int(Fraction(s))
        if s < self.lo:
            return self.values[0] + (self.lo - s)
        if s > self.hi:
            return self.values[-1]
        return self.values[s - self.lo]

    def validate(self):
        if not self.values:
            raise MalformedH("empty knot H-function")
        if self.values[-1] != 0:
            raise MalformedH("knot H-function must stabilize at 0")
        for x, y in zip(self.values, self.values[1:]):
            if x - y not in (0, 1):
                raise MalformedH("knot H-function violates the one-step property")

    @classmethod
    def from_json(cls, d: dict) -> "KnotH":
        if "s_range" not in d or "values" not in d:
            raise MalformedH("knot H-function needs s_range and values")
        lo, hi = d["s_range"]
        vals = tuple(int(v) for v in d["values"])
        if hi - lo + 1 != len(vals):
            raise MalformedH("s_range does not match number of values")
        k = cls(int(lo), vals)
        k.validate()
        return k

    def to_json(self) -> dict:
        return {"s_range": [self.lo, self.hi], "values": list(self.values)}

    @classmethod
    def unknot(cls) -> "KnotH":
        return cls(0, (0,))

    def staircase(self) -> Staircase:
        lo, hi = self.lo - 1, self.hi + 1
        pts = [(self(s), self(s) + s) for s in range(lo, hi + 1)]
        return MonomialIdealModule.from_points(pts).resolution()


@dataclass(frozen=True)
class HFunction:
    """Two-component link H-function.

    ``table[k][j]`` is H(s1_min + j, s2_min + k).  Outside the table H is
    constant moving right or up and grows by one per step moving left or down.
    """

    lk: int
    s1_min: Fraction
    s2_min: Fraction
    table: tuple[tuple[int, ...], ...]
    hk1: KnotH
    hk2: KnotH

    @property
    def s1_max(self) -> Fraction:
        return self.s1_min + len(self.table[0]) - 1

    @property
    def s2_max(self) -> Fraction:
        return self.s2_min + len(self.table) - 1

    def __call__(self, s1, s2) -> int:
        s1, s2 = Fraction(s1), Fraction(s2)
        c1 = min(max(s1, self.s1_min), self.s1_max)
        c2 = min(max(s2, self.s2_min), self.s2_max)
        base = self.table[_int(c2 - self.s2_min)][_int(c1 - self.s1_min)]
        return base + _int(max(0, self.s1_min - s1)) + _int(max(0, self.s2_min - s2))

    def s1_values(self, lo, hi) -> list[Fraction]:
        lo, hi = Fraction(lo), Fraction(hi)
        shift = Fraction(self.lk, 2) % 1
        start = lo if (lo - shift) % 1 == 0 else None
        if start is None:
            raise MalformedH(f"{lo} does not lie in Z + lk/2")
        out = []
        s = start
        while s <= hi:
            out.append(s)
            s += 1
        return out

    def validate(self):
        rows = self.table
        if not rows or not rows[0] or any(len(r) != len(rows[0]) for r in rows):
            raise MalformedH("table must be a non-empty rectangle")
        shift = Fraction(self.lk, 2)
        if (self.s1_min - shift) % 1 or (self.s2_min - shift) % 1:
            raise MalformedH("table ranges must lie in Z + lk/2")
        for r in rows:
            for v in r:
                if v < 0:
                    raise MalformedH("H must be nonnegative")
        for k, r in enumerate(rows):
            for j, v in enumerate(r):
                if j + 1 < len(r) and v - r[j + 1] not in (0, 1):
                    raise MalformedH(f"one-step property fails in s1 at row {k}, column {j}")
                if k + 1 < len(rows) and v - rows[k + 1][j] not in (0, 1):
                    raise MalformedH(f"one-step property fails in s2 at row {k}, column {j}")
        half = Fraction(self.lk, 2)
        for j in range(len(rows[0])):
            s1 = self.s1_min + j
            if rows[-1][j] != self.hk1(s1 - half):
                raise MalformedH("top row of the table disagrees with the first component")
        for k in range(len(rows)):
            s2 = self.s2_min + k
            if rows[k][-1] != self.hk2(s2 - half):
                raise MalformedH("right column of the table disagrees with the second component")

    @classmethod
    def from_json(cls, d: dict) -> "HFunction":
        try:
            lk = int(d["lk"])
            s1_lo, s1_hi = (_half(x) for x in d["s1_range"])
            s2_lo, s2_hi = (_half(x) for x in d["s2_range"])
            table = tuple(tuple(int(v) for v in row) for row in d["table"])
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedH(f"bad H-function data: {exc}") from exc
        if len(table) != s2_hi - s2_lo + 1 or any(len(r) != s1_hi - s1_lo + 1 for r in table):
            raise MalformedH("table shape does not match the ranges")
        half = Fraction(lk, 2)
        if "HK1" in d:
            hk1 = KnotH.from_json(d["HK1"])
        else:
            lo = _int(s1_lo - half)
            hk1 = KnotH(lo, tuple(table[-1]))
        if "HK2" in d:
            hk2 = KnotH.from_json(d["HK2"])
        else:
            lo = _int(s2_lo - half)
            hk2 = KnotH(lo, tuple(r[-1] for r in table))
        h = cls(lk, s1_lo, s2_lo, table, hk1, hk2)
        h.validate()
        return h

    @classmethod
    def load(cls, path) -> "HFunction":
        return cls.from_json(json.loads(Path(path).read_text()))

    def to_json(self) -> dict:
        def num(x):
            return int(x) if x.denominator == 1 else float(x)
        return {"lk": self.lk,
                "s1_range": [num(self.s1_min), num(self.s1_max)],
                "s2_range": [num(self.s2_min), num(self.s2_max)],
                "table": [list(r) for r in self.table],
                "HK1": self.hk1.to_json(), "HK2": self.hk2.to_json()}

    def eta(self, s) -> int:
        return self.hk1(s) - self.hk1(Fraction(s) + 1)


def staircase_from_h_row(h: HFunction, s1) -> Staircase:
    s1 = Fraction(s1)
    lo, hi = h.s2_min - 1, h.s2_max + 1
    pts = []
    s2 = lo
    while s2 <= hi:
        v = h(s1, s2)
        pts.append((v, _int(v + s1 + s2)))
        s2 += 1
    return MonomialIdealModule.from_points(pts).resolution(s1=s1)


def staircase_from_knot_h(k: KnotH) -> Staircase:
    return k.staircase()


# ---------------------------------------------------------------- maps


@dataclass(frozen=True)
class StaircaseMap:
    """An F2[W,Z]-linear map between staircases shifting (gr_w, gr_z) by ``shift``.

    ``entries`` holds pairs (i, j) meaning x_i maps to y_j times the monomial
    forced by gradings.
    """

    source: Staircase
    target: Staircase
    shift: tuple[int, int]
    entries: frozenset = field(default_factory=frozenset)

    def monomial(self, i: int, j: int) -> tuple[int, int] | None:
        return entry_monomial(self.source, self.target, self.shift, i, j)

    def __add__(self, other: "StaircaseMap") -> "StaircaseMap":
        if self.shift != other.shift:
            raise ValueError("cannot add maps of different degree")
        return StaircaseMap(self.source, self.target, self.shift, self.entries ^ other.entries)

    def then(self, other: "StaircaseMap") -> "StaircaseMap":
        """Composite: apply self first, then other."""
        out: set = set()
        for i, j in self.entries:
            for jj, k in other.entries:
                if jj == j:
                    out ^= {(i, k)}
        shift = (self.shift[0] + other.shift[0], self.shift[1] + other.shift[1])
        return StaircaseMap(self.source, other.target, shift, frozenset(out))

    def is_zero(self) -> bool:
        return not self.entries

    def is_chain_map(self) -> bool:
        return not _boundary(self.source, self.target, self.entries)

    def induces_nonzero(self) -> bool:
        return sum(1 for i, j in self.entries if i == 0 and j % 2 == 0) % 2 == 1

    def items(self):
        for i, j in sorted(self.entries):
            yield i, j, self.monomial(i, j)


def entry_monomial(a: Staircase, b: Staircase, shift, i: int, j: int):
    gx, gy = a.gradings[i], b.gradings[j]
    pw = gy.gr_w - gx.gr_w - shift[0]
    pz = gy.gr_z - gx.gr_z - shift[1]
    if pw < 0 or pz < 0 or pw % 2 or pz % 2:
        return None
    return (pw // 2, pz // 2)


def identity_map(a: Staircase) -> StaircaseMap:
    return StaircaseMap(a, a, (0, 0), frozenset((i, i) for i in range(a.size)))


def u_map(a: Staircase) -> StaircaseMap:
    """Multiplication by U = WZ."""
    return StaircaseMap(a, a, (-2, -2), frozenset((i, i) for i in range(a.size)))


def zero_map(a: Staircase, b: Staircase, shift) -> StaircaseMap:
    return StaircaseMap(a, b, tuple(shift), frozenset())


def _incoming(a: Staircase) -> dict[int, list[int]]:
    inc: dict[int, list[int]] = {i: [] for i in range(a.size)}
    for i in range(1, a.size, 2):
        for j, _ in a.differential(i):
            inc[j].append(i)
    return inc


def _boundary(a: Staircase, b: Staircase, entries) -> set:
    """Support of f∘d_A + d_B∘f for a map with the given entries."""
    inc = _incoming(a)
    out: set = set()
    for i, j in entries:
        for k, _ in b.differential(j):
            out ^= {(i, k)}
        for ip in inc[i]:
            out ^= {(ip, j)}
    return out


def _unknowns(a, b, shift, even_to_odd=False, order="default"):
    unk = []
    for i in range(a.size):
        for j in range(b.size):
            if even_to_odd and not (i % 2 == 0 and j % 2 == 1):
                continue
            m = entry_monomial(a, b, shift, i, j)
            if m is not None:
                unk.append((i, j, m))
    dw, dz = shift
    if dz < dw:
        var = 1
    elif dw < dz:
        var = 0
    else:
        var = None

    def key(u):
        i, j, m = u
        return (i, -(m[var] if var is not None else 0), j)

    unk.sort(key=key)
    if order == "reversed":
        unk.reverse()
    return [(i, j) for i, j, _ in unk]


def _system(a, b, unknowns, rhs: set, extra=()):
    index: dict = {}
    cols: list[set] = []
    for u in unknowns:
        cols.append(_boundary(a, b, [u]))
    eqs = set(rhs)
    for c in cols:
        eqs |= c
    rows = []
    n = len(unknowns)
    for e in sorted(eqs):
        index[e] = len(rows)
        r = 0
        for v, c in enumerate(cols):
            if e in c:
                r |= 1 << v
        if e in rhs:
            r |= 1 << n
        rows.append(r)
    rows.extend(extra)
    return rows


def _decode(unknowns, bits) -> frozenset:
    return frozenset(u for v, u in enumerate(unknowns) if bits >> v & 1)


def solve_chain_map(a: Staircase, b: Staircase, shift, require_nonzero_on_homology=False,
                    order="default") -> StaircaseMap | None:
    """Least chain map of the given degree, or None.

    Unknowns are ordered by source index, then by descending exponent of the
    variable the shift lowers, then target index; the least solution therefore
    prefers representatives that do not multiply by that variable.
    """
    shift = tuple(shift)
    unk = _unknowns(a, b, shift, order=order)
    n = len(unk)
    extra = []
    if require_nonzero_on_homology:
        r = 0
        for v, (i, j) in enumerate(unk):
            if i == 0 and j % 2 == 0:
                r |= 1 << v
        extra.append(r | 1 << n)
    sol = gf2.solve(_system(a, b, unk, set(), extra), n)
    if sol is None:
        return None
    return StaircaseMap(a, b, shift, _decode(unk, sol))


def chain_map_space(a: Staircase, b: Staircase, shift) -> list[StaircaseMap]:
    shift = tuple(shift)
    unk = _unknowns(a, b, shift)
    basis = gf2.nullspace(_system(a, b, unk, set()), len(unk))
    return [StaircaseMap(a, b, shift, _decode(unk, v)) for v in basis]


def solve_homotopy(a: Staircase, b: Staircase, f: StaircaseMap, g: StaircaseMap | None = None,
                   even_to_odd=False, order="default") -> StaircaseMap | None:
    """Find h with h∘d_A + d_B∘h = f + g, raising the degree by (1, 1)."""
    target = f if g is None else f + g
    shift = (target.shift[0] + 1, target.shift[1] + 1)
    unk = _unknowns(a, b, shift, even_to_odd=even_to_odd, order=order)
    sol = gf2.solve(_system(a, b, unk, set(target.entries)), len(unk))
    if sol is None:
        return None
    return StaircaseMap(a, b, shift, _decode(unk, sol))


def solve_null_homotopy(f: StaircaseMap, even_to_odd=False) -> StaircaseMap | None:
    return solve_homotopy(f.source, f.target, f, None, even_to_odd=even_to_odd)


# ---------------------------------------------------------------- homology


def module_rank(gens, p: int, q: int) -> int:
    """Dimension of the degree W^p Z^q part of a free module with generators at ``gens``."""
    return sum(1 for a, b in gens if a <= p and b <= q)


def resolution_is_exact(s: Staircase, bound: int) -> bool:
    """Check 0 -> C1 -> C0 -> ideal -> 0 is exact in every bidegree up to ``bound``.

    Bidegrees are measured in the monomial coordinates of the even generators;
    an odd generator sits at the lcm of its neighbours.
    """
    evens = [s.even_monomial(i) for i in range(0, s.size, 2)]
    odds = [(evens[k + 1][0], evens[k][1]) for k in range(s.n)]
    ideal = MonomialIdealModule(tuple(evens))
    for p in range(bound + 1):
        for q in range(bound + 1):
            c0 = module_rank(evens, p, q)
            c1 = module_rank(odds, p, q)
            rows = []
            for k, (a, b) in enumerate(odds):
                if a <= p and b <= q:
                    r = 0
                    for j in (k, k + 1):
                        if evens[j][0] <= p and evens[j][1] <= q:
                            r |= 1 << j
                    rows.append(r)
            rk = gf2.rank(rows, len(evens))
            h = 1 if ideal.contains(p, q) else 0
            # injective d and cokernel of rank h
            if rk != c1 or c0 - rk != h:
                return False
    return True


def homology_h_row(s: Staircase, s1, s2_values) -> dict:
    """Read back H(s1, s2) from the homology: least a with W^a Z^(a+s1+s2) in the ideal."""
    ideal = MonomialIdealModule(tuple(s.even_monomial(i) for i in range(0, s.size, 2)))
    out = {}
    for s2 in s2_values:
        a = 0
        while not ideal.contains(a, _int(a + Fraction(s1) + Fraction(s2))):
            a += 1
            if a > 10_000:
                raise MalformedH("homology read-off did not terminate")
        out[s2] = a
    return out
