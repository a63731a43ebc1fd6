"""Candidate DD-bimodule of a two-component L-space link on a finite window.

Generators live in four idempotent pairs:

* (0,0): the generators of the staircase C_s resolving the homology row s1 = s;
* (1,0): T^k times the generators of the staircase of the second component;
* (0,1): one generator y_k per k;
* (1,1): one generator T^k e per k.

Everything is first built on a slightly larger index range and then cut down
to the window.  A kept generator that lost an arrow in the cut is flagged
``truncated``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .dd_calculus import Generator, Module, check_structure, check_u_equivariance
from .koszul_algebra import parse_word
from .staircase import (HFunction, Staircase, StaircaseMap, identity_map, solve_chain_map,
                        solve_homotopy, staircase_from_h_row, u_map)
from .surgery_algebra import GradingVector


class SolverFailure(RuntimeError):
    pass


class StructureFailure(RuntimeError):
    def __init__(self, message: str, residual: list[str]):
        super().__init__(message)
        self.residual = residual


class UnstableWindow(ValueError):
    pass


def fmt(s) -> str:
    s = Fraction(s)
    return str(s.numerator) if s.denominator == 1 else f"{s.numerator}/{s.denominator}"


@dataclass(frozen=True)
class LinkData:
    h: HFunction
    window: tuple[Fraction, Fraction]

    @property
    def lk(self) -> int:
        return self.h.lk

    @property
    def half(self) -> Fraction:
        return Fraction(self.lk, 2)

    def columns(self) -> list[Fraction]:
        return self.h.s1_values(*self.window)

    def k_range(self) -> list[int]:
        """T-indices kept in idempotents (1,0), (0,1) and (1,1)."""
        lo = self.window[0] - abs(self.half)
        hi = self.window[1] + abs(self.half)
        return list(range(int(lo), int(hi) + 1))

    def validate(self):
        lo, hi = Fraction(self.window[0]), Fraction(self.window[1])
        if lo > hi:
            raise UnstableWindow("empty window")
        cols = self.h.s1_values(lo, hi)
        outside = [s for s in self.h.s1_values(self.h.s1_min - 1, self.h.s1_max + 1)
                   if s < lo or s > hi]
        for s in [cols[0], cols[-1]] + outside:
            if staircase_from_h_row(self.h, s).size != 1:
                raise UnstableWindow(f"column s1={fmt(s)} is not a single generator; widen the window")


class _Builder:
    def __init__(self, link: LinkData):
        self.link = link
        self.h = link.h
        self.half = link.half
        self.cols = link.columns()
        self.kept_k = link.k_range()
        pad = 1 + abs(link.lk)
        self.all_k = list(range(self.kept_k[0] - pad, self.kept_k[-1] + pad + 1))
        self.ext_cols = [self.cols[0] - 1] + self.cols + [self.cols[-1] + 1]
        self.C = {s: staircase_from_h_row(self.h, s) for s in self.ext_cols}
        self.S = self.h.hk2.staircase()
        self.gens: dict[str, Generator] = {}
        self.kept: set[str] = set()
        self.terms: list = []

    # names

    def xname(self, s, j) -> str:
        if self.C[s].size == 1:
            return f"x_{{{fmt(s)}}}"
        return f"x_{{{fmt(s)}}}^{{{j}}}"

    def sname(self, k, j) -> str:
        if self.S.size == 1:
            return f"T^{{{k}}}x'"
        return f"T^{{{k}}}x'_{{{j}}}"

    @staticmethod
    def yname(k) -> str:
        return f"y_{{{k}}}"

    @staticmethod
    def ename(k) -> str:
        return f"T^{{{k}}}e"

    # helpers

    def add_gen(self, name, idem, grading, keep):
        self.gens[name] = Generator(name, idem, grading)
        if keep:
            self.kept.add(name)

    def arrow(self, src, tgt, left: str, right, left_idem=None):
        self.terms.append((src, tgt, parse_word(left, left_idem), right))

    def map_arrows(self, f: StaircaseMap, sname, tname, left: str, left_idem=None):
        for i, j, (p, q) in f.items():
            self.arrow(sname(i), tname(j), left, ("00", p, q), left_idem)

    # blocks

    def idem00(self):
        for s in self.ext_cols:
            c = self.C[s]
            keep = s in self.cols
            for j in range(c.size):
                self.add_gen(self.xname(s, j), (0, 0), c.gradings[j], keep)
        for s in self.cols:
            c = self.C[s]
            xs = lambda j, s=s: self.xname(s, j)
            for i in range(c.size):
                self.arrow(xs(i), xs(i), "θ", ("00", 1, 1), 0)
                for j, (p, q) in c.differential(i):
                    self.arrow(xs(i), xs(j), "1", ("00", p, q), 0)
            lz = self.solve(c, self.C[s + 1], (0, -2), "L_z", s)
            lw = self.solve(c, self.C[s - 1], (-2, 0), "L_w", s)
            self.map_arrows(lz, xs, lambda j, s=s: self.xname(s + 1, j), "z")
            self.map_arrows(lw, xs, lambda j, s=s: self.xname(s - 1, j), "w")
            back_w = self.solve(self.C[s + 1], c, (-2, 0), "L_w", s + 1)
            back_z = self.solve(self.C[s - 1], c, (0, -2), "L_z", s - 1)
            lzw = self.homotopy(lz.then(back_w) + u_map(c), "L_zw", s)
            lwz = self.homotopy(lw.then(back_z) + u_map(c), "L_wz", s)
            self.map_arrows(lzw, xs, xs, "zw")
            self.map_arrows(lwz, xs, xs, "wz")

    def solve(self, a, b, shift, what, s) -> StaircaseMap:
        f = solve_chain_map(a, b, shift, require_nonzero_on_homology=True)
        if f is None:
            raise SolverFailure(f"no {what} on column s1={fmt(s)}")
        return f

    def homotopy(self, rhs: StaircaseMap, what, s) -> StaircaseMap:
        h = solve_homotopy(rhs.source, rhs.target, rhs, None, even_to_odd=True)
        if h is None:
            raise SolverFailure(f"no {what} on column s1={fmt(s)}")
        return h

    def idem10(self):
        S = self.S
        for k in self.all_k:
            for j in range(S.size):
                g = S.gradings[j]
                grad = GradingVector.of(g.gr_w, g.gr_z, k, g.A2)
                self.add_gen(self.sname(k, j), (1, 0), grad, k in self.kept_k)
        for k in self.kept_k:
            for i in range(S.size):
                me = self.sname(k, i)
                self.arrow(me, me, "θ", ("00", 1, 1), 1)
                for j, (p, q) in S.differential(i):
                    self.arrow(me, self.sname(k, j), "1", ("00", p, q), 1)
                self.arrow(me, self.sname(k + 1, i), "φ+", ("00", 0, 0))
                self.arrow(me, self.sname(k - 1, i), "φ-", ("00", 0, 0))

    def idem01(self):
        hk1 = self.h.hk1
        for k in self.all_k:
            v = hk1(k)
            self.add_gen(self.yname(k), (0, 1), GradingVector.of(-2 * v, -2 * v - 2 * k, k, 0),
                         k in self.kept_k)
        for k in self.kept_k:
            me = self.yname(k)
            self.arrow(me, me, "θ", ("11", 1, 0), 0)
            self.arrow(me, self.yname(k + 1), "z", ("11", self.h.eta(k), 0))
            self.arrow(me, self.yname(k - 1), "w", ("11", 1 - self.h.eta(k - 1), 0))

    def idem11(self):
        for k in self.all_k:
            self.add_gen(self.ename(k), (1, 1), GradingVector.of(a1=k, a2=0, gr=0), k in self.kept_k)
        for k in self.kept_k:
            me = self.ename(k)
            self.arrow(me, me, "θ", ("11", 1, 0), 1)
            self.arrow(me, self.ename(k + 1), "φ+", ("11", 0, 0))
            self.arrow(me, self.ename(k - 1), "φ-", ("11", 0, 0))

    def to_10(self):
        """Maps C_s -> T^k S weighted by s, t, zs and wt."""
        half = self.half

        def l_s(s):
            return self.solve(self.C[s], self.S, (0, int(2 * s + self.link.lk)), "L_s", s)

        def l_t(s):
            return self.solve(self.C[s], self.S, (int(self.link.lk - 2 * s), 0), "L_t", s)

        for s in self.cols:
            c = self.C[s]
            xs = lambda j, s=s: self.xname(s, j)
            k = int(s - half)
            ls, lt = l_s(s), l_t(s)
            self.map_arrows(ls, xs, lambda j, k=k: self.sname(k, j), "s")
            self.map_arrows(lt, xs, lambda j, k=k: self.sname(k, j), "t")
            lz = self.solve(c, self.C[s + 1], (0, -2), "L_z", s)
            lw = self.solve(c, self.C[s - 1], (-2, 0), "L_w", s)
            rhs_zs = lz.then(l_s(s + 1)) + _retarget(ls, lz.then(l_s(s + 1)).shift)
            rhs_wt = lw.then(l_t(s - 1)) + _retarget(lt, lw.then(l_t(s - 1)).shift)
            lzs = self.homotopy(rhs_zs, "L_zs", s)
            lwt = self.homotopy(rhs_wt, "L_wt", s)
            self.map_arrows(lzs, xs, lambda j, k=k: self.sname(k + 1, j), "zs")
            self.map_arrows(lwt, xs, lambda j, k=k: self.sname(k - 1, j), "wt")

    def to_01(self):
        """R^sigma and R^tau: even generators of C_s to y with sigma/tau coefficients."""
        half, hk1 = self.half, self.h.hk1
        for s in self.cols:
            c = self.C[s]
            for j in range(0, c.size, 2):
                g = c.gradings[j]
                a, b = -g.gr_w // 2, -g.gr_z // 2
                s2 = Fraction(b - a) - s
                kd, ku = int(s - half), int(s + half)
                pd = a - hk1(kd)
                pu = int(a + s2 - hk1(ku) - half)
                if pd < 0 or pu < 0:
                    raise SolverFailure(f"negative U-power in the maps to y on column s1={fmt(s)}")
                m = int(s2 - half)
                self.arrow(self.xname(s, j), self.yname(kd), "1", ("s", pd, m), 0)
                self.arrow(self.xname(s, j), self.yname(ku), "1", ("t", pu, m), 0)

    def psi(self):
        """T^k S -> T^k e and T^(k+lk) e through the two projections of the second component."""
        S, lk = self.S, self.link.lk
        for k in self.kept_k:
            for j in range(0, S.size, 2):
                a, b = S.even_monomial(j)
                self.arrow(self.sname(k, j), self.ename(k), "1", ("s", a, b - a), 1)
                self.arrow(self.sname(k, j), self.ename(k + lk), "1", ("t", b, b - a), 1)

    def y_to_e(self):
        hk1, lk = self.h.hk1, self.link.lk
        for k in self.kept_k:
            v = hk1(k)
            self.arrow(self.yname(k), self.ename(k), "s", ("11", v, 0))
            self.arrow(self.yname(k), self.ename(k), "t", ("11", v + k, lk))

    def finish(self) -> Module:
        kept = self.kept
        truncated = set()
        terms: set = set()
        for t in self.terms:
            if t[0] not in kept:
                continue
            if t[1] not in kept:
                truncated.add(t[0])
                continue
            terms ^= {t}
        gens = tuple(Generator(g.name, g.idem, g.grading, g.name in truncated)
                     for n, g in self.gens.items() if n in kept)
        return Module(gens, frozenset(terms))


def _retarget(f: StaircaseMap, shift) -> StaircaseMap:
    if f.shift != tuple(shift):
        raise SolverFailure("degree mismatch while assembling a homotopy equation")
    return f


def build_bimodule(h: HFunction, window=None, check: bool = True) -> Module:
    """Build, cut to ``window`` (defaults to the table's s1 range) and verify."""
    if window is None:
        window = (h.s1_min, h.s1_max)
    link = LinkData(h, (Fraction(window[0]), Fraction(window[1])))
    link.validate()
    b = _Builder(link)
    b.idem00()
    b.idem10()
    b.idem01()
    b.idem11()
    b.to_10()
    b.to_01()
    b.psi()
    b.y_to_e()
    m = b.finish()
    if check:
        rep = check_structure(m)
        if not rep.ok:
            raise StructureFailure("candidate bimodule fails the structure relation", rep.lines())
        if not check_u_equivariance(m):
            raise StructureFailure("candidate bimodule is not U-equivariant", [])
    return m


def block(m: Module, src_idem, tgt_idem) -> list:
    """Arrows from idempotent pair ``src_idem`` to ``tgt_idem``."""
    idem = {g.name: g.idem for g in m.generators}
    return sorted((t for t in m.terms if idem[t[0]] == tuple(src_idem) and idem[t[1]] == tuple(tgt_idem)),
                  key=lambda t: (t[0], t[1], t[2], t[3]))


def length2_block(m: Module) -> list:
    return block(m, (0, 0), (1, 1))
