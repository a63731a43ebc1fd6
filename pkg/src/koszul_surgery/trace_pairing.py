"""Pairing a type-D module over K with a DD-bimodule over (K!, K).

The bimodule is read as a module with an A-infinity action of K: a sequence
of algebra inputs acts through the bimodule arrows whose left word is the
word of dual letters, taken in the order the inputs are emitted.  Powers of U
are pulled out by U-equivariance, so each input must be U^k times one of
W, Z, U, sigma, tau, T, T^-1.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import replace

from .dd_calculus import Generator, Module, TypeDModule, compose, truncate
from .koszul_algebra import normal_form
from .staircase import Staircase
from .surgery_algebra import KMon, idems_of, kmon_mul, kmon_str, unit

DUAL = {"W": "w", "Z": "z", "U": "θ", "σ": "s", "τ": "t", "T": "p", "T^-1": "m"}


class DepthExceeded(RuntimeError):
    pass


class UnsupportedInput(ValueError):
    pass


class Inconclusive(RuntimeError):
    pass


def _u(k: int, idem: int) -> KMon:
    return ("00", k, k) if idem == 0 else ("11", k, 0)


def split_input(mon: KMon) -> tuple[int, str | None]:
    """Write a K monomial as U^k times a dual-basis letter (None for the unit)."""
    tag, a, b = mon
    if tag == "00":
        k = min(a, b)
        rest = {(0, 0): None, (1, 0): "W", (0, 1): "Z"}.get((a - k, b - k), "?")
    elif tag == "11":
        k = a
        rest = {0: None, 1: "T", -1: "T^-1"}.get(b, "?")
    else:
        k = a
        rest = ("σ" if tag == "s" else "τ") if b == 0 else "?"
    if rest == "?":
        raise UnsupportedInput(f"input {kmon_str(mon)} is not U^k times a single generator")
    if rest is None and k > 0:
        return k - 1, "U"
    return k, rest


def _dual_word(letters: list[str], idem: int):
    body = "".join(DUAL[x] for x in letters if x != "U")
    theta = sum(1 for x in letters if x == "U")
    if theta > 1:
        return None
    if any(c in "st" for c in body):
        left, right = 0, 1
    elif any(c in "pm" for c in body):
        left = right = 1
    else:
        left = right = idem
    if left != idem:
        return None
    return normal_form(left, right, body, bool(theta))


def dual_action(y_mod: Module, inputs: list[KMon], prec: int | None = None) -> list:
    """All (y, y', right) produced by acting with ``inputs`` on the bimodule."""
    u_total, letters = 0, []
    for mon in inputs:
        k, g = split_input(mon)
        u_total += k
        if g is None:
            if len(inputs) != 1:
                return []
            return [(g_.name, g_.name, _u(k, g_.idem[1])) for g_ in y_mod.generators]
        letters.append(g)
    out = []
    idem = {g.name: g.idem for g in y_mod.generators}
    words = {}
    for s, t, l, r in sorted(y_mod.terms, key=lambda t: (t[0], t[1], str(t[2]), t[3])):
        key = idem[s][0]
        if key not in words:
            words[key] = _dual_word(letters, key)
        if l == words[key]:
            rr = kmon_mul(_u(u_total, idems_of(r)[0]), r) if u_total else r
            if prec is None or _uexp(rr) < prec:
                out.append((s, t, rr))
    return out


def _uexp(m: KMon) -> int:
    return min(m[1], m[2]) if m[0] == "00" else m[1]


def _paths(x_mod: Module, depth_cap: int):
    out_arrows = defaultdict(list)
    for s, t, _, r in x_mod.terms:
        out_arrows[s].append((t, r))
    for v in out_arrows.values():
        v.sort()
    for g in x_mod.generators:
        stack = [(g.name, ())]
        while stack:
            end, seq = stack.pop()
            yield g.name, end, seq
            if not out_arrows[end]:
                continue
            if seq and any(split_input(m)[1] is None for m in seq):
                continue
            if len(seq) >= depth_cap:
                raise DepthExceeded(f"paths from {g.name} continue beyond depth {depth_cap}")
            for t, r in out_arrows[end]:
                stack.append((t, seq + (r,)))


def pair(x_mod: Module, y_mod: Module, prec: int | None = None, depth_cap: int = 8) -> Module:
    """Type-D module over K with generators x|y."""
    xs = {g.name: g for g in x_mod.generators}
    by_left = defaultdict(list)
    for g in y_mod.generators:
        by_left[g.idem[0]].append(g)
    gens = []
    for xg in x_mod.generators:
        for yg in by_left[xg.idem[1]]:
            gens.append(Generator(f"{xg.name}|{yg.name}", (None, yg.idem[1]), yg.grading,
                                  xg.truncated or yg.truncated))
    names = {g.name for g in gens}
    acc: set = set()
    cache: dict = {}
    for start, end, seq in _paths(x_mod, depth_cap):
        if seq not in cache:
            cache[seq] = dual_action(y_mod, list(seq), prec)
        for s, t, r in cache[seq]:
            a, b = f"{start}|{s}", f"{end}|{t}"
            if a in names and b in names:
                acc ^= {(a, b, None, r)}
    return TypeDModule(gens, acc)


# ---------------------------------------------------------------- surgery modules


def knot_surgery_module(s: Staircase, prefix: str = "x", e_name: str = "e") -> Module:
    """Zero-framed surgery module of an L-space knot from its staircase."""
    gens = [Generator(f"{prefix}{i}", (None, 0), s.gradings[i]) for i in range(s.size)]
    gens.append(Generator(e_name, (None, 1)))
    terms = set()
    for i in range(s.size):
        for j, (p, q) in s.differential(i):
            terms.add((f"{prefix}{i}", f"{prefix}{j}", None, ("00", p, q)))
        if i % 2 == 0:
            a, b = s.even_monomial(i)
            terms.add((f"{prefix}{i}", e_name, None, ("s", a, b - a)))
            terms.add((f"{prefix}{i}", e_name, None, ("t", b, b - a)))
    return TypeDModule(gens, terms)


def direct_sum(*mods: Module) -> Module:
    gens, terms = [], set()
    for m in mods:
        gens.extend(m.generators)
        terms |= m.terms
    return Module(tuple(gens), frozenset(terms), mods[0].two_sided if mods else False)


# ---------------------------------------------------------------- isomorphism


def _blocks(m: Module) -> dict:
    out = defaultdict(list)
    for g in m.generators:
        out[g.idem].append(g.name)
    return {k: sorted(v) for k, v in out.items()}


def _invertible(n: int):
    """All invertible n x n F2 matrices as tuples of row bitmasks."""
    for rows in itertools.product(range(1, 1 << n), repeat=n):
        basis, ok = [], True
        for r in rows:
            for b in basis:
                r = min(r, r ^ b)
            if not r:
                ok = False
                break
            basis.append(r)
        if ok:
            yield rows


def iso_check(m: Module, n: Module, prec: int | None = None, max_generators: int = 12,
              search_limit: int = 200_000) -> bool:
    """Is there an F2 change of basis, block diagonal in idempotents, carrying m to n?"""
    bm, bn = _blocks(m), _blocks(n)
    if {k: len(v) for k, v in bm.items()} != {k: len(v) for k, v in bn.items()}:
        return False
    if len(m.generators) > max_generators:
        raise Inconclusive(f"{len(m.generators)} generators exceed the search bound {max_generators}")
    mt, nt = truncate(m.terms, prec=prec), truncate(n.terms, prec=prec)
    keys = sorted(bm, key=str)

    perm_count = math.prod(math.factorial(len(bm[k])) for k in keys)
    if perm_count <= search_limit:
        for choice in itertools.product(*(itertools.permutations(bn[k]) for k in keys)):
            ren = {}
            for k, img in zip(keys, choice):
                ren.update(zip(bm[k], img))
            if frozenset((ren[s], ren[t], l, r) for s, t, l, r in mt) == nt:
                return True

    gl_count = math.prod(_gl_order(len(bm[k])) for k in keys)
    if gl_count > search_limit:
        if perm_count <= search_limit:
            raise Inconclusive("no permutation matches and the linear search is too large")
        raise Inconclusive("search space too large")
    for choice in itertools.product(*(list(_invertible(len(bm[k]))) for k in keys)):
        phi = set()
        for k, rows in zip(keys, choice):
            for i, row in enumerate(rows):
                for j, target in enumerate(bn[k]):
                    if row >> j & 1:
                        phi.add((bm[k][i], target, None, unit(k[1])))
        if truncate(compose(phi, nt, prec=prec), prec=prec) == truncate(compose(mt, phi, prec=prec), prec=prec):
            return True
    return False


def _gl_order(n: int) -> int:
    out = 1
    for i in range(n):
        out *= (1 << n) - (1 << i)
    return out
