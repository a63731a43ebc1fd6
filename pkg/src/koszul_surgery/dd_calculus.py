"""Type-D and type-DD structures over (K!, K).

A structure map, a morphism and a residual are all the same kind of object: a
frozen set of terms ``(source, target, left, right)`` where ``left`` is a K!
basis word (``None`` for one-sided type-D structures) and ``right`` a K
monomial.  Sets are added by symmetric difference.

Composition "first F, then G" multiplies left words in path order and right
monomials in reverse path order, i.e. ``x -a|b-> y -c|d-> z`` contributes
``a.c | d.b``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .coefficients import NotAUnit, R0Elt, R1Elt, invert_unit
from .koszul_algebra import (dmon_mul, dmon_str, mu0_mons, mu1_mon, parse_word,
                             unit as dunit, wt)
from .surgery_algebra import (GradingVector, KElt, idems_of, kmon_mul, kmon_str,
                              u_exponent, unit as kunit)

Term = tuple


class PreconditionFailed(ValueError):
    pass


class NotInvertible(ValueError):
    pass


class NonConvergent(RuntimeError):
    pass


@dataclass(frozen=True)
class Generator:
    name: str
    idem: tuple  # (left, right); left is None for one-sided structures
    grading: GradingVector | None = None
    truncated: bool = False


def xor_terms(terms: Iterable[Term]) -> frozenset:
    acc: set = set()
    for t in terms:
        acc ^= {t}
    return frozenset(acc)


@dataclass(frozen=True)
class Module:
    generators: tuple
    terms: frozenset = frozenset()
    two_sided: bool = True

    def __post_init__(self):
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        idem = {g.name: g.idem for g in self.generators}
        for s, t, l, r in self.terms:
            if s not in idem or t not in idem:
                raise ValueError(f"arrow {s}->{t} leaves the generator set")
            if self.two_sided and (l[0], l[1]) != (idem[s][0], idem[t][0]):
                raise ValueError(f"left word {dmon_str(l)} on {s}->{t} has wrong idempotents")
            if idems_of(r) != (idem[t][1], idem[s][1]):
                raise ValueError(f"right element {kmon_str(r)} on {s}->{t} has wrong idempotents")

    @property
    def names(self) -> list[str]:
        return [g.name for g in self.generators]

    def gen(self, name: str) -> Generator:
        for g in self.generators:
            if g.name == name:
                return g
        raise KeyError(name)

    def identity(self) -> frozenset:
        return frozenset(identity_terms(self))

    def arrows(self) -> dict:
        """Group terms by (source, target) and left word."""
        out: dict = defaultdict(lambda: defaultdict(set))
        for s, t, l, r in self.terms:
            out[(s, t)][l].add(r)
        return {k: {l: KElt(frozenset(v)) for l, v in d.items()} for k, d in out.items()}

    def coefficient(self, source: str, target: str) -> KElt:
        """Right coefficient of a one-sided arrow (all left words merged)."""
        return KElt(xor_terms(r for s, t, _, r in self.terms if s == source and t == target))

    def with_terms(self, terms: Iterable[Term]) -> "Module":
        return replace(self, terms=frozenset(terms))


def DDModule(generators: Sequence[Generator], terms: Iterable[Term] = ()) -> Module:
    return Module(tuple(generators), frozenset(terms), True)


def TypeDModule(generators: Sequence[Generator], terms: Iterable[Term] = ()) -> Module:
    gens = tuple(replace(g, idem=(None, g.idem[1])) for g in generators)
    return Module(gens, frozenset((s, t, None, r) for s, t, _, r in terms), False)


@dataclass(frozen=True)
class DDMorphism:
    terms: frozenset
    shift: GradingVector | None = None


def identity_terms(m: Module) -> Iterable[Term]:
    for g in m.generators:
        left = dunit(g.idem[0]) if m.two_sided else None
        yield (g.name, g.name, left, kunit(g.idem[1]))


def _index(terms: Iterable[Term]) -> dict:
    idx: dict = defaultdict(list)
    for t in terms:
        idx[t[0]].append(t)
    return idx


def compose(first: Iterable[Term], then: Iterable[Term], weight_cap: int | None = None,
            prec: int | None = None) -> frozenset:
    """Terms of ``then o first``."""
    idx = _index(then)
    acc: set = set()
    for x, y, l1, r1 in first:
        for _, z, l2, r2 in idx.get(y, ()):
            if l1 is None:
                l = None
            else:
                l = dmon_mul(l1, l2)
                if l is None or (weight_cap is not None and wt(l) > weight_cap):
                    continue
            r = kmon_mul(r2, r1)
            if r is None or (prec is not None and u_exponent(r) >= prec):
                continue
            acc ^= {(x, z, l, r)}
    return frozenset(acc)


def compose_chain(*maps: Iterable[Term], weight_cap=None, prec=None) -> frozenset:
    out = frozenset(maps[0])
    for m in maps[1:]:
        out = compose(out, m, weight_cap, prec)
    return out


def mu1_terms(terms: Iterable[Term]) -> frozenset:
    acc: set = set()
    for x, y, l, r in terms:
        if l is not None:
            for l2 in mu1_mon(l):
                acc ^= {(x, y, l2, r)}
    return frozenset(acc)


def curvature_terms(m: Module) -> frozenset:
    if not m.two_sided:
        return frozenset()
    return frozenset((g.name, g.name, c, kunit(g.idem[1]))
                     for g in m.generators for c in mu0_mons(g.idem[0]))


def truncate(terms: Iterable[Term], weight_cap=None, prec=None) -> frozenset:
    return frozenset(t for t in terms
                     if (weight_cap is None or t[2] is None or wt(t[2]) <= weight_cap)
                     and (prec is None or u_exponent(t[3]) < prec))


@dataclass
class StructureReport:
    ok: bool
    residual: list

    def lines(self) -> list[str]:
        return [f"{s} -> {t}: {term_label(l, r)}" for s, t, l, r in self.residual]


def term_label(l, r) -> str:
    right = kmon_str(r)
    return right if l is None else f"{dmon_str(l)}|{right}"


def _sort_key(t: Term):
    return (t[0], t[1], "" if t[2] is None else dmon_str(t[2]), str(t[3]))


def check_structure(m: Module, weight_cap: int | None = None, prec: int | None = None) -> StructureReport:
    """Residual of the (curved) structure relation at every complete source.

    Generators flagged ``truncated`` lost arrows when a window was cut, so the
    relation is not expected to close there and they are skipped as sources.
    """
    res = compose(m.terms, m.terms, weight_cap, prec)
    res = res ^ truncate(mu1_terms(m.terms), weight_cap, prec) ^ curvature_terms(m)
    skip = {g.name for g in m.generators if g.truncated}
    residual = sorted((t for t in res if t[0] not in skip), key=_sort_key)
    return StructureReport(not residual, residual)


def morphism_differential(f: Iterable[Term], source: Module, target: Module,
                          weight_cap=None, prec=None) -> frozenset:
    f = frozenset(f)
    return (compose(f, target.terms, weight_cap, prec)
            ^ compose(source.terms, f, weight_cap, prec)
            ^ truncate(mu1_terms(f), weight_cap, prec))


def _geometric_inverse(m: Module, h: frozenset, weight_cap, prec, limit: int) -> frozenset:
    """(1 + h)^-1 = sum of powers of h, provided the powers die out."""
    total = set(m.identity())
    power = m.identity()
    for _ in range(limit):
        power = compose(power, h, weight_cap, prec)
        if not power:
            return frozenset(total)
        total ^= power
    raise NotInvertible("1 + h: the powers of h do not vanish under the cap")


def twist_by_endomorphism(m: Module, h: Iterable[Term], weight_cap: int | None = None,
                          prec: int | None = None):
    """Twist by alpha = d(h) (1+h)^-1.

    Returns ``(twisted, f, g)`` with ``f = 1 + h`` an isomorphism from ``m`` to
    the twisted module and ``g = (1+h)^-1`` its inverse.
    """
    h = frozenset(h)
    limit = (len(m.generators) + 1) * ((weight_cap or 0) + 2) + 2
    g = _geometric_inverse(m, h, weight_cap, prec, limit)
    alpha = compose(g, morphism_differential(h, m, m, weight_cap, prec), weight_cap, prec)
    twisted = m.with_terms(m.terms ^ alpha)
    return twisted, m.identity() ^ h, g, alpha


def maurer_cartan_residual(m: Module, alpha: Iterable[Term], weight_cap=None, prec=None) -> frozenset:
    alpha = frozenset(alpha)
    return morphism_differential(alpha, m, m, weight_cap, prec) ^ compose(alpha, alpha, weight_cap, prec)


def check_u_equivariance(m: Module) -> bool:
    """theta|U on every generator, and no other theta-weighted term."""
    theta_terms = {t for t in m.terms if t[2] is not None and t[2][3]}
    wanted = set()
    for g in m.generators:
        l, r = g.idem
        u = ("00", 1, 1) if r == 0 else ("11", 1, 0)
        wanted.add((g.name, g.name, (l, l, "", True), u))
    return theta_terms == wanted


# --- cancellation ------------------------------------------------------------

def _unit_inverse(m: Module, x: str, y: str, prec: int | None) -> list:
    arrow = [t for t in m.terms if t[0] == x and t[1] == y]
    if not arrow:
        raise NotAUnit(f"no arrow {x} -> {y}")
    if m.two_sided and any(t[2][2] or t[2][3] for t in arrow):
        raise NotAUnit(f"arrow {x} -> {y} carries a non-idempotent left word")
    coeff = KElt(xor_terms(t[3] for t in arrow))
    if coeff.idempotents() == {(0, 0)}:
        inv = invert_unit(coeff.r00, prec)
        mons = [("00", i, j) for i, j in inv.terms]
    elif coeff.idempotents() == {(1, 1)}:
        inv = invert_unit(coeff.r11, prec)
        mons = [("11", k, e) for k, e in inv.terms]
    else:
        raise NotAUnit(str(coeff))
    left = dunit(m.gen(x).idem[0]) if m.two_sided else None
    return [(y, x, left, mon) for mon in mons]


def cancel_arrow(m: Module, x: str, y: str, prec: int | None = None) -> Module:
    """Cancel the unit arrow x -> y, adding zig-zags a -> y ~> x -> b."""
    back = _unit_inverse(m, x, y, prec)
    into_y = [t for t in m.terms if t[1] == y and t[0] not in (x, y)]
    out_x = [t for t in m.terms if t[0] == x and t[1] not in (x, y)]
    zig = compose_chain(into_y, back, out_x, prec=prec)
    keep = frozenset(t for t in m.terms if not ({t[0], t[1]} & {x, y}))
    touched = {t[0] for t in into_y} if m.gen(x).truncated else set()
    gens = tuple(replace(g, truncated=g.truncated or g.name in touched)
                 for g in m.generators if g.name not in (x, y))
    return Module(gens, keep ^ zig, m.two_sided)


def _is_exact_one(m: Module, x: str, y: str) -> bool:
    arrow = [t for t in m.terms if t[0] == x and t[1] == y]
    return len(arrow) == 1 and arrow[0][3] in (("00", 0, 0), ("11", 0, 0)) and (
        arrow[0][2] is None or (not arrow[0][2][2] and not arrow[0][2][3]))


def _is_unit(m: Module, x: str, y: str, prec) -> bool:
    try:
        _unit_inverse(m, x, y, prec)
        return True
    except NotAUnit:
        return False


def reduce_module(m: Module, prec: int | None = None, order: str = "id") -> Module:
    """Cancel unit arrows until none remain.

    Arrows with coefficient exactly 1 go first, then other units; ties are
    broken by generator name (``order="id"``) or by reversed name.
    """
    while True:
        pairs = sorted({(t[0], t[1]) for t in m.terms if t[0] != t[1]}, reverse=(order != "id"))
        ones = [p for p in pairs if _is_exact_one(m, *p)]
        pick = ones[0] if ones else next((p for p in pairs if _is_unit(m, *p, prec)), None)
        if pick is None:
            return m
        m = cancel_arrow(m, pick[0], pick[1], prec)


# --- homological perturbation ------------------------------------------------

@dataclass(frozen=True)
class SDR:
    big: Module
    small: Module
    proj: frozenset
    incl: frozenset
    homotopy: frozenset


def sdr_side_conditions(s: SDR) -> dict:
    idx, idc = s.big.identity(), s.small.identity()
    dh = morphism_differential(s.homotopy, s.big, s.big)
    return {
        "proj_incl": compose(s.incl, s.proj) == idc,
        "incl_proj": compose(s.proj, s.incl) == idx ^ dh,
        "hh": not compose(s.homotopy, s.homotopy),
        "h_incl": not compose(s.incl, s.homotopy),
        "proj_h": not compose(s.homotopy, s.proj),
    }


def strong_deformation_retract(big: Module, small: Module, proj, incl, q) -> SDR:
    """Upgrade (proj, incl, q) to an SDR with the Lambe-Stasheff formulas."""
    proj, incl, q = frozenset(proj), frozenset(incl), frozenset(q)
    idx = big.identity()
    if compose(incl, proj) != small.identity():
        raise PreconditionFailed("proj o incl != id")
    if compose(proj, incl) != idx ^ morphism_differential(q, big, big):
        raise PreconditionFailed("incl o proj != id + d(Q)")
    p = idx ^ compose(proj, incl)
    q1 = compose_chain(p, q, p)
    h = compose_chain(q1, big.terms, q1)
    return SDR(big, small, proj, incl, h)


def perturb_dd(s: SDR, alpha: Iterable[Term], weight_cap: int | None = None,
               prec: int | None = None, max_steps: int = 64) -> Module:
    """Transfer the perturbation alpha to the small model."""
    alpha = frozenset(alpha)
    beta: set = set()
    term = compose(s.incl, alpha, weight_cap, prec)
    for _ in range(max_steps):
        if not term:
            return s.small.with_terms(s.small.terms ^ frozenset(beta))
        beta ^= compose(term, s.proj, weight_cap, prec)
        term = compose_chain(term, s.homotopy, alpha, weight_cap=weight_cap, prec=prec)
    raise NonConvergent("perturbation series did not terminate")


# --- serialization -----------------------------------------------------------

def module_to_json(m: Module) -> dict:
    gens = []
    for g in m.generators:
        entry = {"id": g.name, "idem": list(g.idem) if m.two_sided else [g.idem[1]]}
        if g.grading is not None:
            entry["grading"] = g.grading.to_json()
        if g.truncated:
            entry["truncated"] = True
        gens.append(entry)
    order = {g.name: i for i, g in enumerate(m.generators)}
    arrows = []
    for (s, t), by_left in sorted(m.arrows().items(), key=lambda kv: (order[kv[0][0]], order[kv[0][1]])):
        for l, r in sorted(by_left.items(), key=lambda kv: "" if kv[0] is None else dmon_str(kv[0])):
            entry = {"source": s, "target": t}
            if l is not None:
                entry["left"] = dmon_str(l)
            entry["right"] = r.to_json()
            arrows.append(entry)
    return {"kind": "DD" if m.two_sided else "D", "generators": gens, "arrows": arrows}


def module_from_json(data: dict) -> Module:
    two = data.get("kind", "DD") == "DD"
    gens = []
    for g in data["generators"]:
        idem = tuple(g["idem"]) if two else (None, g["idem"][-1])
        grading = GradingVector.from_json(g["grading"]) if "grading" in g else None
        gens.append(Generator(g["id"], idem, grading, bool(g.get("truncated", False))))
    idem = {g.name: g.idem for g in gens}
    terms: set = set()
    for a in data["arrows"]:
        s, t = a["source"], a["target"]
        left = parse_word(a["left"], idem[s][0]) if two else None
        for r in KElt.from_json(a["right"]).mons:
            terms ^= {(s, t, left, r)}
    return Module(tuple(gens), frozenset(terms), two)


def to_dot(m: Module, name: str = "module") -> str:
    lines = [f"digraph {name} {{"]
    for g in m.generators:
        lines.append(f'  "{g.name}" [label="{g.name}"];')
    order = {g.name: i for i, g in enumerate(m.generators)}
    for (s, t), by_left in sorted(m.arrows().items(), key=lambda kv: (order[kv[0][0]], order[kv[0][1]])):
        parts = []
        for l, r in sorted(by_left.items(), key=lambda kv: "" if kv[0] is None else dmon_str(kv[0])):
            parts.append(str(r) if l is None else f"{dmon_str(l)}|{r}")
        lines.append(f'  "{s}" -> "{t}" [label="{" + ".join(parts)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
