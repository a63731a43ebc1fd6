"""Random morphisms and small modules for property tests."""

from __future__ import annotations

import random

from koszul_surgery.dd_calculus import Generator, Module, TypeDModule
from koszul_surgery.koszul_algebra import all_monomials
from koszul_surgery.staircase import staircase_from_exponents
from koszul_surgery.trace_pairing import knot_surgery_module

WORDS = all_monomials(3)


def random_kmon(rng: random.Random, tgt_right: int, src_right: int):
    pair = (tgt_right, src_right)
    if pair == (0, 0):
        return ("00", rng.randint(0, 2), rng.randint(0, 2))
    if pair == (1, 1):
        return ("11", rng.randint(0, 2), rng.randint(-2, 2))
    if pair == (1, 0):
        return (rng.choice("st"), rng.randint(0, 2), rng.randint(-2, 2))
    return None


def random_word(rng: random.Random, left: int, right: int):
    pool = [w for w in WORDS if (w[0], w[1]) == (left, right)]
    return rng.choice(pool) if pool else None


def random_nilpotent(m: Module, rng: random.Random, n_terms: int = 4) -> frozenset:
    """Random endomorphism supported strictly above the diagonal in generator order."""
    gens = m.generators
    out: set = set()
    if len(gens) < 2:
        return frozenset()
    for _ in range(n_terms * 4):
        if len(out) >= n_terms:
            break
        i, j = sorted(rng.sample(range(len(gens)), 2))
        src, tgt = gens[i], gens[j]
        r = random_kmon(rng, tgt.idem[1], src.idem[1])
        if r is None:
            continue
        if m.two_sided:
            l = random_word(rng, src.idem[0], tgt.idem[0])
            if l is None:
                continue
        else:
            l = None
        out ^= {(src.name, tgt.name, l, r)}
    return frozenset(out)


def random_morphism(m: Module, rng: random.Random, n_terms: int = 4) -> frozenset:
    gens = m.generators
    out: set = set()
    for _ in range(n_terms * 4):
        if len(out) >= n_terms:
            break
        src, tgt = rng.choice(gens), rng.choice(gens)
        r = random_kmon(rng, tgt.idem[1], src.idem[1])
        if r is None:
            continue
        l = random_word(rng, src.idem[0], tgt.idem[0]) if m.two_sided else None
        if m.two_sided and l is None:
            continue
        out ^= {(src.name, tgt.name, l, r)}
    return frozenset(out)


def random_staircase(rng: random.Random, max_gens: int = 9, max_exp: int = 3):
    n = rng.randint(0, (max_gens - 1) // 2)
    alphas = [rng.randint(1, max_exp) for _ in range(n)]
    betas = [rng.randint(1, max_exp) for _ in range(n)]
    return staircase_from_exponents(alphas, betas)


def staircase_plus_pair(rng: random.Random):
    """Type-D module of a random staircase together with an acyclic pair a -> b."""
    base = knot_surgery_module(random_staircase(rng, 7, 2))
    gens = list(base.generators) + [Generator("a", (None, 0)), Generator("b", (None, 0))]
    terms = set(base.terms) | {("a", "b", None, ("00", 0, 0))}
    return base, TypeDModule(gens, terms)
