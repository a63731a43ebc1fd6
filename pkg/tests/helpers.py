"""Shared test data: fixture loaders and the Whitehead golden arrow lists."""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from pathlib import Path

import koszul_surgery
from koszul_surgery.dd_calculus import DDModule, Generator, module_from_json
from koszul_surgery.koszul_algebra import dmon_str, parse_word
from koszul_surgery.lspace_surgery_bimodule import build_bimodule
from koszul_surgery.staircase import HFunction
from koszul_surgery.surgery_algebra import kmon_str

FIXTURES = Path(koszul_surgery.__file__).parent / "fixtures"


def load_fixture_module(name: str):
    import json
    return module_from_json(json.loads((FIXTURES / name).read_text()))


@lru_cache(maxsize=None)
def whitehead_h() -> HFunction:
    return HFunction.load(FIXTURES / "whitehead.json")


@lru_cache(maxsize=None)
def whitehead_bimodule(lo=-4, hi=4):
    return build_bimodule(whitehead_h(), (lo, hi))


def cotrace():
    """Rank-one dualizing bimodule with one generator per idempotent."""
    w = parse_word
    gens = [Generator("i0", (0, 0)), Generator("i1", (1, 1))]
    terms = [("i0", "i0", w("w"), ("00", 1, 0)), ("i0", "i0", w("θ", 0), ("00", 1, 1)),
             ("i0", "i0", w("z"), ("00", 0, 1)), ("i1", "i1", w("φ-"), ("11", 0, -1)),
             ("i1", "i1", w("θ", 1), ("11", 1, 0)), ("i1", "i1", w("φ+"), ("11", 0, 1)),
             ("i0", "i1", w("s"), ("s", 0, 0)), ("i0", "i1", w("t"), ("t", 0, 0))]
    return DDModule(gens, terms)


def label(term) -> tuple:
    s, t, l, r = term
    right = kmon_str(r)
    return (s, t, right if l is None else f"{dmon_str(l)}|{right}")


def labels(module, names=None) -> Counter:
    keep = set(names) if names is not None else {g.name for g in module.generators}
    return Counter(label(t) for t in module.terms if t[0] in keep and t[1] in keep)


# Golden Whitehead arrows on s1 in [-2, 2].
X = {-2: "x_{-2}", -1: "x_{-1}", 1: "x_{1}", 2: "x_{2}"}
X00, X01, X02 = "x_{0}^{0}", "x_{0}^{1}", "x_{0}^{2}"


def S(k):
    return f"T^{{{k}}}x'"


def Y(k):
    return f"y_{{{k}}}"


def E(k):
    return f"T^{{{k}}}e"


KS = range(-2, 3)
GOLDEN_NAMES = ([X[-2], X[-1], X00, X01, X02, X[1], X[2]]
                + [S(k) for k in KS] + [Y(k) for k in KS] + [E(k) for k in KS])

GOLDEN_00 = [
    (X[-2], X[-1], "z|U"), (X[-1], X[-2], "w|1"), (X[-1], X00, "z|W"),
    (X00, X[-1], "w|Z"), (X00, X[1], "z|Z"), (X00, X01, "zw|Z"),
    (X01, X00, "1|W"), (X01, X02, "1|Z"),
    (X02, X[-1], "w|W"), (X02, X[1], "z|W"), (X02, X01, "wz|W"),
    (X[1], X02, "w|Z"), (X[1], X[2], "z|1"), (X[2], X[1], "w|U"),
] + [(x, x, "θ|U") for x in (X[-2], X[-1], X00, X01, X02, X[1], X[2])]

GOLDEN_10 = ([(S(k), S(k + 1), "φ+|1") for k in range(-2, 2)]
             + [(S(k + 1), S(k), "φ-|1") for k in range(-2, 2)]
             + [(S(k), S(k), "θ|U") for k in KS])

GOLDEN_01 = [
    (Y(-2), Y(-1), "z|U"), (Y(-1), Y(0), "z|U"), (Y(0), Y(1), "z|1"), (Y(1), Y(2), "z|1"),
    (Y(-1), Y(-2), "w|1"), (Y(0), Y(-1), "w|1"), (Y(1), Y(0), "w|U"), (Y(2), Y(1), "w|U"),
] + [(Y(k), Y(k), "θ|U") for k in KS]

GOLDEN_11 = ([(E(k), E(k + 1), "φ+|1") for k in range(-2, 2)]
             + [(E(k + 1), E(k), "φ-|1") for k in range(-2, 2)]
             + [(E(k), E(k), "θ|U") for k in KS])

GOLDEN_00_TO_10 = [
    (X[-2], S(-2), "s|U^2"), (X[-2], S(-2), "t|1"),
    (X[-1], S(-1), "s|U"), (X[-1], S(-1), "t|1"),
    (X00, S(0), "s|Z"), (X00, S(0), "t|Z"),
    (X02, S(0), "s|W"), (X02, S(0), "t|W"),
    (X[1], S(1), "s|1"), (X[1], S(1), "t|U"),
    (X[2], S(2), "s|1"), (X[2], S(2), "t|U^2"),
]

GOLDEN_00_TO_01 = [
    (X00, Y(0), "1|Tσ"), (X00, Y(0), "1|UTτ"),
    (X02, Y(0), "1|UT^-1σ"), (X02, Y(0), "1|T^-1τ"),
] + [(X[k], Y(k), lab) for k in (-2, -1, 1, 2) for lab in ("1|σ", "1|τ")]

GOLDEN_01_TO_11 = [
    (Y(-2), E(-2), "s|U^2"), (Y(-2), E(-2), "t|1"),
    (Y(-1), E(-1), "s|U"), (Y(-1), E(-1), "t|1"),
    (Y(0), E(0), "s|1"), (Y(0), E(0), "t|1"),
    (Y(1), E(1), "s|1"), (Y(1), E(1), "t|U"),
    (Y(2), E(2), "s|1"), (Y(2), E(2), "t|U^2"),
]

GOLDEN_10_TO_11 = [(S(k), E(k), lab) for k in KS for lab in ("1|σ", "1|τ")]

GOLDEN_BLOCKS = {
    "(0,0)": GOLDEN_00, "(1,0)": GOLDEN_10, "(0,1)": GOLDEN_01, "(1,1)": GOLDEN_11,
    "(0,0)->(1,0)": GOLDEN_00_TO_10, "(0,0)->(0,1)": GOLDEN_00_TO_01,
    "(0,1)->(1,1)": GOLDEN_01_TO_11, "(1,0)->(1,1)": GOLDEN_10_TO_11,
}

BLOCK_IDEMS = {
    "(0,0)": ((0, 0), (0, 0)), "(1,0)": ((1, 0), (1, 0)), "(0,1)": ((0, 1), (0, 1)),
    "(1,1)": ((1, 1), (1, 1)), "(0,0)->(1,0)": ((0, 0), (1, 0)),
    "(0,0)->(0,1)": ((0, 0), (0, 1)), "(0,1)->(1,1)": ((0, 1), (1, 1)),
    "(1,0)->(1,1)": ((1, 0), (1, 1)),
}


def block_labels(module, block: str, names=GOLDEN_NAMES) -> Counter:
    src_idem, tgt_idem = BLOCK_IDEMS[block]
    idem = {g.name: g.idem for g in module.generators}
    keep = set(names)
    return Counter(label(t) for t in module.terms
                   if t[0] in keep and t[1] in keep
                   and idem[t[0]] == src_idem and idem[t[1]] == tgt_idem)


# Final reduced complex after pairing with the zero-surgery on the unknot.
REDUCED_NAMES = {"X0_0|x_{0}^{0}", "X0_0|x_{0}^{1}", "X0_0|x_{0}^{2}", "X0_0|y_{0}",
                 "X1|T^{0}x'", "X1|T^{0}e"}
REDUCED_ARROWS = Counter([
    ("X0_0|x_{0}^{1}", "X0_0|x_{0}^{0}", "W"), ("X0_0|x_{0}^{1}", "X0_0|x_{0}^{2}", "Z"),
    ("X0_0|x_{0}^{0}", "X0_0|y_{0}", "Tσ"), ("X0_0|x_{0}^{0}", "X0_0|y_{0}", "UTτ"),
    ("X0_0|x_{0}^{2}", "X0_0|y_{0}", "UT^-1σ"), ("X0_0|x_{0}^{2}", "X0_0|y_{0}", "T^-1τ"),
    ("X1|T^{0}x'", "X1|T^{0}e", "σ"), ("X1|T^{0}x'", "X1|T^{0}e", "τ"),
])
