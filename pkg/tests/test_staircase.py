import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from helpers import FIXTURES, whitehead_h
from koszul_surgery.staircase import (HFunction, KnotH, MalformedH, MonomialIdealModule,
                                      NonpositiveExponent, chain_map_space, homology_h_row,
                                      identity_map, resolution_is_exact, solve_chain_map,
                                      solve_homotopy, solve_null_homotopy, staircase_from_exponents,
                                      staircase_from_h_row, u_map)
from koszul_surgery.surgery_algebra import GradingVector
from randmod import random_staircase

# ---------------------------------------------------------------- oracles

T34_GAPS = {1, 2, 5}


def t34_h(s):
    """H of T(3,4): integers n >= s + genus outside the semigroup <3,4>."""
    return sum(1 for n in range(s + 3, 6) if n < 0 or n in T34_GAPS)


def brute_minimal(points):
    pts = set(points)
    return sorted(p for p in pts
                  if not any(q != p and q[0] <= p[0] and q[1] <= p[1] for q in pts))


def f2_rank(rows):
    rows, r = [list(x) for x in rows], 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                rows[i] = [a ^ b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def brute_homology(alphas, betas, p, q):
    """(dim H0, dim H1) of the staircase complex in monomial bidegree (p, q)."""
    evens = [(sum(alphas[:k]), sum(betas[k:])) for k in range(len(alphas) + 1)]
    odds = [(evens[k + 1][0], evens[k][1]) for k in range(len(alphas))]
    e_in = [k for k, (a, b) in enumerate(evens) if a <= p and b <= q]
    o_in = [k for k, (a, b) in enumerate(odds) if a <= p and b <= q]
    mat = [[1 if j in (k, k + 1) else 0 for j in e_in] for k in o_in]
    rk = f2_rank(mat) if mat and e_in else 0
    return len(e_in) - rk, len(o_in) - rk


# ---------------------------------------------------------------- construction


def test_t34_differential_and_gradings():
    s = staircase_from_exponents([1, 2], [2, 1])
    assert s.size == 5
    assert s.differential(1) == [(0, (1, 0)), (2, (0, 2))]
    assert s.differential(3) == [(2, (2, 0)), (4, (0, 1))]
    assert all(s.differential(i) == [] for i in (0, 2, 4))
    assert [s.algebraic_grading(i) for i in range(5)] == [0, 1, 0, 1, 0]
    assert s.d_squared_zero()


def test_t34_fixture_gradings_match_ideal():
    data = json.loads((FIXTURES / "t34_staircase.json").read_text())
    a = data["anchor"]
    s = staircase_from_exponents(data["alphas"], data["betas"],
                                 GradingVector.of(a["gr_w"], a["gr_z"], 0, a["A2"]))
    for i in range(0, 5, 2):
        a_, b_ = s.even_monomial(i)
        assert (s.gradings[i].gr_w, s.gradings[i].gr_z) == (-2 * a_, -2 * b_)
    assert [s.even_monomial(i) for i in (0, 2, 4)] == [(0, 3), (1, 1), (3, 0)]


def test_t34_homology_is_gap_ideal():
    ideal_pts = brute_minimal((t34_h(s), t34_h(s) + s) for s in range(-6, 7))
    assert ideal_pts == [(0, 3), (1, 1), (3, 0)]
    for p in range(11):
        for q in range(11):
            h0, h1 = brute_homology([1, 2], [2, 1], p, q)
            assert h1 == 0
            assert h0 == int(any(a <= p and b <= q for a, b in ideal_pts))


def test_t34_round_trip_through_h_row():
    s = staircase_from_exponents([1, 2], [2, 1])
    row = homology_h_row(s, 0, range(-5, 6))
    assert row == {k: t34_h(k) for k in range(-5, 6)}
    knot = KnotH(-3, tuple(t34_h(k) for k in range(-3, 4)))
    back = knot.staircase()
    assert (back.alphas, back.betas) == ((1, 2), (2, 1))


def test_empty_staircase():
    s = staircase_from_exponents([], [])
    assert s.size == 1 and s.differential(0) == []


@pytest.mark.parametrize("alphas,betas", [([0], [1]), ([1], [-2]), ([1, 2], [1, 0])])
def test_nonpositive_exponent(alphas, betas):
    with pytest.raises(NonpositiveExponent):
        staircase_from_exponents(alphas, betas)


def test_whitehead_rows():
    h = whitehead_h()
    s0 = staircase_from_h_row(h, 0)
    assert [(g.gr_w, g.gr_z) for g in s0.gradings] == [(0, -2), (-1, -1), (-2, 0)]
    assert (s0.gradings[1].A1, s0.gradings[1].A2) == (0, 0)
    assert s0.differential(1) == [(0, (1, 0)), (2, (0, 1))]
    s1 = staircase_from_h_row(h, 1)
    assert s1.size == 1 and (s1.gradings[0].gr_w, s1.gradings[0].gr_z) == (0, -2)


def test_rows_match_brute_minimal_generators():
    h = whitehead_h()
    for s1 in range(-5, 6):
        pts = [(h(s1, s2), h(s1, s2) + s1 + s2) for s2 in range(-12, 13)]
        expected = brute_minimal(pts)
        s = staircase_from_h_row(h, s1)
        evens = [s.even_monomial(i) for i in range(0, s.size, 2)]
        assert evens == expected
        for i, (a, b) in zip(range(0, s.size, 2), evens):
            assert (s.gradings[i].gr_w, s.gradings[i].gr_z) == (-2 * a, -2 * b)
        assert homology_h_row(s, s1, range(-4, 5)) == {k: h(s1, k) for k in range(-4, 5)}


def test_constant_row_gives_single_generator():
    h = whitehead_h()
    assert staircase_from_h_row(h, 5).size == 1


def _h(table, **kw):
    d = {"lk": 0, "s1_range": [0, len(table[0]) - 1], "s2_range": [0, len(table) - 1],
         "table": table}
    d.update(kw)
    return d


@pytest.mark.parametrize("data", [
    _h([[2, 0], [0, 0]]),                      # jump of 2 in s1
    _h([[1, 0], [-1, 0]]),                     # negative value
    _h([[1, 2], [0, 0]]),                      # increases in s1
    _h([[1, 0], [0, 0]], s1_range=[0, 2]),     # shape mismatch
    {"lk": 0, "table": [[0]]},                 # missing ranges
    _h([[1, 0], [0, 0]], lk=1),                # ranges not in Z + lk/2
])
def test_malformed_h(data):
    with pytest.raises(MalformedH):
        HFunction.from_json(data)


def test_malformed_knot_h():
    with pytest.raises(MalformedH):
        KnotH.from_json({"s_range": [0, 1], "values": [1, 1]})
    with pytest.raises(MalformedH):
        KnotH.from_json({"s_range": [0, 1], "values": [2, 0]})


def test_h_json_round_trip():
    h = whitehead_h()
    assert HFunction.from_json(h.to_json()) == h
    assert h(-4, -3) == 3 + 2 + 2


def test_eta_values():
    h = whitehead_h()
    assert [h.eta(s) for s in range(-3, 3)] == [1, 1, 1, 0, 0, 0]


# ---------------------------------------------------------------- solver examples


def test_lz_and_lw_choices():
    h = whitehead_h()
    cm1, c0, c1 = (staircase_from_h_row(h, s) for s in (-1, 0, 1))
    lz = solve_chain_map(cm1, c0, (0, -2), require_nonzero_on_homology=True)
    assert list(lz.items()) == [(0, 0, (1, 0))]
    lw = solve_chain_map(c1, c0, (-2, 0), require_nonzero_on_homology=True)
    assert list(lw.items()) == [(0, 2, (0, 1))]


def test_identity_shift_and_positive_shifts_t34():
    s = staircase_from_exponents([1, 2], [2, 1])
    assert solve_chain_map(s, s, (0, 0), True).entries == identity_map(s).entries
    for n in (1, 2, 3):
        assert solve_chain_map(s, s, (n, n)).is_zero()
        assert solve_chain_map(s, s, (n, n), True) is None


def test_t34_minus_one_maps_null_homotopic():
    s = staircase_from_exponents([1, 2], [2, 1])
    space = chain_map_space(s, s, (-1, -1))
    assert space
    for f in space:
        h = solve_null_homotopy(f)
        assert h is not None


def test_homotopy_trivial_and_u():
    s = staircase_from_exponents([1, 2], [2, 1])
    f = identity_map(s)
    h = solve_homotopy(s, s, f, f)
    assert h is not None and h.is_zero()
    assert u_map(s).is_chain_map()
    assert solve_null_homotopy(u_map(s)) is None


def test_monomial_ideal_module_checks():
    with pytest.raises(ValueError):
        MonomialIdealModule(((1, 1), (0, 3)))
    m = MonomialIdealModule.from_points([(3, 0), (0, 3), (1, 1), (2, 2)])
    assert m.generators == ((0, 3), (1, 1), (3, 0))
    assert m.contains(1, 1) and not m.contains(0, 2)


# ---------------------------------------------------------------- lemma properties

seeds = st.integers(0, 10**9)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_resolution_exact_random(seed):
    s = random_staircase(random.Random(seed))
    bound = 2 * max(sum(s.alphas), sum(s.betas), 1)
    assert resolution_is_exact(s, bound)
    assert s.d_squared_zero()


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_self_equivalence_is_identity(seed):
    s = random_staircase(random.Random(seed))
    space = chain_map_space(s, s, (0, 0))
    assert [m.entries for m in space] == [identity_map(s).entries]


@settings(max_examples=200, deadline=None)
@given(seeds, st.integers(1, 3))
def test_positive_shift_maps_vanish(seed, n):
    s = random_staircase(random.Random(seed))
    assert chain_map_space(s, s, (n, n)) == []
    assert chain_map_space(s, s, (2 * n, 2 * n)) == []


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_minus_one_maps_null_homotopic(seed):
    s = random_staircase(random.Random(seed))
    for f in chain_map_space(s, s, (-1, -1)):
        assert solve_null_homotopy(f) is not None


def _find_two_solutions(a, b, rng):
    shifts = [(dw, dz) for dw in range(-12, 3, 2) for dz in range(-12, 3, 2)]
    rng.shuffle(shifts)
    for sh in shifts:
        f = solve_chain_map(a, b, sh, True)
        if f is not None:
            return f, solve_chain_map(a, b, sh, True, order="reversed")
    return None, None


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_two_solutions_are_homotopic(seed):
    rng = random.Random(seed)
    a, b = random_staircase(rng), random_staircase(rng)
    f, g = _find_two_solutions(a, b, rng)
    if f is None:
        return
    assert f.is_chain_map() and g.is_chain_map()
    assert f.induces_nonzero() and g.induces_nonzero()
    assert solve_homotopy(a, b, f, g) is not None
