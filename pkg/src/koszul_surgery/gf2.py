"""Dense linear algebra over F2 with rows packed into Python integers."""

from __future__ import annotations


def _reduce(rows: list[int], nvars: int) -> tuple[list[int], list[int]]:
    """Reduced echelon form, pivoting from the highest column down.

    Returns (rows, pivot columns).  Bit ``nvars`` of a row is its right-hand
    side.
    """
    rows = [r for r in rows if r]
    pivots: list[int] = []
    done: list[int] = []
    for col in range(nvars - 1, -1, -1):
        bit = 1 << col
        hit = next((k for k, r in enumerate(rows) if r & bit), None)
        if hit is None:
            continue
        piv = rows.pop(hit)
        rows = [r ^ piv if r & bit else r for r in rows]
        done = [r ^ piv if r & bit else r for r in done]
        done.append(piv)
        pivots.append(col)
    return done + rows, pivots


def solve(rows: list[int], nvars: int) -> int | None:
    """Lexicographically least solution, variable 0 most significant.

    Pivoting from the top column down leaves every pivot row free of higher
    free columns, so setting all free variables to zero gives the least
    solution.  Returns a bitmask, or None if the system is inconsistent.
    """
    reduced, pivots = _reduce(rows, nvars)
    rhs = 1 << nvars
    sol = 0
    for r in reduced:
        if r & (rhs - 1) == 0:
            if r & rhs:
                return None
            continue
    for r, col in zip(reduced, pivots):
        if r & rhs:
            sol |= 1 << col
    return sol


def nullspace(rows: list[int], nvars: int) -> list[int]:
    reduced, pivots = _reduce(rows, nvars)
    pivot_rows = dict(zip(pivots, reduced))
    basis = []
    for free in range(nvars):
        if free in pivot_rows:
            continue
        v = 1 << free
        for col, r in pivot_rows.items():
            if r & (1 << free):
                v |= 1 << col
        basis.append(v)
    return basis


def rank(rows: list[int], nvars: int) -> int:
    return len(_reduce(rows, nvars)[1])
