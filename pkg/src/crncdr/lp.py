"""Exact linear feasibility over the rationals.

Two solvers with complementary roles:

* :func:`simplex_feasible` -- two-phase simplex (Bland's rule, so it
  terminates) on free variables with equality and >= constraints.
  Returns an exact witness point.
* :func:`fm_feasible` -- Fourier--Motzkin elimination over integers for
  pure-inequality systems ``a . x >= b``.  Decides feasibility only, but
  is much faster on the small dense systems the deficiency-one search
  generates by the thousand.

Strict inequalities never appear here directly: every caller works with
positively homogeneous systems, where ``a . x > 0`` is equivalent to
``a . x >= 1`` after rescaling.
"""

from __future__ import annotations

from math import gcd
from typing import Sequence

from .exact import ONE, Q, ZERO, primitive_int_row, to_rat

Row = tuple  # (coeffs..., rhs) as ints for fm_feasible


def simplex_feasible(n_vars: int,
                     eqs: Sequence[tuple[Sequence, object]] = (),
                     ges: Sequence[tuple[Sequence, object]] = ()) -> list | None:
    """Exact feasibility of {x free : eq. x = rhs, ge. x >= rhs}.

    Returns a rational witness x or None.  Free variables are split
    x = u - v; a phase-1 simplex minimises the artificial sum.
    """
    rows = []
    for coeffs, rhs in eqs:
        rows.append(([to_rat(c) for c in coeffs], to_rat(rhs), "eq"))
    for coeffs, rhs in ges:
        rows.append(([to_rat(c) for c in coeffs], to_rat(rhs), "ge"))
    m = len(rows)
    if m == 0:
        return [ZERO] * n_vars

    n_split = 2 * n_vars
    n_surplus = sum(1 for r in rows if r[2] == "ge")
    n_cols = n_split + n_surplus + m  # + artificials
    tableau = []
    surplus_at = 0
    for i, (coeffs, rhs, kind) in enumerate(rows):
        row = [ZERO] * (n_cols + 1)
        for j, c in enumerate(coeffs):
            row[2 * j] = c
            row[2 * j + 1] = -c
        if kind == "ge":
            row[n_split + surplus_at] = -ONE
            surplus_at += 1
        row[-1] = rhs
        if rhs < 0:
            row = [-v for v in row]
        row[n_split + n_surplus + i] = ONE
        tableau.append(row)

    basis = [n_split + n_surplus + i for i in range(m)]
    # phase-1 objective: minimise sum of artificials -> reduced cost row
    cost = [ZERO] * (n_cols + 1)
    for row in tableau:
        for j in range(n_cols + 1):
            cost[j] += row[j]
    art_lo = n_split + n_surplus

    def pivot(r: int, c: int) -> None:
        piv = tableau[r][c]
        inv = ONE / piv
        tableau[r] = [v * inv for v in tableau[r]]
        prow = tableau[r]
        for i in range(m):
            if i != r and tableau[i][c] != 0:
                f = tableau[i][c]
                tableau[i] = [a - f * b for a, b in zip(tableau[i], prow)]
        f = cost[c]
        if f != 0:
            for j in range(n_cols + 1):
                cost[j] -= f * prow[j]
        basis[r] = c

    while True:
        enter = -1
        for j in range(n_cols):
            if j >= art_lo:
                continue
            if cost[j] > 0:  # maximising -sum(artificials) == positive reduced cost
                enter = j
                break
        if enter < 0:
            break
        leave, best = -1, None
        for i in range(m):
            a = tableau[i][enter]
            if a > 0:
                ratio = tableau[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave < 0:
            break  # unbounded in phase 1 cannot happen, but stay safe
        pivot(leave, enter)

    if cost[-1] != 0:
        return None
    x = [ZERO] * n_vars
    for i, b in enumerate(basis):
        if b < n_split:
            var, sign = divmod(b, 2)
            val = tableau[i][-1]
            x[var] += -val if sign else val
        elif b >= art_lo and tableau[i][-1] != 0:
            return None  # artificial stuck at nonzero level
    return x


def _reduce_row(row: Row) -> Row | None:
    """Primitive integer form; None when trivially satisfied."""
    g = 0
    for v in row:
        g = gcd(g, abs(v))
    if g > 1:
        row = tuple(v // g for v in row)
    if all(v == 0 for v in row[:-1]):
        return None if row[-1] <= 0 else row
    return row


def fm_feasible(rows: Sequence[Row], n_vars: int, max_rows: int = 20000) -> bool:
    """Feasibility of {x : a . x >= b per row} by Fourier--Motzkin.

    rows are integer tuples (a_1..a_n, b).  Raises OverflowError if the
    intermediate system exceeds max_rows (never observed on the small
    systems this package builds; the simplex is the fallback).
    """
    work: set[Row] = set()
    for row in rows:
        r = _reduce_row(tuple(row))
        if r is not None:
            if all(v == 0 for v in r[:-1]):
                return False  # 0 >= positive
            work.add(r)
    remaining = list(range(n_vars))
    while remaining and work:
        # eliminate the variable minimising |pos| * |neg|
        best_var, best_score = None, None
        for v in remaining:
            pos = sum(1 for r in work if r[v] > 0)
            neg = sum(1 for r in work if r[v] < 0)
            score = pos * neg - (pos + neg)
            if best_score is None or score < best_score:
                best_var, best_score = v, score
        v = best_var
        pos = [r for r in work if r[v] > 0]
        neg = [r for r in work if r[v] < 0]
        zero = {r for r in work if r[v] == 0}
        new = zero
        for p in pos:
            for n in neg:
                a, b = -n[v], p[v]
                combo = tuple(a * x + b * y for x, y in zip(p, n))
                r = _reduce_row(combo)
                if r is not None:
                    if all(c == 0 for c in r[:-1]):
                        return False
                    new.add(r)
                if len(new) > max_rows:
                    raise OverflowError("fourier-motzkin blow-up")
        work = new
        remaining.remove(v)
    for r in work:
        if all(v == 0 for v in r[:-1]) and r[-1] > 0:
            return False
    return True


def strict_rows_to_int(rows: Sequence[Sequence]) -> list[Row]:
    """Rational rows a (meaning a . x >= 1) -> integer (a..., 1) rows.

    Positive rescaling keeps the homogeneous system equivalent, so the
    rhs stays 1 only up to scale; feasibility is unchanged.
    """
    out = []
    for row in rows:
        ints = primitive_int_row([to_rat(v) for v in row])
        out.append(tuple(ints) + (1,))
    return out
