"""Exact rational scalars and dense matrix routines.

All structural verdicts in this package (ranks, deficiencies, sign
decisions) are computed over arbitrary-precision rationals so that no
verdict can flip due to round-off.  gmpy2's mpq is used when available
because it is several times faster than fractions.Fraction in the LP
hot loops; the two types are interchangeable here.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

try:
    from gmpy2 import mpq as _mpq

    def Q(num=0, den=1):
        return _mpq(num, den)

    HAVE_GMPY2 = True
except ImportError:  # pragma: no cover
    def Q(num=0, den=1):
        return Fraction(num, den)

    HAVE_GMPY2 = False

Rat = object  # mpq or Fraction; duck-typed

ZERO = Q(0)
ONE = Q(1)


def to_rat(value) -> Rat:
    """Coerce ints, Fractions, decimal/rational strings and floats to Q.

    Decimal strings convert exactly ("0.5" -> 1/2); floats convert via
    Fraction(float), i.e. the exact binary value.
    """
    if isinstance(value, str):
        return Q(Fraction(value))
    if isinstance(value, float):
        return Q(Fraction(value))
    return Q(value)


def as_fraction(x: Rat) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def rat_str(x: Rat) -> str:
    """Canonical "p" or "p/q" rendering."""
    f = as_fraction(x)
    return str(f)


Matrix = list  # list[list[Rat]]


def mat(rows: Iterable[Iterable]) -> Matrix:
    return [[to_rat(v) for v in row] for row in rows]


def zeros(nrows: int, ncols: int) -> Matrix:
    return [[ZERO] * ncols for _ in range(nrows)]


def transpose(m: Matrix) -> Matrix:
    return [list(col) for col in zip(*m)] if m else []


def mat_vec(m: Matrix, v: Sequence) -> list:
    return [sum((row[j] * v[j] for j in range(len(v))), ZERO) for row in m]


def dot(u: Sequence, v: Sequence) -> Rat:
    return sum((a * b for a, b in zip(u, v)), ZERO)


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form; returns (R, pivot columns)."""
    r = [row[:] for row in m]
    nrows = len(r)
    ncols = len(r[0]) if nrows else 0
    pivots: list[int] = []
    prow = 0
    for col in range(ncols):
        sel = None
        for i in range(prow, nrows):
            if r[i][col] != 0:
                sel = i
                break
        if sel is None:
            continue
        r[prow], r[sel] = r[sel], r[prow]
        inv = ONE / r[prow][col]
        r[prow] = [v * inv for v in r[prow]]
        for i in range(nrows):
            if i != prow and r[i][col] != 0:
                f = r[i][col]
                r[i] = [a - f * b for a, b in zip(r[i], r[prow])]
        pivots.append(col)
        prow += 1
        if prow == nrows:
            break
    return r, pivots


def rank(m: Matrix) -> int:
    if not m or not m[0]:
        return 0
    return len(rref(m)[1])


def nullspace(m: Matrix, ncols: int | None = None) -> list[list]:
    """Canonical (RREF-derived) basis of {x : m x = 0}."""
    if not m:
        return [[ONE if i == j else ZERO for i in range(ncols or 0)]
                for j in range(ncols or 0)]
    ncols = len(m[0])
    r, pivots = rref(m)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for i, p in enumerate(pivots):
            v[p] = -r[i][f]
        basis.append(v)
    return basis


def left_nullspace(m: Matrix) -> list[list]:
    """Basis of {w : w m = 0}."""
    return nullspace(transpose(m), ncols=len(m))


def solve(m: Matrix, b: Sequence) -> list | None:
    """One exact solution of m x = b, or None if inconsistent."""
    if not m:
        return []
    ncols = len(m[0])
    aug = [row[:] + [to_rat(bi)] for row, bi in zip(m, b)]
    r, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [ZERO] * ncols
    for i, p in enumerate(pivots):
        x[p] = r[i][ncols]
    return x


def in_span(basis: list[list], v: Sequence) -> bool:
    """Exact membership of v in span(basis)."""
    if not basis:
        return all(x == 0 for x in v)
    m = transpose([list(b) for b in basis])
    return solve(m, list(v)) is not None


def primitive_int_row(row: Sequence) -> tuple[int, ...]:
    """Scale a rational row by a positive rational to a primitive int row."""
    from math import gcd, lcm

    dens = [int(x.denominator) for x in row]
    scale = lcm(*dens) if dens else 1
    ints = [int(x.numerator) * (scale // int(x.denominator)) for x in row]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(ints)
