"""Exact matrix routines over Fractions and integers.

Matrices are plain lists of rows.  Nothing here touches floating point.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

__all__ = [
    "Matrix",
    "to_fractions",
    "determinant",
    "solve",
    "matmul",
    "identity",
    "smith_normal_form",
    "SmithForm",
    "class_order",
]

Matrix = list[list[Fraction]]


def to_fractions(m: Sequence[Sequence]) -> Matrix:
    return [[Fraction(v) for v in row] for row in m]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a, b):
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)]
            for i in range(len(a))]


def determinant(m: Sequence[Sequence]) -> Fraction:
    """Bareiss fraction-free elimination; exact for Fraction or int entries."""
    a = to_fractions(m)
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def solve(m: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Solve m x = b by Gauss-Jordan elimination over the rationals."""
    a = to_fractions(m)
    n = len(a)
    rhs = [Fraction(v) for v in b]
    if len(rhs) != n:
        raise ValueError("dimension mismatch")
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        rhs[col], rhs[piv] = rhs[piv], rhs[col]
        p = a[col][col]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col] / p
                for c in range(col, n):
                    a[r][c] -= f * a[col][c]
                rhs[r] -= f * rhs[col]
    return [rhs[i] / a[i][i] for i in range(n)]


class SmithForm:
    """Result of :func:`smith_normal_form`: ``left @ A @ right == diagonal``."""

    def __init__(self, diagonal, left, right):
        self.diagonal = diagonal
        self.left = left
        self.right = right

    @property
    def divisors(self) -> list[int]:
        """Diagonal entries d_1 | d_2 | ... (zeros last), one per min(rows, cols)."""
        k = min(len(self.diagonal), len(self.diagonal[0]) if self.diagonal else 0)
        return [self.diagonal[i][i] for i in range(k)]

    def __iter__(self):
        yield self.divisors
        yield (self.left, self.right)


def smith_normal_form(a: Sequence[Sequence[int]]) -> SmithForm:
    """Smith normal form of an integer matrix with unimodular transforms.

    Divisors are nonnegative and satisfy d_i | d_{i+1}.
    """
    d = [[int(v) for v in row] for row in a]
    if any(Fraction(v).denominator != 1 for row in a for v in row):
        raise ValueError("smith_normal_form needs an integer matrix")
    rows = len(d)
    cols = len(d[0]) if rows else 0
    left = identity(rows)
    right = identity(cols)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, f):      # row_dst += f * row_src
        d[dst] = [x + f * y for x, y in zip(d[dst], d[src])]
        left[dst] = [x + f * y for x, y in zip(left[dst], left[src])]

    def add_col(src, dst, f):
        for row in d:
            row[dst] += f * row[src]
        for row in right:
            row[dst] += f * row[src]

    for t in range(min(rows, cols)):
        while True:
            # smallest nonzero entry of the trailing block becomes the pivot
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if d[i][j] and (best is None or abs(d[i][j]) < abs(d[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return _finish(d, left, right)
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = d[t][t]
            dirty = False
            for i in range(t + 1, rows):
                q = d[i][t] // p
                if q:
                    add_row(t, i, -q)
                dirty |= d[i][t] != 0
            for j in range(t + 1, cols):
                q = d[t][j] // p
                if q:
                    add_col(t, j, -q)
                dirty |= d[t][j] != 0
            if dirty:
                continue
            # divisibility: fold any entry not divisible by the pivot into row t
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if d[i][j] % p), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            left[t] = [-x for x in left[t]]
    return _finish(d, left, right)


def _finish(d, left, right) -> SmithForm:
    k = min(len(d), len(d[0]) if d else 0)
    for t in range(k):
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            left[t] = [-x for x in left[t]]
    return SmithForm(d, left, right)


def class_order(a: Sequence[Sequence[int]], v: Sequence[int]) -> int | None:
    """Order of the class of ``v`` in coker(a) = Z^n / a Z^n; None if infinite."""
    n = len(a)
    if len(v) != n:
        raise ValueError("dimension mismatch")
    if n == 0:
        return 1
    snf = smith_normal_form(a)
    w = [sum(snf.left[i][k] * int(v[k]) for k in range(n)) for i in range(n)]
    divs = snf.divisors + [0] * (n - len(snf.divisors))
    order = 1
    for di, wi in zip(divs, w):
        if di == 0:
            if wi != 0:
                return None
            continue
        part = di // gcd(di, wi)
        order = order * part // gcd(order, part)
    return order
