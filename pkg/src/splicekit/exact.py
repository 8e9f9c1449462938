"""Exact integer and rational kernel.

Everything here works with Python ints and :class:`fractions.Fraction`, so
results are exact and never overflow.  Matrices are plain lists of lists.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

Rational = Fraction

__all__ = [
    "Rational",
    "SingularMatrixError",
    "StringInvariants",
    "SnfResult",
    "cf_expand",
    "cf_evaluate",
    "string_invariants",
    "string_determinant",
    "determinant",
    "inverse",
    "matrix_linear_data",
    "smith_normal_form",
    "gcd_all",
    "solve_linear_diophantine",
    "mod1",
]


class SingularMatrixError(ValueError):
    pass


def gcd_all(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
    return g


def mod1(x: Fraction) -> Fraction:
    """Representative of ``x`` in ``[0, 1)``."""
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


def solve_linear_diophantine(target: int, generators: list[int]) -> list[int] | None:
    """One integer vector ``c`` with ``sum(c[i] * generators[i]) == target``.

    Returns ``None`` when ``gcd(generators)`` does not divide ``target``.
    """
    coeffs: list[int] = []
    g = 0
    for a in generators:
        # running extended gcd: g_new = x*g + y*a
        if g == 0:
            coeffs = [0] * len(coeffs)
            g, x, y = abs(a), 0, (1 if a >= 0 else -1)
        else:
            g_new, x, y = _ext_gcd(g, a)
            g = g_new
        coeffs = [c * x for c in coeffs] + [y]
    if g == 0:
        return [0] * len(generators) if target == 0 else None
    if target % g:
        return None
    k = target // g
    return [c * k for c in coeffs]


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


# ---------------------------------------------------------------------------
# Negative continued fractions and plumbing strings


def cf_expand(n: int, p: int) -> list[int]:
    """Quasi-minimal string ``[b1, ..., bk]`` with ``n/p = b1 - 1/(b2 - ...)``.

    ``(1, 0)`` gives the empty string.  All returned weights are ``>= 2``.

    >>> cf_expand(7, 3)
    [3, 2, 2]
    """
    if n < 1 or not 0 <= p < n:
        raise ValueError(f"invalid slope {n}/{p}: need 0 <= p < n")
    if gcd(n, p) != 1:
        raise ValueError(f"invalid slope {n}/{p}: gcd(n, p) = {gcd(n, p)}")
    out = []
    while p:
        b = -(-n // p)
        out.append(b)
        n, p = p, b * p - n
    return out


def cf_evaluate(weights) -> tuple[int, int]:
    """Value ``(n, p)`` of the negative continued fraction of ``weights``.

    The empty string evaluates to ``(1, 0)``.  The pair is the string
    determinant and the determinant with the first vertex removed, so it is
    reduced automatically (consecutive continuants are coprime).
    """
    n, p = 1, 0
    for b in reversed(list(weights)):
        n, p = b * n - p, n
    return n, p


def string_determinant(weights) -> int:
    """``det(-A)`` of the chain with vertex weights ``-b_i``."""
    return cf_evaluate(weights)[0]


@dataclass(frozen=True)
class StringInvariants:
    n: int
    p: int
    p_rev: int


def string_invariants(weights) -> StringInvariants:
    """Determinants ``n``, ``p`` (first vertex dropped), ``p_rev`` (last dropped).

    ``p`` and ``p_rev`` are reduced into ``[0, n)`` when ``n > 1``; for the
    empty string all of this collapses to ``(1, 0, 0)``.
    """
    weights = list(weights)
    if not weights:
        return StringInvariants(1, 0, 0)
    n, p = cf_evaluate(weights)
    p_rev = cf_evaluate(weights[:-1])[0]
    if n > 1:
        p, p_rev = p % n, p_rev % n
    elif n == 1:
        p = p_rev = 0
    return StringInvariants(n, p, p_rev)


# ---------------------------------------------------------------------------
# Dense exact matrices


def determinant(m) -> int:
    """Exact determinant of a square integer matrix (Bareiss elimination)."""
    a = [list(map(int, row)) for row in m]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix is not square")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def inverse(m) -> list[list[Fraction]]:
    """Exact inverse over the rationals (Gauss-Jordan)."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrixError("matrix is singular")
        a[col], a[pivot] = a[pivot], a[col]
        inv_p = 1 / a[col][col]
        a[col] = [x * inv_p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def matrix_linear_data(m) -> tuple[int, list[list[Fraction]] | None]:
    """``(det, inverse)``; the inverse is ``None`` for a singular matrix."""
    det = determinant(m)
    return det, (inverse(m) if det != 0 else None)


@dataclass(frozen=True)
class SnfResult:
    factors: tuple[int, ...]
    rank_deficiency: int

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.factors if d > 1)

    @property
    def order(self) -> int | None:
        """Order of the cokernel, ``None`` when it is infinite."""
        if self.rank_deficiency:
            return None
        out = 1
        for d in self.factors:
            out *= d
        return out


def smith_normal_form(m) -> SnfResult:
    """Invariant factors ``d1 | d2 | ...`` of a square integer matrix.

    Zero diagonal entries are not listed in ``factors``; they are counted in
    ``rank_deficiency`` (free summands of the cokernel).
    """
    a = [list(map(int, row)) for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    diag = []
    t = 0
    while t < min(rows, cols):
        nz = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        a[t], a[pi] = a[pi], a[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]
        while True:
            done = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    for row in a:
                        row[j] -= q * row[t]
                    if a[t][j]:
                        done = False
            if done:
                # divisibility: the pivot must divide every remaining entry
                bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                            if a[i][j] % a[t][t]), None)
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                continue
            # move the smallest nonzero entry of row/column t onto the pivot
            cand = [(abs(a[i][t]), i, t) for i in range(t, rows) if a[i][t]]
            cand += [(abs(a[t][j]), t, j) for j in range(t, cols) if a[t][j]]
            _, pi, pj = min(cand)
            a[t], a[pi] = a[pi], a[t]
            for row in a:
                row[t], row[pj] = row[pj], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    deficiency = min(rows, cols) - len(diag)
    return SnfResult(tuple(diag), deficiency)
