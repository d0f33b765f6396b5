"""Exact integer and rational linear algebra.

Smith normal form with transforms, the torsion-free cokernel projection it
yields, rational row reduction, and a Fourier-Motzkin feasibility solver.
Everything works on lists of Python ints or Fractions.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][t] * b[t][j] for t in range(inner)) for j in range(cols)] for i in range(len(a))]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def smith_normal_form(a: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(U, D, V)`` with ``U @ A @ V == D``, ``U`` and ``V`` unimodular.

    ``D`` is diagonal with non-negative entries, each dividing the next.
    """
    n = len(a)
    k = len(a[0]) if n else 0
    d = [list(map(int, row)) for row in a]
    u = identity(n)
    v = identity(k)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        d[dst] = [x + q * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for row in d:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    for t in range(min(n, k)):
        nonzero = [(abs(d[i][j]), i, j) for i in range(t, n) for j in range(t, k) if d[i][j]]
        if not nonzero:
            break
        _, i0, j0 = min(nonzero)
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            for i in range(t + 1, n):
                if d[i][t]:
                    add_row(i, t, -(d[i][t] // d[t][t]))
            for j in range(t + 1, k):
                if d[t][j]:
                    add_col(j, t, -(d[t][j] // d[t][t]))
            rest = [(abs(d[i][t]), i, "r") for i in range(t + 1, n) if d[i][t]]
            rest += [(abs(d[t][j]), j, "c") for j in range(t + 1, k) if d[t][j]]
            if rest:
                _, idx, kind = min(rest)
                if kind == "r":
                    swap_rows(t, idx)
                else:
                    swap_cols(t, idx)
                continue
            bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, k)
                        if d[i][j] % d[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
    return u, d, v


def integer_rank(d: Matrix) -> int:
    return sum(1 for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i])


@dataclass(frozen=True)
class FreeProjection:
    """Surjection ``Z^n -> Z^r`` whose kernel is the saturation of a sublattice."""

    matrix: tuple[tuple[int, ...], ...]
    source_rank: int

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def __call__(self, vec: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(x * y for x, y in zip(row, vec)) for row in self.matrix)


def free_cokernel_projection(columns: Sequence[Sequence[int]], n: int) -> FreeProjection:
    """Projection onto ``Z^n / sat(span(columns))``, read off the Smith form.

    ``columns`` are the generators, each of length ``n``.
    """
    if not columns:
        return FreeProjection(tuple(tuple(r) for r in identity(n)), n)
    a = [[col[i] for col in columns] for i in range(n)]
    u, d, _ = smith_normal_form(a)
    r = integer_rank(d)
    return FreeProjection(tuple(tuple(row) for row in u[r:]), n)


# ---------------------------------------------------------------------------
# rational linear algebra


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals and its pivot columns."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rational_rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : rows @ x = 0}`` over the rationals."""
    red, piv = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(red, piv):
            x[p] = -row[f]
        basis.append(x)
    return basis


def clear_denominators(vec: Sequence[Fraction]) -> list[int]:
    """Smallest positive integer multiple of ``vec`` with integer entries and content 1."""
    den = 1
    for x in vec:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return [x // g for x in ints] if g else ints


# ---------------------------------------------------------------------------
# Fourier-Motzkin


def _normalize(row: tuple[list[Fraction], Fraction]):
    coeffs, rhs = row
    scale = max((abs(c) for c in coeffs), default=Fraction(0))
    if scale == 0:
        return tuple(coeffs), rhs
    return tuple(c / scale for c in coeffs), rhs / scale


def fourier_motzkin(rows: Sequence[tuple[Sequence, object]], nvars: int) -> list[Fraction] | None:
    """A rational point with ``coeffs . x >= rhs`` for every row, or ``None`` if infeasible."""
    system = {_normalize(([Fraction(c) for c in coeffs], Fraction(rhs))) for coeffs, rhs in rows}
    stages = [list(system)]
    for var in range(nvars - 1, -1, -1):
        cur = stages[-1]
        pos = [r for r in cur if r[0][var] > 0]
        neg = [r for r in cur if r[0][var] < 0]
        nxt = {r for r in cur if r[0][var] == 0}
        for pc, pr in pos:
            for nc, nr in neg:
                a, b = pc[var], -nc[var]
                coeffs = [b * x + a * y for x, y in zip(pc, nc)]
                nxt.add(_normalize((coeffs, b * pr + a * nr)))
        stages.append(list(nxt))
    if any(rhs > 0 for _, rhs in stages[-1]):
        return None
    x: list[Fraction] = []
    for var in range(nvars):
        lo, hi = None, None
        for coeffs, rhs in stages[nvars - 1 - var]:
            c = coeffs[var]
            if c == 0:
                continue
            bound = (rhs - sum(coeffs[i] * x[i] for i in range(var))) / c
            if c > 0:
                lo = bound if lo is None else max(lo, bound)
            else:
                hi = bound if hi is None else min(hi, bound)
        if lo is not None:
            val = lo
        elif hi is not None:
            val = hi
        else:
            val = Fraction(0)
        x.append(val)
    return x
