"""Euler characteristics of quiver Grassmannians and a finite-field counting oracle.

For a representation with finite nice length the Euler characteristic of the
Grassmannian of ``d``-dimensional subrepresentations of its complexification
is the number of closed basis subsets with dimension vector ``d``. The oracle
computes the same number independently: it counts invariant subspace tuples
over several prime fields and interpolates the counting polynomial at 1.
"""

from __future__ import annotations

import itertools
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BadParameters,
    BadPrime,
    DimTooLarge,
    NicenessUnverified,
    NonPolynomialCount,
    TooLarge,
)
from .gradings import NiceCertificate, nice_length
from .rep import F1Rep, closed_subsets

SUPPORTED_PRIMES = (2, 3, 5, 7, 11, 13)
MAX_VERTEX_DIM = 4
MAX_TOTAL_DIM = 8
DEFAULT_BUDGET = 5_000_000


def _certify(m: F1Rep, assume_nice: bool):
    cert = nice_length(m)
    if cert.finite:
        return cert
    if assume_nice:
        return "assumed"
    raise NicenessUnverified(
        f"no nice sequence separates {cert.pairs[0]}; pass assume_nice to count anyway")


def _check_dim(m: F1Rep, d: Sequence[int]) -> tuple[int, ...]:
    d = tuple(d)
    if len(d) != len(m.base.vertices):
        raise BadParameters("dimension vector has the wrong length")
    if any(x < 0 or x > y for x, y in zip(d, m.dim)):
        raise DimTooLarge(f"{d} is not bounded by {m.dim}")
    return d


def euler_characteristic(m: F1Rep, d: Sequence[int], assume_nice: bool = False):
    """``(chi, provenance)``: the number of subrepresentations of dimension vector ``d``."""
    d = _check_dim(m, d)
    cert = _certify(m, assume_nice)
    return len(closed_subsets(m, d)), cert


@dataclass(frozen=True)
class ChiTable:
    entries: dict
    provenance: NiceCertificate | str

    def __getitem__(self, d) -> int:
        return self.entries[tuple(d)]

    def to_json(self) -> list[dict]:
        return [{"chi": v, "dim": list(k)} for k, v in sorted(self.entries.items())]


def chi_table(m: F1Rep, assume_nice: bool = False) -> ChiTable:
    cert = _certify(m, assume_nice)
    verts = m.base.vertices
    tally = Counter(
        tuple(sum(1 for x in s if m.vertex_of[x] == v) for v in verts) for s in closed_subsets(m)
    )
    entries = {d: tally.get(d, 0) for d in itertools.product(*(range(k + 1) for k in m.dim))}
    return ChiTable(entries, cert)


def q_binomial(n: int, k: int, q: int) -> int:
    """Gaussian binomial coefficient ``[n choose k]_q``."""
    if not 0 <= k <= n or q < 2:
        raise BadParameters("need 0 <= k <= n and q >= 2")
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


# ---------------------------------------------------------------------------
# subspaces over F_q


def rref_subspaces(n: int, k: int, q: int) -> list[tuple[tuple[int, ...], tuple[tuple[int, ...], ...]]]:
    """All ``k``-dimensional subspaces of ``F_q^n`` as ``(pivots, rows)`` in reduced echelon form."""
    out = []
    for pivots in itertools.combinations(range(n), k):
        free = [(i, c) for i, p in enumerate(pivots) for c in range(p + 1, n) if c not in pivots]
        for values in itertools.product(range(q), repeat=len(free)):
            rows = [[0] * n for _ in range(k)]
            for i, p in enumerate(pivots):
                rows[i][p] = 1
            for (i, c), val in zip(free, values):
                rows[i][c] = val
            out.append((pivots, tuple(tuple(r) for r in rows)))
    return out


def _in_span(vec: list[int], pivots, rows, q: int) -> bool:
    v = list(vec)
    for p, row in zip(pivots, rows):
        c = v[p]
        if c:
            v = [(x - c * y) % q for x, y in zip(v, row)]
    return not any(v)


def count_points_fq(m: F1Rep, d: Sequence[int], q: int, budget: int = DEFAULT_BUDGET) -> int:
    """Number of subrepresentations of ``M`` over ``F_q`` with dimension vector ``d``, by brute force."""
    if q not in SUPPORTED_PRIMES:
        raise BadPrime(f"q must be one of {SUPPORTED_PRIMES}")
    d = _check_dim(m, d)
    if max(m.dim, default=0) > MAX_VERTEX_DIM or m.total_dim > MAX_TOTAL_DIM:
        raise TooLarge(f"oracle handles vertex dimension <= {MAX_VERTEX_DIM}, total <= {MAX_TOTAL_DIM}")
    verts = m.base.vertices
    sizes = [q_binomial(mv, dv, q) for mv, dv in zip(m.dim, d)]
    total = 1
    for s in sizes:
        total *= s
    if total > budget:
        raise TooLarge(f"{total} subspace tuples exceed the budget {budget}")

    vindex = {v: i for i, v in enumerate(verts)}
    spaces = [rref_subspaces(mv, dv, q) for mv, dv in zip(m.dim, d)]
    # each arrow as (source index, target index, column -> row pairs)
    arrows = []
    for a in m.base.arrows:
        src, tgt = m.basis_of[a.src], m.basis_of[a.tgt]
        pairs = [(src.index(x), tgt.index(y)) for x, y in m.map_of[a.id].items()]
        arrows.append((vindex[a.src], vindex[a.tgt], pairs, len(tgt)))
    check_at = [[] for _ in verts]
    for s, t, pairs, n_t in arrows:
        check_at[max(s, t)].append((s, t, pairs, n_t))

    chosen: list = [None] * len(verts)

    def ok(level: int) -> bool:
        for s, t, pairs, n_t in check_at[level]:
            _, rows_s = chosen[s]
            piv_t, rows_t = chosen[t]
            for row in rows_s:
                img = [0] * n_t
                for j, i in pairs:
                    img[i] = row[j]
                if not _in_span(img, piv_t, rows_t, q):
                    return False
        return True

    def rec(level: int) -> int:
        if level == len(verts):
            return 1
        total = 0
        for space in spaces[level]:
            chosen[level] = space
            if ok(level):
                total += rec(level + 1)
        chosen[level] = None
        return total

    return rec(0)


# ---------------------------------------------------------------------------
# interpolation


def _poly_mul_linear(p: list[Fraction], root) -> list[Fraction]:
    out = [Fraction(0)] * (len(p) + 1)
    for i, c in enumerate(p):
        out[i + 1] += c
        out[i] -= c * root
    return out


def lagrange_coefficients(xs: Sequence[int], ys: Sequence[int]) -> list[Fraction]:
    """Coefficients (lowest degree first) of the interpolating polynomial through the points."""
    coeffs = [Fraction(0)] * len(xs)
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j != i:
                basis = _poly_mul_linear(basis, xj)
                denom *= xi - xj
        for k, c in enumerate(basis):
            coeffs[k] += c * yi / denom
    return coeffs


def evaluate(coeffs: Sequence, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


@dataclass(frozen=True)
class CountPolynomial:
    coefficients: tuple[int, ...]
    primes: tuple[int, ...]
    verification_prime: int
    counts: tuple[int, ...]

    @property
    def value_at_one(self) -> int:
        return sum(self.coefficients)

    def __call__(self, q: int) -> int:
        return evaluate(self.coefficients, q)

    def to_json(self) -> dict:
        return {"coefficients": list(self.coefficients), "primes": list(self.primes),
                "verification_prime": self.verification_prime, "counts": list(self.counts),
                "value_at_1": self.value_at_one}


def degree_bound(m: F1Rep, d: Sequence[int]) -> int:
    return sum(dv * (mv - dv) for dv, mv in zip(d, m.dim))


def interpolated_chi(m: F1Rep, d: Sequence[int], budget: int = DEFAULT_BUDGET) -> CountPolynomial:
    """Interpolate the point count through ``D + 1`` primes and confirm it at one more."""
    d = _check_dim(m, d)
    deg = degree_bound(m, d)
    if deg + 2 > len(SUPPORTED_PRIMES):
        raise TooLarge(f"degree bound {deg} needs {deg + 2} primes")
    primes = SUPPORTED_PRIMES[: deg + 2]
    counts = [count_points_fq(m, d, q, budget) for q in primes]
    coeffs = lagrange_coefficients(primes[:-1], counts[:-1])
    if any(c.denominator != 1 for c in coeffs):
        raise NonPolynomialCount(f"interpolated coefficients {coeffs} are not integral")
    ints = [int(c) for c in coeffs]
    while len(ints) > 1 and ints[-1] == 0:
        ints.pop()
    if evaluate(ints, primes[-1]) != counts[-1]:
        raise NonPolynomialCount(f"count at {primes[-1]} disagrees with the interpolant")
    return CountPolynomial(tuple(ints), tuple(primes[:-1]), primes[-1], tuple(counts))


def admissible(m: F1Rep, d: Sequence[int]) -> bool:
    """Whether the oracle can decide ``d`` within its scale limits."""
    return (degree_bound(m, d) + 2 <= len(SUPPORTED_PRIMES)
            and max(m.dim, default=0) <= MAX_VERTEX_DIM and m.total_dim <= MAX_TOTAL_DIM)
