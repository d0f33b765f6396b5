import itertools
from math import comb

import pytest
from helpers import reps
from hypothesis import assume, given, settings

from f1quiver.catalog import band_over_two_loops, three_loop_example
from f1quiver.corpus import generate_corpus
from f1quiver.errors import BadParameters, DimTooLarge, NicenessUnverified, TooLarge
from f1quiver.gradings import nice_length
from f1quiver.grassmannian import (
    admissible,
    chi_table,
    count_points_fq,
    euler_characteristic,
    interpolated_chi,
    lagrange_coefficients,
    q_binomial,
    rref_subspaces,
)
from f1quiver.quiver import Quiver, loop_quiver, path_quiver
from f1quiver.rep import F1Rep, base_change_matrices, closed_subsets, thin, two_strand


def point(n):
    return F1Rep(Quiver(("v",), ()), {"v": [f"e{i}" for i in range(n)]}, {})


def _brute_subspaces(n, q):
    """Every subspace of F_q^n as a frozenset of vectors, by closing spans of vector tuples."""
    vectors = list(itertools.product(range(q), repeat=n))
    seen = set()
    for k in range(n + 1):
        for gens in itertools.combinations(vectors, k):
            span = {tuple(sum(c * g[i] for c, g in zip(cs, gens)) % q for i in range(n))
                    for cs in itertools.product(range(q), repeat=k)} if k else {tuple([0] * n)}
            seen.add(frozenset(span))
    return seen


def _apply(mat, vec, q):
    return tuple(sum(r[j] * vec[j] for j in range(len(vec))) % q for r in mat)


def _brute_count(m, d, q):
    verts = m.base.vertices
    mats = base_change_matrices(m)
    per_vertex = []
    for v, k in zip(verts, d):
        n = len(m.basis_of[v])
        per_vertex.append([s for s in _brute_subspaces(n, q) if len(s) == q ** k])
    total = 0
    for choice in itertools.product(*per_vertex):
        sub = dict(zip(verts, choice))
        ok = True
        for a in m.base.arrows:
            if not mats[a.id] or not sub[a.src]:
                continue
            if any(_apply(mats[a.id], x, q) not in sub[a.tgt] for x in sub[a.src]):
                ok = False
                break
        total += ok
    return total


def test_q_binomial_values():
    assert q_binomial(4, 2, 2) == 35
    assert q_binomial(4, 0, 5) == 1 == q_binomial(4, 4, 5)
    assert q_binomial(3, 1, 3) == 13


def test_rref_enumeration_matches_q_binomial():
    for n, k, q in [(3, 1, 2), (4, 2, 2), (3, 2, 3), (2, 1, 5)]:
        assert len(rref_subspaces(n, k, q)) == q_binomial(n, k, q)
    assert len(rref_subspaces(3, 1, 2)) == len([s for s in _brute_subspaces(3, 2) if len(s) == 2])


@pytest.mark.parametrize("k", range(5))
def test_point_grassmannian(k):
    m = point(4)
    for q in (2, 3, 5):
        assert count_points_fq(m, (k,), q) == q_binomial(4, k, q)
    assert euler_characteristic(m, (k,))[0] == comb(4, k)


def test_two_strand_table_and_oracle():
    m = two_strand([[1, 1], [1, 1]])
    table = chi_table(m)
    assert table[(1,)] == 1 and table[(2,)] == 1
    assert all(count_points_fq(m, (1,), q) == 1 for q in (2, 3, 5))
    poly = interpolated_chi(m, (1,))
    assert poly.coefficients == (1,) and poly.value_at_one == 1


def test_three_loop_example():
    m = three_loop_example()
    assert euler_characteristic(m, (1,))[0] == 2
    with pytest.raises(TooLarge):
        interpolated_chi(m, (1,))
    assert not admissible(m, (1,))


def test_refuses_unverified():
    band = band_over_two_loops()
    with pytest.raises(NicenessUnverified):
        euler_characteristic(band, (1,))
    chi, prov = euler_characteristic(band, (1,), assume_nice=True)
    assert prov == "assumed" and chi == len(closed_subsets(band, (1,)))


def test_dimension_errors():
    m = thin(path_quiver(2))
    with pytest.raises(DimTooLarge):
        euler_characteristic(m, (2, 0))
    with pytest.raises(BadParameters):
        euler_characteristic(m, (1,))


def test_lagrange():
    # 1 + 2x + 3x^2
    xs = [2, 3, 5]
    ys = [1 + 2 * x + 3 * x * x for x in xs]
    assert lagrange_coefficients(xs, ys) == [1, 2, 3]


@settings(max_examples=40, deadline=None)
@given(reps(max_total=3, max_vertex=2))
def test_counts_match_brute_force(m):
    for d in itertools.product(*(range(k + 1) for k in m.dim)):
        for q in (2, 3):
            assert count_points_fq(m, d, q) == _brute_count(m, d, q)


@settings(max_examples=60, deadline=None)
@given(reps(max_total=5))
def test_chi_table_invariants(m):
    table = chi_table(m, assume_nice=True)
    assert table[tuple(0 for _ in m.dim)] == 1
    assert table[m.dim] == 1
    assert sum(table.entries.values()) == len(closed_subsets(m))


@settings(max_examples=25, deadline=None)
@given(reps(max_total=4, max_vertex=2))
def test_oracle_agreement_on_random_reps(m):
    assume(nice_length(m).finite)
    for d in itertools.product(*(range(k + 1) for k in m.dim)):
        if admissible(m, d):
            assert interpolated_chi(m, d).value_at_one == euler_characteristic(m, d)[0]


def test_corpus_agreement_small():
    for _, m in generate_corpus(seed=3, count=6):
        for d in itertools.product(*(range(k + 1) for k in m.dim)):
            if admissible(m, d):
                assert interpolated_chi(m, d).value_at_one == euler_characteristic(m, d)[0]


def test_loop_nilpotent_shift():
    # a single nilpotent Jordan block: exactly one invariant subspace per dimension
    m = F1Rep(loop_quiver(1), {"v": ["1", "2", "3"]}, {"a1": [("1", "2"), ("2", "3")]})
    for k in range(4):
        assert interpolated_chi(m, (k,)).coefficients == (1,)
