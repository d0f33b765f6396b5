from fractions import Fraction

import pytest
from helpers import reps
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from sympy import Matrix

from f1quiver.catalog import (
    band_over_two_loops,
    glued_over_four_loops,
    string_over_two_loops,
    three_loop_example,
)
from f1quiver.errors import Disconnected, InfiniteNiceLength, SameVertex
from f1quiver.gradings import (
    distinguishable,
    find_positive_grading,
    is_nice_grading,
    nice_length,
    realize_nice_sequence,
    sufficient_conditions_report,
    universal_iteration,
    verify_nice_sequence,
)
from f1quiver.quiver import acyclic_affine_a3, path_quiver
from f1quiver.rep import (
    band_rep,
    closed_subsets,
    decompose,
    direct_sum,
    induced,
    is_nilpotent,
    quotient,
    string_rep,
    thin,
    two_strand,
)

STRING_X0 = {"v1": (0, 0), "v2": (1, 0), "v3": (1, 1), "v4": (0, 1), "v5": (0, 0)}


def test_string_level_zero_table():
    m = string_over_two_loops()
    states = universal_iteration(m)
    first = states[0]
    assert first.rank == 2
    # with no cycles the lattice is spanned by the two colour classes
    assert dict(first.variables) == STRING_X0
    assert first.equal_pairs() == [("v1", "v5")]
    assert states[1].injective


def test_string_nice_length_and_sequence():
    m = string_over_two_loops()
    cert = nice_length(m)
    assert cert.kind == "finite" and cert.length == 1
    seq = realize_nice_sequence(m)
    assert len(seq) == 2 and verify_nice_sequence(m, seq)
    assert distinguishable(m, "v1", "v5")


def test_nice_grading_checker():
    m = string_over_two_loops()
    ok, table = is_nice_grading(m, {"v1": 0, "v2": 1, "v3": 3, "v4": 2, "v5": 0})
    assert ok and table.by_colour() == {"a1": {1}, "a2": {2}}
    assert not is_nice_grading(m, {"v1": 0, "v2": 0, "v3": 1, "v4": 0, "v5": 0})[0]
    prior = {"v1": 0, "v2": 1, "v3": 3, "v4": 2, "v5": 0}
    assert is_nice_grading(m, {"v1": 0, "v2": 1, "v3": 2, "v4": 3, "v5": 4}, [prior])[0]


def test_band_is_infinite():
    m = band_over_two_loops()
    states = universal_iteration(m)
    assert states[0].rank == 1
    x0 = states[0].variables
    assert x0["v1"] == x0["v3"] != x0["v2"] == x0["v4"]
    assert states[-1].level <= 1 and states[-1].partition == states[0].partition
    cert = nice_length(m)
    assert cert.kind == "infinite"
    assert set(cert.pairs) == {("v1", "v3"), ("v2", "v4")}
    assert not distinguishable(m, "v1", "v3")
    assert distinguishable(m, "v1", "v2")
    with pytest.raises(InfiniteNiceLength):
        realize_nice_sequence(m)
    with pytest.raises(SameVertex):
        distinguishable(m, "v1", "v1")


def test_trivial_cases():
    s = thin(path_quiver(2), ["1"])
    assert nice_length(s).length == 0
    assert realize_nice_sequence(s) == [{"1": 0}]
    tree = thin(path_quiver(3))
    assert verify_nice_sequence(tree, realize_nice_sequence(tree))


def test_bands_over_affine():
    quiv = acyclic_affine_a3()
    assert [nice_length(band_rep(quiv, d)).finite for d in (1, 2, 3)] == [True, False, False]


def test_universal_iteration_rejects_disconnected():
    s = thin(path_quiver(2), ["1"])
    with pytest.raises(Disconnected):
        universal_iteration(direct_sum(s, s))


def test_disconnected_needs_joint_construction():
    # each copy of S1 alone has nice length 0, but the two copies share every
    # colour constraint and only an indicator shift separates them
    s = thin(path_quiver(2), ["1"])
    assert nice_length(direct_sum(s, s)).length == 0
    band = band_rep(acyclic_affine_a3(), 1)
    assert nice_length(direct_sum(band, band)).finite


def test_sufficient_conditions_examples():
    rep = sufficient_conditions_report(three_loop_example())
    assert rep["c_nondegenerate_connected_fibres"].holds
    assert rep["a_positive_grading"].holds
    band2 = sufficient_conditions_report(band_rep(acyclic_affine_a3(), 2))
    assert band2["e_affine_primitive"].applicable and not band2["e_affine_primitive"].holds
    assert band2["e_affine_primitive"].verdict == "infinite"
    tree = sufficient_conditions_report(string_rep(acyclic_affine_a3(), 5, 1))
    assert tree["d_tree"].holds


def test_gluing_splits_lattice():
    square, zigzag, glued = glued_over_four_loops()
    assert glued.total_dim == 8 and nice_length(glued).finite
    ranks = [universal_iteration(x)[0].rank for x in (square, zigzag, glued)]
    assert ranks[2] == ranks[0] + ranks[1]
    assert sufficient_conditions_report(glued)["g_amalgam"].holds


def test_positive_gradings():
    for rows in ([[1], [2]], [[2], [1]], [[1, 1], [1, 1]], [[3], [3]]):
        m = two_strand(rows)
        g = find_positive_grading(m)
        ok, table = is_nice_grading(m, g)
        assert ok and table.positive and is_nilpotent(m)
    assert find_positive_grading(two_strand([[1, 2], [1, 1]])) is None


# -- properties ---------------------------------------------------------------

connected_reps = reps(max_total=6).map(lambda m: decompose(m)[0] if m.total_dim else m).filter(
    lambda m: m.total_dim > 0)


@settings(max_examples=80, deadline=None)
@given(connected_reps, st.data())
def test_basepoint_independence(m, data):
    b = data.draw(st.sampled_from(sorted(m.vertex_of)))
    ref = universal_iteration(m)
    other = universal_iteration(m, b)
    assert len(ref) == len(other)
    for x, y in zip(ref, other):
        assert x.equal_pairs() == y.equal_pairs()


@settings(max_examples=80, deadline=None)
@given(connected_reps)
def test_refinement_monotone_and_terminates(m):
    states = universal_iteration(m)
    assert len(states) <= max(1, m.total_dim)
    for prev, nxt in zip(states, states[1:]):
        for block in nxt.partition:
            assert any(block <= p for p in prev.partition)


@settings(max_examples=80, deadline=None)
@given(reps(max_total=6))
def test_finite_certificates_verify(m):
    cert = nice_length(m)
    if cert.finite:
        assert verify_nice_sequence(m, list(cert.gradings))
        assert len(cert.gradings) == cert.length + 1
    else:
        for u, v in cert.pairs:
            assert not distinguishable(m, u, v)


def _affine_fit(variables, grading):
    """Solve g(v) = c + w . X(v) exactly; True when consistent."""
    verts = sorted(variables)
    rows = [[1, *variables[v]] for v in verts]
    rhs = [grading[v] for v in verts]
    a = Matrix(rows)
    aug = a.row_join(Matrix(rhs))
    return a.rank() == aug.rank()


@settings(max_examples=60, deadline=None)
@given(connected_reps)
def test_realized_gradings_factor_through_variables(m):
    cert = nice_length(m)
    assume(cert.finite)
    states = universal_iteration(m)
    for state, g in zip(states, cert.gradings):
        assert _affine_fit(dict(state.variables), g)


@settings(max_examples=100, deadline=None)
@given(reps(max_total=6))
def test_positive_grading_soundness(m):
    g = find_positive_grading(m)
    if g is None:
        return
    ok, table = is_nice_grading(m, g)
    assert ok and all(d >= 1 for d in table.entries.values())
    assert is_nilpotent(m)


@settings(max_examples=60, deadline=None)
@given(reps(max_total=5), st.data())
def test_subquotient_monotone(m, data):
    cert = nice_length(m)
    assume(cert.finite)
    closed = sorted(closed_subsets(m), key=lambda s: (len(s), sorted(s)))
    upper = data.draw(st.sampled_from(closed))
    sub = induced(m, set(upper))
    inner = data.draw(st.sampled_from(sorted(closed_subsets(sub), key=lambda s: (len(s), sorted(s)))))
    piece = quotient(sub, set(inner))
    other = nice_length(piece)
    assert other.finite and other.length <= cert.length


def test_fraction_free_checker_on_three_loops():
    m = three_loop_example()
    cert = nice_length(m)
    assert cert.finite and cert.length <= 1
    assert all(isinstance(v, int) and not isinstance(v, Fraction) for v in cert.gradings[-1].values())
