import itertools
import json

import pytest
from helpers import reps, three_vertex_example
from hypothesis import given, settings

from f1quiver.catalog import (
    double_arrow_pseudotree,
    glued_over_four_loops,
    three_loop_example,
)
from f1quiver.errors import (
    ClosureViolation,
    ColorCollision,
    NotASubrep,
    TriangleViolation,
)
from f1quiver.quiver import (
    Quiver,
    Winding,
    acyclic_affine_a3,
    central_cycle,
    loop_quiver,
    path_quiver,
)
from f1quiver.rep import (
    F1Rep,
    WindingMorphism,
    amalgam,
    band_rep,
    base_change_matrices,
    closed_subsets,
    compose,
    decompose,
    direct_sum,
    induced,
    is_closed,
    is_indecomposable,
    is_nilpotent,
    parse_rep,
    pushforward_morphism,
    quotient,
    rep_from_winding,
    restrict,
    string_rep,
    subrepresentations,
    thin,
    two_strand,
    zero_rep,
)


def test_example_winding_to_rep():
    m = rep_from_winding(three_vertex_example())
    assert len(m.basis_of["v3"]) == 3
    assert m.map_of["gamma"] == {"v3": "v3'", "v3'": "v3''"}


def test_zero_and_identity_windings():
    base = path_quiver(3)
    empty = Winding(Quiver((), ()), base, {}, {})
    assert rep_from_winding(empty).total_dim == 0
    ident = Winding(base, base, {v: v for v in base.vertices}, {a.id: a.id for a in base.arrows})
    m = rep_from_winding(ident)
    assert m.dim == (1, 1, 1) and m.is_isomorphic(thin(base))


def test_rep_to_winding():
    assert zero_rep(path_quiver(2)).winding.domain.vertices == ()
    m = two_strand([[1, 1], [1, 1]])
    gamma = m.winding.domain
    assert len(gamma.vertices) == 3 and len(gamma.arrows) == 4
    simple = thin(path_quiver(2), ["1"])
    assert len(simple.winding.domain.vertices) == 1 and not simple.winding.domain.arrows


@settings(max_examples=100, deadline=None)
@given(reps())
def test_winding_round_trip(m):
    assert rep_from_winding(m.winding).is_isomorphic(m)
    assert parse_rep(json.dumps(m.to_json())) == m


def _string_pair():
    base = path_quiver(2)
    return base, thin(base), thin(base, ["2"]), thin(base, ["1"])


def test_morphism_identity_and_closure():
    base, p, s2, s1 = _string_pair()
    ident = WindingMorphism.identity(p)
    inc = WindingMorphism(s2, p, {"2"}, {"2"}, {"2": "2"})
    assert compose(ident, inc) == inc
    assert pushforward_morphism(ident) == {"1": "1", "2": "2"}
    # image part {1} is not closed under the arrow 1 -> 2
    with pytest.raises(ClosureViolation):
        WindingMorphism(s1, p, {"1"}, {"1"}, {"1": "1"})
    # domain part {2} of P misses the element 1 that maps into it
    with pytest.raises(ClosureViolation):
        WindingMorphism(p, s2, {"2"}, {"2"}, {"2": "2"})
    with pytest.raises(TriangleViolation):
        WindingMorphism(s2, s1, {"2"}, {"1"}, {"2": "1"})


def test_morphism_composition_intersection():
    base, p, s2, s1 = _string_pair()
    proj = WindingMorphism(p, s1, {"1"}, {"1"}, {"1": "1"})  # P onto its top
    inc = WindingMorphism(s2, p, {"2"}, {"2"}, {"2": "2"})
    # S2 -> P -> S1 is zero: the image {2} misses the domain part {1}
    assert compose(proj, inc) == WindingMorphism.zero(s2, s1)
    assert pushforward_morphism(compose(proj, inc)) == {"2": None}


def test_pushforward_on_string():
    from f1quiver.catalog import string_over_two_loops

    m = string_over_two_loops()
    # the sub-string v3 (a sink) is successor closed; the quotient map keeps the rest
    part = {"v1", "v2", "v4", "v5"}
    q = quotient(m, {"v3"})
    phi = WindingMorphism(m, q, part, part, {x: x for x in part})
    push = pushforward_morphism(phi)
    assert push["v3"] is None and all(push[x] == x for x in part)


def test_decompose_examples():
    base = path_quiver(3)
    s = thin(base, ["1"])
    two = direct_sum(thin(base, ["1", "2"]), thin(base, ["3"]))
    assert len(decompose(two)) == 2
    assert decompose(thin(base)) == [thin(base)]
    parts = decompose(direct_sum(s, s))
    assert len(parts) == 2 and all(x.is_isomorphic(s) for x in parts)


@settings(max_examples=100, deadline=None)
@given(reps(max_total=4), reps(max_total=4))
def test_decompose_direct_sum(a, b):
    if a.base != b.base:
        return
    keys = sorted(p.key for p in decompose(direct_sum(a, b)))
    assert keys == sorted([p.key for p in decompose(a)] + [p.key for p in decompose(b)])
    assert all(is_indecomposable(p) for p in decompose(a))


def test_nilpotency():
    assert is_nilpotent(two_strand([[1], [2]]))
    cyc = Quiver(("1", "2"), tuple())
    from f1quiver.quiver import named_quiver

    c3 = named_quiver("C3")
    assert not is_nilpotent(thin(c3))
    assert is_nilpotent(zero_rep(cyc))


def _brute_closed(m):
    names = list(m.vertex_of)
    return {frozenset(c) for k in range(len(names) + 1) for c in itertools.combinations(names, k)
            if is_closed(m, c)}


@settings(max_examples=100, deadline=None)
@given(reps())
def test_closed_subsets_match_brute_force(m):
    assert set(closed_subsets(m)) == _brute_closed(m)
    assert len(closed_subsets(m)) == len(_brute_closed(m))


def test_subrepresentations_examples():
    s = thin(path_quiver(2), ["1"])
    assert len(subrepresentations(s)) == 2
    m = three_loop_example()
    assert len(subrepresentations(m, (1,))) == 2


def test_quotients():
    base, p, s2, s1 = _string_pair()
    assert quotient(p, zero_rep(base)).is_isomorphic(p)
    assert quotient(p, p).total_dim == 0
    assert quotient(p, s2).is_isomorphic(s1)
    with pytest.raises(NotASubrep):
        quotient(p, {"1"})


def test_restrict():
    base, rep = double_arrow_pseudotree()
    assert restrict(rep, base) == rep
    cyc = central_cycle(base)
    r = restrict(rep, cyc)
    assert r.base == cyc and r.total_dim == 4 and len(decompose(r)) == 1
    assert restrict(rep, Quiver((), ())).total_dim == 0


def test_amalgam():
    square, zigzag, glued = glued_over_four_loops()
    assert glued.total_dim == 8
    point = F1Rep(square.base, {"v": ["z"]}, {})
    assert amalgam(square, point, "x3", "z").is_isomorphic(square)
    with pytest.raises(ColorCollision):
        amalgam(square, square, "x1", "x1")


def test_string_builder():
    m = string_rep(acyclic_affine_a3(), 8, 3)
    assert m.basis_of["1"] == ("2", "5", "8")
    assert m.basis_of["2"] == ("3", "6")
    assert m.basis_of["3"] == ("1", "4", "7")
    assert m.winding.domain.cycle_rank == 0 and is_indecomposable(m)


def test_band_builder():
    quiv = acyclic_affine_a3()
    assert band_rep(quiv, 1).is_isomorphic(thin(quiv))
    two = band_rep(quiv, 2)
    assert two.total_dim == 6 and is_indecomposable(two) and is_nilpotent(two)


def test_two_strand_and_matrices():
    m = two_strand([[1, 1], [1, 1]])
    assert m.map_of["a1"] == {"1": "2", "2": "3"} == m.map_of["a2"]
    mats = base_change_matrices(m)
    shift = [[0, 0, 0], [1, 0, 0], [0, 1, 0]]
    assert mats["a1"] == shift == mats["a2"]
    assert base_change_matrices(zero_rep(loop_quiver(1))) == {"a1": []}


def test_induced_keeps_internal_arrows():
    m = two_strand([[1, 1], [1, 1]])
    sub = induced(m, {"2", "3"})
    assert sub.map_of["a1"] == {"2": "3"}
