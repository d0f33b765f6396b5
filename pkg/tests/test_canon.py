import itertools

from helpers import renamings, reps, three_vertex_example
from hypothesis import given, settings
from hypothesis import strategies as st

from f1quiver.canon import automorphism_count, canonical_key, component_keys
from f1quiver.catalog import band_over_two_loops, string_over_two_loops
from f1quiver.quiver import Winding
from f1quiver.rep import direct_sum, rename, thin


def _brute_automorphisms(m):
    """Bijections of the basis preserving vertices and every arrow map."""
    names = list(m.vertex_of)
    count = 0
    for perm in itertools.permutations(names):
        f = dict(zip(names, perm))
        if any(m.vertex_of[x] != m.vertex_of[y] for x, y in f.items()):
            continue
        if all({(f[x], f[y]) for x, y in m.map_of[a].items()} == set(m.map_of[a].items())
               for a in m.map_of):
            count += 1
    return count


def _brute_isomorphic(a, b):
    names_a, names_b = list(a.vertex_of), list(b.vertex_of)
    if len(names_a) != len(names_b):
        return False
    for perm in itertools.permutations(names_b):
        f = dict(zip(names_a, perm))
        if any(a.vertex_of[x] != b.vertex_of[y] for x, y in f.items()):
            continue
        if all({(f[x], f[y]) for x, y in a.map_of[k].items()} == set(b.map_of[k].items())
               for k in a.map_of):
            return True
    return False


def test_string_and_band_keys_differ():
    assert string_over_two_loops().key != band_over_two_loops().key


def test_relabelled_example_winding_has_same_key():
    w = three_vertex_example()
    names = {"v1": "z", "v2": "y", "v3": "x", "v3'": "w", "v3''": "u"}
    gamma = w.domain
    from f1quiver.quiver import Arrow, Quiver

    renamed = Quiver(tuple(names[v] for v in gamma.vertices),
                     tuple(Arrow("k" + a.id, names[a.src], names[a.tgt]) for a in gamma.arrows))
    other = Winding(renamed, w.codomain, {names[v]: w.vmap[v] for v in gamma.vertices},
                    {"k" + a: c for a, c in w.amap.items()})
    assert canonical_key(other) == canonical_key(w)


def test_empty_key():
    from f1quiver.quiver import path_quiver
    from f1quiver.rep import zero_rep

    assert zero_rep(path_quiver(2)).key == "0"


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_key_invariant_under_renaming(data):
    m = data.draw(reps())
    f = data.draw(renamings(m))
    assert rename(m, f).key == m.key


@settings(max_examples=150, deadline=None)
@given(reps(max_total=4), reps(max_total=4))
def test_key_equality_matches_brute_force_isomorphism(a, b):
    if a.base != b.base:
        return
    assert (a.key == b.key) == _brute_isomorphic(a, b)


@settings(max_examples=120, deadline=None)
@given(reps(max_total=5))
def test_automorphism_count_brute_force(m):
    assert automorphism_count(m.winding) == _brute_automorphisms(m)


def test_automorphisms_of_repeated_summands():
    from f1quiver.quiver import path_quiver

    s1 = thin(path_quiver(2), ["1"])
    assert automorphism_count(direct_sum(s1, s1, s1).winding) == 6


def test_component_keys_count():
    m = direct_sum(string_over_two_loops(), band_over_two_loops())
    assert len(component_keys(m.winding)) == 2


def test_enumerated_classes_pairwise_non_isomorphic():
    from f1quiver.hall import connected_windings
    from f1quiver.quiver import loop_quiver

    classes = connected_windings(loop_quiver(2), 3)
    assert len({m.key for m in classes}) == len(classes)
    for a, b in itertools.combinations(classes, 2):
        assert a.dim != b.dim or not _brute_isomorphic(a, b)
