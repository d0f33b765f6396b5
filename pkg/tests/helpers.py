"""Strategies and small builders shared by the test modules."""

from hypothesis import strategies as st

from f1quiver.quiver import Arrow, Quiver, Winding, named_quiver
from f1quiver.rep import F1Rep

BASES = ("A2", "A3", "L1", "L2", "Atilde3", "C2")


@st.composite
def reps(draw, bases=BASES, max_vertex=3, max_total=6, nilpotent=False):
    base = named_quiver(draw(st.sampled_from(bases)))
    dims = [draw(st.integers(0, max_vertex)) for _ in base.vertices]
    while sum(dims) > max_total:
        i = dims.index(max(dims))
        dims[i] -= 1
    basis = {v: [f"{v}.{k}" for k in range(1, d + 1)] for v, d in zip(base.vertices, dims)}
    height = {}
    if nilpotent:
        elements = [x for names in basis.values() for x in names]
        order = draw(st.permutations(elements))
        height = {x: i for i, x in enumerate(order)}
    maps = {}
    for a in base.arrows:
        src, tgt = basis[a.src], basis[a.tgt]
        used = set()
        pairs = []
        for x in src:
            options = [y for y in tgt if y not in used and (not nilpotent or height[y] > height[x])]
            choice = draw(st.sampled_from([None] + options))
            if choice is not None:
                used.add(choice)
                pairs.append((x, choice))
        maps[a.id] = pairs
    return F1Rep(base, basis, maps)


@st.composite
def renamings(draw, rep):
    names = list(rep.vertex_of)
    shuffled = draw(st.permutations(names))
    table = {x: f"n{y}" for x, y in zip(names, range(len(shuffled)))}
    perm = dict(zip(names, shuffled))
    return lambda x: table[perm[x]]


def quiver(vertices, arrows):
    return Quiver(tuple(vertices), tuple(Arrow(*a) for a in arrows))


def three_vertex_example() -> Winding:
    """Five elements over a quiver with a loop; three of them share a vertex."""
    gamma = quiver(["v1", "v2", "v3", "v3'", "v3''"],
                   [("p", "v1", "v3'"), ("r", "v2", "v3'"), ("s", "v3", "v3'"), ("t", "v3'", "v3''")])
    base = quiver(["v1", "v2", "v3"], [("alpha", "v1", "v3"), ("beta", "v2", "v3"), ("gamma", "v3", "v3")])
    vmap = {"v1": "v1", "v2": "v2", "v3": "v3", "v3'": "v3", "v3''": "v3"}
    amap = {"p": "alpha", "r": "beta", "s": "gamma", "t": "gamma"}
    return Winding(gamma, base, vmap, amap)
