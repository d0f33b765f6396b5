"""Quiver representations over F1 and their coefficient quivers."""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property

from .canon import canonical_key, component_keys
from .errors import (
    BadParameters,
    ClosureViolation,
    CodomainMismatch,
    ColorCollision,
    DimTooLarge,
    MalformedInput,
    NotASubquiver,
    NotASubrep,
    TriangleViolation,
    VertexColorMismatch,
)
from .quiver import (
    Arrow,
    Quiver,
    Winding,
    cycle_vertex_order,
    id_key,
    loop_quiver,
    sorted_ids,
)


def _freeze_basis(base: Quiver, basis) -> tuple:
    if isinstance(basis, Mapping):
        unknown = set(basis) - set(base.vertices)
        if unknown:
            raise MalformedInput(f"basis given for unknown vertices {sorted_ids(unknown)}")
        return tuple((v, tuple(sorted_ids(str(x) for x in basis.get(v, ())))) for v in base.vertices)
    return tuple(basis)


def _freeze_maps(base: Quiver, maps) -> tuple:
    if isinstance(maps, Mapping):
        unknown = set(maps) - set(base.arrow_map)
        if unknown:
            raise MalformedInput(f"maps given for unknown arrows {sorted_ids(unknown)}")
        out = []
        for a in base.arrows:
            pairs = maps.get(a.id, ())
            if isinstance(pairs, Mapping):
                pairs = pairs.items()
            out.append((a.id, tuple(sorted(((str(x), str(y)) for x, y in pairs),
                                           key=lambda p: id_key(p[0])))))
        return tuple(out)
    return tuple(maps)


@dataclass(frozen=True)
class F1Rep:
    """A representation: a finite basis per vertex and a partial injection per arrow.

    ``basis`` and ``maps`` may be passed as mappings; they are normalized to
    sorted tuples so that representations are hashable and compare by value.
    """

    base: Quiver
    basis: tuple
    maps: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "basis", _freeze_basis(self.base, self.basis))
        object.__setattr__(self, "maps", _freeze_maps(self.base, self.maps))
        where: dict[str, str] = {}
        for v, names in self.basis:
            for x in names:
                if x in where:
                    raise MalformedInput(f"basis element {x!r} appears twice")
                where[x] = v
        for aid, pairs in self.maps:
            a = self.base.arrow(aid)
            seen_src, seen_tgt = set(), set()
            for x, y in pairs:
                if where.get(x) != a.src or where.get(y) != a.tgt:
                    raise MalformedInput(f"map {aid}: {x}->{y} does not respect the arrow's endpoints")
                if x in seen_src or y in seen_tgt:
                    raise MalformedInput(f"map {aid} is not a partial injection")
                seen_src.add(x)
                seen_tgt.add(y)

    # views ---------------------------------------------------------------
    @cached_property
    def basis_of(self) -> dict[str, tuple[str, ...]]:
        return dict(self.basis)

    @cached_property
    def map_of(self) -> dict[str, dict[str, str]]:
        return {aid: dict(pairs) for aid, pairs in self.maps}

    @cached_property
    def vertex_of(self) -> dict[str, str]:
        return {x: v for v, names in self.basis for x in names}

    @property
    def elements(self) -> list[str]:
        return sorted_ids(self.vertex_of)

    @property
    def dim(self) -> tuple[int, ...]:
        return tuple(len(self.basis_of[v]) for v in self.base.vertices)

    @property
    def total_dim(self) -> int:
        return len(self.vertex_of)

    @cached_property
    def winding(self) -> Winding:
        """The coefficient quiver with its colouring over the base."""
        arrows, amap = [], {}
        for aid, pairs in self.maps:
            for x, y in pairs:
                arrows.append(Arrow(f"{aid}|{x}", x, y))
                amap[f"{aid}|{x}"] = aid
        gamma = Quiver(tuple(self.vertex_of), tuple(arrows))
        return Winding(gamma, self.base, dict(self.vertex_of), amap)

    @cached_property
    def key(self) -> str:
        return canonical_key(self.winding)

    def is_isomorphic(self, other: F1Rep) -> bool:
        return self.base == other.base and self.key == other.key

    # serialization -------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "quiver": self.base.to_json(),
            "basis": {v: list(names) for v, names in self.basis},
            "maps": {aid: [list(p) for p in pairs] for aid, pairs in self.maps},
        }

    @classmethod
    def from_json(cls, data) -> F1Rep:
        if not isinstance(data, Mapping) or "quiver" not in data:
            raise MalformedInput("a representation needs a 'quiver' field")
        base = Quiver.from_json(data["quiver"])
        try:
            return cls(base, dict(data.get("basis", {})), dict(data.get("maps", {})))
        except (TypeError, ValueError, KeyError) as exc:
            if isinstance(exc, MalformedInput):
                raise
            raise MalformedInput(f"bad representation record: {exc}") from exc


def parse_rep(text: str) -> F1Rep:
    try:
        return F1Rep.from_json(json.loads(text))
    except json.JSONDecodeError as exc:
        raise MalformedInput(str(exc)) from exc


def rep_from_winding(c: Winding) -> F1Rep:
    if not isinstance(c, Winding):
        c = Winding(c.domain, c.codomain, c.vmap, c.amap)
    basis: dict[str, list[str]] = {v: [] for v in c.codomain.vertices}
    for x, v in c.vmap.items():
        basis[v].append(x)
    maps: dict[str, list] = {a.id: [] for a in c.codomain.arrows}
    for a in c.domain.arrows:
        maps[c.amap[a.id]].append((a.src, a.tgt))
    return F1Rep(c.codomain, basis, maps)


def zero_rep(base: Quiver) -> F1Rep:
    return F1Rep(base, {}, {})


def induced(m: F1Rep, elements: Iterable[str]) -> F1Rep:
    """The representation carried by a subset of basis elements (arrows between them kept)."""
    keep = set(elements)
    basis = {v: [x for x in names if x in keep] for v, names in m.basis}
    maps = {aid: [(x, y) for x, y in pairs if x in keep and y in keep] for aid, pairs in m.maps}
    return F1Rep(m.base, basis, maps)


def rename(m: F1Rep, f) -> F1Rep:
    basis = {v: [f(x) for x in names] for v, names in m.basis}
    maps = {aid: [(f(x), f(y)) for x, y in pairs] for aid, pairs in m.maps}
    return F1Rep(m.base, basis, maps)


def direct_sum(*reps: F1Rep) -> F1Rep:
    """Direct sum. Names are suffixed with ``#<summand index>`` only when they clash."""
    if not reps:
        raise BadParameters("direct_sum needs at least one summand")
    base = reps[0].base
    for r in reps[1:]:
        if r.base != base:
            raise CodomainMismatch("summands live over different quivers")
    names = [x for r in reps for x in r.vertex_of]
    if len(set(names)) != len(names):
        reps = tuple(rename(r, lambda x, i=i: f"{x}#{i}") for i, r in enumerate(reps, 1))
    basis = {v: [x for r in reps for x in r.basis_of[v]] for v in base.vertices}
    maps = {a.id: [p for r in reps for p in r.map_of[a.id].items()] for a in base.arrows}
    return F1Rep(base, basis, maps)


def decompose(m: F1Rep) -> list[F1Rep]:
    """Indecomposable summands (connected components of the coefficient quiver)."""
    parts = [(k, induced(m, comp)) for k, comp in component_keys(m.winding)]
    parts.sort(key=lambda kv: (kv[0], id_key(kv[1].elements[0])))
    return [r for _, r in parts]


def is_indecomposable(m: F1Rep) -> bool:
    return m.total_dim > 0 and m.winding.domain.is_connected


def is_nilpotent(m: F1Rep) -> bool:
    """Whether the coefficient quiver has no oriented cycle."""
    gamma = m.winding.domain
    indeg = {v: len(gamma.in_arrows[v]) for v in gamma.vertices}
    stack = [v for v, d in indeg.items() if d == 0]
    seen = 0
    while stack:
        v = stack.pop()
        seen += 1
        for a in gamma.out_arrows[v]:
            indeg[a.tgt] -= 1
            if indeg[a.tgt] == 0:
                stack.append(a.tgt)
    return seen == len(gamma.vertices)


# ---------------------------------------------------------------------------
# subrepresentations


def _sccs(vertices: list[str], succ: dict[str, list[str]]) -> list[list[str]]:
    """Strongly connected components in reverse topological order (sinks first)."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on: set[str] = set()
    stack: list[str] = []
    out: list[list[str]] = []
    counter = 0
    for root in vertices:
        if root in index:
            continue
        work = [(root, iter(succ[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on.add(w)
                    work.append((w, iter(succ[w])))
                    advanced = True
                    break
                if w in on:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
    return out


def is_closed(m: F1Rep, elements: Iterable[str]) -> bool:
    s = set(elements)
    return all(y in s for pairs in m.map_of.values() for x, y in pairs.items() if x in s)


def closed_subsets(m: F1Rep, dim: Sequence[int] | None = None) -> list[frozenset[str]]:
    """All arrow-image-closed sets of basis elements, optionally of a given dimension vector."""
    verts = m.base.vertices
    vidx = {v: i for i, v in enumerate(verts)}
    if dim is not None:
        dim = tuple(dim)
        if len(dim) != len(verts):
            raise BadParameters("dimension vector has the wrong length")
        if any(d < 0 or d > e for d, e in zip(dim, m.dim)):
            raise DimTooLarge(f"{dim} is not bounded by {m.dim}")
    gamma = m.winding.domain
    succ = {v: [a.tgt for a in gamma.out_arrows[v]] for v in gamma.vertices}
    comps = _sccs(list(gamma.vertices), succ)
    comp_of = {x: i for i, c in enumerate(comps) for x in c}
    comp_succ = [{comp_of[y] for x in c for y in succ[x]} - {i} for i, c in enumerate(comps)]
    weight = []
    for c in comps:
        w = [0] * len(verts)
        for x in c:
            w[vidx[m.vertex_of[x]]] += 1
        weight.append(w)
    remaining = [[0] * len(verts) for _ in range(len(comps) + 1)]
    for i in range(len(comps) - 1, -1, -1):
        remaining[i] = [a + b for a, b in zip(remaining[i + 1], weight[i])]

    results: list[frozenset[str]] = []
    chosen = [False] * len(comps)
    count = [0] * len(verts)

    def rec(i: int):
        if dim is not None:
            if any(c > d for c, d in zip(count, dim)):
                return
            if any(c + r < d for c, r, d in zip(count, remaining[i], dim)):
                return
        if i == len(comps):
            results.append(frozenset(x for j, c in enumerate(comps) if chosen[j] for x in c))
            return
        rec(i + 1)
        if all(chosen[j] for j in comp_succ[i]):
            chosen[i] = True
            for k, w in enumerate(weight[i]):
                count[k] += w
            rec(i + 1)
            for k, w in enumerate(weight[i]):
                count[k] -= w
            chosen[i] = False

    rec(0)
    return results


def subrepresentations(m: F1Rep, dim: Sequence[int] | None = None) -> list[F1Rep]:
    """Subrepresentations, sorted by canonical key and then by element subset."""
    subs = [(s, induced(m, s)) for s in closed_subsets(m, dim)]
    subs.sort(key=lambda t: (t[1].key, [id_key(x) for x in sorted_ids(t[0])]))
    return [r for _, r in subs]


def quotient(m: F1Rep, sub) -> F1Rep:
    """``m / sub`` where ``sub`` is a subrepresentation or a closed set of element names."""
    elements = set(sub.vertex_of) if isinstance(sub, F1Rep) else set(sub)
    if not elements <= set(m.vertex_of):
        raise NotASubrep("not a subset of the basis")
    if isinstance(sub, F1Rep):
        for aid, pairs in sub.map_of.items():
            for x, y in pairs.items():
                if m.map_of[aid].get(x) != y:
                    raise NotASubrep(f"map {aid} differs on {x}")
    if not is_closed(m, elements):
        raise NotASubrep("subset is not closed under the arrow maps")
    return induced(m, set(m.vertex_of) - elements)


def restrict(m: F1Rep, sub: Quiver) -> F1Rep:
    """Restriction to a subquiver of the base."""
    if not sub.is_subquiver_of(m.base):
        raise NotASubquiver("not a subquiver of the base")
    basis = {v: m.basis_of[v] for v in sub.vertices}
    maps = {a.id: m.map_of[a.id].items() for a in sub.arrows}
    return F1Rep(sub, basis, maps)


def amalgam(m: F1Rep, n: F1Rep, u: str, v: str) -> F1Rep:
    """Glue the element ``u`` of ``m`` to the element ``v`` of ``n``."""
    if m.base != n.base:
        raise CodomainMismatch("amalgam needs a common base")
    if u not in m.vertex_of or v not in n.vertex_of:
        raise MalformedInput("gluing points must be basis elements")
    if m.vertex_of[u] != n.vertex_of[v]:
        raise VertexColorMismatch(f"{u} and {v} lie over different vertices")
    taken = set(m.vertex_of)
    suffix = ""
    while any(x + suffix in taken for x in n.vertex_of if x != v):
        suffix += "'"
    n2 = rename(n, lambda x: u if x == v else x + suffix)
    basis = {w: list(m.basis_of[w]) + [x for x in n2.basis_of[w] if x != u] for w in m.base.vertices}
    maps = {}
    for a in m.base.arrows:
        pm, pn = m.map_of[a.id], n2.map_of[a.id]
        if (u in pm and u in pn) or (u in pm.values() and u in pn.values()):
            raise ColorCollision(f"both pieces use colour {a.id} at the glued element")
        maps[a.id] = list(pm.items()) + list(pn.items())
    return F1Rep(m.base, basis, maps)


# ---------------------------------------------------------------------------
# builders


def thin(base: Quiver, sub: Quiver | Iterable[str] | None = None) -> F1Rep:
    """Thin representation supported on a subquiver; elements are named after its vertices.

    A vertex set means the full subquiver on it.
    """
    if sub is None:
        sub = base
    elif not isinstance(sub, Quiver):
        sub = base.subquiver(sub)
    if not sub.is_subquiver_of(base):
        raise NotASubquiver("support is not a subquiver")
    return F1Rep(base, {v: [v] for v in sub.vertices}, {a.id: [(a.src, a.tgt)] for a in sub.arrows})


def string_rep(base: Quiver, d: int, i: int) -> F1Rep:
    """Indecomposable string of dimension ``d`` on a cycle, starting at the ``i``-th vertex.

    Vertices of the cycle are taken in the order produced by walking from the
    least vertex along its least arrow; ``i`` is 1-based in that order.
    Element ``k`` lies over vertex ``(i + k - 2) mod n + 1``.
    """
    order, steps = cycle_vertex_order(base)
    n = len(order)
    if d < 1 or not 1 <= i <= n:
        raise BadParameters(f"need d >= 1 and 1 <= i <= {n}")
    pos = [(i - 1 + k) % n for k in range(d)]
    basis = {v: [] for v in base.vertices}
    for k, p in enumerate(pos, 1):
        basis[order[p]].append(str(k))
    maps = {a.id: [] for a in base.arrows}
    for k in range(1, d):
        a, sign = steps[pos[k - 1]]
        maps[a.id].append((str(k), str(k + 1)) if sign == 1 else (str(k + 1), str(k)))
    return F1Rep(base, basis, maps)


def band_rep(base: Quiver, d: int) -> F1Rep:
    """The cycle wound ``d`` times around itself (a single band of dimension ``d * n``)."""
    order, steps = cycle_vertex_order(base)
    n = len(order)
    if d < 1:
        raise BadParameters("need d >= 1")
    total = d * n
    basis = {v: [] for v in base.vertices}
    for k in range(1, total + 1):
        basis[order[(k - 1) % n]].append(str(k))
    maps = {a.id: [] for a in base.arrows}
    for k in range(1, total + 1):
        nxt = k % total + 1
        a, sign = steps[(k - 1) % n]
        maps[a.id].append((str(k), str(nxt)) if sign == 1 else (str(nxt), str(k)))
    return F1Rep(base, basis, maps)


def two_strand(lengths: Sequence[Sequence[int]], tails: tuple[int, int] = (0, 0)) -> F1Rep:
    """Ladder over two loops: for each rung a path of ``a1`` of length ``m_i`` and of ``a2`` of length ``n_i``.

    Rungs join ladder points ``p_0 .. p_d``. Optional ``a1`` tails of the
    given lengths run into ``p_0`` and out of ``p_d``. Elements are numbered
    ``1, 2, ...`` in order of creation.
    """
    if len(lengths) != 2 or len(lengths[0]) != len(lengths[1]) or not lengths[0]:
        raise BadParameters("need two equally long non-empty rows")
    if any(x < 1 for row in lengths for x in row) or any(t < 0 for t in tails):
        raise BadParameters("path lengths must be positive, tails non-negative")
    counter = [0]

    def fresh() -> str:
        counter[0] += 1
        return str(counter[0])

    pairs = {"a1": [], "a2": []}

    def path(colour, start, end, length):
        prev = start
        for _ in range(length - 1):
            x = fresh()
            pairs[colour].append((prev, x))
            prev = x
        pairs[colour].append((prev, end))

    head = [fresh() for _ in range(tails[0])]
    p = fresh()
    for a, b in zip(head, head[1:] + [p]):
        pairs["a1"].append((a, b))
    for m_i, n_i in zip(*lengths):
        blue, red = [], []
        # intermediate names are allocated before the next ladder point
        start = p
        for _ in range(m_i - 1):
            blue.append(fresh())
        for _ in range(n_i - 1):
            red.append(fresh())
        p = fresh()
        for colour, mids in (("a1", blue), ("a2", red)):
            chain = [start] + mids + [p]
            pairs[colour].extend(zip(chain, chain[1:]))
    prev = p
    for _ in range(tails[1]):
        x = fresh()
        pairs["a1"].append((prev, x))
        prev = x
    base = loop_quiver(2)
    return F1Rep(base, {"v": [str(k) for k in range(1, counter[0] + 1)]}, pairs)


def base_change_matrices(m: F1Rep) -> dict[str, list[list[int]]]:
    """0/1 matrix per arrow, rows indexed by the target basis, columns by the source basis."""
    out = {}
    for a in m.base.arrows:
        src, tgt = m.basis_of[a.src], m.basis_of[a.tgt]
        col = {x: j for j, x in enumerate(src)}
        row = {y: i for i, y in enumerate(tgt)}
        mat = [[0] * len(src) for _ in tgt]
        for x, y in m.map_of[a.id].items():
            mat[row[y]][col[x]] = 1
        out[a.id] = mat
    return out


# ---------------------------------------------------------------------------
# morphisms


def _check_arrow_closed(m: F1Rep, s: set[str], forward: bool) -> bool:
    for pairs in m.map_of.values():
        for x, y in pairs.items():
            if forward and x in s and y not in s:
                return False
            if not forward and y in s and x not in s:
                return False
    return True


@dataclass(frozen=True, eq=False)
class WindingMorphism:
    """A morphism ``source -> target``: a predecessor-closed part ``domain_part`` of the
    source mapped isomorphically onto a successor-closed part ``image_part`` of the target.

    Elements outside ``domain_part`` are sent to zero.
    """

    source: F1Rep
    target: F1Rep
    domain_part: frozenset
    image_part: frozenset
    iso: Mapping[str, str]

    def __post_init__(self):
        if self.source.base != self.target.base:
            raise CodomainMismatch("morphism between representations of different quivers")
        object.__setattr__(self, "domain_part", frozenset(self.domain_part))
        object.__setattr__(self, "image_part", frozenset(self.image_part))
        object.__setattr__(self, "iso", dict(self.iso))
        u, d, iso = self.domain_part, self.image_part, self.iso
        if not u <= set(self.source.vertex_of) or not d <= set(self.target.vertex_of):
            raise MalformedInput("parts must consist of basis elements")
        if not _check_arrow_closed(self.source, set(u), forward=False):
            raise ClosureViolation("domain part must contain every element mapping into it")
        if not _check_arrow_closed(self.target, set(d), forward=True):
            raise ClosureViolation("image part must be closed under the arrow maps")
        if set(iso) != u or set(iso.values()) != d or len(set(iso.values())) != len(iso):
            raise TriangleViolation("iso must be a bijection between the parts")
        for x, y in iso.items():
            if self.source.vertex_of[x] != self.target.vertex_of[y]:
                raise TriangleViolation(f"{x} and {y} lie over different vertices")
        for aid in self.source.map_of:
            fm, fn = self.source.map_of[aid], self.target.map_of[aid]
            for x in u:
                y = fm.get(x)
                img = fn.get(iso[x])
                if (y in u) != (img in d):
                    raise TriangleViolation(f"arrow {aid} at {x} is not matched")
                if y in u and iso[y] != img:
                    raise TriangleViolation(f"arrow {aid} at {x} is not matched")

    def __eq__(self, other):
        if not isinstance(other, WindingMorphism):
            return NotImplemented
        return (self.source, self.target, self.domain_part, self.iso) == (
            other.source, other.target, other.domain_part, other.iso)

    __hash__ = None

    @classmethod
    def identity(cls, m: F1Rep) -> WindingMorphism:
        names = set(m.vertex_of)
        return cls(m, m, names, names, {x: x for x in names})

    @classmethod
    def zero(cls, m: F1Rep, n: F1Rep) -> WindingMorphism:
        return cls(m, n, (), (), {})


def compose(psi: WindingMorphism, phi: WindingMorphism) -> WindingMorphism:
    """``psi o phi`` for ``phi: M -> N`` and ``psi: N -> L``."""
    if phi.target != psi.source:
        raise CodomainMismatch("morphisms are not composable")
    mid = psi.domain_part & phi.image_part
    back = {y: x for x, y in phi.iso.items()}
    dom = {back[y] for y in mid}
    iso = {x: psi.iso[phi.iso[x]] for x in dom}
    return WindingMorphism(phi.source, psi.target, dom, set(iso.values()), iso)


def pushforward_morphism(phi: WindingMorphism) -> dict[str, str | None]:
    """Induced linear map on bases: ``x -> iso(x)`` on the domain part, ``None`` (zero) elsewhere."""
    return {x: phi.iso.get(x) for x in phi.source.vertex_of}


def apply_linear(m: F1Rep, vec: Mapping[str, int], arrow: str) -> dict[str, int]:
    """Apply the arrow map of ``m`` to a vector given in basis coordinates."""
    f = m.map_of[arrow]
    out: dict[str, int] = {}
    for x, c in vec.items():
        if x in f and c:
            out[f[x]] = out.get(f[x], 0) + c
    return out
