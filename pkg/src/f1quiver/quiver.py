"""Quivers, quiver maps and windings, cycle spaces and shape classification."""

from __future__ import annotations

import json
import re
from collections import deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property

from .errors import (
    DanglingEndpoint,
    Disconnected,
    DuplicateId,
    InvalidQuiverMap,
    InvalidWinding,
    MalformedInput,
    NotACycle,
    NotPseudotree,
)

_CHUNK = re.compile(r"(\d+)")


def id_key(ident: str) -> tuple:
    """Sort key for identifiers: text chunks compare as text, digit runs as numbers.

    This keeps ``v2`` before ``v10`` while staying a total, deterministic order.
    """
    parts = []
    for chunk in _CHUNK.split(ident):
        if not chunk:
            continue
        parts.append((0, int(chunk), chunk) if chunk.isdigit() else (1, 0, chunk))
    return tuple(parts)


def sorted_ids(ids: Iterable[str]) -> list[str]:
    return sorted(ids, key=id_key)


@dataclass(frozen=True)
class Arrow:
    id: str
    src: str
    tgt: str

    @property
    def is_loop(self) -> bool:
        return self.src == self.tgt


@dataclass(frozen=True)
class Quiver:
    """A finite quiver. Loops and parallel arrows are allowed.

    Vertices and arrows are stored sorted by :func:`id_key`, so two quivers
    built from the same data in a different order compare equal.
    """

    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self):
        verts = tuple(self.vertices)
        arrows = tuple(a if isinstance(a, Arrow) else Arrow(*a) for a in self.arrows)
        if len(set(verts)) != len(verts):
            raise DuplicateId(f"duplicate vertex id in {verts!r}")
        ids = [a.id for a in arrows]
        if len(set(ids)) != len(ids):
            raise DuplicateId("duplicate arrow id")
        vset = set(verts)
        for a in arrows:
            if a.src not in vset or a.tgt not in vset:
                raise DanglingEndpoint(f"arrow {a.id} has an endpoint outside the vertex set")
        object.__setattr__(self, "vertices", tuple(sorted_ids(verts)))
        object.__setattr__(self, "arrows", tuple(sorted(arrows, key=lambda a: id_key(a.id))))

    # lookups -------------------------------------------------------------
    @cached_property
    def arrow_map(self) -> dict[str, Arrow]:
        return {a.id: a for a in self.arrows}

    def arrow(self, ident: str) -> Arrow:
        return self.arrow_map[ident]

    @cached_property
    def out_arrows(self) -> dict[str, tuple[Arrow, ...]]:
        out: dict[str, list[Arrow]] = {v: [] for v in self.vertices}
        for a in self.arrows:
            out[a.src].append(a)
        return {v: tuple(x) for v, x in out.items()}

    @cached_property
    def in_arrows(self) -> dict[str, tuple[Arrow, ...]]:
        inc: dict[str, list[Arrow]] = {v: [] for v in self.vertices}
        for a in self.arrows:
            inc[a.tgt].append(a)
        return {v: tuple(x) for v, x in inc.items()}

    def incident(self, v: str) -> list[Arrow]:
        """Arrows touching ``v``, loops listed once, sorted by arrow id."""
        seen = {a.id: a for a in self.out_arrows[v]}
        seen.update({a.id: a for a in self.in_arrows[v]})
        return [seen[k] for k in sorted_ids(seen)]

    def degree(self, v: str) -> int:
        return len(self.out_arrows[v]) + len(self.in_arrows[v])

    # structure -----------------------------------------------------------
    @cached_property
    def components(self) -> tuple[tuple[str, ...], ...]:
        """Connected components (underlying graph), each sorted, ordered by least vertex."""
        seen: set[str] = set()
        comps = []
        for start in self.vertices:
            if start in seen:
                continue
            comp = []
            queue = deque([start])
            seen.add(start)
            while queue:
                v = queue.popleft()
                comp.append(v)
                for a in self.incident(v):
                    w = a.tgt if a.src == v else a.src
                    if w not in seen:
                        seen.add(w)
                        queue.append(w)
            comps.append(tuple(sorted_ids(comp)))
        return tuple(comps)

    @property
    def is_connected(self) -> bool:
        return len(self.components) == 1

    @property
    def cycle_rank(self) -> int:
        return len(self.arrows) - len(self.vertices) + len(self.components)

    @property
    def has_loops(self) -> bool:
        return any(a.is_loop for a in self.arrows)

    def subquiver(self, vertices: Iterable[str], arrows: Iterable[str] | None = None) -> Quiver:
        """Subquiver on ``vertices``; full (all arrows between them) unless ``arrows`` is given."""
        vs = set(vertices)
        missing = vs - set(self.vertices)
        if missing:
            raise MalformedInput(f"unknown vertices {sorted_ids(missing)}")
        if arrows is None:
            arrs = [a for a in self.arrows if a.src in vs and a.tgt in vs]
        else:
            arrs = [self.arrow(i) for i in arrows]
        return Quiver(tuple(vs), tuple(arrs))

    def is_subquiver_of(self, other: Quiver) -> bool:
        if not set(self.vertices) <= set(other.vertices):
            return False
        return all(a.id in other.arrow_map and other.arrow(a.id) == a for a in self.arrows)

    def reverse_arrow(self, ident: str) -> Quiver:
        arrows = [Arrow(a.id, a.tgt, a.src) if a.id == ident else a for a in self.arrows]
        if ident not in self.arrow_map:
            raise MalformedInput(f"unknown arrow {ident}")
        return Quiver(self.vertices, tuple(arrows))

    # serialization -------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "arrows": [{"id": a.id, "src": a.src, "tgt": a.tgt} for a in self.arrows],
        }

    @classmethod
    def from_json(cls, data) -> Quiver:
        if isinstance(data, str):
            return named_quiver(data)
        if not isinstance(data, Mapping) or "vertices" not in data:
            raise MalformedInput("a quiver needs a 'vertices' list")
        try:
            verts = tuple(str(v) for v in data["vertices"])
            arrows = tuple(
                Arrow(str(a["id"]), str(a["src"]), str(a["tgt"])) for a in data.get("arrows", [])
            )
        except (KeyError, TypeError) as exc:
            raise MalformedInput(f"bad arrow record: {exc}") from exc
        return cls(verts, arrows)


def parse_quiver(text: str) -> Quiver:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(str(exc)) from exc
    return Quiver.from_json(data)


# ---------------------------------------------------------------------------
# named quivers


def loop_quiver(n: int) -> Quiver:
    """One vertex ``v`` with ``n`` loops ``a1..an``."""
    return Quiver(("v",), tuple(Arrow(f"a{i}", "v", "v") for i in range(1, n + 1)))


def path_quiver(n: int) -> Quiver:
    """Equioriented path ``1 -> 2 -> ... -> n`` with arrows ``a1..a(n-1)``."""
    verts = tuple(str(i) for i in range(1, n + 1))
    return Quiver(verts, tuple(Arrow(f"a{i}", str(i), str(i + 1)) for i in range(1, n)))


def cycle_quiver(orientation: Iterable[int]) -> Quiver:
    """Cycle on vertices ``1..n``; arrow ``a_m`` joins ``m`` and ``m+1`` (mod n).

    ``orientation[m-1] == +1`` points ``a_m`` from ``m`` to ``m+1``, ``-1`` the
    other way.
    """
    eps = list(orientation)
    n = len(eps)
    if n < 1 or any(e not in (1, -1) for e in eps):
        raise MalformedInput("orientation must be a non-empty list of +1/-1")
    arrows = []
    for m in range(1, n + 1):
        a, b = str(m), str(m % n + 1)
        arrows.append(Arrow(f"a{m}", a, b) if eps[m - 1] == 1 else Arrow(f"a{m}", b, a))
    return Quiver(tuple(str(i) for i in range(1, n + 1)), tuple(arrows))


def acyclic_affine_a3() -> Quiver:
    """Triangle with ``a1: 1->2``, ``a2: 2->3``, ``a3: 1->3``."""
    return cycle_quiver([1, 1, -1])


_NAMED = re.compile(r"^(L|A|C)(\d+)$")


def named_quiver(name: str) -> Quiver:
    """Resolve ``L<n>`` (loops), ``A<n>`` (path), ``C<n>`` (oriented cycle) or ``Atilde3``."""
    if name == "Atilde3":
        return acyclic_affine_a3()
    m = _NAMED.match(name)
    if not m:
        raise MalformedInput(f"unknown quiver name {name!r}")
    kind, n = m.group(1), int(m.group(2))
    if kind == "L":
        return loop_quiver(n)
    if n < 1:
        raise MalformedInput(f"bad quiver size in {name!r}")
    if kind == "A":
        return path_quiver(n)
    return cycle_quiver([1] * n)


# ---------------------------------------------------------------------------
# maps and windings


@dataclass(frozen=True, eq=False)
class QuiverMap:
    domain: Quiver
    codomain: Quiver
    vmap: Mapping[str, str]
    amap: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, "vmap", dict(self.vmap))
        object.__setattr__(self, "amap", dict(self.amap))
        if set(self.vmap) != set(self.domain.vertices):
            raise InvalidQuiverMap("vertex map must be defined on exactly the domain vertices")
        if set(self.amap) != set(self.domain.arrow_map):
            raise InvalidQuiverMap("arrow map must be defined on exactly the domain arrows")
        cod_v = set(self.codomain.vertices)
        for v, w in self.vmap.items():
            if w not in cod_v:
                raise InvalidQuiverMap(f"vertex {v} maps outside the codomain")
        for a in self.domain.arrows:
            img = self.amap[a.id]
            if img not in self.codomain.arrow_map:
                raise InvalidQuiverMap(f"arrow {a.id} maps outside the codomain")
            b = self.codomain.arrow(img)
            if self.vmap[a.src] != b.src or self.vmap[a.tgt] != b.tgt:
                raise InvalidQuiverMap(f"arrow {a.id} is not compatible with its endpoints")

    def __eq__(self, other):
        if not isinstance(other, QuiverMap):
            return NotImplemented
        return (self.domain, self.codomain, self.vmap, self.amap) == (
            other.domain, other.codomain, other.vmap, other.amap)

    __hash__ = None

    def to_json(self) -> dict:
        return {
            "gamma": self.domain.to_json(),
            "base": self.codomain.to_json(),
            "vmap": dict(sorted(self.vmap.items())),
            "amap": dict(sorted(self.amap.items())),
        }


def check_winding(c: QuiverMap) -> list[tuple[str, str, str]]:
    """Violations of the winding condition as ``(kind, arrow, arrow)`` triples.

    ``kind`` is ``"source"`` when two arrows of one colour share a source and
    ``"target"`` when they share a target. An empty list means ``c`` winds.
    """
    seen_src: dict[tuple[str, str], str] = {}
    seen_tgt: dict[tuple[str, str], str] = {}
    bad = []
    for a in c.domain.arrows:
        colour = c.amap[a.id]
        ks, kt = (colour, a.src), (colour, a.tgt)
        if ks in seen_src:
            bad.append(("source", seen_src[ks], a.id))
        else:
            seen_src[ks] = a.id
        if kt in seen_tgt:
            bad.append(("target", seen_tgt[kt], a.id))
        else:
            seen_tgt[kt] = a.id
    return bad


class Winding(QuiverMap):
    """A quiver map that is injective per colour on sources and on targets."""

    def __post_init__(self):
        super().__post_init__()
        bad = check_winding(self)
        if bad:
            raise InvalidWinding(f"not a winding: {bad[0]}")

    @classmethod
    def from_json(cls, data) -> Winding:
        try:
            return cls(Quiver.from_json(data["gamma"]), Quiver.from_json(data["base"]),
                       data["vmap"], data["amap"])
        except (KeyError, TypeError) as exc:
            raise MalformedInput(f"bad winding record: {exc}") from exc

    def colour_of(self, arrow_id: str) -> str:
        return self.amap[arrow_id]

    def restrict(self, vertices: Iterable[str]) -> Winding:
        sub = self.domain.subquiver(vertices)
        return Winding(sub, self.codomain, {v: self.vmap[v] for v in sub.vertices},
                       {a.id: self.amap[a.id] for a in sub.arrows})

    @cached_property
    def image_arrows(self) -> tuple[str, ...]:
        return tuple(sorted_ids(set(self.amap.values())))


# ---------------------------------------------------------------------------
# cycle space


def spanning_forest(q: Quiver) -> tuple[dict[str, dict[str, int]], set[str], dict[str, str]]:
    """BFS spanning forest, rooted at the least vertex of each component.

    Returns ``(potential, tree_arrows, root)`` where ``potential[v]`` is the
    signed arrow vector of the tree path from the root of ``v``'s component
    to ``v``.
    """
    potential: dict[str, dict[str, int]] = {}
    tree: set[str] = set()
    root: dict[str, str] = {}
    for comp in q.components:
        r = comp[0]
        potential[r] = {}
        root[r] = r
        queue = deque([r])
        while queue:
            v = queue.popleft()
            for a in q.incident(v):
                if a.is_loop:
                    continue
                if a.src == v and a.tgt not in potential:
                    w, sign = a.tgt, 1
                elif a.tgt == v and a.src not in potential:
                    w, sign = a.src, -1
                else:
                    continue
                vec = dict(potential[v])
                vec[a.id] = vec.get(a.id, 0) + sign
                potential[w] = vec
                root[w] = r
                tree.add(a.id)
                queue.append(w)
    return potential, tree, root


def cycle_space_basis(q: Quiver) -> list[dict[str, int]]:
    """Fundamental cycles of the BFS spanning forest, one per non-tree arrow.

    Each cycle is a sparse integer vector ``{arrow_id: coefficient}``; the
    non-tree arrow carries coefficient ``+1``.
    """
    potential, tree, _ = spanning_forest(q)
    basis = []
    for a in q.arrows:
        if a.id in tree:
            continue
        vec: dict[str, int] = {a.id: 1}
        for k, x in potential[a.src].items():
            vec[k] = vec.get(k, 0) + x
        for k, x in potential[a.tgt].items():
            vec[k] = vec.get(k, 0) - x
        basis.append({k: x for k, x in vec.items() if x})
    return basis


# ---------------------------------------------------------------------------
# shapes


@dataclass(frozen=True)
class Tree:
    rank: int = 0


@dataclass(frozen=True)
class TypeATilde:
    equioriented: bool
    rank: int = 1


@dataclass(frozen=True)
class ProperPseudotree:
    central_cycle: Quiver = field(compare=False)
    rank: int = 1


@dataclass(frozen=True)
class Other:
    rank: int


def _is_cycle(q: Quiver) -> bool:
    return q.is_connected and q.cycle_rank == 1 and all(q.degree(v) == 2 for v in q.vertices)


def _cycle_walk(q: Quiver) -> list[tuple[Arrow, int]]:
    """Walk a cycle quiver from its least vertex, leaving along its least arrow.

    Returns ``(arrow, sign)`` steps; sign is ``+1`` when the arrow is
    traversed forwards.
    """
    start = q.vertices[0]
    steps = []
    v, used = start, set()
    while True:
        nxt = [a for a in q.incident(v) if a.id not in used]
        if not nxt:
            break
        a = nxt[0]
        used.add(a.id)
        if a.src == v:
            steps.append((a, 1))
            v = a.tgt
        else:
            steps.append((a, -1))
            v = a.src
        if v == start:
            break
    return steps


def cycle_vertex_order(q: Quiver) -> tuple[list[str], list[tuple[Arrow, int]]]:
    """Cyclic vertex order of a cycle quiver with the arrow joining each consecutive pair."""
    if not _is_cycle(q):
        raise NotACycle("quiver is not a single unoriented cycle")
    steps = _cycle_walk(q)
    order = [q.vertices[0]]
    for a, s in steps[:-1]:
        order.append(a.tgt if s == 1 else a.src)
    return order, steps


def central_cycle(q: Quiver) -> Quiver:
    """The unique cycle of a connected rank-one quiver, found by pruning leaves."""
    if not q.is_connected:
        raise Disconnected("central cycle needs a connected quiver")
    if q.cycle_rank != 1:
        raise NotPseudotree(f"cycle rank is {q.cycle_rank}, not 1")
    alive = set(q.vertices)
    arrows = {a.id: a for a in q.arrows}
    deg = {v: q.degree(v) for v in q.vertices}
    leaves = deque(v for v in q.vertices if deg[v] == 1)
    while leaves:
        v = leaves.popleft()
        if v not in alive:
            continue
        alive.discard(v)
        for a in q.incident(v):
            if a.id in arrows:
                del arrows[a.id]
                w = a.tgt if a.src == v else a.src
                deg[w] -= 1
                if deg[w] == 1 and w in alive:
                    leaves.append(w)
    return q.subquiver(alive, arrows)


def classify_shape(q: Quiver):
    """Tree, TypeATilde, ProperPseudotree or Other(rank) for a connected quiver."""
    if not q.is_connected:
        raise Disconnected("shape classification needs a connected quiver")
    r = q.cycle_rank
    if r == 0:
        return Tree()
    if r >= 2:
        return Other(r)
    if _is_cycle(q):
        steps = _cycle_walk(q)
        return TypeATilde(equioriented=len({s for _, s in steps}) == 1)
    return ProperPseudotree(central_cycle(q))


def cycle_word(c: QuiverMap) -> list[tuple[str, int]]:
    """Cyclic word of ``(colour, direction)`` letters of a winding whose domain is a cycle."""
    if not _is_cycle(c.domain):
        raise NotACycle("domain is not a single cycle")
    return [(c.amap[a.id], s) for a, s in _cycle_walk(c.domain)]


def word_period(word: list) -> int:
    """Least period of ``word`` as a cyclic word (failure-function method)."""
    d = len(word)
    fail = [0] * d
    k = 0
    for i in range(1, d):
        while k and word[i] != word[k]:
            k = fail[k - 1]
        if word[i] == word[k]:
            k += 1
        fail[i] = k
    p = d - fail[-1] if d else 0
    return p if p and d % p == 0 else d


def is_primitive_cycle(c: QuiverMap) -> bool:
    """Whether the image of a cycle is not a proper power of a shorter closed walk."""
    word = cycle_word(c)
    return word_period(word) == len(word)
