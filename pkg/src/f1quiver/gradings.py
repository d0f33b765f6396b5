"""Nice gradings, the universal variable iteration, and nice length.

The iteration follows the classical construction: at level ``i`` arrows of
the coefficient quiver are grouped into classes (by colour at level 0, by
colour and the endpoint variables of the previous level afterwards), the
free abelian group on the classes is divided by the saturated image of the
cycle space, and every vertex gets the class-sum of its tree path from the
basepoint as its variable. Every nice sequence factors through these
variables, so ``min{i : X^(i) injective}`` is the nice length.

For a disconnected coefficient quiver each component gets its own basepoint
and the variables carry one extra indicator coordinate per component: a
locally constant shift is always a nice grading, while arrows of different
components still share colour constraints at level 0.
"""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import Disconnected, InfiniteNiceLength, MalformedInput, SameVertex
from .lattice import (
    FreeProjection,
    clear_denominators,
    fourier_motzkin,
    free_cokernel_projection,
    nullspace,
)
from .quiver import (
    Arrow,
    ProperPseudotree,
    Quiver,
    TypeATilde,
    classify_shape,
    cycle_space_basis,
    id_key,
    is_primitive_cycle,
    sorted_ids,
    spanning_forest,
)
from .rep import F1Rep, is_nilpotent

Grading = dict[str, int]


# ---------------------------------------------------------------------------
# nice gradings


@dataclass(frozen=True)
class DeltaTable:
    """Increment of a grading per arrow class ``(colour, prior source values, prior target values)``."""

    entries: Mapping[tuple, int]

    def by_colour(self) -> dict[str, set[int]]:
        out: dict[str, set[int]] = {}
        for (colour, _, _), d in self.entries.items():
            out.setdefault(colour, set()).add(d)
        return out

    @property
    def positive(self) -> bool:
        return all(d > 0 for d in self.entries.values())

    @property
    def negative(self) -> bool:
        return all(d < 0 for d in self.entries.values())

    @property
    def nondegenerate(self) -> bool:
        return all(d != 0 for d in self.entries.values())

    @property
    def nontrivial(self) -> bool:
        return any(d != 0 for d in self.entries.values())


def _check_total(m: F1Rep, g: Mapping[str, int]):
    if set(g) != set(m.vertex_of):
        raise MalformedInput("grading must be defined on exactly the basis elements")


def is_nice_grading(m: F1Rep, grading: Mapping[str, int],
                    priors: Sequence[Mapping[str, int]] = ()) -> tuple[bool, DeltaTable | None]:
    """Whether increments depend only on colour and the prior values at both endpoints."""
    _check_total(m, grading)
    for p in priors:
        _check_total(m, p)
    w = m.winding
    table: dict[tuple, int] = {}
    for a in w.domain.arrows:
        key = (w.amap[a.id], tuple(p[a.src] for p in priors), tuple(p[a.tgt] for p in priors))
        d = grading[a.tgt] - grading[a.src]
        if table.setdefault(key, d) != d:
            return False, None
    return True, DeltaTable(table)


def grading_from_increments(m: F1Rep, delta: Mapping[str, int]) -> Grading:
    """Integrate colour increments along a spanning forest (value 0 at each root)."""
    potential, _, _ = spanning_forest(m.winding.domain)
    amap = m.winding.amap
    return {v: sum(c * delta[amap[a]] for a, c in vec.items()) for v, vec in potential.items()}


def _cycle_colour_rows(m: F1Rep, colours: list[str]) -> list[list[int]]:
    idx = {c: i for i, c in enumerate(colours)}
    amap = m.winding.amap
    rows = []
    for z in cycle_space_basis(m.winding.domain):
        row = [0] * len(colours)
        for a, k in z.items():
            row[idx[amap[a]]] += k
        rows.append(row)
    return rows


def _positive_increments(m: F1Rep) -> tuple[list[str], list[int] | None, list[list[int]]]:
    colours = list(m.winding.image_arrows)
    rows = _cycle_colour_rows(m, colours)
    basis = [clear_denominators(v) for v in nullspace(rows, len(colours))]
    if not colours:
        return colours, [], basis
    if not basis:
        return colours, None, basis
    constraints = [([vec[a] for vec in basis], 1) for a in range(len(colours))]
    t = fourier_motzkin(constraints, len(basis))
    if t is None:
        return colours, None, basis
    delta = [sum(tj * Fraction(vec[a]) for tj, vec in zip(t, basis)) for a in range(len(colours))]
    return colours, clear_denominators(delta), basis


def find_positive_grading(m: F1Rep) -> Grading | None:
    """A nice grading with every used colour increasing, or ``None`` if none exists."""
    colours, delta, _ = _positive_increments(m)
    if delta is None:
        return None
    return grading_from_increments(m, dict(zip(colours, delta)))


# ---------------------------------------------------------------------------
# universal iteration


@dataclass(frozen=True, eq=False)
class IterationState:
    """One level of the universal variable iteration.

    ``quiver`` is the quotient of the coefficient quiver used at this level
    and ``sigma_vertices``/``sigma_arrows`` the quotient map onto it.
    ``variables`` sends each basis element to its variable vector; the first
    ``projection.rank`` coordinates live in the level lattice, any further
    coordinates are component indicators.
    """

    level: int
    quiver: Quiver
    sigma_vertices: Mapping[str, str]
    sigma_arrows: Mapping[str, str]
    arrow_classes: tuple
    projection: FreeProjection
    variables: Mapping[str, tuple[int, ...]]
    partition: frozenset
    basepoints: tuple[str, ...]

    @property
    def rank(self) -> int:
        return self.projection.rank

    @property
    def injective(self) -> bool:
        return len(set(self.variables.values())) == len(self.variables)

    def equal_pairs(self) -> list[tuple[str, str]]:
        verts = sorted_ids(self.variables)
        return [(u, v) for u, v in combinations(verts, 2) if self.variables[u] == self.variables[v]]

    def class_vector(self, arrow_id: str) -> tuple[int, ...]:
        """Image in the level lattice of the class of a coefficient-quiver arrow."""
        vec = [0] * len(self.arrow_classes)
        vec[self.arrow_classes.index(self._class_of[arrow_id])] = 1
        return self.projection(vec)

    _class_of: Mapping[str, object] = field(default_factory=dict, repr=False)


def _fmt(x) -> str:
    return "(" + ",".join(map(str, x)) + ")"


def _iterate(m: F1Rep, basepoints: Sequence[str] | None = None,
             max_levels: int | None = None) -> list[IterationState]:
    w = m.winding
    gamma = w.domain
    comps = gamma.components
    if basepoints is None:
        basepoints = [c[0] for c in comps]
    comp_of = {v: k for k, c in enumerate(comps) for v in c}
    if len(basepoints) != len(comps) or sorted(comp_of[b] for b in basepoints) != list(range(len(comps))):
        raise MalformedInput("need exactly one basepoint per component")
    base_of = {comp_of[b]: b for b in basepoints}
    indicator = len(comps) > 1
    potential, _, _ = spanning_forest(gamma)
    cycles = cycle_space_basis(gamma)
    vcol = w.vmap
    states: list[IterationState] = []
    prev_x: dict[str, tuple[int, ...]] | None = None
    prev_part = None
    level = 0
    while True:
        if prev_x is None:
            akey = {a.id: w.amap[a.id] for a in gamma.arrows}
            classes = tuple(sorted_ids(set(akey.values())))
            vkey = {v: vcol[v] for v in gamma.vertices}
            vname = dict(vkey)
            aname = dict(akey)
        else:
            akey = {a.id: (prev_x[a.src], prev_x[a.tgt], w.amap[a.id]) for a in gamma.arrows}
            classes = tuple(sorted(set(akey.values()), key=lambda k: (k[0], k[1], id_key(k[2]))))
            vkey = {v: (vcol[v], prev_x[v]) for v in gamma.vertices}
            vname = {v: f"{k[0]}@{_fmt(k[1])}" for v, k in vkey.items()}
            aname = {a: f"{k[2]}@{_fmt(k[0])}>{_fmt(k[1])}" for a, k in akey.items()}
        idx = {c: i for i, c in enumerate(classes)}
        columns = []
        for z in cycles:
            col = [0] * len(classes)
            for a, k in z.items():
                col[idx[akey[a]]] += k
            columns.append(col)
        proj = free_cokernel_projection(columns, len(classes))

        def lift(v):
            vec = [0] * len(classes)
            for a, k in potential[v].items():
                vec[idx[akey[a]]] += k
            return vec

        lifted = {v: lift(v) for v in gamma.vertices}
        x = {}
        for v in gamma.vertices:
            b = base_of[comp_of[v]]
            val = proj([p - q for p, q in zip(lifted[v], lifted[b])])
            if indicator:
                val += tuple(int(k == comp_of[v]) for k in range(len(comps)))
            x[v] = val
        groups: dict = {}
        for v in gamma.vertices:
            groups.setdefault((vcol[v], x[v]), []).append(v)
        part = frozenset(frozenset(g) for g in groups.values())
        arrows_q = {}
        for a in gamma.arrows:
            arrows_q[aname[a.id]] = Arrow(aname[a.id], vname[a.src], vname[a.tgt])
        quiver = Quiver(tuple(set(vname.values())), tuple(arrows_q.values()))
        state = IterationState(level, quiver, vname, aname, classes, proj, x, part,
                               tuple(basepoints), akey)
        states.append(state)
        if state.injective or (prev_part is not None and part == prev_part):
            return states
        if max_levels is not None and level >= max_levels:
            return states
        prev_x, prev_part = x, part
        level += 1


def universal_iteration(m: F1Rep, basepoint: str | None = None) -> list[IterationState]:
    """Levels of the universal variable iteration for a representation with connected coefficient quiver."""
    gamma = m.winding.domain
    if len(gamma.components) > 1:
        raise Disconnected("the coefficient quiver is disconnected; use nice_length")
    if basepoint is None:
        basepoint = gamma.vertices[0] if gamma.vertices else None
    return _iterate(m, [basepoint] if basepoint is not None else [])


# ---------------------------------------------------------------------------
# nice length


@dataclass(frozen=True)
class NiceCertificate:
    """Outcome of a niceness decision.

    ``kind`` is ``"finite"`` (with the realized gradings), ``"infinite"``
    (with the stabilization level and the pairs no nice sequence separates)
    or ``"sufficient"`` (a named criterion vouches for finiteness).
    """

    kind: str
    length: int | None = None
    gradings: tuple = ()
    stabilization_level: int | None = None
    pairs: tuple[tuple[str, str], ...] = ()
    criterion: str | None = None

    @property
    def finite(self) -> bool:
        return self.kind in ("finite", "sufficient")

    @property
    def value(self) -> float | int:
        return self.length if self.kind == "finite" else math.inf

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.kind == "finite":
            out["nice_length"] = self.length
            out["gradings"] = [dict(sorted(g.items(), key=lambda kv: id_key(kv[0])))
                               for g in self.gradings]
        elif self.kind == "infinite":
            out["nice_length"] = "infinite"
            out["stabilization_level"] = self.stabilization_level
            out["pairs"] = [list(p) for p in self.pairs]
        else:
            out["criterion"] = self.criterion
        return out


def _generic_weights(vectors) -> list[int]:
    """Weights ``1, B, B^2, ...`` that pair non-trivially with every non-zero vector given."""
    bound = max((abs(c) for v in vectors for c in v), default=0)
    base = bound + 1
    dim = max((len(v) for v in vectors), default=0)
    return [base ** k for k in range(dim)]


def _evaluate(weights, x):
    return sum(a * b for a, b in zip(weights, x))


def _realize(states: list[IterationState]) -> list[Grading]:
    out = []
    for st in states:
        vals = list(st.variables.values())
        diffs = [tuple(p - q for p, q in zip(u, v)) for u, v in combinations(set(vals), 2)]
        wts = _generic_weights(diffs)
        out.append({v: _evaluate(wts, x) for v, x in st.variables.items()})
    return out


def nice_length(m: F1Rep) -> NiceCertificate:
    """Exact nice length with a realized sequence, or the pairs that can never be separated."""
    states = _iterate(m)
    last = states[-1]
    if last.injective:
        return NiceCertificate("finite", length=last.level, gradings=tuple(_realize(states)))
    return NiceCertificate("infinite", stabilization_level=last.level,
                           pairs=tuple(last.equal_pairs()))


def realize_nice_sequence(m: F1Rep) -> list[Grading]:
    cert = nice_length(m)
    if not cert.finite:
        raise InfiniteNiceLength(f"vertices {cert.pairs[0]} are never separated")
    return list(cert.gradings)


def distinguishable(m: F1Rep, u: str, v: str) -> bool:
    if u == v:
        raise SameVertex("need two distinct basis elements")
    if u not in m.vertex_of or v not in m.vertex_of:
        raise MalformedInput("unknown basis element")
    last = _iterate(m)[-1]
    return last.variables[u] != last.variables[v]


def verify_nice_sequence(m: F1Rep, gradings: Sequence[Mapping[str, int]]) -> bool:
    """Each grading nice relative to its predecessors and the whole chain separating all elements."""
    for i, g in enumerate(gradings):
        if not is_nice_grading(m, g, gradings[:i])[0]:
            return False
    sigs = {tuple(g[v] for g in gradings) for v in m.vertex_of}
    return len(sigs) == m.total_dim


# ---------------------------------------------------------------------------
# sufficient conditions


@dataclass(frozen=True)
class ConditionCheck:
    name: str
    applicable: bool
    holds: bool
    verdict: str | None
    evidence: Mapping = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "applicable": self.applicable, "holds": self.holds,
                "verdict": self.verdict, "evidence": dict(self.evidence)}


def _fibres_connected(m: F1Rep) -> dict[str, bool]:
    w = m.winding
    out = {}
    for colour in w.image_arrows:
        arrows = [a for a in w.domain.arrows if w.amap[a.id] == colour]
        verts = {a.src for a in arrows} | {a.tgt for a in arrows}
        fibre = Quiver(tuple(verts), tuple(arrows))
        out[colour] = fibre.is_connected
    return out


def _amalgam_split(m: F1Rep):
    """A cut element splitting the coefficient quiver into colour-disjoint parts, if any."""
    from .rep import induced

    w = m.winding
    gamma = w.domain
    for cut in gamma.vertices:
        rest = gamma.subquiver([v for v in gamma.vertices if v != cut])
        pieces = [set(c) | {cut} for c in rest.components]
        if len(pieces) < 2:
            continue
        colours = [{w.amap[a.id] for a in gamma.subquiver(p).arrows} for p in pieces]
        for k in range(len(pieces)):
            others = set().union(*(colours[j] for j in range(len(pieces)) if j != k))
            if colours[k] & others:
                continue
            left = pieces[k]
            right = set().union(*(pieces[j] for j in range(len(pieces)) if j != k))
            return cut, induced(m, left), induced(m, right)
    return None


def sufficient_conditions_report(m: F1Rep) -> dict[str, ConditionCheck]:
    """Evaluate each known sufficient criterion for finite nice length independently."""
    w = m.winding
    gamma = w.domain
    report: dict[str, ConditionCheck] = {}

    colours, delta, basis = _positive_increments(m)
    nil = is_nilpotent(m)
    has_pos = delta is not None
    report["a_positive_grading"] = ConditionCheck(
        "a_positive_grading", True, has_pos, "nilpotent" if has_pos else None,
        {"increments": dict(zip(colours, delta)) if has_pos else None, "nilpotent": nil})

    loop_free = not any(w.codomain.arrow(c).is_loop for c in colours)
    injective_sources = False
    witness = None
    if has_pos and loop_free:
        candidates = [delta]
        if basis:
            wts = _generic_weights([tuple(v) for v in basis])
            g = [sum(wt * vec[a] for wt, vec in zip(wts, basis)) for a in range(len(colours))]
            k = 1 + max(abs(x) for x in g)
            candidates.append([k * d + x for d, x in zip(delta, g)])
        for cand in candidates:
            grad = grading_from_increments(m, dict(zip(colours, cand)))
            ok = True
            for colour in colours:
                srcs = [a.src for a in gamma.arrows if w.amap[a.id] == colour]
                if len({grad[s] for s in srcs}) != len(srcs):
                    ok = False
                    break
            if ok:
                injective_sources, witness = True, grad
                break
    report["b_injective_on_sources"] = ConditionCheck(
        "b_injective_on_sources", has_pos and loop_free, injective_sources,
        "nice<=1" if injective_sources else None, {"loop_free": loop_free, "grading": witness})

    level0 = _iterate(m, max_levels=0)[0]
    class_images = {a: level0.projection([int(c == a) for c in level0.arrow_classes])
                    for a in level0.arrow_classes}
    nondeg = all(any(v) for v in class_images.values())
    fibres = _fibres_connected(m)
    witness = None
    if nondeg:
        wts = _generic_weights(list(class_images.values()))
        witness = {v: _evaluate(wts, x) for v, x in level0.variables.items()}
    holds_c = nondeg and all(fibres.values())
    report["c_nondegenerate_connected_fibres"] = ConditionCheck(
        "c_nondegenerate_connected_fibres", True, holds_c, "nice<=1" if holds_c else None,
        {"nondegenerate": nondeg, "fibres_connected": fibres, "grading": witness})

    is_forest = gamma.cycle_rank == 0
    report["d_tree"] = ConditionCheck("d_tree", True, is_forest, "finite" if is_forest else None)

    connected = gamma.is_connected and gamma.vertices
    shape = classify_shape(gamma) if connected else None
    if isinstance(shape, TypeATilde):
        prim = is_primitive_cycle(w)
        report["e_affine_primitive"] = ConditionCheck(
            "e_affine_primitive", True, prim, "finite" if prim else "infinite", {"primitive": prim})
    else:
        report["e_affine_primitive"] = ConditionCheck("e_affine_primitive", False, False, None)
    if isinstance(shape, ProperPseudotree):
        prim = is_primitive_cycle(w.restrict(shape.central_cycle.vertices))
        report["f_pseudotree_primitive"] = ConditionCheck(
            "f_pseudotree_primitive", True, prim, "finite" if prim else "infinite",
            {"central_cycle": list(shape.central_cycle.vertices), "primitive": prim})
    else:
        report["f_pseudotree_primitive"] = ConditionCheck("f_pseudotree_primitive", False, False, None)

    split = _amalgam_split(m) if connected else None
    if split is None:
        report["g_amalgam"] = ConditionCheck("g_amalgam", False, False, None)
    else:
        cut, left, right = split
        fl, fr = nice_length(left).finite, nice_length(right).finite
        report["g_amalgam"] = ConditionCheck(
            "g_amalgam", True, fl and fr, "finite" if fl and fr else None,
            {"cut": cut, "pieces": [left.total_dim, right.total_dim],
             "pieces_finite": [fl, fr]})
    return report

