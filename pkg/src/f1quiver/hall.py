"""The Hall algebra of F1-representations of a quiver.

Basis elements are isomorphism classes. The product counts subrepresentations:
``[M][N] = sum_R #{L <= R : L ~ N, R/L ~ M} [R]``. The coproduct splits a
class into ordered pairs of complementary direct summands. Coefficients are
exact rationals throughout.
"""

from __future__ import annotations

import itertools
import os
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache
from math import comb, factorial

from .canon import automorphism_count
from .errors import (
    BadParameters,
    BaseMismatch,
    NotAffine,
    NotATree,
    SizeBudgetExceeded,
    UnsupportedQuiver,
)
from .gradings import nice_length
from .lattice import nullspace, rational_rank
from .quiver import (
    ProperPseudotree,
    Quiver,
    Tree,
    TypeATilde,
    classify_shape,
    cycle_vertex_order,
    sorted_ids,
)
from .rep import (
    F1Rep,
    band_rep,
    base_change_matrices,
    closed_subsets,
    decompose,
    direct_sum,
    induced,
    is_nilpotent,
    rename,
    string_rep,
    thin,
    zero_rep,
)

DEFAULT_BUDGET = 200_000


def default_budget() -> int:
    """Extension budget, overridable through the ``F1Q_BUDGET`` environment variable."""
    raw = os.environ.get("F1Q_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


@dataclass(frozen=True)
class IsoClass:
    """An isomorphism class, identified by its canonical key over a base quiver."""

    key: str
    base: Quiver
    rep: F1Rep = field(compare=False, repr=False)

    @classmethod
    def of(cls, rep: F1Rep) -> IsoClass:
        return cls(rep.key, rep.base, rep)

    @property
    def dim(self) -> tuple[int, ...]:
        return self.rep.dim

    @property
    def is_zero(self) -> bool:
        return self.rep.total_dim == 0

    def sort_key(self):
        return (self.rep.total_dim, self.dim, self.key)


def _clean(terms: Mapping) -> dict:
    return {k: Fraction(v) for k, v in terms.items() if v}


class HallElement:
    """Finite linear combination of isomorphism classes with rational coefficients."""

    __slots__ = ("base", "terms")

    def __init__(self, base: Quiver, terms: Mapping[IsoClass, Fraction] | None = None):
        self.base = base
        self.terms = _clean(terms or {})
        for cls in self.terms:
            if cls.base != base:
                raise BaseMismatch("class over a different quiver")

    @classmethod
    def of(cls, item, coeff=1) -> HallElement:
        if isinstance(item, F1Rep):
            item = IsoClass.of(item)
        return cls(item.base, {item: Fraction(coeff)})

    @classmethod
    def unit(cls, base: Quiver) -> HallElement:
        return cls.of(zero_rep(base))

    @classmethod
    def zero(cls, base: Quiver) -> HallElement:
        return cls(base)

    def _same(self, other: HallElement):
        if self.base != other.base:
            raise BaseMismatch("elements over different quivers")

    def __add__(self, other: HallElement) -> HallElement:
        self._same(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return HallElement(self.base, out)

    def __neg__(self) -> HallElement:
        return HallElement(self.base, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: HallElement) -> HallElement:
        return self + (-other)

    def scale(self, c) -> HallElement:
        return HallElement(self.base, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, HallElement):
            return product(self, other)
        return self.scale(other)

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, HallElement):
            return NotImplemented
        return self.base == other.base and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, item) -> Fraction:
        if isinstance(item, F1Rep):
            item = IsoClass.of(item)
        return self.terms.get(item, Fraction(0))

    def classes(self) -> list[IsoClass]:
        return sorted(self.terms, key=IsoClass.sort_key)

    def __repr__(self):
        body = " + ".join(f"{v}*[{k.dim}:{k.key[:24]}]" for k, v in
                          sorted(self.terms.items(), key=lambda kv: kv[0].sort_key()))
        return f"HallElement({body or '0'})"

    def to_json(self) -> list[dict]:
        rows = [{"class": k.key, "coeff": str(v), "dim": list(k.dim)} for k, v in self.terms.items()]
        return sorted(rows, key=lambda r: (r["dim"], r["class"]))


class TensorElement:
    """Finite linear combination of ordered pairs (or longer tuples) of classes."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple, Fraction] | None = None):
        self.terms = _clean(terms or {})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return TensorElement(out)

    def __sub__(self, other):
        return self + TensorElement({k: -v for k, v in other.terms.items()})

    def __mul__(self, other: TensorElement) -> TensorElement:
        """Componentwise product ``(a x b)(c x d) = ac x bd``."""
        out: dict = {}
        for ka, va in self.terms.items():
            for kb, vb in other.terms.items():
                factors = [_class_product(x, y) for x, y in zip(ka, kb)]
                for combo in itertools.product(*(f.items() for f in factors)):
                    key = tuple(c for c, _ in combo)
                    coeff = va * vb
                    for _, n in combo:
                        coeff *= n
                    out[key] = out.get(key, 0) + coeff
        return TensorElement(out)

    def swap(self) -> TensorElement:
        return TensorElement({(b, a): v for (a, b), v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, TensorElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"TensorElement({len(self.terms)} terms)"


# ---------------------------------------------------------------------------
# product


def _partial_injections(sources: list[str], targets: list[str]):
    for k in range(min(len(sources), len(targets)) + 1):
        for src in itertools.combinations(sources, k):
            for tgt in itertools.permutations(targets, k):
                yield list(zip(src, tgt))


def _count_partial_injections(a: int, b: int) -> int:
    return sum(comb(a, k) * comb(b, k) * factorial(k) for k in range(min(a, b) + 1))


def extensions(quot: F1Rep, sub: F1Rep, budget: int | None = None):
    """Every way to add arrows from a copy of ``quot`` into a copy of ``sub``.

    Yields representations containing the ``sub`` copy as a subrepresentation
    with quotient the ``quot`` copy. Elements are renamed ``q:<name>`` and
    ``s:<name>``.
    """
    budget = default_budget() if budget is None else budget
    base = quot.base
    mq = rename(quot, lambda x: "q:" + x)
    ms = rename(sub, lambda x: "s:" + x)
    slots = []
    total = 1
    for a in base.arrows:
        srcs = [x for x in mq.basis_of[a.src] if x not in mq.map_of[a.id]]
        taken = set(ms.map_of[a.id].values())
        tgts = [y for y in ms.basis_of[a.tgt] if y not in taken]
        slots.append((a.id, srcs, tgts))
        total *= _count_partial_injections(len(srcs), len(tgts))
        if total > budget:
            raise SizeBudgetExceeded(f"more than {budget} extension candidates")
    basis = {v: list(mq.basis_of[v]) + list(ms.basis_of[v]) for v in base.vertices}
    own = {a.id: list(mq.map_of[a.id].items()) + list(ms.map_of[a.id].items()) for a in base.arrows}
    for choice in itertools.product(*(_partial_injections(s, t) for _, s, t in slots)):
        maps = {aid: own[aid] + extra for (aid, _, _), extra in zip(slots, choice)}
        yield F1Rep(base, basis, maps)


@cache
def _class_product_cached(m: IsoClass, n: IsoClass, budget: int) -> tuple:
    reps: dict[str, F1Rep] = {}
    for r in extensions(m.rep, n.rep, budget):
        reps.setdefault(r.key, r)
    out = []
    for key, r in reps.items():
        count = 0
        everything = set(r.vertex_of)
        for sub in closed_subsets(r, n.dim):
            if induced(r, sub).key == n.key and induced(r, everything - sub).key == m.key:
                count += 1
        if count:
            out.append((IsoClass(key, r.base, r), count))
    return tuple(out)


def _class_product(m: IsoClass, n: IsoClass, budget: int | None = None) -> dict[IsoClass, int]:
    return dict(_class_product_cached(m, n, default_budget() if budget is None else budget))


def product(a: HallElement, b: HallElement, budget: int | None = None) -> HallElement:
    """Bilinear Hall product; the right factor is the subobject."""
    if a.base != b.base:
        raise BaseMismatch("factors live over different quivers")
    out: dict[IsoClass, Fraction] = {}
    for m, x in a.terms.items():
        for n, y in b.terms.items():
            for r, c in _class_product(m, n, budget).items():
                out[r] = out.get(r, 0) + x * y * c
    return HallElement(a.base, out)


def structure_constants_via_extensions(quot: F1Rep, sub: F1Rep,
                                       budget: int | None = None) -> dict[str, Fraction]:
    """Product coefficients from counting extension data instead of subobjects.

    Uses ``#subobjects * |Aut quot| * |Aut sub| = #extensions * |Aut R|``.
    """
    counts: dict[str, int] = {}
    sample: dict[str, F1Rep] = {}
    for r in extensions(quot, sub, budget):
        counts[r.key] = counts.get(r.key, 0) + 1
        sample.setdefault(r.key, r)
    aq = automorphism_count(quot.winding)
    asub = automorphism_count(sub.winding)
    return {k: Fraction(c * automorphism_count(sample[k].winding), aq * asub)
            for k, c in counts.items()}


def bracket(a: HallElement, b: HallElement, budget: int | None = None) -> HallElement:
    return product(a, b, budget) - product(b, a, budget)


# ---------------------------------------------------------------------------
# coproduct, counit, antipode


def splittings(rep: F1Rep) -> list[tuple[F1Rep, F1Rep]]:
    """Ordered pairs ``(A, B)`` with ``A + B ~ rep``, one per pair of classes."""
    groups: dict[str, list[frozenset]] = {}
    for part in decompose(rep):
        groups.setdefault(part.key, []).append(frozenset(part.vertex_of))
    keys = sorted(groups)
    out = []
    for counts in itertools.product(*(range(len(groups[k]) + 1) for k in keys)):
        left = set()
        for k, c in zip(keys, counts):
            for comp in groups[k][:c]:
                left |= comp
        out.append((induced(rep, left), induced(rep, set(rep.vertex_of) - left)))
    return out


@cache
def _class_coproduct(r: IsoClass) -> tuple:
    return tuple((IsoClass.of(a), IsoClass.of(b)) for a, b in splittings(r.rep))


def coproduct(a: HallElement) -> TensorElement:
    out: dict = {}
    for r, x in a.terms.items():
        for pair in _class_coproduct(r):
            out[pair] = out.get(pair, 0) + x
    return TensorElement(out)


def coproduct_left(t: TensorElement) -> TensorElement:
    """Apply the coproduct to the first factor of each pair."""
    out: dict = {}
    for (a, b), x in t.terms.items():
        for p, q in _class_coproduct(a):
            out[(p, q, b)] = out.get((p, q, b), 0) + x
    return TensorElement(out)


def coproduct_right(t: TensorElement) -> TensorElement:
    out: dict = {}
    for (a, b), x in t.terms.items():
        for p, q in _class_coproduct(b):
            out[(a, p, q)] = out.get((a, p, q), 0) + x
    return TensorElement(out)


def counit(a: HallElement) -> Fraction:
    return sum((v for k, v in a.terms.items() if k.is_zero), Fraction(0))


@cache
def _class_antipode(r: IsoClass) -> HallElement:
    if r.is_zero:
        return HallElement.of(r)
    acc = -HallElement.of(r)
    for a, b in _class_coproduct(r):
        if a.is_zero or b.is_zero:
            continue
        acc = acc - product(HallElement.of(a), _class_antipode(b))
    return acc


def antipode(a: HallElement) -> HallElement:
    acc = HallElement.zero(a.base)
    for r, x in a.terms.items():
        acc = acc + _class_antipode(r).scale(x)
    return acc


def antipode_convolution(a: HallElement, side: str = "right") -> HallElement:
    """``m (id x S) Delta`` (``side='right'``) or ``m (S x id) Delta`` applied to ``a``."""
    acc = HallElement.zero(a.base)
    for (p, q), x in coproduct(a).terms.items():
        left = HallElement.of(p) if side == "right" else _class_antipode(p)
        right = _class_antipode(q) if side == "right" else HallElement.of(q)
        acc = acc + product(left, right).scale(x)
    return acc


# ---------------------------------------------------------------------------
# enumerating classes


def connected_windings(base: Quiver, max_size: int, nilpotent: bool = False) -> list[F1Rep]:
    """One representative of every indecomposable class of total dimension ``<= max_size``.

    Every connected coefficient quiver has an element whose removal leaves it
    connected, so each class of size ``k + 1`` arises by attaching one new
    element to a class of size ``k``.
    """
    found: dict[str, F1Rep] = {}
    layer: dict[str, F1Rep] = {}
    if max_size < 1:
        return []
    for v in base.vertices:
        loops = [a.id for a in base.out_arrows[v] if a.is_loop]
        for k in range(len(loops) + 1):
            for chosen in itertools.combinations(loops, k):
                r = F1Rep(base, {v: ["e1"]}, {a: [("e1", "e1")] for a in chosen})
                if nilpotent and not is_nilpotent(r):
                    continue
                layer.setdefault(r.key, r)
    found.update(layer)
    for size in range(2, max_size + 1):
        nxt: dict[str, F1Rep] = {}
        new = f"e{size}"
        for r in layer.values():
            for v in base.vertices:
                options = []
                for a in base.arrows:
                    if a.src != v and a.tgt != v:
                        continue
                    f = r.map_of[a.id]
                    outs = [None]
                    ins = [None]
                    if a.src == v:
                        taken = set(f.values())
                        outs += [y for y in r.basis_of[a.tgt] if y not in taken]
                    if a.tgt == v:
                        ins += [x for x in r.basis_of[a.src] if x not in f]
                    opts = [(o, i) for o in outs for i in ins]
                    if a.is_loop:
                        opts.append(("self", "self"))
                    options.append((a.id, opts))
                for combo in itertools.product(*(o for _, o in options)):
                    if not any(o not in (None, "self") or i not in (None, "self") for o, i in combo):
                        continue
                    maps = {aid: list(r.map_of[aid].items()) for aid in r.map_of}
                    for (aid, _), (o, i) in zip(options, combo):
                        if o == "self":
                            maps[aid].append((new, new))
                            continue
                        if o is not None:
                            maps[aid].append((new, o))
                        if i is not None:
                            maps[aid].append((i, new))
                    basis = {w: list(r.basis_of[w]) for w in base.vertices}
                    basis[v].append(new)
                    cand = F1Rep(base, basis, maps)
                    if nilpotent and not is_nilpotent(cand):
                        continue
                    nxt.setdefault(cand.key, cand)
        layer = {k: x for k, x in nxt.items() if k not in found}
        found.update(layer)
    return sorted(found.values(), key=lambda x: (x.total_dim, x.key))


def primitives_basis(base: Quiver, dim_bound: int, nilpotent: bool = False) -> list[IsoClass]:
    """Indecomposable classes up to the dimension bound (the primitive part of the Hall algebra)."""
    return [IsoClass.of(r) for r in connected_windings(base, dim_bound, nilpotent)]


def all_classes(base: Quiver, dim_bound: int, nilpotent: bool = False) -> list[IsoClass]:
    """Every class of total dimension ``<= dim_bound``, the zero class first."""
    indec = connected_windings(base, dim_bound, nilpotent)
    out = [IsoClass.of(zero_rep(base))]

    def rec(start: int, chosen: list[F1Rep], size: int):
        for i in range(start, len(indec)):
            r = indec[i]
            if size + r.total_dim > dim_bound:
                continue
            picked = chosen + [r]
            out.append(IsoClass.of(direct_sum(*picked)))
            rec(i, picked, size + r.total_dim)

    rec(0, [], 0)
    return sorted(out, key=IsoClass.sort_key)


class HallAlgebra:
    """Hall algebra over a fixed quiver, either of all or of nilpotent representations."""

    def __init__(self, base: Quiver, mode: str = "all", budget: int | None = None):
        if mode not in ("all", "nilpotent"):
            raise BadParameters("mode must be 'all' or 'nilpotent'")
        self.base = base
        self.mode = mode
        self.budget = budget

    def _filter(self, x: HallElement) -> HallElement:
        if self.mode == "all":
            return x
        return HallElement(self.base, {k: v for k, v in x.terms.items() if is_nilpotent(k.rep)})

    def element(self, rep: F1Rep, coeff=1) -> HallElement:
        if rep.base != self.base:
            raise BaseMismatch("representation over a different quiver")
        return self._filter(HallElement.of(rep, coeff))

    def unit(self) -> HallElement:
        return HallElement.unit(self.base)

    def product(self, a, b):
        return self._filter(product(a, b, self.budget))

    def bracket(self, a, b):
        return self._filter(bracket(a, b, self.budget))

    def coproduct(self, a):
        return coproduct(a)

    def antipode(self, a):
        return self._filter(antipode(a))

    def classes(self, dim_bound: int) -> list[IsoClass]:
        return all_classes(self.base, dim_bound, self.mode == "nilpotent")

    def primitives(self, dim_bound: int) -> list[IsoClass]:
        return primitives_basis(self.base, dim_bound, self.mode == "nilpotent")


# ---------------------------------------------------------------------------
# trees


def _require_tree(q: Quiver):
    if not q.is_connected or not isinstance(classify_shape(q), Tree):
        raise NotATree("quiver is not a tree")


def _as_vertex_set(q: Quiver, s) -> frozenset[str]:
    if isinstance(s, F1Rep):
        s = s.vertex_of.values()
    elif isinstance(s, Quiver):
        s = s.vertices
    vs = frozenset(s)
    if not vs or not q.subquiver(vs).is_connected:
        raise BadParameters("support must be a non-empty connected vertex set")
    return vs


def _join(q: Quiver, a: frozenset, b: frozenset) -> frozenset:
    """Smallest connected vertex set of a tree containing both sets."""
    keep = set(q.vertices)
    must = a | b
    changed = True
    while changed:
        changed = False
        sub = q.subquiver(keep)
        for v in list(keep):
            if v not in must and sub.degree(v) <= 1:
                keep.discard(v)
                changed = True
                break
    return frozenset(keep)


def tree_bracket(q: Quiver, s, s2) -> HallElement:
    """Bracket of two thin connected classes of a tree via the joining-arrow sign rule."""
    _require_tree(q)
    a, b = _as_vertex_set(q, s), _as_vertex_set(q, s2)
    joined = _join(q, a, b)
    if a & b or joined != a | b:
        return HallElement.zero(q)
    link = [x for x in q.arrows if (x.src in a and x.tgt in b) or (x.src in b and x.tgt in a)]
    sign = 1 if link[0].src in a else -1
    return HallElement.of(thin(q, joined), sign)


def connected_subsets(q: Quiver) -> list[frozenset[str]]:
    out = []
    verts = q.vertices
    for k in range(1, len(verts) + 1):
        for combo in itertools.combinations(verts, k):
            if q.subquiver(combo).is_connected:
                out.append(frozenset(combo))
    return out


@dataclass
class VerificationReport:
    ok: bool
    checked: int
    failures: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"ok": self.ok, "checked": self.checked, "failures": self.failures}


def _thin_support(cls: IsoClass) -> frozenset | None:
    r = cls.rep
    if any(len(b) > 1 for b in r.basis_of.values()) or not r.winding.domain.is_connected:
        return None
    return frozenset(r.vertex_of.values())


def verify_tree_orientation_iso(q: Quiver, arrow: str, dim_bound: int | None = None,
                                budget: int | None = None) -> VerificationReport:
    """Check that the signed identity intertwines Hall brackets after reversing one arrow.

    The map sends a thin class ``S`` to ``-S`` when ``S`` contains the
    reversed arrow and to ``S`` otherwise. Brackets on both sides are computed
    from the Hall product.
    """
    _require_tree(q)
    q2 = q.reverse_arrow(arrow)
    a = q.arrow(arrow)

    def eps(support: frozenset) -> int:
        return -1 if a.src in support and a.tgt in support else 1

    subsets = connected_subsets(q)
    failures = []
    checked = 0
    for s, t in itertools.product(subsets, repeat=2):
        if dim_bound is not None and len(s) + len(t) > dim_bound:
            continue
        checked += 1
        lhs_q = bracket(HallElement.of(thin(q, s)), HallElement.of(thin(q, t)), budget)
        mapped: dict[IsoClass, Fraction] = {}
        bad = False
        for cls, c in lhs_q.terms.items():
            support = _thin_support(cls)
            if support is None:
                bad = True
                break
            mapped[IsoClass.of(thin(q2, support))] = c * eps(support)
        rhs = bracket(HallElement.of(thin(q2, s), eps(s)), HallElement.of(thin(q2, t), eps(t)), budget)
        if bad or HallElement(q2, mapped) != rhs:
            failures.append({"pair": [sorted_ids(s), sorted_ids(t)]})
    return VerificationReport(not failures, checked, failures)


# ---------------------------------------------------------------------------
# affine type A


def _affine_data(q: Quiver):
    if not q.is_connected or not isinstance(classify_shape(q), TypeATilde):
        raise NotAffine("quiver is not a single cycle")
    order, steps = cycle_vertex_order(q)
    eps = [s for _, s in steps]  # eps[m-1] is the orientation of the arrow from m to m+1
    return len(order), eps


def affine_string(q: Quiver, i: int, j: int, turns: int) -> F1Rep:
    """String covering the cycle positions ``i .. j-1`` after ``turns`` full turns."""
    n = len(cycle_vertex_order(q)[0])
    return string_rep(q, j - i + turns * n, i)


def affine_commutator_formula(q: Quiver, first: tuple[int, int, int],
                              second: tuple[int, int, int]) -> HallElement:
    """Closed form of the bracket of two strings ``(i, j, q)`` and ``(k, l, s)``."""
    n, eps = _affine_data(q)

    def e(m):  # orientation of the arrow between positions m and m+1, indices mod n
        return eps[(m - 1) % n]

    i, j, t1 = first
    k, l, t2 = second
    d = (j + l) - (i + k) + (t1 + t2) * n
    out = HallElement.zero(q)
    if j == k:
        out = out + HallElement.of(string_rep(q, d, i), e(j - 1))
    if i == l:
        out = out - HallElement.of(string_rep(q, d, k), e(l - 1))
    if j == k and i == l and e(k - 1) == -e(l - 1):
        out = out + HallElement.of(band_rep(q, t1 + t2), e(k - 1) * (t1 + t2))
    return out


def affine_strings(q: Quiver, max_dim: int) -> list[tuple[int, int, int]]:
    """Parameters ``(i, j, turns)`` of every string of dimension ``1 .. max_dim``."""
    n, _ = _affine_data(q)
    out = []
    for dim in range(1, max_dim + 1):
        for i in range(1, n + 1):
            j = (i - 1 + dim) % n + 1
            out.append((i, j, (dim - (j - i)) // n))
    return out


def verify_affine_commutator(q: Quiver, bound: int, band_partner_dim: int = 3,
                             max_band: int = 3, budget: int | None = None) -> VerificationReport:
    """Compare generic brackets of strings with the closed form, and check bands are central."""
    n, _ = _affine_data(q)
    params = affine_strings(q, bound - 1)
    failures = []
    checked = 0
    for a, b in itertools.product(params, repeat=2):
        da = a[1] - a[0] + a[2] * n
        db = b[1] - b[0] + b[2] * n
        if da + db > bound:
            continue
        checked += 1
        x = HallElement.of(affine_string(q, *a))
        y = HallElement.of(affine_string(q, *b))
        if bracket(x, y, budget) != affine_commutator_formula(q, a, b):
            failures.append({"strings": [list(a), list(b)]})
    partners = [HallElement.of(affine_string(q, *p)) for p in affine_strings(q, band_partner_dim)]
    bands = [HallElement.of(band_rep(q, d)) for d in range(1, max_band + 1)]
    for d, band in enumerate(bands, 1):
        for other in partners + bands:
            checked += 1
            if bracket(band, other, budget):
                failures.append({"band": d, "partner": [c.key for c in other.terms]})
    return VerificationReport(not failures, checked, failures)


# ---------------------------------------------------------------------------
# nice quotient


@cache
def is_infinite_nice(cls: IsoClass) -> bool:
    """Whether some indecomposable summand has infinite nice length."""
    return any(not nice_length(part).finite for part in decompose(cls.rep))


def nice_quotient(a: HallElement) -> HallElement:
    return HallElement(a.base, {k: v for k, v in a.terms.items() if not is_infinite_nice(k)})


def nice_product(a: HallElement, b: HallElement, budget: int | None = None) -> HallElement:
    """Product in the quotient by classes of infinite nice length."""
    return nice_quotient(product(nice_quotient(a), nice_quotient(b), budget))


# ---------------------------------------------------------------------------
# absolute indecomposability


def endomorphism_basis(m: F1Rep) -> list[dict[str, list[list[Fraction]]]]:
    """Rational basis of the endomorphism algebra of the complexified representation."""
    verts = m.base.vertices
    dims = dict(zip(verts, m.dim))
    offset = {}
    pos = 0
    for v in verts:
        offset[v] = pos
        pos += dims[v] ** 2
    nvars = pos

    def var(v, r, c):
        return offset[v] + r * dims[v] + c

    mats = base_change_matrices(m)
    rows = []
    for a in m.base.arrows:
        A = mats[a.id]
        s, t = a.src, a.tgt
        for r in range(dims[t]):
            for c in range(dims[s]):
                row = [0] * nvars
                # (A E_s)[r][c] - (E_t A)[r][c]
                for k in range(dims[s]):
                    if A[r][k]:
                        row[var(s, k, c)] += A[r][k]
                for k in range(dims[t]):
                    if A[k][c]:
                        row[var(t, r, k)] -= A[k][c]
                if any(row):
                    rows.append(row)
    basis = []
    for vec in nullspace(rows, nvars):
        basis.append({v: [[vec[var(v, r, c)] for c in range(dims[v])] for r in range(dims[v])]
                      for v in verts})
    return basis


def _trace_product(x, y) -> Fraction:
    total = Fraction(0)
    for v in x:
        a, b = x[v], y[v]
        n = len(a)
        total += sum(a[i][k] * b[k][i] for i in range(n) for k in range(n))
    return total


def absolutely_indecomposable(m: F1Rep) -> bool:
    """Whether the complexification is indecomposable (its endomorphism algebra is local).

    In characteristic zero the trace form of the endomorphism algebra has
    rank ``dim End / rad End``, so locality means rank one.
    """
    base = m.base
    if not base.is_connected or not isinstance(classify_shape(base), (Tree, TypeATilde, ProperPseudotree)):
        raise UnsupportedQuiver("only trees, single cycles and proper pseudotrees are supported")
    if m.total_dim == 0:
        return False
    basis = endomorphism_basis(m)
    gram = [[_trace_product(x, y) for y in basis] for x in basis]
    return rational_rank(gram) == 1


def sorted_terms(a: HallElement) -> list[tuple[IsoClass, Fraction]]:
    return sorted(a.terms.items(), key=lambda kv: kv[0].sort_key())

