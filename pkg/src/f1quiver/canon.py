"""Canonical certificates for windings up to isomorphism over a fixed base.

In a connected winding every vertex has at most one outgoing and at most one
incoming arrow of each colour. Once a start vertex is fixed, a breadth-first
walk that visits neighbours in ``(colour, direction)`` order therefore labels
the whole component without choices. The certificate of a component is the
least such labelling over the start vertices in one colour-refinement cell.
The certificate of a disconnected winding is the sorted list of its
component certificates.
"""

from __future__ import annotations

import json
from collections import deque
from math import factorial

from .quiver import Quiver, Winding


def _neighbours(gamma: Quiver, colour: dict[str, str], v: str):
    """``(colour, direction, neighbour)`` triples at ``v``; direction 0 is outgoing."""
    out = [(colour[a.id], 0, a.tgt) for a in gamma.out_arrows[v]]
    inc = [(colour[a.id], 1, a.src) for a in gamma.in_arrows[v]]
    return out + inc


def _refine(vertices, vcolour, nbrs) -> dict[str, int]:
    cell = {}
    sig = {v: (vcolour[v], tuple(sorted((c, d) for c, d, _ in nbrs[v]))) for v in vertices}
    while True:
        order = {s: i for i, s in enumerate(sorted(set(sig.values())))}
        new = {v: order[sig[v]] for v in vertices}
        if cell and len(set(new.values())) == len(set(cell.values())):
            return new
        cell = new
        sig = {
            v: (cell[v], tuple(sorted((c, d, cell[w]) for c, d, w in nbrs[v])))
            for v in vertices
        }


def _label_from(start, vcolour, nbrs, colour_rank):
    label = {start: 0}
    order = [start]
    queue = deque([start])
    edges = []
    while queue:
        v = queue.popleft()
        for c, d, w in sorted(nbrs[v], key=lambda t: (colour_rank[t[0]], t[1])):
            if w not in label:
                label[w] = len(order)
                order.append(w)
                queue.append(w)
            if d == 0:
                edges.append((label[v], label[w], colour_rank[c]))
    return tuple(vcolour[v] for v in order), tuple(sorted(edges))


def component_certificate(gamma: Quiver, vcolour: dict[str, str], acolour: dict[str, str],
                          vertices) -> tuple:
    vertices = list(vertices)
    vs = set(vertices)
    nbrs = {v: _neighbours(gamma, acolour, v) for v in vertices}
    for v in vertices:
        assert all(w in vs for _, _, w in nbrs[v]), "vertices must form a component"
    colour_rank = {c: c for v in vertices for c, _, _ in nbrs[v]}
    cells = _refine(vertices, vcolour, nbrs)
    by_cell: dict[int, list[str]] = {}
    for v, k in cells.items():
        by_cell.setdefault(k, []).append(v)
    best_cell = min(by_cell, key=lambda k: (len(by_cell[k]), k))
    return min(_label_from(s, vcolour, nbrs, colour_rank) for s in by_cell[best_cell])


def _render(cert: tuple) -> str:
    vcols, edges = cert
    return json.dumps([list(vcols), [list(e) for e in edges]], separators=(",", ":"))


def canonical_key(c: Winding) -> str:
    """Isomorphism-invariant string key of a winding over its base."""
    gamma = c.domain
    certs = [
        _render(component_certificate(gamma, c.vmap, c.amap, comp)) for comp in gamma.components
    ]
    return "+".join(sorted(certs)) or "0"


def component_keys(c: Winding) -> list[tuple[str, tuple[str, ...]]]:
    """``(key, vertices)`` for each connected component."""
    gamma = c.domain
    return [
        (_render(component_certificate(gamma, c.vmap, c.amap, comp)), comp)
        for comp in gamma.components
    ]


def automorphism_count(c: Winding) -> int:
    """Order of the automorphism group of a winding over its base.

    An automorphism of a connected winding is fixed by the image of one
    vertex, so it is enough to count start vertices whose labelling matches.
    Isomorphic components may also be permuted among themselves.
    """
    gamma = c.domain
    total = 1
    multiplicity: dict[str, int] = {}
    for comp in gamma.components:
        nbrs = {v: _neighbours(gamma, c.amap, v) for v in comp}
        rank = {x: x for x in c.amap.values()}
        ref = _label_from(comp[0], c.vmap, nbrs, rank)
        total *= sum(1 for s in comp if _label_from(s, c.vmap, nbrs, rank) == ref)
        key = _render(component_certificate(gamma, c.vmap, c.amap, comp))
        multiplicity[key] = multiplicity.get(key, 0) + 1
    for k in multiplicity.values():
        total *= factorial(k)
    return total
