"""Seeded random nilpotent representations for oracle cross-checks."""

from __future__ import annotations

import random

from .gradings import nice_length
from .quiver import Quiver, named_quiver
from .rep import F1Rep

CORPUS_BASES = ("A2", "A3", "L1", "L2", "Atilde3")


def random_rep(base: Quiver, rng: random.Random, max_total: int = 6, max_vertex: int = 3) -> F1Rep:
    """A random nilpotent representation with bounded dimensions."""
    while True:
        dims = [rng.randint(0, max_vertex) for _ in base.vertices]
        if 0 < sum(dims) <= max_total:
            break
    basis = {v: [f"{v}.{k}" for k in range(1, d + 1)] for v, d in zip(base.vertices, dims)}
    # arrows only climb a random total order, so the result is always nilpotent
    elements = [x for names in basis.values() for x in names]
    rng.shuffle(elements)
    height = {x: i for i, x in enumerate(elements)}
    maps = {}
    for a in base.arrows:
        free = set(basis[a.tgt])
        pairs = []
        for x in rng.sample(basis[a.src], len(basis[a.src])):
            options = sorted((y for y in free if height[y] > height[x]), key=height.get)
            if options and rng.random() < 0.7:
                y = rng.choice(options)
                free.discard(y)
                pairs.append((x, y))
        maps[a.id] = pairs
    return F1Rep(base, basis, maps)


def generate_corpus(seed: int, count: int = 24, max_total: int = 6, max_vertex: int = 3,
                    bases=CORPUS_BASES, max_tries: int = 10_000) -> list[tuple[str, F1Rep]]:
    """``count`` distinct nilpotent representations of finite nice length, cycling through the bases."""
    rng = random.Random(seed)
    quivers = [(name, named_quiver(name)) for name in bases]
    out: list[tuple[str, F1Rep]] = []
    seen: set[tuple[str, str]] = set()
    tries = 0
    while len(out) < count and tries < max_tries:
        name, q = quivers[tries % len(quivers)]
        tries += 1
        m = random_rep(q, rng, max_total, max_vertex)
        if (name, m.key) in seen or not nice_length(m).finite:
            continue
        seen.add((name, m.key))
        out.append((name, m))
    return out
