"""Small named representations used in documentation, tests and the CLI corpus."""

from __future__ import annotations

from .quiver import Arrow, Quiver, loop_quiver
from .rep import F1Rep, amalgam


def string_over_two_loops() -> F1Rep:
    """Five elements: ``v1 -a1-> v2 -a2-> v3 <-a1- v4 <-a2- v5``."""
    return F1Rep(loop_quiver(2), {"v": ["v1", "v2", "v3", "v4", "v5"]},
                 {"a1": [("v1", "v2"), ("v4", "v3")], "a2": [("v2", "v3"), ("v5", "v4")]})


def band_over_two_loops() -> F1Rep:
    """Square ``v1 -a1-> v2 <-a2- v3 -a1-> v4 <-a2- v1``, a doubly wound band."""
    return F1Rep(loop_quiver(2), {"v": ["v1", "v2", "v3", "v4"]},
                 {"a1": [("v1", "v2"), ("v3", "v4")], "a2": [("v3", "v2"), ("v1", "v4")]})


def three_loop_example() -> F1Rep:
    """Sixteen elements over three loops, every colour fibre a path, cycle rank 3."""
    a1 = "e f h j k l p"
    a2 = "a c e g h m n o p"
    a3 = "b c d h i"

    def chain(s):
        xs = s.split()
        return list(zip(xs, xs[1:]))

    return F1Rep(loop_quiver(3), {"v": list("abcdefghijklmnop")},
                 {"a1": chain(a1), "a2": chain(a2), "a3": chain(a3)})


def double_arrow_pseudotree() -> tuple[Quiver, F1Rep]:
    """Base ``s => t -> u`` (arrows ``a``, ``b``, ``g``) with a rank-one coefficient quiver."""
    base = Quiver(("s", "t", "u"), (Arrow("a", "s", "t"), Arrow("b", "s", "t"), Arrow("g", "t", "u")))
    rep = F1Rep(base, {"s": ["s1", "s2"], "t": ["t1", "t2"], "u": ["u1"]},
                {"a": [("s1", "t1"), ("s2", "t2")], "b": [("s1", "t2"), ("s2", "t1")],
                 "g": [("t2", "u1")]})
    return base, rep


def glued_over_four_loops() -> tuple[F1Rep, F1Rep, F1Rep]:
    """Two colour-disjoint pieces over four loops and their amalgam at ``x1 ~ y1``."""
    base = loop_quiver(4)
    square = F1Rep(base, {"v": ["x1", "x2", "x3", "x4"]},
                   {"a1": [("x1", "x2"), ("x2", "x4")], "a2": [("x1", "x3"), ("x3", "x4")]})
    zigzag = F1Rep(base, {"v": ["y1", "y2", "y3", "y4", "y5"]},
                   {"a3": [("y1", "y2"), ("y4", "y3")], "a4": [("y2", "y3"), ("y5", "y4")]})
    return square, zigzag, amalgam(square, zigzag, "x1", "y1")
