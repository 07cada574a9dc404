"""Minimal diagrams of the small knot types used for classification.

Every fixture is an alternating signing of the appropriate prime knot
shadow from the exhaustive enumeration, so construction is deterministic:
the 3- and 4-crossing prime knot shadows are unique, and at five crossings
the torus knot's shadow is recognized by its five bigon faces.  Mirrors
flip every sign.  Composite fixtures are connect sums of trefoils.
"""

from __future__ import annotations

from functools import lru_cache

from .diagram import Crossing, Diagram, build_diagram, faces, mirror, strand_walk
from .enumeration import enumerate_rooted
from .errors import ValidationError
from .tangles import connect_sum, two_leg_form

__all__ = [
    "make_alternating",
    "unknot_curl",
    "trefoil",
    "figure_eight",
    "cinquefoil",
    "three_twist",
    "granny",
    "square",
]


def make_alternating(shadow, first_over=True):
    """Decorate a knot shadow so the strand alternates over/under.

    Every knot shadow admits exactly two alternating sign assignments;
    ``first_over`` selects whether the walk from the root passes over at
    its first crossing visit.
    """
    over = first_over
    sides = {}
    start = shadow.root if shadow.root is not None else 0
    for entry in strand_walk(shadow, start):
        v = shadow.vertex_of[entry]
        parity = shadow.slot_of[entry] % 2
        want = 1 if (over == (parity == 0)) else -1
        if v in sides and sides[v] != want:
            raise ValidationError("shadow does not alternate consistently")
        sides[v] = want
        over = not over
    xs = tuple(
        Crossing(c.arcs, sides[v]) for v, c in enumerate(shadow.crossings)
    )
    return Diagram(xs, shadow.partner, shadow.root)


def unknot_curl(sign=1):
    """One-crossing unknot diagram (a single kink)."""
    return build_diagram([Crossing((0, 1, 2, 3), sign)], [(0, 1), (2, 3)], root=0)


@lru_cache(maxsize=None)
def _prime_knot_shadow(n, want_bigons=None):
    shadows = enumerate_rooted(n, "prime-knot-shadow")
    seen = []
    for s in shadows:
        bigons = sum(1 for f in faces(s) if len(f) == 2)
        if want_bigons is None or bigons == want_bigons:
            return s
        seen.append(bigons)
    raise AssertionError(f"no prime {n}-shadow with {want_bigons} bigons ({seen})")


def trefoil(mirrored=False):
    """Minimal 3_1 diagram (alternating 3-crossing)."""
    return make_alternating(_prime_knot_shadow(3), first_over=not mirrored)


def figure_eight(mirrored=False):
    """Minimal 4_1 diagram; amphichiral, the mirror flag is cosmetic."""
    return make_alternating(_prime_knot_shadow(4), first_over=not mirrored)


def cinquefoil(mirrored=False):
    """Minimal 5_1 (torus knot) diagram: its shadow has five bigons."""
    return make_alternating(_prime_knot_shadow(5, want_bigons=5),
                            first_over=not mirrored)


def three_twist(mirrored=False):
    """Minimal 5_2 diagram: the five-crossing prime shadow with fewer bigons."""
    shadows = enumerate_rooted(5, "prime-knot-shadow")
    for s in shadows:
        if sum(1 for f in faces(s) if len(f) == 2) != 5:
            return make_alternating(s, first_over=not mirrored)
    raise AssertionError("missing 5_2 shadow")


def _sum_with_trefoil(base, mirrored_summand):
    t = two_leg_form(trefoil(mirrored=mirrored_summand))
    # attach at an arc off the root edge so the root survives untouched
    arc = next(
        a for a in range(base.n_arcs)
        if base.root is None or base.edge_of(a) != base.edge_of(base.root)
    )
    return connect_sum(base, arc, t, t.exterior[0])


def granny(mirrored=False):
    """Connect sum of two same-handed trefoils."""
    return _sum_with_trefoil(trefoil(mirrored), mirrored)


def square(_mirrored=False):
    """Connect sum of two opposite-handed trefoils (its own mirror type)."""
    return _sum_with_trefoil(trefoil(False), True)
