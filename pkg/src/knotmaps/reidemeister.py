"""Reidemeister moves and diagram simplification.

R1 removes a loop crossing, R2 removes a bigon whose strand is over at
both ends, R3 slides the strand that passes over (or under) both others
across a triangle.  ``reidemeister_simplify`` runs R1/R2 to a fixed point
and spends a bounded number of R3 passes trying to expose further
reductions; the crossing count never increases.

Simplification runs on a light mutable state (partner, signs, optional
per-arc direction flags) shared with the HOMFLY skein recursion.  All
removals go through one port-splicing routine, so degenerate cases
(adjacent loops, bigons whose strands immediately reconnect, components
shrinking to zero crossings) fall out uniformly; strands that close up
without crossings are returned as a circle count.

Inverse moves (adding a curl, poking a finger across a face, the triangle
slide) exist to generate random equivalent diagrams for invariance tests.
"""

from __future__ import annotations

import random as _random
from dataclasses import dataclass

from .diagram import BLANK, Crossing, Diagram, build_diagram
from .errors import DomainError, KnotmapsError, ValidationError

__all__ = [
    "CrossinglessLink",
    "reidemeister_simplify",
    "r1_add",
    "r2_add",
    "r3_triangles",
    "r3_apply",
    "random_equivalent",
]


@dataclass(frozen=True)
class CrossinglessLink:
    """Sentinel for diagrams simplified below one crossing.

    ``circles`` counts the crossingless unknotted components; a knot
    diagram that simplifies away completely becomes ``CrossinglessLink(1)``.
    """

    circles: int

    @property
    def n(self):
        return 0


class _State:
    """Mutable (partner, signs, out-flags) triple for surgery.

    Arc ids stay 4v+s; removed crossings keep their slots until
    :meth:`compact`.  ``out`` may be None (unoriented)."""

    __slots__ = ("partner", "signs", "out", "alive", "circles")

    def __init__(self, partner, signs, out=None, circles=0):
        self.partner = list(partner)
        self.signs = list(signs)
        self.out = None if out is None else list(out)
        self.alive = [True] * len(self.signs)
        self.circles = circles

    @classmethod
    def from_diagram(cls, d, orient=False):
        n = d.n
        partner = [-1] * (4 * n)
        signs = [0] * n
        relabel = {}
        for v, c in enumerate(d.crossings):
            signs[v] = c.sign
            for s, a in enumerate(c.arcs):
                relabel[a] = 4 * v + s
        for a, p in enumerate(d.partner):
            partner[relabel[a]] = relabel[p]
        out = None
        if orient:
            out = [0] * (4 * n)
            seen = set()
            start0 = relabel[d.root] if d.root is not None else 0
            for start in [start0] + list(range(4 * n)):
                if start in seen:
                    continue
                a = start
                while True:
                    out[a] = 1
                    seen.add(a)
                    seen.add(partner[a])
                    a = partner[a] ^ 2
                    if a == start:
                        break
        return cls(partner, signs, out)

    def n_alive(self):
        return sum(self.alive)

    def sigma(self, a):
        return (a & ~3) | ((a + 1) & 3)

    def ov(self, a):
        """+1 when the strand through arc ``a`` passes over its crossing."""
        s = self.signs[a >> 2]
        return s if (a & 1) == 0 else -s

    def to_diagram(self):
        """Compact to a Diagram, or a CrossinglessLink when empty."""
        live = [v for v, ok in enumerate(self.alive) if ok]
        if not live:
            return CrossinglessLink(self.circles)
        newv = {v: i for i, v in enumerate(live)}
        xs = []
        edges = []
        for v in live:
            arcs = tuple(4 * newv[v] + s for s in range(4))
            xs.append(Crossing(arcs, self.signs[v]))
        for v in live:
            for s in range(4):
                a = 4 * v + s
                p = self.partner[a]
                na = 4 * newv[v] + s
                np_ = 4 * newv[p >> 2] + (p & 3)
                if na < np_:
                    edges.append((na, np_))
        d = build_diagram(xs, edges)
        return d


def _splice_out(state, dead, thru):
    """Remove crossings, continuing each strand along the ``thru`` pairing.

    ``thru[arc]`` tells where a strand entering a dead crossing at ``arc``
    leaves it; for plain removals (R1/R2) that is the opposite arc, for
    oriented smoothings an adjacent one.  Strand cycles that never reach a
    surviving crossing are counted into ``state.circles``.
    """
    deadset = set(dead)
    for v in deadset:
        state.alive[v] = False
    visited = set()
    for a in range(len(state.partner)):
        if not state.alive[a >> 2]:
            continue
        p = state.partner[a]
        if (p >> 2) not in deadset:
            continue
        cur = p
        while (cur >> 2) in deadset:
            visited.add(cur)
            cur = thru[cur]
            visited.add(cur)
            cur = state.partner[cur]
        state.partner[a] = cur
    seen = set()
    for v in deadset:
        for s in range(4):
            a = 4 * v + s
            if a in seen or a in visited:
                continue
            cur = a
            closed = True
            while cur not in seen:
                seen.add(cur)
                seen.add(thru[cur])
                cur = state.partner[thru[cur]]
                if (cur >> 2) not in deadset:
                    closed = False
                    break
            if closed:
                state.circles += 1
    return state


def _transparent(state, vertices):
    thru = {}
    for v in vertices:
        for s in range(4):
            a = 4 * v + s
            thru[a] = a ^ 2
    return thru


def _find_r1(state):
    for v, ok in enumerate(state.alive):
        if not ok:
            continue
        for s in range(4):
            a = 4 * v + s
            if state.partner[a] == state.sigma(a):
                return v, a
    return None


def _apply_r1(state, v, a):
    """Remove the loop crossing v (R1: the strand passes straight through)."""
    _splice_out(state, [v], _transparent(state, [v]))


def _find_r2(state):
    """A removable bigon: face of length two whose strand is over at both
    crossings (always removable on shadows)."""
    for x in range(len(state.partner)):
        if not state.alive[x >> 2]:
            continue
        y = state.sigma(state.partner[x])
        if y == x or (y >> 2) == (x >> 2):
            continue
        if state.sigma(state.partner[y]) != x:
            continue
        if state.ov(x) == state.ov(state.partner[x]):
            return x, y
    return None


def _apply_r2(state, x, y):
    u = x >> 2
    w = y >> 2
    _splice_out(state, [u, w], _transparent(state, [u, w]))


def _simplify_state(state):
    """R1/R2 to a fixed point; returns the state (shared with homfly)."""
    while True:
        hit = _find_r1(state)
        if hit is not None:
            _apply_r1(state, *hit)
            continue
        hit = _find_r2(state)
        if hit is not None:
            _apply_r2(state, *hit)
            continue
        return state


def r3_triangles(d):
    """All (triangle arcs, movable side) choices for R3 on the diagram.

    A triangle is reported once per movable strand: the strand passing
    over both others or under both others (every strand, on shadows).
    """
    out = []
    seen = set()
    sig = d.sigma()
    for x in range(d.n_arcs):
        y = sig[d.partner[x]]
        z = sig[d.partner[y]]
        if sig[d.partner[z]] != x:
            continue
        A, B, C = d.vertex_of[x], d.vertex_of[y], d.vertex_of[z]
        if len({A, B, C}) != 3:
            continue
        key = frozenset((A, B, C))
        if (key, x) in seen:
            continue
        for t in ((x, y, z), (y, z, x), (z, x, y)):
            seen.add((key, t[0]))
        # strand through edge e(x) spans crossings A and B
        for (xa, xb, xc) in ((x, y, z), (y, z, x), (z, x, y)):
            def ov(a):
                s = d.crossings[d.vertex_of[a]].sign
                return s if d.slot_of[a] % 2 == 0 else -s
            if ov(xa) == ov(d.partner[xa]):
                out.append((xa, xb, xc))
    return out


def _opp(d, a):
    v, s = d.vertex_of[a], d.slot_of[a]
    return d.crossings[v].arcs[(s + 2) % 4]


def _triangle_cut(d, move):
    """Cut out the triangle's three crossings as a 6-leg tangle.

    Returns (vertices (vA, vB, vC), legs in boundary order, leg labels),
    where the legs are the removed-side arcs of the six outer edges and
    each label is a (strand, end) token: strands "m" (through A and B),
    "p" (C and A), "q" (B and C).
    """
    from .tangles import boundary_order

    x_a, x_b, x_c = move
    u_B = d.partner[x_a]
    u_C = d.partner[x_b]
    y_A = d.partner[x_c]
    vA, vB, vC = d.vertex_of[x_a], d.vertex_of[x_b], d.vertex_of[x_c]
    tri = {vA, vB, vC}
    relabel = {}
    for i, v in enumerate((vA, vB, vC)):
        for s in range(4):
            relabel[d.crossings[v].arcs[s]] = 4 * i + s
    xs = [Crossing(tuple(range(4 * i, 4 * i + 4))) for i in range(3)]
    partner = [-1] * 12
    for a_old, na in relabel.items():
        p_old = d.partner[a_old]
        if d.vertex_of[p_old] in tri and d.vertex_of[a_old] in tri:
            e_old = (a_old, p_old)
            # only the three triangle edges are internal to the cut
            if {a_old, p_old} in ({x_a, u_B}, {x_b, u_C}, {x_c, y_A}):
                partner[na] = relabel[p_old]
    order = boundary_order(xs, partner)
    inv = {na: a_old for a_old, na in relabel.items()}
    legs = [inv[na] for na in order]
    labels = {}
    labels[_opp(d, x_a)] = ("m", 0)
    labels[_opp(d, u_B)] = ("m", 1)
    labels[_opp(d, y_A)] = ("p", 0)
    labels[_opp(d, x_c)] = ("p", 1)
    labels[_opp(d, x_b)] = ("q", 0)
    labels[_opp(d, u_C)] = ("q", 1)
    return (vA, vB, vC), legs, [labels[a] for a in legs]


from functools import lru_cache


@lru_cache(maxsize=None)
def _fill_candidates(sign_pq, sign_mp, sign_mq):
    """All 3-crossing fillings of a hexagon by strands m, p, q that cross
    pairwise once, with prescribed over-strands.

    Crossing 0 is p x q, crossing 1 is m x p, crossing 2 is m x q.  The
    sign arguments give the over strand: +1 means the first-named strand
    of the pair is over.  Returns (tangle, leg labels) pairs.
    """
    from .tangles import build_tangle

    found = []

    pairs = (("p", "q"), ("m", "p"), ("m", "q"))
    overs = (sign_pq, sign_mp, sign_mq)
    for evens in range(8):
        # which strand of each crossing runs through the even slots
        strand_at = {}
        sign = [0, 0, 0]
        for v in range(3):
            first_even = (evens >> v) & 1 == 0
            s1, s2 = pairs[v]
            if first_even:
                strand_at[4 * v], strand_at[4 * v + 2] = s1, s1
                strand_at[4 * v + 1], strand_at[4 * v + 3] = s2, s2
                sign[v] = overs[v]
            else:
                strand_at[4 * v], strand_at[4 * v + 2] = s2, s2
                strand_at[4 * v + 1], strand_at[4 * v + 3] = s1, s1
                sign[v] = -overs[v]
        # internal edges join the two passages of each strand
        occs = {"m": [], "p": [], "q": []}
        for a in range(12):
            occs[strand_at[a]].append(a)
        for choice in range(64):
            bits = choice
            edges = []
            used = set()
            ok = True
            for name in ("p", "q", "m"):
                arcs4 = occs[name]
                # each strand passes two crossings on opposite arc pairs
                cr = sorted({a >> 2 for a in arcs4})
                a_end = 4 * cr[0] + (0 if strand_at[4 * cr[0]] == name else 1)
                b_end = 4 * cr[1] + (0 if strand_at[4 * cr[1]] == name else 1)
                if bits & 1:
                    a_end ^= 2
                if bits & 2:
                    b_end ^= 2
                bits >>= 2
                if a_end in used or b_end in used:
                    ok = False
                    break
                used.update((a_end, b_end))
                edges.append((a_end, b_end))
            if not ok:
                continue
            xs = [Crossing(tuple(range(4 * v, 4 * v + 4)), sign[v]) for v in range(3)]
            try:
                from .tangles import boundary_order as _bo

                partner = [-1] * 12
                for a, b in edges:
                    partner[a] = b
                    partner[b] = a
                exterior = _bo(xs, partner)
                t = build_tangle(xs, edges, exterior)
            except KnotmapsError:
                continue
            # label each exterior arc with (strand, end index)
            lab = []
            seen_strand_arcs = {}
            for a in t.exterior:
                name = strand_at[a]
                idx = seen_strand_arcs.setdefault(name, [])
                idx.append(a)
                lab.append((name, len(idx) - 1))
            found.append((t, tuple(lab)))
    return tuple(found)


def r3_apply(d, move):
    """Slide the movable strand of the triangle across the far crossing.

    ``move`` is a triple (x_a, x_b, x_c) of the triangle's face arcs as
    produced by :func:`r3_triangles`; the strand through ``e(x_a)`` moves.
    The three crossings are cut out and the hexagonal hole refilled with
    the unique other planar configuration that keeps every pairwise
    over/under relation; crossing count and link type are unchanged.
    Returns an unrooted diagram.
    """
    from .diagram import canonical_code

    x_a, x_b, x_c = move
    sig = d.sigma()
    if sig[d.partner[x_a]] != x_b or sig[d.partner[x_b]] != x_c \
            or sig[d.partner[x_c]] != x_a:
        raise ValidationError("not a triangle face")
    (vA, vB, vC), legs, leg_labels = _triangle_cut(d, move)
    if len({vA, vB, vC}) != 3:
        raise ValidationError("triangle must use three distinct crossings")

    def ov(a):
        s = d.crossings[d.vertex_of[a]].sign
        return s if d.slot_of[a] % 2 == 0 else -s

    mov = ov(x_a)
    if mov != ov(d.partner[x_a]):
        raise ValidationError("strand is not movable (not over/under both)")
    # pairwise over data, preserved by the move: strand p passes C via arc
    # x_c, so ov(x_c) says whether p is over q there
    sign_pq = ov(x_c)
    sign_mp = mov
    sign_mq = mov

    tri_arcs = set()
    for v in (vA, vB, vC):
        tri_arcs.update(d.crossings[v].arcs)

    def glue(tangle, lab):
        # map this tangle's legs onto the old legs by matching the cyclic
        # boundary label word in every consistent end-assignment
        want = leg_labels
        got = lab
        k = len(want)
        for flip_m in (0, 1):
            for flip_p in (0, 1):
                for flip_q in (0, 1):
                    flips = {"m": flip_m, "p": flip_p, "q": flip_q}
                    adj = [(s, e ^ flips[s]) for s, e in got]
                    for rot in range(k):
                        if all(adj[(i + rot) % k] == want[i] for i in range(k)):
                            mapping = {}
                            for i in range(k):
                                mapping[legs[i]] = tangle.exterior[(i + rot) % k]
                            yield mapping

    anchor = None
    for leg in legs:
        outer = d.partner[leg]
        if d.vertex_of[outer] not in (vA, vB, vC):
            anchor = outer
            break

    def key_of(diagram):
        if anchor is not None:
            return canonical_code(diagram, anchor).code
        return min(canonical_code(diagram, a).code for a in range(diagram.n_arcs))

    old_key = key_of(d)
    results = {}
    for tangle, lab in _fill_candidates(sign_pq, sign_mp, sign_mq):
        for mapping in glue(tangle, lab):
            # rebuild: replacement crossings take vertex ids vA, vB, vC
            vmap = {0: vA, 1: vB, 2: vC}
            arcmap = {}
            for tv in range(3):
                for s in range(4):
                    arcmap[4 * tv + s] = 4 * vmap[tv] + s
            xs = list(d.crossings)
            for tv in range(3):
                c = tangle.crossings[tv]
                xs[vmap[tv]] = Crossing(
                    tuple(arcmap[a] for a in c.arcs), c.sign
                )
            partner = list(d.partner)
            for a in tri_arcs:
                partner[a] = -1
            for a, p in enumerate(tangle.partner):
                if 0 <= p and a < p:
                    partner[arcmap[a]] = arcmap[p]
                    partner[arcmap[p]] = arcmap[a]
            inv_map = {old: arcmap[new] for old, new in mapping.items()}
            for old_leg, new_arc in inv_map.items():
                outer = d.partner[old_leg]
                outer = inv_map.get(outer, outer)
                partner[new_arc] = outer
                partner[outer] = new_arc
            if any(p < 0 for p in partner):
                continue
            try:
                dd = build_diagram(
                    xs, [(a, p) for a, p in enumerate(partner) if a < p]
                )
            except KnotmapsError:
                continue
            results.setdefault(key_of(dd), dd)
    others = [dd for key, dd in results.items() if key != old_key]
    if not others:
        if old_key in results:
            return results[old_key]
        raise ValidationError("no valid triangle refilling found")
    if len(others) > 1:
        raise AssertionError("triangle slide is not unique")
    return others[0]


def reidemeister_simplify(d, r3_passes=2):
    """Reduce the diagram by R1/R2 removals, with bounded R3 unlock passes.

    Returns a Diagram with at most as many crossings, or a
    :class:`CrossinglessLink` sentinel when everything cancels.  The
    result is unrooted and represents the same link type.
    """
    state = _State.from_diagram(d)
    _simplify_state(state)
    result = state.to_diagram()
    if isinstance(result, CrossinglessLink):
        if state.circles == 0:
            raise AssertionError("simplification lost all components")
        return result
    for _ in range(r3_passes):
        moved = False
        for move in r3_triangles(result):
            candidate = r3_apply(result, move)
            st = _State.from_diagram(candidate)
            st.circles += state.circles
            _simplify_state(st)
            if st.n_alive() < candidate.n or st.circles > state.circles:
                state = st
                out = st.to_diagram()
                if isinstance(out, CrossinglessLink):
                    return CrossinglessLink(out.circles)
                result = out
                moved = True
                break
        if not moved:
            break
    if state.circles:
        # crossingless unknot components split off next to a nonempty rest
        # cannot happen for connected input
        raise AssertionError("connected diagram split into pieces")
    return result


def r1_add(d, a, side=0, sign=1):
    """Add a curl on the edge of arc ``a``; returns an unrooted diagram."""
    if not 0 <= a < d.n_arcs:
        raise DomainError(f"arc {a} out of range")
    n = d.n
    v = n
    V = [4 * v + s for s in range(4)]
    ap = d.partner[a]
    edges = [e for e in d.edges if e != d.edge_of(a)]
    if side == 0:
        edges += [(ap, V[0]), (V[2], V[3]), (V[1], a)]
    else:
        edges += [(ap, V[0]), (V[1], V[2]), (V[3], a)]
    xs = list(d.crossings) + [Crossing(tuple(V), sign)]
    return build_diagram(xs, edges)


def r2_add(d, a, b, over=True):
    """Poke the strand of ``a``'s edge across ``b``'s edge through their
    shared face; the finger passes over both new crossings when ``over``.

    Both arcs must have the shared face on their own side (be members of
    the same face cycle).
    """
    if d._face_of[a] != d._face_of[b]:
        raise ValidationError("arcs must lie on a common face")
    if d.edge_of(a) == d.edge_of(b):
        raise ValidationError("poke needs two distinct edges")
    n = d.n
    X = [4 * n + s for s in range(4)]
    Y = [4 * (n + 1) + s for s in range(4)]
    ap = d.partner[a]
    bp = d.partner[b]
    edges = [e for e in d.edges if e not in (d.edge_of(a), d.edge_of(b))]
    # finger occupies the even slots of both new crossings:
    # a -- X0, tip X2 -- Y0, Y2 -- a'; crossed edge: b' -- X1, X3 -- Y3, Y1 -- b
    edges += [
        (a, X[0]), (X[2], Y[0]), (Y[2], ap),
        (bp, X[1]), (X[3], Y[3]), (Y[1], b),
    ]
    s = 1 if over else -1
    xs = list(d.crossings) + [Crossing(tuple(X), s), Crossing(tuple(Y), s)]
    return build_diagram(xs, edges)


def random_equivalent(d, steps, seed, max_n=None):
    """Random walk over Reidemeister moves; same link type, new diagram.

    Up moves (R1+, R2+) are skipped once ``max_n`` crossings are reached.
    """
    rng = _random.Random(seed)
    cur = d
    max_n = max_n or (d.n + 8)
    for _ in range(steps):
        options = []
        state = _State.from_diagram(cur)
        if _find_r1(state) is not None or _find_r2(state) is not None:
            options.append("down")
        if cur.n + 1 <= max_n:
            options.append("r1+")
        if cur.n + 2 <= max_n:
            options.append("r2+")
        if r3_triangles(cur):
            options.append("r3")
        move = rng.choice(options)
        if move == "down":
            st = _State.from_diagram(cur)
            hit = _find_r1(st)
            if hit is not None:
                _apply_r1(st, *hit)
            else:
                _apply_r2(st, *_find_r2(st))
            out = st.to_diagram()
            if isinstance(out, CrossinglessLink):
                return out
            cur = out
        elif move == "r1+":
            cur = r1_add(
                cur, rng.randrange(cur.n_arcs), rng.randrange(2),
                rng.choice((1, -1)),
            )
        elif move == "r2+":
            faces_pool = [f for f in cur._faces if len(f) >= 2]
            f = rng.choice(faces_pool)
            a, b = rng.sample(list(f), 2)
            if cur.edge_of(a) == cur.edge_of(b):
                continue
            cur = r2_add(cur, a, b, rng.random() < 0.5)
        else:
            cur = r3_apply(cur, rng.choice(r3_triangles(cur)))
    return cur
