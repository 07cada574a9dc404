"""Tangles: diagram fragments with 2k exterior arcs on one face.

A tangle reuses the (arcs, edges, crossings) triple of a diagram, except
that the exterior arcs belong to no edge and all lie on the boundary face.
``exterior`` stores them in counterclockwise boundary order (the order the
face walk meets them).

Two degenerate features never produced by the main constructions but
reachable by crossing deletion are supported read-only: *free strands*
(crossingless strands joining two boundary positions, stored as position
pairs with ``None`` placeholders in ``exterior``) and a count of
crossingless closed *circles*.  Tangles carrying either cannot be composed
or serialized.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import (
    BLANK,
    Crossing,
    Diagram,
    build_diagram,
    with_root,
)
from .errors import (
    ArcOutOfRange,
    ArityMismatch,
    Disconnected,
    ExteriorFaceViolation,
    InvalidMatching,
    MissingRoot,
    NonPlanar,
    NonPlanarComposition,
    StrandCountMismatch,
    UnknownCrossing,
    UnknownEdge,
    ValidationError,
)

__all__ = [
    "Tangle",
    "build_tangle",
    "two_leg_form",
    "close_two_leg",
    "remove_edge_to_tangle",
    "delete_crossing_to_tangle",
    "compose_mu",
    "connect_sum",
    "cyclic_compose",
    "strand_colors",
    "color_type",
]


@dataclass(frozen=True)
class Tangle:
    """Immutable tangle; use :func:`build_tangle` for validated construction.

    Attributes:
        crossings: the interior crossings.
        partner: edge involution over the 4n crossing arcs, -1 on exterior.
        exterior: boundary tokens in counterclockwise face order; an int is
            an exterior crossing arc, ``None`` a free-strand endpoint.
        free_pairs: pairs of exterior positions joined by free strands.
        circles: count of crossingless closed circles.
    """

    crossings: tuple
    partner: tuple
    exterior: tuple
    free_pairs: tuple = ()
    circles: int = 0

    @property
    def n(self):
        return len(self.crossings)

    @property
    def k(self):
        """Half the number of exterior arcs (a 2k-tangle)."""
        return len(self.exterior) // 2

    @property
    def is_degenerate(self):
        return bool(self.free_pairs) or self.circles > 0

    def _tables(self):
        vertex_of = {}
        slot_of = {}
        for v, c in enumerate(self.crossings):
            for s, a in enumerate(c.arcs):
                vertex_of[a] = v
                slot_of[a] = s
        return vertex_of, slot_of

    def sigma(self):
        sig = [0] * (4 * self.n)
        for c in self.crossings:
            for i, a in enumerate(c.arcs):
                sig[a] = c.arcs[(i + 1) % 4]
        return sig

    def opposite(self, a):
        vertex_of, slot_of = self._tables()
        c = self.crossings[vertex_of[a]]
        return c.arcs[(slot_of[a] + 2) % 4]

    def edges(self):
        return tuple(
            sorted((a, p) for a, p in enumerate(self.partner) if 0 <= p and a < p)
        )

    def open_strands(self):
        """Open strands as pairs of exterior positions, plus free pairs."""
        pos_of = {a: i for i, a in enumerate(self.exterior) if a is not None}
        pairs = []
        seen = set()
        for i, a in enumerate(self.exterior):
            if a is None or i in seen:
                continue
            b = a
            while True:
                out = self.opposite(b)
                if self.partner[out] < 0:
                    break
                b = self.partner[out]
            j = pos_of[out]
            pairs.append((i, j))
            seen.update((i, j))
        return tuple(sorted(pairs + list(self.free_pairs)))

    def closed_circle_count(self):
        """Closed components: strand orbits missing the boundary, plus bare circles."""
        on_open = set()
        for a in self.exterior:
            if a is None:
                continue
            b = a
            on_open.add(b)
            while True:
                out = self.opposite(b)
                on_open.add(out)
                if self.partner[out] < 0:
                    break
                b = self.partner[out]
                on_open.add(b)
        rest = [a for a in range(4 * self.n) if a not in on_open]
        return _half_orbits(rest, self) + self.circles

    def strand_count(self):
        """k open strands plus closed circles."""
        return len(self.open_strands()) + self.closed_circle_count()

    def __repr__(self):
        return f"<Tangle n={self.n} legs={len(self.exterior)}>"


def _half_orbits(rest, t):
    seen = set()
    orbit_count = 0
    for start in rest:
        if start in seen:
            continue
        orbit_count += 1
        a = start
        while a not in seen:
            seen.add(a)
            a = t.partner[t.opposite(a)]
    return orbit_count // 2


def _bounce_faces(crossings, partner):
    """Face orbits of a map with legs: unmatched arcs reflect the walk."""
    m = len(partner)
    sig = [0] * m
    for c in crossings:
        for i, a in enumerate(c.arcs):
            sig[a] = c.arcs[(i + 1) % 4]
    nxt = [sig[partner[a]] if partner[a] >= 0 else sig[a] for a in range(m)]
    seen = [False] * m
    out = []
    for start in range(m):
        if seen[start]:
            continue
        cyc = []
        a = start
        while not seen[a]:
            seen[a] = True
            cyc.append(a)
            a = nxt[a]
        out.append(tuple(cyc))
    return out


def _connected(crossings, partner):
    n = len(crossings)
    if n <= 1:
        return True
    vertex_of = {}
    for v, c in enumerate(crossings):
        for a in c.arcs:
            vertex_of[a] = v
    adj = [[] for _ in range(n)]
    for a, p in enumerate(partner):
        if 0 <= p and a < p:
            adj[vertex_of[a]].append(vertex_of[p])
            adj[vertex_of[p]].append(vertex_of[a])
    seen = [False] * n
    seen[0] = True
    stack = [0]
    count = 1
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                count += 1
                stack.append(v)
    return count == n


def boundary_order(crossings, partner):
    """Unmatched arcs in counterclockwise boundary-face order.

    Raises:
        ExteriorFaceViolation: the unmatched arcs do not share one face.
    """
    loose = [a for a, p in enumerate(partner) if p < 0]
    if not loose:
        return ()
    for face in _bounce_faces(crossings, partner):
        ext = tuple(a for a in face if partner[a] < 0)
        if ext:
            if len(ext) != len(loose):
                raise ExteriorFaceViolation(
                    "exterior arcs do not all lie on the same face"
                )
            return ext
    raise ExteriorFaceViolation("no boundary face found")


def _rotation_equal(seq_a, seq_b):
    if len(seq_a) != len(seq_b):
        return False
    if not seq_a:
        return True
    twice = seq_b + seq_b
    return any(twice[i : i + len(seq_a)] == seq_a for i in range(len(seq_b)))


def build_tangle(crossings, edges, exterior, free_pairs=(), circles=0):
    """Validated tangle construction.

    Args:
        crossings: Crossing sequence (or (arcs, sign) pairs).
        edges: matching on the interior arcs.
        exterior: boundary tokens in counterclockwise face order.
    """
    xs = []
    for c in crossings:
        xs.append(c if isinstance(c, Crossing) else Crossing(tuple(c[0]), c[1]))
    n = len(xs)
    m = 4 * n
    exterior = tuple(exterior)
    if len(exterior) % 2 or not exterior:
        raise ValidationError("a tangle has 2k >= 2 exterior arcs")
    seen = [0] * m
    for c in xs:
        for a in c.arcs:
            if not 0 <= a < m:
                raise InvalidMatching(f"arc {a} outside [0, {m})")
            seen[a] += 1
    if any(cnt != 1 for cnt in seen):
        raise InvalidMatching("arcs must cover [0, 4n) exactly once")
    partner = [-1] * m
    for e in edges:
        a, b = e
        if a == b or not (0 <= a < m and 0 <= b < m):
            raise InvalidMatching(f"bad edge {e}")
        if partner[a] != -1 or partner[b] != -1:
            raise InvalidMatching(f"edge {e} reuses a matched arc")
        partner[a] = b
        partner[b] = a
    loose = {a for a, p in enumerate(partner) if p < 0}
    real = [a for a in exterior if a is not None]
    if set(real) != loose or len(real) != len(loose):
        raise InvalidMatching("exterior arcs must be exactly the unmatched arcs")
    free_positions = {i for i, a in enumerate(exterior) if a is None}
    covered = set()
    for i, j in free_pairs:
        covered.update((i, j))
    if covered != free_positions or len(covered) != 2 * len(free_pairs):
        raise ValidationError("free pairs must cover the None positions exactly")
    for i, j in free_pairs:
        lo, hi = min(i, j), max(i, j)
        inside = set(range(lo + 1, hi))
        for x, y in free_pairs:
            if (x in inside) != (y in inside) and {x, y} != {i, j}:
                raise NonPlanar("free strands cross")
        reals_inside = [p for p in inside if exterior[p] is not None]
        reals_outside = [
            p for p in range(len(exterior))
            if p not in inside and p not in (i, j) and exterior[p] is not None
        ]
        if reals_inside and reals_outside:
            raise NonPlanar("free strand separates the interior")
    if n:
        if not _connected(xs, partner):
            raise Disconnected("tangle interior is not connected")
        faces = _bounce_faces(xs, partner)
        if n - sum(1 for p in partner if p >= 0) // 2 + len(faces) != 2:
            raise NonPlanar("tangle rotation system is not planar")
        order = boundary_order(xs, partner)
        if not _rotation_equal(list(real), list(_restrict(order, real))):
            raise ExteriorFaceViolation(
                "exterior sequence disagrees with the boundary face order"
            )
    return Tangle(tuple(xs), tuple(partner), exterior, tuple(free_pairs), circles)


def _restrict(order, real):
    realset = set(real)
    return [a for a in order if a in realset]


def two_leg_form(d):
    """Cut the root edge into its two arcs: front leg first, hind leg second.

    The front leg is the root arc itself (pointing away from its crossing);
    re-closing with one edge restores the diagram.
    """
    if d.root is None:
        raise MissingRoot("two-leg form needs a root")
    a = d.root
    b = d.partner[a]
    partner = list(d.partner)
    partner[a] = -1
    partner[b] = -1
    order = boundary_order(d.crossings, partner)
    i = order.index(a)
    exterior = order[i:] + order[:i]
    return Tangle(d.crossings, tuple(partner), exterior)


def close_two_leg(t):
    """Inverse of :func:`two_leg_form`: join the two legs, root at the front."""
    if len(t.exterior) != 2 or t.is_degenerate:
        raise StrandCountMismatch("closing needs a plain 2-tangle")
    a, b = t.exterior
    edges = list(t.edges()) + [(a, b)]
    return build_diagram(t.crossings, edges, root=a)


def remove_edge_to_tangle(d, e):
    """The 2-tangle D minus e, exterior arcs being e's two arcs."""
    a, b = (e, d.partner[e]) if isinstance(e, int) else e
    if not (0 <= a < d.n_arcs) or d.partner[a] != b:
        raise UnknownEdge(f"{e} is not an edge of the diagram")
    partner = list(d.partner)
    partner[a] = -1
    partner[b] = -1
    exterior = boundary_order(d.crossings, partner)
    return Tangle(d.crossings, tuple(partner), exterior)


def delete_crossing_to_tangle(d, x):
    """The 4-tangle D minus the crossing x (with x's arcs and their edges).

    Stub arcs left by the removed edges become the exterior; edges that
    joined two slots of x survive as free strands or, for loops at x whose
    partner arcs are also at x, as bare circles.
    """
    if not 0 <= x < d.n:
        raise UnknownCrossing(f"no crossing {x}")
    gone = set(d.crossings[x].arcs)
    keep = [c for i, c in enumerate(d.crossings) if i != x]
    relabel = {}
    for c in keep:
        for a in c.arcs:
            relabel[a] = len(relabel)
    old_xarcs = d.crossings[x].arcs
    partner = [-1] * (4 * (d.n - 1))
    for a, p in enumerate(d.partner):
        if a < p and a not in gone and p not in gone:
            partner[relabel[a]] = relabel[p]
            partner[relabel[p]] = relabel[a]
    new_xs = [Crossing(tuple(relabel[a] for a in c.arcs), c.sign) for c in keep]

    stub = {}
    for s, xa in enumerate(old_xarcs):
        p = d.partner[xa]
        stub[s] = None if p in gone else relabel[p]

    if d.n == 1:
        # both edges were loops at the single crossing
        free = []
        done = set()
        for s, xa in enumerate(old_xarcs):
            if s in done:
                continue
            s2 = old_xarcs.index(d.partner[xa])
            free.append((s, s2))
            done.update((s, s2))
        return Tangle((), (), (None,) * 4, tuple(sorted(free)))

    real = [stub[s] for s in range(4) if stub[s] is not None]
    order = boundary_order(new_xs, partner)
    ext_real = _restrict(order, real)
    # place the stubs in boundary-face order, then thread free strands from
    # loops at x between the slots they used
    if len(real) == 4:
        exterior = tuple(ext_real)
        free_pairs = ()
    else:
        slot_seq = []
        for s in range(4):
            slot_seq.append((s, stub[s]))
        # order slots so that the real stubs appear in boundary order
        reals_by_slot = [s for s, v in slot_seq if v is not None]
        want = [stub_slot for a in ext_real for stub_slot in reals_by_slot if stub[stub_slot] == a]
        # rotate/reflect slot order to match; free slots keep their relative place
        for direction in (1, -1):
            for shift in range(4):
                perm = [(shift + direction * i) % 4 for i in range(4)]
                if [s for s in perm if stub[s] is not None] == want:
                    exterior = tuple(stub[s] for s in perm)
                    pos_of_slot = {s: i for i, s in enumerate(perm)}
                    free_pairs = []
                    done = set()
                    for s in perm:
                        if stub[s] is None and s not in done:
                            s2 = old_xarcs.index(d.partner[old_xarcs[s]])
                            free_pairs.append(
                                tuple(sorted((pos_of_slot[s], pos_of_slot[s2])))
                            )
                            done.update((s, s2))
                    return build_tangle(
                        new_xs, _pairs(partner), exterior, tuple(sorted(free_pairs))
                    )
        raise ExteriorFaceViolation("could not order stubs on the boundary face")
    return build_tangle(new_xs, _pairs(partner), exterior, free_pairs)


def _pairs(partner):
    return [(a, p) for a, p in enumerate(partner) if 0 <= p and a < p]


def _shift_tangle(t, off):
    xs = [Crossing(tuple(a + off for a in c.arcs), c.sign) for c in t.crossings]
    partner = {a + off: p + off for a, p in enumerate(t.partner) if p >= 0}
    exterior = tuple(None if a is None else a + off for a in t.exterior)
    return xs, partner, exterior


def compose_mu(t, s, mu):
    """Glue two tangles along a set of exterior-arc pairings.

    Args:
        t, s: tangles without free strands or bare circles.
        mu: iterable of (t_arc, s_arc) pairs; each arc at most once.

    Returns:
        A closed :class:`Diagram` when no exterior arcs remain, otherwise
        a new :class:`Tangle` with 2k + 2l - 2r exterior arcs.

    Raises:
        NonPlanarComposition: the glued rotation system leaves the sphere.
        ExteriorFaceViolation: leftover exterior arcs span several faces.
    """
    if t.is_degenerate or s.is_degenerate:
        raise ValidationError("cannot compose degenerate tangles")
    off = 4 * t.n
    s_xs, s_partner, s_ext = _shift_tangle(s, off)
    used_t, used_s = set(), set()
    pairs = []
    for ta, sa in mu:
        if ta not in t.exterior:
            raise ArcOutOfRange(f"{ta} is not an exterior arc of the first tangle")
        if sa not in s.exterior:
            raise ArcOutOfRange(f"{sa} is not an exterior arc of the second tangle")
        if ta in used_t or sa in used_s:
            raise ValidationError("an exterior arc appears twice in the pairing")
        used_t.add(ta)
        used_s.add(sa)
        pairs.append((ta, sa + off))
    xs = list(t.crossings) + s_xs
    edges = list(t.edges()) + [(a, p) for a, p in s_partner.items() if a < p] + pairs
    m = 4 * (t.n + s.n)
    partner = [-1] * m
    for a, b in edges:
        partner[a] = b
        partner[b] = a
    if all(p >= 0 for p in partner):
        try:
            return build_diagram(xs, edges)
        except NonPlanar as exc:
            raise NonPlanarComposition(str(exc)) from None
        except Disconnected:
            raise
    faces = _bounce_faces(xs, partner)
    n_edges = sum(1 for p in partner if p >= 0) // 2
    if not _connected(xs, partner):
        raise Disconnected("composition is not connected")
    if len(xs) - n_edges + len(faces) != 2:
        raise NonPlanarComposition("glued rotation system is not planar")
    exterior = boundary_order(xs, partner)
    return Tangle(tuple(xs), tuple(partner), exterior)


def connect_sum(d, a, t, b):
    """Connect sum of the head arc ``a`` of the diagram with tail ``b`` of ``t``.

    Cuts the edge of ``a`` and splices the 2-tangle in; preserves the root.

    Raises:
        ArcOutOfRange: ``a`` not in the diagram or ``b`` not exterior in t.
    """
    if not 0 <= a < d.n_arcs:
        raise ArcOutOfRange(f"arc {a} not in the diagram")
    if len(t.exterior) != 2:
        raise StrandCountMismatch("connect sum needs a 2-tangle")
    if b not in t.exterior:
        raise ArcOutOfRange(f"arc {b} is not exterior in the tangle")
    a2 = d.partner[a]
    b2 = next(x for x in t.exterior if x != b)
    td = remove_edge_to_tangle(d, (a, a2) if a < a2 else (a2, a))
    out = compose_mu(td, t, [(a, b), (a2, b2)])
    return with_root(out, d.root)


def cyclic_compose(t, s, ti, sj):
    """Close two 2k-tangles against each other into a link diagram.

    The exterior of ``t`` is enumerated counterclockwise from ``ti`` and the
    exterior of ``s`` clockwise from ``sj``; matched in order.
    """
    if len(t.exterior) != len(s.exterior):
        raise ArityMismatch(
            f"arity mismatch: {len(t.exterior)} vs {len(s.exterior)} exterior arcs"
        )
    if ti not in t.exterior or sj not in s.exterior:
        raise ArcOutOfRange("chosen arcs must be exterior")
    i = t.exterior.index(ti)
    j = s.exterior.index(sj)
    k2 = len(t.exterior)
    t_seq = [t.exterior[(i + r) % k2] for r in range(k2)]
    s_seq = [s.exterior[(j - r) % k2] for r in range(k2)]
    return compose_mu(t, s, list(zip(t_seq, s_seq)))


def strand_colors(t):
    """Cyclic boundary color word of a 4-tangle with two open strands."""
    if len(t.exterior) != 4:
        raise StrandCountMismatch("color words are defined for 4-tangles")
    strands = t.open_strands()
    if len(strands) != 2:
        raise StrandCountMismatch(
            f"need exactly 2 open strands, found {len(strands)}"
        )
    word = [""] * 4
    for color, (i, j) in zip("RB", sorted(strands)):
        word[i] = color
        word[j] = color
    out = "".join(word)
    return out if out[0] == "R" else out.translate(str.maketrans("RB", "BR"))


def color_type(t):
    """"RRBB" when the two strands join adjacent legs, else "RBRB"."""
    word = strand_colors(t)
    return "RRBB" if _rotation_equal(list(word), list("RRBB")) else "RBRB"
