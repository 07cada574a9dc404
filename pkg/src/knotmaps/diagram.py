"""Knot and link diagrams as rooted decorated 4-regular planar maps.

A diagram with ``n`` crossings is a triple of arcs, edges and crossings:
``4n`` arcs, a perfect matching on the arcs (the edges), and ``n`` cyclic
quadruples of arcs with a sign (the crossings).  Arc indices are arbitrary
within ``[0, 4n)``; each arc belongs to exactly one crossing slot and one
edge.  The quadruple is stored counterclockwise with respect to the
oriented sphere.

Sign convention: ``+1`` means the strand occupying the even slots (0, 2)
of the stored rotation passes over, ``-1`` means the odd strand passes
over, and ``0`` marks a shadow (no decoration).  Rotating the stored
quadruple by an odd amount therefore flips the stored sign; crossings
compare equal under exactly these rotations.

Strand traversal exits a crossing two slots after the entry slot.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import (
    Disconnected,
    DomainError,
    InvalidMatching,
    InvalidRoot,
    MissingRoot,
    NonPlanar,
    ValidationError,
)
from .maps import PlanarMap, face_orbits, map_code, orbits

__all__ = [
    "POSITIVE",
    "NEGATIVE",
    "BLANK",
    "Crossing",
    "Diagram",
    "CanonicalCode",
    "AutomorphismCount",
    "build_diagram",
    "faces",
    "link_components",
    "is_knot",
    "dual",
    "is_prime",
    "is_reduced",
    "is_two_leg_prime",
    "canonical_code",
    "automorphism_count",
    "mirror",
    "with_root",
    "strand_walk",
]

POSITIVE = 1
NEGATIVE = -1
BLANK = 0


@dataclass(frozen=True)
class Crossing:
    """Cyclic quadruple of arcs with a sign.

    ``arcs`` is stored with a fixed starting slot but compares cyclically;
    an odd rotation of the quadruple flips the sign (the even/odd strand
    roles swap).
    """

    arcs: tuple
    sign: int = BLANK

    def __post_init__(self):
        arcs = tuple(int(a) for a in self.arcs)
        object.__setattr__(self, "arcs", arcs)
        if len(arcs) != 4 or len(set(arcs)) != 4:
            raise InvalidMatching(f"crossing needs 4 distinct arcs, got {self.arcs}")
        if self.sign not in (POSITIVE, NEGATIVE, BLANK):
            raise ValidationError(f"bad sign {self.sign!r}")

    def rotated(self, k):
        """Same crossing with the stored starting slot advanced by ``k``."""
        k %= 4
        arcs = self.arcs[k:] + self.arcs[:k]
        return Crossing(arcs, self.sign if k % 2 == 0 else -self.sign)

    def canonical(self):
        """Lexicographically least equivalent (arcs, sign) pair."""
        return min((self.rotated(k).arcs, self.rotated(k).sign) for k in range(4))

    def __eq__(self, other):
        if not isinstance(other, Crossing):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())


class Diagram:
    """Immutable rooted link diagram or shadow.

    Use :func:`build_diagram` to construct one with full validation.  All
    operations are pure functions of the instance, safe to share across
    threads.
    """

    def __init__(self, crossings, partner, root=None):
        self.crossings = tuple(crossings)
        self.partner = tuple(partner)
        self.root = root

    @property
    def n(self):
        return len(self.crossings)

    @property
    def n_arcs(self):
        return 4 * len(self.crossings)

    @cached_property
    def edges(self):
        """Edges as sorted (a, b) pairs with a < b, sorted by a."""
        return tuple(
            sorted((a, p) for a, p in enumerate(self.partner) if a < p)
        )

    @cached_property
    def _arc_tables(self):
        vertex_of = [0] * self.n_arcs
        slot_of = [0] * self.n_arcs
        for v, c in enumerate(self.crossings):
            for s, a in enumerate(c.arcs):
                vertex_of[a] = v
                slot_of[a] = s
        return vertex_of, slot_of

    @property
    def vertex_of(self):
        return self._arc_tables[0]

    @property
    def slot_of(self):
        return self._arc_tables[1]

    def arc_at(self, vertex, slot):
        return self.crossings[vertex].arcs[slot % 4]

    def next_ccw(self, a):
        """sigma: next arc counterclockwise around a's crossing."""
        v, s = self.vertex_of[a], self.slot_of[a]
        return self.crossings[v].arcs[(s + 1) % 4]

    def prev_ccw(self, a):
        v, s = self.vertex_of[a], self.slot_of[a]
        return self.crossings[v].arcs[(s - 1) % 4]

    def opposite(self, a):
        """Strand exit arc for entry arc ``a`` (two slots away)."""
        v, s = self.vertex_of[a], self.slot_of[a]
        return self.crossings[v].arcs[(s + 2) % 4]

    def sigma(self):
        sig = [0] * self.n_arcs
        for c in self.crossings:
            for i, a in enumerate(c.arcs):
                sig[a] = c.arcs[(i + 1) % 4]
        return sig

    def sigma_inv(self):
        sig = [0] * self.n_arcs
        for c in self.crossings:
            for i, a in enumerate(c.arcs):
                sig[a] = c.arcs[(i - 1) % 4]
        return sig

    def edge_of(self, a):
        p = self.partner[a]
        return (a, p) if a < p else (p, a)

    @property
    def is_shadow(self):
        return all(c.sign == BLANK for c in self.crossings)

    @cached_property
    def _faces(self):
        return face_orbits(self.sigma(), list(self.partner))

    @cached_property
    def _face_of(self):
        fo = [0] * self.n_arcs
        for i, f in enumerate(self._faces):
            for a in f:
                fo[a] = i
        return fo

    def as_map(self, root="keep"):
        """View as a generic :class:`PlanarMap` (root kept by default)."""
        rt = self.root if root == "keep" else root
        return PlanarMap(tuple(c.arcs for c in self.crossings), self.partner, rt)

    @cached_property
    def _components(self):
        """Arc partition under moves a -> partner[a] and a -> opposite(a)."""
        comp = [-1] * self.n_arcs
        k = 0
        for start in range(self.n_arcs):
            if comp[start] >= 0:
                continue
            stack = [start]
            comp[start] = k
            while stack:
                a = stack.pop()
                for b in (self.partner[a], self.opposite(a)):
                    if comp[b] < 0:
                        comp[b] = k
                        stack.append(b)
            k += 1
        return comp, k

    def __eq__(self, other):
        if not isinstance(other, Diagram):
            return NotImplemented
        return (
            self.crossings == other.crossings
            and self.partner == other.partner
            and self.root == other.root
        )

    def __hash__(self):
        return hash((self.crossings, self.partner, self.root))

    def __repr__(self):
        rooted = f", root={self.root}" if self.root is not None else ""
        kind = "shadow" if self.is_shadow else "diagram"
        return f"<Diagram {kind} n={self.n}{rooted}>"


def build_diagram(crossings, edges, root=None):
    """Validated construction of a :class:`Diagram`.

    Args:
        crossings: sequence of :class:`Crossing` (or (arcs, sign) pairs).
        edges: perfect matching on the arc set, as unordered pairs.
        root: optional root arc.

    Raises:
        DomainError: n = 0.
        InvalidMatching: arcs missing or duplicated in crossings or edges.
        Disconnected: underlying graph not connected.
        NonPlanar: face count differs from n + 2.
        InvalidRoot: root arc out of range.
        ValidationError: mix of blank and signed crossings.
    """
    xs = []
    for c in crossings:
        xs.append(c if isinstance(c, Crossing) else Crossing(tuple(c[0]), c[1]))
    n = len(xs)
    if n == 0:
        raise DomainError("diagrams have at least one crossing")
    m = 4 * n
    seen = [0] * m
    for c in xs:
        for a in c.arcs:
            if not 0 <= a < m:
                raise InvalidMatching(f"arc {a} outside [0, {m})")
            seen[a] += 1
    if any(cnt != 1 for cnt in seen):
        bad = next(a for a, cnt in enumerate(seen) if cnt != 1)
        raise InvalidMatching(f"arc {bad} appears {seen[bad]} times across crossings")
    partner = [-1] * m
    for e in edges:
        a, b = e
        if not (0 <= a < m and 0 <= b < m):
            raise InvalidMatching(f"edge {e} uses arcs outside [0, {m})")
        if a == b:
            raise InvalidMatching(f"edge {e} pairs an arc with itself")
        if partner[a] != -1 or partner[b] != -1:
            raise InvalidMatching(f"edge {e} reuses an already matched arc")
        partner[a] = b
        partner[b] = a
    if any(p == -1 for p in partner):
        bad = partner.index(-1)
        raise InvalidMatching(f"arc {bad} belongs to no edge")
    signs = {c.sign for c in xs}
    if BLANK in signs and len(signs) > 1:
        raise ValidationError("crossing signs mix blank and decorated")
    d = Diagram(xs, partner, None)
    if _graph_components(d) != 1:
        raise Disconnected("underlying graph is not connected")
    if len(d._faces) != n + 2:
        raise NonPlanar(
            f"face count {len(d._faces)} != {n + 2}: rotation system not planar"
        )
    if root is not None:
        if not 0 <= root < m:
            raise InvalidRoot(f"root arc {root} outside [0, {m})")
        d = Diagram(xs, partner, root)
    return d


def _graph_components(d):
    sig = d.sigma()
    seen = [False] * d.n_arcs
    comps = 0
    for start in range(d.n_arcs):
        if seen[start]:
            continue
        comps += 1
        stack = [start]
        seen[start] = True
        while stack:
            a = stack.pop()
            for b in (sig[a], d.partner[a]):
                if not seen[b]:
                    seen[b] = True
                    stack.append(b)
    return comps


def faces(d):
    """Face cycles of the rotation system; always n + 2 of them."""
    return tuple(d._faces)


def link_components(d):
    """Partition of the edges into link components.

    A strand exits a crossing at the arc opposite its entry arc; edges are
    equivalent when one strand walk visits both.  Deterministic order: by
    smallest edge.
    """
    comp, k = d._components
    buckets = [[] for _ in range(k)]
    for a, p in enumerate(d.partner):
        if a < p:
            buckets[comp[a]].append((a, p))
    parts = [frozenset(b) for b in buckets if b]
    parts.sort(key=lambda s: min(s))
    return tuple(parts)


def is_knot(d):
    """True iff the diagram has exactly one link component."""
    return d._components[1] == 1


def dual(d):
    """Dual rooted map (a planar quadrangulation with n + 2 vertices).

    The dual root is the partner arc of the primal root, so taking the dual
    twice reproduces the original rooted map exactly.

    Raises:
        MissingRoot: the diagram is unrooted.
    """
    if d.root is None:
        raise MissingRoot("dual of a rooted map needs a root")
    return d.as_map().dual()


def _edges_by_face_pair(d):
    groups = {}
    fo = d._face_of
    for a, p in enumerate(d.partner):
        if a < p:
            key = (fo[a], fo[p]) if fo[a] <= fo[p] else (fo[p], fo[a])
            groups.setdefault(key, []).append((a, p))
    return groups

def _connected_without(d, removed):
    """Is the crossing graph connected after removing the given edges?"""
    removed = set(removed)
    adj = [[] for _ in range(d.n)]
    for a, p in enumerate(d.partner):
        if a < p and (a, p) not in removed:
            u, v = d.vertex_of[a], d.vertex_of[p]
            adj[u].append(v)
            adj[v].append(u)
    seen = [False] * d.n
    stack = [0]
    seen[0] = True
    count = 1
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                count += 1
                stack.append(v)
    return count == d.n


def two_edge_cuts(d):
    """All unordered pairs of distinct edges whose removal disconnects.

    Candidate pairs must border the same pair of faces (the cut curve
    passes through exactly two faces), which keeps the search near-linear.
    """
    cuts = []
    for group in _edges_by_face_pair(d).values():
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                if not _connected_without(d, [group[i], group[j]]):
                    cuts.append((group[i], group[j]))
    return cuts


def is_prime(d):
    """More than one crossing and no 2-edge-cut in the underlying graph."""
    if d.n <= 1:
        return False
    for group in _edges_by_face_pair(d).values():
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                if not _connected_without(d, [group[i], group[j]]):
                    return False
    return True


def is_reduced(d):
    """No disconnecting crossing: no loop edge and no articulation vertex."""
    for a, p in enumerate(d.partner):
        if a < p and d.vertex_of[a] == d.vertex_of[p]:
            return False
    if d.n <= 2:
        return True
    # iterative articulation-point search on the crossing multigraph
    adj = [set() for _ in range(d.n)]
    for a, p in enumerate(d.partner):
        if a < p:
            adj[d.vertex_of[a]].add(d.vertex_of[p])
            adj[d.vertex_of[p]].add(d.vertex_of[a])
    disc = [-1] * d.n
    low = [0] * d.n
    timer = 0
    stack = [(0, -1, iter(adj[0]))]
    disc[0] = low[0] = timer
    timer += 1
    root_children = 0
    while stack:
        u, parent, it = stack[-1]
        advanced = False
        for v in it:
            if disc[v] == -1:
                if u == 0:
                    root_children += 1
                disc[v] = low[v] = timer
                timer += 1
                stack.append((v, u, iter(adj[v])))
                advanced = True
                break
            elif v != parent:
                low[u] = min(low[u], disc[v])
        if not advanced:
            stack.pop()
            if stack:
                pu = stack[-1][0]
                low[pu] = min(low[pu], low[u])
                if pu != 0 and low[u] >= disc[pu]:
                    return False
    return root_children < 2


def is_two_leg_prime(d):
    """No 2-edge-cut containing the root edge disconnects the diagram."""
    if d.root is None:
        raise MissingRoot("two-leg-primality needs a root")
    root_edge = d.edge_of(d.root)
    fo = d._face_of
    fa, fb = fo[root_edge[0]], fo[root_edge[1]]
    key = (fa, fb) if fa <= fb else (fb, fa)
    for e in _edges_by_face_pair(d).get(key, []):
        if e == root_edge:
            continue
        if not _connected_without(d, [root_edge, e]):
            return False
    return True


@dataclass(frozen=True)
class CanonicalCode:
    """Deterministic rooted traversal code.

    Equal codes characterise root- and orientation-respecting isomorphism;
    the ``reverse`` flag reads rotations clockwise and flips signs (sphere
    reflection).
    """

    code: tuple
    orientation_flag: str = "preserve"


def _adjusted_signs(d, reverse):
    flip = -1 if reverse else 1
    adj = [0] * d.n_arcs
    for c in d.crossings:
        for s, a in enumerate(c.arcs):
            adj[a] = c.sign * (1 if s % 2 == 0 else -1) * flip
    return adj


def canonical_code(d, start, orientation_flag="preserve"):
    """Code of the diagram traversed from ``start``.

    Args:
        start: arc the relabeling starts from.
        orientation_flag: "preserve" or "reverse".
    """
    if not 0 <= start < d.n_arcs:
        raise InvalidRoot(f"start arc {start} out of range")
    reverse = orientation_flag == "reverse"
    code = map_code(
        d.sigma(),
        list(d.partner),
        start,
        reverse=reverse,
        signs=_adjusted_signs(d, reverse),
        sigma_inv=d.sigma_inv() if reverse else None,
    )
    return CanonicalCode(code, orientation_flag)


def root_code(d):
    """Canonical code from the root arc."""
    if d.root is None:
        raise MissingRoot("diagram is unrooted")
    return canonical_code(d, d.root)


@dataclass(frozen=True)
class AutomorphismCount:
    orientation_preserving: int
    total: int


def automorphism_count(d):
    """Automorphism counts of the underlying unrooted decorated map.

    ``orientation_preserving`` counts rotation-preserving automorphisms;
    ``total`` adds the orientation-reversing ones (which flip every sign).
    The identity is always counted, and for every diagram the number of
    distinct rooted versions equals 4n / orientation_preserving.
    """
    ref = canonical_code(d, d.crossings[0].arcs[0]).code
    op = 0
    rev = 0
    for a in range(d.n_arcs):
        if canonical_code(d, a).code == ref:
            op += 1
        if canonical_code(d, a, "reverse").code == ref:
            rev += 1
    return AutomorphismCount(op, op + rev)


def mirror(d):
    """Same shadow with every crossing sign flipped."""
    return Diagram(
        tuple(Crossing(c.arcs, -c.sign) for c in d.crossings), d.partner, d.root
    )


def with_root(d, root):
    """Copy of the diagram rooted at the given arc."""
    if root is not None and not 0 <= root < d.n_arcs:
        raise InvalidRoot(f"root arc {root} out of range")
    return Diagram(d.crossings, d.partner, root)


def strand_walk(d, start):
    """Arcs visited by the strand leaving along ``start``, in order.

    The walk starts by crossing the edge of ``start`` and follows the
    strand (exit two slots after entry) until it returns to ``start``.
    Entry arcs are reported, so a knot diagram yields 2n arcs.
    """
    out = []
    a = start
    while True:
        a = d.partner[a]
        out.append(a)
        a = d.opposite(a)
        if a == start:
            return out
