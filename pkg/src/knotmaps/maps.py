"""Rotation-system machinery shared by diagrams and their duals.

A map is stored as a pair of permutations on the arc set {0, ..., 2E-1}:
``sigma`` sends an arc to the next arc counterclockwise around its vertex,
and ``alpha`` (the edge matching) swaps the two arcs of each edge.  Faces
are the orbits of ``phi = sigma o alpha``, so Euler's formula reads
``V - E + F = 2`` exactly when the map is planar.

:class:`PlanarMap` carries vertices of arbitrary degree and is what
``dual`` returns for a diagram (a quadrangulation is not 4-regular).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import Disconnected, InvalidMatching, InvalidRoot, NonPlanar

__all__ = [
    "PlanarMap",
    "orbits",
    "face_orbits",
    "map_code",
]


def orbits(perm):
    """Orbit partition of the permutation given as a list (arc -> arc)."""
    seen = [False] * len(perm)
    out = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cyc = []
        a = start
        while not seen[a]:
            seen[a] = True
            cyc.append(a)
            a = perm[a]
        out.append(tuple(cyc))
    return out


def face_orbits(sigma, alpha):
    """Faces of the rotation system: orbits of ``a -> sigma[alpha[a]]``."""
    return orbits([sigma[alpha[a]] for a in range(len(sigma))])


def _component_count(sigma, alpha):
    """Connected components of the underlying graph (orbits of <sigma, alpha>)."""
    m = len(sigma)
    if m == 0:
        return 0
    seen = [False] * m
    comps = 0
    for start in range(m):
        if seen[start]:
            continue
        comps += 1
        stack = [start]
        seen[start] = True
        while stack:
            a = stack.pop()
            for b in (sigma[a], alpha[a]):
                if not seen[b]:
                    seen[b] = True
                    stack.append(b)
    return comps


def map_code(sigma, alpha, start, reverse=False, degrees=None, signs=None,
             vertex_of=None, sigma_inv=None):
    """Canonical traversal code of a rooted map.

    Arcs are relabeled breadth-first from ``start``, walking each vertex's
    rotation counterclockwise (clockwise when ``reverse``).  The code is the
    sequence of partner labels plus, per vertex in discovery order, its
    degree and optionally a decoration.  Two rooted maps are isomorphic
    (orientation-preservingly when ``reverse`` is False on both) iff their
    codes are equal.

    Args:
        sigma: rotation permutation (list, arc -> next arc ccw).
        alpha: edge involution.
        start: root arc the traversal starts from.
        reverse: traverse rotations clockwise (mirror reading).
        degrees: per-arc vertex degree; omitted for 4-regular callers that
            bake the degree into ``signs`` handling.
        signs: optional per-arc decoration emitted once per vertex; the
            caller is responsible for any reflection adjustment.
        vertex_of: per-arc vertex id (only used to group arcs of a vertex
            when walking; required).
        sigma_inv: inverse rotation, required when ``reverse`` is True.

    Returns:
        A tuple of ints, hashable and comparable.
    """
    step = sigma_inv if reverse else sigma
    m = len(sigma)
    label = [-1] * m
    order = []

    def open_vertex(entry):
        a = entry
        while label[a] < 0:
            label[a] = len(order)
            order.append(a)
            a = step[a]

    open_vertex(start)
    code = []
    i = 0
    while i < len(order):
        a = order[i]
        p = alpha[a]
        if label[p] < 0:
            if degrees is not None:
                code.append(-degrees[p])
            if signs is not None:
                code.append(signs[p])
            open_vertex(p)
        code.append(label[p])
        i += 1
    if degrees is not None:
        code.append(-degrees[start])
    if signs is not None:
        code.append(signs[start])
    return tuple(code)


@dataclass(frozen=True)
class PlanarMap:
    """A rooted map on the sphere with vertices of arbitrary degree.

    Attributes:
        vertices: per-vertex tuple of arc ids in counterclockwise rotation
            order.
        partner: edge involution as a tuple (arc -> partner arc).
        root: optional root arc (the root edge leaves its vertex along it).
    """

    vertices: tuple
    partner: tuple
    root: int | None = None

    def __post_init__(self):
        m = len(self.partner)
        seen = [0] * m
        for rot in self.vertices:
            for a in rot:
                if not 0 <= a < m:
                    raise InvalidMatching(f"arc {a} out of range")
                seen[a] += 1
        if any(c != 1 for c in seen):
            raise InvalidMatching("arcs must partition the vertex rotations")
        for a in range(m):
            p = self.partner[a]
            if not 0 <= p < m or p == a or self.partner[p] != a:
                raise InvalidMatching("partner is not a fixed-point-free involution")
        if self.root is not None and not 0 <= self.root < m:
            raise InvalidRoot(f"root arc {self.root} out of range")
        sigma = self.sigma()
        if _component_count(sigma, list(self.partner)) != 1:
            raise Disconnected("map is not connected")
        v, e = len(self.vertices), m // 2
        if v - e + len(face_orbits(sigma, list(self.partner))) != 2:
            raise NonPlanar("rotation system is not planar")

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_edges(self):
        return len(self.partner) // 2

    def sigma(self):
        """Rotation permutation as a list (arc -> next arc ccw)."""
        sig = [0] * len(self.partner)
        for rot in self.vertices:
            for i, a in enumerate(rot):
                sig[a] = rot[(i + 1) % len(rot)]
        return sig

    def sigma_inv(self):
        sig = [0] * len(self.partner)
        for rot in self.vertices:
            for i, a in enumerate(rot):
                sig[a] = rot[(i - 1) % len(rot)]
        return sig

    def faces(self):
        """Faces as tuples of arcs in boundary order."""
        return face_orbits(self.sigma(), list(self.partner))

    def dual(self):
        """Dual map: faces become vertices; the involution is unchanged.

        The dual root is the partner of the primal root, which makes the
        dual of the dual reproduce the original map arc-for-arc.
        """
        faces = self.faces()
        root = None if self.root is None else self.partner[self.root]
        return PlanarMap(tuple(faces), self.partner, root)

    def code(self, start=None, reverse=False):
        """Canonical rooted code; defaults to the root arc."""
        if start is None:
            if self.root is None:
                raise InvalidRoot("unrooted map: pass an explicit start arc")
            start = self.root
        m = len(self.partner)
        degrees = [0] * m
        for rot in self.vertices:
            for a in rot:
                degrees[a] = len(rot)
        return map_code(
            self.sigma(), list(self.partner), start, reverse=reverse,
            degrees=degrees, sigma_inv=self.sigma_inv() if reverse else None,
        )

    def is_isomorphic(self, other):
        """Rooted orientation-preserving isomorphism test."""
        if self.root is None or other.root is None:
            raise InvalidRoot("both maps must be rooted")
        return self.code() == other.code()
