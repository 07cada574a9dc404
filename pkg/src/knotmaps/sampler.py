"""Uniform random generation of rooted link shadows and diagrams.

Shadows are drawn through the blossom-tree bijection: a uniform plane tree
whose n crossings each carry one bud, closed by matching buds to leaves
cyclically along the contour.  The two leaves left unmatched become the
root edge, and a fair bit picks the root arc between them, which makes the
law uniform over all rooted shadows of the size (checked exactly against
enumeration in the tests).  Signs are fair coins per crossing.  Rejection
filtering restricts to knot / prime / reduced classes with a bounded
number of attempts per slot.

Sampling is a pure function of ``(seed, stream_index)``: calling any
sampler twice with the same :class:`RngStream` returns the same object.
Batch drivers give row ``i`` the stream ``stream_index + i``, so results
do not depend on thread count.

Prime shadows are sampled exactly by core extraction: draw a generic
shadow of a larger size and keep its prime core when the core has the
requested size.  Conditioned on the core size the core is uniform over
prime shadows, because the fibers of the collapse map are products of
independent edge fillings whose count depends only on the sizes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .diagram import BLANK, Crossing, Diagram, build_diagram, is_knot, is_reduced
from .errors import DomainError, KnotmapsError, ValidationError

__all__ = [
    "RngStream",
    "BlossomTree",
    "SampleOutcome",
    "sample_blossom_tree",
    "closure",
    "sample_link_shadow",
    "sample_link_diagram",
    "sample_prime_link_shadow",
    "rejection_sample",
    "REJECTION_CLASSES",
    "diagram_from_arrays",
    "core_size_for",
]

REJECTION_CLASSES = ("knot", "prime-knot", "reduced-knot", "prime-link", "link")


@dataclass(frozen=True)
class RngStream:
    """Value identifying a reproducible random stream.

    The same (seed, stream_index) always produces the same draws, across
    runs, platforms and kernel backends.
    """

    seed: int
    stream_index: int = 0

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must fit in 64 bits")
        if not 0 <= self.stream_index < 2**64:
            raise DomainError("stream_index must fit in 64 bits")

    def spawn(self, offset):
        """Substream at a fixed offset; batches use offsets 0..count-1."""
        return RngStream(self.seed, self.stream_index + offset)

    def state(self):
        return K.make_state(self.seed, self.stream_index)


@dataclass(frozen=True)
class BlossomTree:
    """Plane tree with one bud per crossing and a chosen dangling leaf.

    ``skeleton`` is the preorder word of the underlying binary tree (+1
    internal, -1 leaf slot), ``buds`` gives each crossing's bud slot among
    its three non-parent slots, and ``root_choice`` selects which of the
    two dangling leaves of the closure carries the root.
    """

    n: int
    skeleton: tuple
    buds: tuple
    root_choice: int

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("blossom trees have at least one crossing")
        w = self.skeleton
        if len(w) != 2 * self.n + 1 or sum(w) != -1:
            raise ValidationError("skeleton word has the wrong content")
        s = 0
        for step in w[:-1]:
            s += step
            if s < 0:
                raise ValidationError("skeleton word dips below zero")
        if len(self.buds) != self.n or any(b not in (1, 2, 3) for b in self.buds):
            raise ValidationError("each crossing needs a bud slot in {1, 2, 3}")
        if self.root_choice not in (0, 1):
            raise ValidationError("root_choice is a single bit")


def sample_blossom_tree(n, rng):
    """Uniform blossom tree with n crossings."""
    if n < 1:
        raise DomainError("n must be at least 1")
    state = rng.state()
    w = np.empty(2 * n + 1, np.int8)
    K._skeleton_word(n, state, w)
    buds = tuple(1 + int(K._rng_below(state, 3)) for _ in range(n))
    bit = int(K._rng_below(state, 2))
    return BlossomTree(n, tuple(int(x) for x in w), buds, bit)


def closure(tree):
    """Close a blossom tree into a validated rooted link shadow.

    Buds open and leaves close along the counterclockwise contour; the
    cyclic matching pairs them, the two leftover leaves become the root
    edge, and ``root_choice`` picks the root arc.
    """
    n = tree.n
    partner = [-1] * (4 * n)
    seq = [(0, False)]
    ptr = 1
    nv = 1
    stack = [[0, 1]]
    while stack:
        v, s = stack[-1]
        if s > 3:
            stack.pop()
            continue
        stack[-1][1] = s + 1
        a = 4 * v + s
        if s == tree.buds[v]:
            seq.append((a, True))
        else:
            sym = tree.skeleton[ptr]
            ptr += 1
            if sym > 0:
                u = nv
                nv += 1
                partner[a] = 4 * u
                partner[4 * u] = a
                stack.append([u, 1])
            else:
                seq.append((a, False))
    bstack = []
    leaves = []
    for a, isbud in seq:
        if isbud:
            bstack.append(a)
        elif bstack:
            b = bstack.pop()
            partner[a] = b
            partner[b] = a
        else:
            leaves.append(a)
    for idx, b in enumerate(reversed(bstack)):
        a = leaves[idx]
        partner[a] = b
        partner[b] = a
    u1, u2 = leaves[len(bstack):]
    partner[u1] = u2
    partner[u2] = u1
    root = (u1, u2)[tree.root_choice]
    crossings = [Crossing((4 * v, 4 * v + 1, 4 * v + 2, 4 * v + 3)) for v in range(n)]
    edges = [(a, p) for a, p in enumerate(partner) if a < p]
    return build_diagram(crossings, edges, root)


def diagram_from_arrays(partner, root, signs=None):
    """Wrap kernel output arrays into a Diagram without revalidation."""
    n = len(partner) // 4
    crossings = tuple(
        Crossing(
            (4 * v, 4 * v + 1, 4 * v + 2, 4 * v + 3),
            BLANK if signs is None else int(signs[v]),
        )
        for v in range(n)
    )
    return Diagram(crossings, tuple(int(p) for p in partner), int(root))


def sample_link_shadow(n, rng):
    """Uniform rooted link shadow with n crossings."""
    if n < 1:
        raise DomainError("n must be at least 1")
    partner = np.empty(4 * n, np.int64)
    root = K.sample_shadow(n, rng.seed, rng.stream_index, partner)
    return diagram_from_arrays(partner, root)


def sample_link_diagram(n, rng):
    """Uniform rooted link diagram: a shadow with fair-coin signs."""
    if n < 1:
        raise DomainError("n must be at least 1")
    partner = np.empty(4 * n, np.int64)
    signs = np.empty(n, np.int8)
    root = K.sample_diagram(n, rng.seed, rng.stream_index, partner, signs)
    return diagram_from_arrays(partner, root, signs)


def core_size_for(n):
    """Generic sample size whose prime core is most often of size n.

    The core of a uniform shadow of size N concentrates near a fixed
    fraction of N (measured empirically; the constant only affects speed,
    never the law of the accepted cores).
    """
    return max(n + 2, round(n * 3.08 + 2))


_PRIME_MAX_DRAWS = 200_000


def sample_prime_link_shadow(n, rng, big_n=None):
    """Uniform rooted prime link shadow (no 2-edge-cut) with n crossings."""
    if n < 2:
        raise DomainError("prime shadows need at least 2 crossings")
    big_n = big_n or core_size_for(n)
    partner = np.empty(4 * big_n, np.int64)
    root = K.prime_shadow_seq(n, big_n, rng.state(), partner, _PRIME_MAX_DRAWS)
    if root == -2:
        raise KnotmapsError("core extraction failed structurally")
    if root == -1:
        raise KnotmapsError(
            f"no size-{n} core in {_PRIME_MAX_DRAWS} draws at N={big_n}"
        )
    return diagram_from_arrays(partner[: 4 * n], root)


@dataclass(frozen=True)
class SampleOutcome:
    """Result of a bounded rejection-sampling slot."""

    result: Diagram | None
    attempts_used: int

    @property
    def accepted(self):
        return self.result is not None


def rejection_sample(n, klass, rng, max_attempts=49):
    """Draw from a diagram class by rejection, at most ``max_attempts`` tries.

    Classes: "link" and "prime-link" always accept their first draw;
    "knot", "prime-knot" and "reduced-knot" keep drawing from the base
    class until the predicate holds or attempts run out.  All draws of one
    call consume a single stream sequentially, so the outcome matches the
    batch kernels slot-for-slot.  On success the accepted diagram is
    uniform over the class at this size.
    """
    if klass not in REJECTION_CLASSES:
        raise DomainError(f"unknown rejection class {klass!r}")
    if n < 1 or max_attempts < 1:
        raise DomainError("need n >= 1 and max_attempts >= 1")
    if klass in ("prime-knot", "prime-link") and n < 2:
        raise DomainError("prime classes need n >= 2")
    state = rng.state()
    signs = np.empty(n, np.int8)
    prime = klass in ("prime-knot", "prime-link")
    big_n = core_size_for(n) if prime else 0
    partner = np.empty(4 * (big_n if prime else n), np.int64)
    w = np.empty(2 * n + 1, np.int8)
    attempts = 0
    while attempts < max_attempts:
        attempts += 1
        if prime:
            root = K.prime_shadow_seq(n, big_n, state, partner, _PRIME_MAX_DRAWS)
            if root == -2:
                raise KnotmapsError("core extraction failed structurally")
            if root == -1:
                raise KnotmapsError(f"prime base sampler starved at n={n}")
            K.draw_signs(state, n, signs)
            body = partner[: 4 * n]
            ok = True if klass == "prime-link" else K.is_knot_partner(body)
            if ok:
                return SampleOutcome(
                    diagram_from_arrays(body, root, signs), attempts
                )
        else:
            K._skeleton_word(n, state, w)
            root = K._blossom_closure(n, w, state, partner)
            K.draw_signs(state, n, signs)
            if klass == "link":
                ok = True
            elif klass == "knot":
                ok = K.is_knot_partner(partner)
            else:
                d = diagram_from_arrays(partner, root, signs)
                ok = is_knot(d) and is_reduced(d)
            if ok:
                return SampleOutcome(
                    diagram_from_arrays(partner, root, signs), attempts
                )
    return SampleOutcome(None, attempts)
