"""Hot numeric kernels: blossom-tree sampling, closure, rejection filtering,
prime-core extraction and automorphism counting on flat arrays.

Every kernel is written once in numba-compatible Python.  With the default
backend the functions below are wrapped in ``numba.njit``; setting
``KNOTMAPS_BACKEND=python`` (or running without numba installed) leaves
them as pure Python/NumPy, bit-identical but slower.  The RNG is an
explicit splitmix64 so that streams are reproducible across platforms and
across the two backends.

Array conventions: a shadow with n crossings is a partner array of length
4n; crossing v owns arcs 4v..4v+3 counterclockwise, so the rotation is
``sigma(a) = (a & ~3) | ((a + 1) & 3)`` and the strand-opposite arc is
``a ^ 2``.
"""

from __future__ import annotations

import os

import numpy as np

_U64 = np.uint64
_GOLD = _U64(0x9E3779B97F4A7C15)
_MIX1 = _U64(0xBF58476D1CE4E5B9)
_MIX2 = _U64(0x94D049BB133111EB)
_STREAM_SALT = _U64(0xD2B74407B1CE6E93)
_MAXU64 = _U64(0xFFFFFFFFFFFFFFFF)


def backend_choice():
    """Resolve the kernel backend from the environment: "numba" or "python"."""
    want = os.environ.get("KNOTMAPS_BACKEND", "numba").strip().lower()
    if want in ("python", "py", "numpy"):
        return "python"
    if want not in ("numba", ""):
        raise ValueError(f"unknown KNOTMAPS_BACKEND {want!r}")
    try:
        import numba  # noqa: F401
    except ImportError:
        return "python"
    return "numba"


BACKEND = backend_choice()


# ---------------------------------------------------------------------------
# splitmix64
# ---------------------------------------------------------------------------

def _mix64(z):
    z = (z ^ (z >> _U64(30))) * _MIX1
    z = (z ^ (z >> _U64(27))) * _MIX2
    return z ^ (z >> _U64(31))


def _rng_next(state):
    state[0] = state[0] + _GOLD
    return _mix64(state[0])


def _rng_below(state, k):
    """Uniform uint64 below k (k >= 1), unbiased via rejection."""
    k = _U64(k)
    lim = (_MAXU64 // k) * k
    while True:
        r = _rng_next(state)
        if r < lim:
            return r % k


def make_state(seed, stream):
    """Initial RNG state for the given (seed, stream_index) pair."""
    s = _mix64(_U64(seed & 0xFFFFFFFFFFFFFFFF)) ^ (
        _mix64(_U64(stream & 0xFFFFFFFFFFFFFFFF) + _STREAM_SALT)
    )
    return np.array([s], dtype=np.uint64)


# ---------------------------------------------------------------------------
# blossom trees and closure
# ---------------------------------------------------------------------------

def _skeleton_word(n, state, w):
    """Uniform full-binary-tree word: n internal (+1), n+1 leaves (-1),
    rotated to the unique cyclic conjugate whose proper prefixes are >= 0."""
    m = 2 * n + 1
    for i in range(n):
        w[i] = 1
    for i in range(n, m):
        w[i] = -1
    for i in range(m - 1, 0, -1):
        j = int(_rng_below(state, i + 1))
        t = w[i]
        w[i] = w[j]
        w[j] = t
    s = 0
    best = 0
    besti = -1
    for i in range(m):
        s += w[i]
        if s < best:
            best = s
            besti = i
    shift = besti + 1
    tmp = np.empty(m, np.int8)
    for i in range(m):
        tmp[i] = w[(shift + i) % m]
    for i in range(m):
        w[i] = tmp[i]


def _blossom_closure(n, w, state, partner):
    """Close a uniform blossom tree into a rooted shadow; returns the root arc.

    The tree skeleton comes from ``w``; each crossing's bud occupies a
    uniform slot among its three non-parent slots.  Buds are matched to
    leaves cyclically along the counterclockwise contour; the two leaves
    left over are joined into the root edge, and the root arc is a fair
    pick between them.
    """
    m4 = 4 * n
    for i in range(m4):
        partner[i] = -1
    seq_arc = np.empty(2 * n + 2, np.int64)
    seq_bud = np.empty(2 * n + 2, np.uint8)
    seq_arc[0] = 0
    seq_bud[0] = 0
    pos = 1
    ptr = 1
    nv = 1
    stack_v = np.empty(n + 1, np.int64)
    stack_s = np.empty(n + 1, np.int64)
    bud_of = np.empty(n, np.int64)
    bud_of[0] = 1 + int(_rng_below(state, 3))
    top = 0
    stack_v[0] = 0
    stack_s[0] = 1
    while top >= 0:
        v = stack_v[top]
        s = stack_s[top]
        if s > 3:
            top -= 1
            continue
        stack_s[top] = s + 1
        a = 4 * v + s
        if s == bud_of[v]:
            seq_arc[pos] = a
            seq_bud[pos] = 1
            pos += 1
        else:
            sym = w[ptr]
            ptr += 1
            if sym > 0:
                u = nv
                nv += 1
                bud_of[u] = 1 + int(_rng_below(state, 3))
                partner[a] = 4 * u
                partner[4 * u] = a
                top += 1
                stack_v[top] = u
                stack_s[top] = 1
            else:
                seq_arc[pos] = a
                seq_bud[pos] = 0
                pos += 1
    # cyclic bud-to-leaf matching; top-of-stack buds wrap to the earliest
    # unmatched leaves
    bstack = np.empty(n + 1, np.int64)
    leaves = np.empty(n + 2, np.int64)
    nb = 0
    nl = 0
    for i in range(2 * n + 2):
        a = seq_arc[i]
        if seq_bud[i] == 1:
            bstack[nb] = a
            nb += 1
        else:
            if nb > 0:
                nb -= 1
                b = bstack[nb]
                partner[b] = a
                partner[a] = b
            else:
                leaves[nl] = a
                nl += 1
    for idx in range(nb):
        b = bstack[nb - 1 - idx]
        a = leaves[idx]
        partner[b] = a
        partner[a] = b
    u1 = leaves[nb]
    u2 = leaves[nb + 1]
    partner[u1] = u2
    partner[u2] = u1
    if _rng_below(state, 2) == 0:
        return u1
    return u2


def _init_state(seed, stream):
    state = np.empty(1, np.uint64)
    state[0] = _mix64(_U64(seed)) ^ _mix64(_U64(stream) + _STREAM_SALT)
    return state


def sample_shadow(n, seed, stream, partner):
    """One uniform rooted link shadow into ``partner``; returns the root arc."""
    state = _init_state(seed, stream)
    w = np.empty(2 * n + 1, np.int8)
    _skeleton_word(n, state, w)
    return _blossom_closure(n, w, state, partner)


def sample_diagram(n, seed, stream, partner, signs):
    """One uniform rooted link diagram; shadow first, then coin-flip signs."""
    state = _init_state(seed, stream)
    w = np.empty(2 * n + 1, np.int8)
    _skeleton_word(n, state, w)
    root = _blossom_closure(n, w, state, partner)
    draw_signs(state, n, signs)
    return root


def strand_orbit_len(partner, start):
    """Length of the strand orbit through entry arc ``start``."""
    a = start
    steps = 0
    while True:
        a = partner[a ^ 2]
        steps += 1
        if a == start:
            return steps


def is_knot_partner(partner):
    """Single link component iff the strand orbit of arc 0 has length 2n."""
    return strand_orbit_len(partner, 0) == partner.shape[0] // 2


def draw_signs(state, n, signs):
    for v in range(n):
        signs[v] = 1 if _rng_below(state, 2) == 0 else -1


def sample_shadows_batch(n, seed, stream0, count, out_partner, out_root):
    """Uniform shadows, one independent stream per row."""
    for i in range(count):
        state = _init_state(seed, stream0 + i)
        w = np.empty(2 * n + 1, np.int8)
        _skeleton_word(n, state, w)
        out_root[i] = _blossom_closure(n, w, state, out_partner[i])


def rejection_knot_batch(
    n, seed, stream0, slots, max_attempts,
    out_partner, out_root, out_signs, out_attempts, out_ok,
):
    """Rejection sampling of knot diagrams, one RNG stream per slot.

    Each slot draws up to ``max_attempts`` link diagrams and keeps the
    first with a single component.
    """
    for i in range(slots):
        state = _init_state(seed, stream0 + i)
        w = np.empty(2 * n + 1, np.int8)
        got = 0
        att = 0
        while att < max_attempts:
            att += 1
            _skeleton_word(n, state, w)
            root = _blossom_closure(n, w, state, out_partner[i])
            draw_signs(state, n, out_signs[i])
            if is_knot_partner(out_partner[i]):
                out_root[i] = root
                got = 1
                break
        out_attempts[i] = att
        out_ok[i] = got


# ---------------------------------------------------------------------------
# prime-core extraction
# ---------------------------------------------------------------------------

def _face_ids(partner, face_of):
    """Label each arc with its face orbit id; returns the face count."""
    m = partner.shape[0]
    for i in range(m):
        face_of[i] = -1
    nf = 0
    for start in range(m):
        if face_of[start] >= 0:
            continue
        a = start
        while face_of[a] < 0:
            face_of[a] = nf
            p = partner[a]
            a = (p & ~3) | ((p + 1) & 3)
        nf += 1
    return nf


def extract_core(partner, root, core_partner):
    """Collapse every 2-edge-cut tangle hanging away from the root.

    Writes the prime core (or the degenerate 1-crossing core) into
    ``core_partner`` and returns ``(core_size, core_root)``; returns
    ``(-1, -1)`` on a structural failure, which callers treat as a bug.

    Two edges form a cut only if they border the same pair of faces, so
    candidate cuts are exactly the groups of dual-parallel edges; for each
    group the removal of all its edges splits the sphere into the regions
    between consecutive group edges, and every region not holding the root
    vertex is deleted.  Each deleted chunk hangs by two stub edges, which
    are short-circuited into a single core edge.
    """
    m = partner.shape[0]
    nv = m // 4
    face_of = np.empty(m, np.int64)
    nf = _face_ids(partner, face_of)
    ne = m // 2
    ekey = np.empty(ne, np.int64)
    earc = np.empty(ne, np.int64)
    idx = 0
    for a in range(m):
        p = partner[a]
        if a < p:
            f1 = face_of[a]
            f2 = face_of[p]
            if f1 > f2:
                f1, f2 = f2, f1
            ekey[idx] = f1 * nf + f2
            earc[idx] = a
            idx += 1
    order = np.argsort(ekey)
    dead = np.zeros(nv, np.uint8)
    arc_blocked = np.zeros(m, np.uint8)
    visited = np.empty(nv, np.uint8)
    queue = np.empty(nv, np.int64)
    vroot = root >> 2
    g = 0
    while g < ne:
        h = g + 1
        while h < ne and ekey[order[h]] == ekey[order[g]]:
            h += 1
        if h - g >= 2:
            for t in range(g, h):
                a = earc[order[t]]
                arc_blocked[a] = 1
                arc_blocked[partner[a]] = 1
            for v in range(nv):
                visited[v] = 0
            qn = 0
            queue[qn] = vroot
            qn += 1
            visited[vroot] = 1
            qi = 0
            while qi < qn:
                v = queue[qi]
                qi += 1
                for s in range(4):
                    a = 4 * v + s
                    if arc_blocked[a] == 1:
                        continue
                    u = partner[a] >> 2
                    if visited[u] == 0:
                        visited[u] = 1
                        queue[qn] = u
                        qn += 1
            if qn < nv:
                for v in range(nv):
                    if visited[v] == 0:
                        dead[v] = 1
            for t in range(g, h):
                a = earc[order[t]]
                arc_blocked[a] = 0
                arc_blocked[partner[a]] = 0
        g = h
    newid = np.empty(nv, np.int64)
    alive = 0
    for v in range(nv):
        if dead[v] == 0:
            newid[v] = alive
            alive += 1
        else:
            newid[v] = -1
    if alive == nv:
        for a in range(m):
            core_partner[a] = partner[a]
        return nv, root
    # rebuild, short-circuiting dead chunks
    chunk_seen = np.zeros(nv, np.uint8)
    for v in range(nv):
        if dead[v] == 1:
            continue
        for s in range(4):
            a = 4 * v + s
            p = partner[a]
            pu = p >> 2
            if dead[pu] == 0:
                core_partner[4 * newid[v] + s] = 4 * newid[pu] + (p & 3)
            else:
                # walk the dead chunk behind p; it must expose exactly one
                # other stub edge back into the alive part
                for t in range(nv):
                    chunk_seen[t] = 0
                qn = 0
                queue[qn] = pu
                qn += 1
                chunk_seen[pu] = 1
                out_arc = -1
                n_out = 0
                qi = 0
                while qi < qn:
                    u = queue[qi]
                    qi += 1
                    for ss in range(4):
                        b = 4 * u + ss
                        q = partner[b]
                        qu = q >> 2
                        if dead[qu] == 1:
                            if chunk_seen[qu] == 0:
                                chunk_seen[qu] = 1
                                queue[qn] = qu
                                qn += 1
                        else:
                            n_out += 1
                            if q != a:
                                out_arc = q
                if n_out != 2 or out_arc < 0:
                    return -1, -1
                core_partner[4 * newid[v] + s] = (
                    4 * newid[out_arc >> 2] + (out_arc & 3)
                )
    return alive, 4 * newid[vroot] + (root & 3)


def sample_cores_batch(
    big_n, seed, stream0, count, out_partner, out_root, out_size,
):
    """Sample shadows of size ``big_n`` and extract their prime cores.

    Row i of ``out_partner`` receives the core's partner array (first
    ``4 * out_size[i]`` entries); a size of -1 flags an extraction bug.
    """
    scratch = np.empty(4 * big_n, np.int64)
    for i in range(count):
        state = _init_state(seed, stream0 + i)
        w = np.empty(2 * big_n + 1, np.int8)
        _skeleton_word(big_n, state, w)
        root = _blossom_closure(big_n, w, state, scratch)
        size, croot = extract_core(scratch, root, out_partner[i])
        out_size[i] = size
        out_root[i] = croot


def prime_shadow_seq(n, big_n, state, out_partner, max_draws):
    """Draw generic shadows of size ``big_n`` from ``state`` until one has a
    prime core of size exactly ``n``; returns the core root arc.

    Returns -1 when ``max_draws`` runs out and -2 on a structural failure.
    """
    scratch = np.empty(4 * big_n, np.int64)
    core = np.empty(4 * big_n, np.int64)
    w = np.empty(2 * big_n + 1, np.int8)
    for _ in range(max_draws):
        _skeleton_word(big_n, state, w)
        root = _blossom_closure(big_n, w, state, scratch)
        size, croot = extract_core(scratch, root, core)
        if size == -1:
            return -2
        if size == n:
            for a in range(4 * n):
                out_partner[a] = core[a]
            return croot
    return -1


def rejection_prime_knot_batch(
    n, big_n, seed, stream0, slots, max_attempts, max_draws,
    out_partner, out_root, out_signs, out_attempts, out_ok,
):
    """Rejection sampling of prime knot diagrams, one stream per slot.

    An attempt is one prime link diagram (core extraction runs inside the
    base sampler and does not count as an attempt).
    """
    for i in range(slots):
        state = _init_state(seed, stream0 + i)
        got = 0
        att = 0
        while att < max_attempts:
            att += 1
            root = prime_shadow_seq(n, big_n, state, out_partner[i], max_draws)
            if root < 0:
                att = -root * 1000000  # surface failures loudly
                break
            draw_signs(state, n, out_signs[i])
            if is_knot_partner(out_partner[i][: 4 * n]):
                out_root[i] = root
                got = 1
                break
        out_attempts[i] = att
        out_ok[i] = got


# ---------------------------------------------------------------------------
# canonical codes and automorphisms on arrays
# ---------------------------------------------------------------------------

def _fill_code(partner, signs, start, reverse, label, order, code):
    """Traversal code used for array-level isomorphism tests.

    Layout: per processed arc the partner label; a vertex discovery is
    preceded by the token -(adjusted_sign + 2); the start vertex's token
    is appended last.  Returns the code length.
    """
    m = partner.shape[0]
    for i in range(m):
        label[i] = -1
    step = -1 if reverse else 1
    flip = -1 if reverse else 1

    a = start
    cnt = 0
    while label[a] < 0:
        label[a] = cnt
        order[cnt] = a
        cnt += 1
        a = (a & ~3) | ((a + step) & 3)
    pos = 0
    i = 0
    while i < m:
        a = order[i]
        p = partner[a]
        if label[p] < 0:
            sgn = signs[p >> 2] * (1 if (p & 1) == 0 else -1) * flip
            code[pos] = -(sgn + 2)
            pos += 1
            b = p
            while label[b] < 0:
                label[b] = cnt
                order[cnt] = b
                cnt += 1
                b = (b & ~3) | ((b + step) & 3)
        code[pos] = label[p]
        pos += 1
        i += 1
    sgn = signs[start >> 2] * (1 if (start & 1) == 0 else -1) * flip
    code[pos] = -(sgn + 2)
    pos += 1
    return pos


def count_automorphisms(partner, signs):
    """(orientation_preserving, total) automorphism counts of the shadow
    or diagram given by flat arrays."""
    m = partner.shape[0]
    label = np.empty(m, np.int64)
    order = np.empty(m, np.int64)
    ref = np.empty(2 * m, np.int64)
    cand = np.empty(2 * m, np.int64)
    ref_len = _fill_code(partner, signs, 0, False, label, order, ref)
    op = 0
    rev = 0
    for start in range(m):
        ln = _fill_code(partner, signs, start, False, label, order, cand)
        if ln == ref_len:
            same = True
            for i in range(ref_len):
                if cand[i] != ref[i]:
                    same = False
                    break
            if same:
                op += 1
        ln = _fill_code(partner, signs, start, True, label, order, cand)
        if ln == ref_len:
            same = True
            for i in range(ref_len):
                if cand[i] != ref[i]:
                    same = False
                    break
            if same:
                rev += 1
    return op, op + rev


_KERNELS = [
    "_mix64",
    "_rng_next",
    "_rng_below",
    "_init_state",
    "_skeleton_word",
    "_blossom_closure",
    "sample_shadow",
    "sample_diagram",
    "strand_orbit_len",
    "is_knot_partner",
    "draw_signs",
    "sample_shadows_batch",
    "rejection_knot_batch",
    "_face_ids",
    "extract_core",
    "sample_cores_batch",
    "prime_shadow_seq",
    "rejection_prime_knot_batch",
    "_fill_code",
    "count_automorphisms",
]

if BACKEND == "numba":
    from numba import njit

    for _name in _KERNELS:
        globals()[_name] = njit(cache=True)(globals()[_name])
    del _name
else:
    # pure-Python path: numpy scalar overflow is intentional in the RNG
    _orig = {name: globals()[name] for name in _KERNELS}

    def _quiet(fn):
        def wrapped(*args):
            with np.errstate(over="ignore"):
                return fn(*args)

        wrapped.__name__ = fn.__name__
        wrapped.__doc__ = fn.__doc__
        return wrapped

    for _name in _KERNELS:
        globals()[_name] = _quiet(_orig[_name])
    del _name, _orig
