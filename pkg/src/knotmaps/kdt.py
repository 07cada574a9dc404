"""KDT text format: serialization and parsing of diagrams and tangles.

One record::

    kdt 1
    n <crossing-count>
    x <crossing-index> <a0> <a1> <a2> <a3> <sign: + | - | .>
    e <arc> <arc>
    root <arc>
    tangle <a0> ... <a2k-1>

ASCII, LF line endings.  Crossing lines appear in index order and edge
lines are sorted by their smaller arc, which makes serialization
byte-deterministic.  ``#`` starts a comment that runs to end of line.
Records in a stream are separated by blank lines.
"""

from __future__ import annotations

from .diagram import BLANK, Crossing, Diagram, build_diagram
from .errors import ParseError, ValidationError

__all__ = ["serialize", "parse", "parse_records", "serialize_records"]

_SIGN_CHAR = {1: "+", -1: "-", 0: "."}
_CHAR_SIGN = {"+": 1, "-": -1, ".": 0}


def serialize(obj):
    """Byte-deterministic KDT text for a diagram or tangle."""
    from .tangles import Tangle

    lines = ["kdt 1"]
    if isinstance(obj, Diagram):
        lines.append(f"n {obj.n}")
        for i, c in enumerate(obj.crossings):
            a0, a1, a2, a3 = c.arcs
            lines.append(f"x {i} {a0} {a1} {a2} {a3} {_SIGN_CHAR[c.sign]}")
        for a, b in obj.edges:
            lines.append(f"e {a} {b}")
        if obj.root is not None:
            lines.append(f"root {obj.root}")
    elif isinstance(obj, Tangle):
        if any(tok is None for tok in obj.exterior) or obj.circles:
            raise ValidationError(
                "tangles with free strands or bare circles have no KDT form"
            )
        lines.append(f"n {obj.n}")
        for i, c in enumerate(obj.crossings):
            a0, a1, a2, a3 = c.arcs
            lines.append(f"x {i} {a0} {a1} {a2} {a3} {_SIGN_CHAR[c.sign]}")
        for a, p in enumerate(obj.partner):
            if 0 <= p and a < p:
                lines.append(f"e {a} {p}")
        lines.append("tangle " + " ".join(str(a) for a in obj.exterior))
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    return "\n".join(lines) + "\n"


def _tokenize(text):
    rows = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((lineno, line.split()))
    return rows


def parse(text):
    """Parse one KDT record into a Diagram or (if a tangle line) a Tangle.

    Raises:
        ParseError: malformed text, with line and column location.
        ValidationError: structurally invalid record (via the builders).
    """
    rows = _tokenize(text)
    if not rows:
        raise ParseError("empty KDT record", 1, 1)
    lineno, head = rows[0]
    if head != ["kdt", "1"]:
        raise ParseError("expected header 'kdt 1'", lineno, 1)
    if len(rows) < 2 or rows[1][1][0] != "n":
        raise ParseError("expected 'n <count>' line", rows[0][0] + 1, 1)

    def intval(tok, lineno, col):
        try:
            return int(tok)
        except ValueError:
            raise ParseError(f"expected integer, got {tok!r}", lineno, col) from None

    n_line = rows[1]
    if len(n_line[1]) != 2:
        raise ParseError("'n' line needs one value", n_line[0], 1)
    n = intval(n_line[1][1], n_line[0], 3)

    crossings = []
    edges = []
    root = None
    exterior = None
    for lineno, toks in rows[2:]:
        kind = toks[0]
        if kind == "x":
            if len(toks) != 7:
                raise ParseError("'x' line needs index, 4 arcs and a sign", lineno, 1)
            idx = intval(toks[1], lineno, 3)
            if idx != len(crossings):
                raise ParseError(
                    f"crossing index {idx} out of order (expected {len(crossings)})",
                    lineno, 3,
                )
            arcs = tuple(intval(t, lineno, 5) for t in toks[2:6])
            if toks[6] not in _CHAR_SIGN:
                raise ParseError(f"bad sign {toks[6]!r}", lineno, len(" ".join(toks[:6])) + 2)
            crossings.append(Crossing(arcs, _CHAR_SIGN[toks[6]]))
        elif kind == "e":
            if len(toks) != 3:
                raise ParseError("'e' line needs two arcs", lineno, 1)
            edges.append((intval(toks[1], lineno, 3), intval(toks[2], lineno, 5)))
        elif kind == "root":
            if len(toks) != 2:
                raise ParseError("'root' line needs one arc", lineno, 1)
            root = intval(toks[1], lineno, 6)
        elif kind == "tangle":
            exterior = tuple(intval(t, lineno, 8) for t in toks[1:])
        else:
            raise ParseError(f"unknown line kind {kind!r}", lineno, 1)

    if len(crossings) != n:
        raise ParseError(f"expected {n} crossings, found {len(crossings)}", rows[-1][0], 1)

    if exterior is None:
        return build_diagram(crossings, edges, root)

    from .tangles import build_tangle

    return build_tangle(crossings, edges, exterior)


def parse_records(text):
    """Parse a blank-line separated stream of KDT records."""
    out = []
    for block in text.split("\n\n"):
        if block.strip():
            out.append(parse(block))
    return out


def serialize_records(objs):
    return "\n".join(serialize(o) for o in objs)
