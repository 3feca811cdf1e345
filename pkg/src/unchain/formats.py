"""Reading distance data and writing dendrograms.

Input formats
-------------
matrix-csv
    Square matrix, one row per line. An optional first row of labels is
    used as point labels; it is recognized when it is not numeric or when
    there is one more row than columns.
matrix-json
    ``{"labels": [...], "matrix": [[...], ...]}`` or a bare list of rows.
    Exact values may be given as strings such as ``"21/10"``.
edges-csv
    ``src,dst,weight`` rows (an optional header is skipped); distances are
    shortest-path lengths.

Dendrogram formats
------------------
json
    ``{"labels", "heights", "levels", "merges"}``. Leaves are block ids
    ``0..n-1``; each merge creates the next id and lists the ids it absorbs
    under ``parents`` and its own id under ``child``.
newick
    Rooted tree whose internal node for a merge at height ``h`` sits at
    distance ``h`` above the leaves. Branch lengths are height differences, so
    ``u(x, y)`` is the height of the lowest common ancestor. Multi-way merges
    become multifurcating nodes.
dot
    One Graphviz cluster per level, one nested cluster per block.
"""

from __future__ import annotations

import csv
import io as _io
import json
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from pathlib import Path

from .exceptions import ParseError
from .metric import Dendrogram, FiniteMetricSpace, shortest_path_metric, validate_metric

__all__ = [
    "parse_number",
    "parse_input",
    "read_input",
    "encode_number",
    "decode_number",
    "space_to_json",
    "space_from_json",
    "dump_matrix",
    "dump_edges",
    "emit_dendrogram",
    "dendrogram_to_json",
    "dendrogram_from_json",
    "snap",
    "FORMATS",
    "DENDROGRAM_FORMATS",
]

FORMATS = ("matrix-csv", "matrix-json", "edges-csv")
DENDROGRAM_FORMATS = ("json", "newick", "dot")


def parse_number(text: str, exact: bool = False):
    """Parse a decimal or ``p/q`` string; exact mode yields ``int``/``Fraction``."""
    text = text.strip()
    if not text:
        raise ValueError("empty field")
    if "/" in text:
        value = Fraction(text)
        return value if exact else float(value)
    if exact:
        try:
            value = Fraction(Decimal(text))
        except InvalidOperation:
            raise ValueError(f"not a number: {text!r}") from None
        return int(value) if value.denominator == 1 else value
    try:
        return int(text)
    except ValueError:
        return float(text)


def snap(value, decimals: int):
    """Round to ``decimals`` places, staying exact for exact inputs."""
    if isinstance(value, float):
        return round(value, decimals)
    value = round(Fraction(value), decimals)
    return int(value) if value.denominator == 1 else value


def _snap_matrix(rows, decimals):
    if decimals is None:
        return rows
    return [[snap(v, decimals) for v in row] for row in rows]


def _is_number(text, exact):
    try:
        parse_number(text, exact)
        return True
    except (ValueError, ZeroDivisionError):
        return False


def _parse_matrix_csv(text, exact, snap_decimals):
    rows = [r for r in csv.reader(_io.StringIO(text)) if any(f.strip() for f in r)]
    if not rows:
        raise ParseError("empty matrix", line=1)
    labels = None
    start = 0
    # Numeric-looking labels are recognized by the extra row.
    if not all(_is_number(f, exact) for f in rows[0]) or len(rows) == len(rows[0]) + 1:
        labels = [f.strip() for f in rows[0]]
        start = 1
    matrix = []
    width = None
    for lineno, row in enumerate(rows[start:], start=start + 1):
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(f"ragged matrix: expected {width} fields, got {len(row)}", line=lineno)
        vals = []
        for col, field in enumerate(row, start=1):
            try:
                vals.append(parse_number(field, exact))
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"not a number: {field!r}", line=lineno, column=col) from None
        matrix.append(vals)
    if len(matrix) != width:
        raise ParseError(f"matrix is {len(matrix)}x{width}, not square", line=len(rows))
    return validate_metric(labels, _snap_matrix(matrix, snap_decimals))


def decode_number(value, exact: bool = True):
    if isinstance(value, bool):
        raise ValueError("booleans are not distances")
    if isinstance(value, str):
        return parse_number(value, exact)
    if isinstance(value, float) and exact:
        return parse_number(repr(value), True)
    return value


def encode_number(value):
    """JSON-safe number: ints and floats as-is, other rationals as ``"p/q"``."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return int(value)
        return f"{value.numerator}/{value.denominator}"
    return value


def _parse_matrix_json(text, exact, snap_decimals):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from None
    if isinstance(data, dict):
        labels, rows = data.get("labels"), data.get("matrix")
    else:
        labels, rows = None, data
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ParseError("expected a list of rows")
    width = len(rows[0]) if rows else 0
    for k, r in enumerate(rows, start=1):
        if len(r) != width:
            raise ParseError(f"ragged matrix: row {k} has {len(r)} entries, expected {width}")
    try:
        matrix = [[decode_number(v, exact) for v in r] for r in rows]
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(str(exc)) from None
    if exact is False:
        matrix = [[float(v) if isinstance(v, Fraction) else v for v in r] for r in matrix]
    return validate_metric(labels, _snap_matrix(matrix, snap_decimals))


def _parse_edges_csv(text, exact, snap_decimals):
    edges = []
    labels = []
    seen = {}
    for lineno, row in enumerate(csv.reader(_io.StringIO(text)), start=1):
        if not any(f.strip() for f in row):
            continue
        if len(row) != 3:
            raise ParseError(f"expected src,dst,weight, got {len(row)} fields", line=lineno)
        src, dst, w = (f.strip() for f in row)
        if lineno == 1 and not _is_number(w, exact):
            continue  # header
        try:
            weight = parse_number(w, exact)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"not a number: {w!r}", line=lineno, column=3) from None
        if snap_decimals is not None:
            weight = snap(weight, snap_decimals)
        for v in (src, dst):
            if v not in seen:
                seen[v] = len(labels)
                labels.append(v)
        edges.append((src, dst, weight))
    if not labels:
        raise ParseError("no edges", line=1)
    return shortest_path_metric(edges, len(labels), labels)


def parse_input(text: str, format: str = "matrix-csv", exact: bool = False, snap_decimals=None) -> FiniteMetricSpace:
    """Parse distance data from a string. See the module docstring for formats."""
    if format == "matrix-csv":
        return _parse_matrix_csv(text, exact, snap_decimals)
    if format == "matrix-json":
        return _parse_matrix_json(text, exact, snap_decimals)
    if format == "edges-csv":
        return _parse_edges_csv(text, exact, snap_decimals)
    raise ValueError(f"unknown input format {format!r}")


def read_input(path, format: str = "matrix-csv", exact: bool = False, snap_decimals=None) -> FiniteMetricSpace:
    return parse_input(Path(path).read_text(), format, exact, snap_decimals)


def space_to_json(space: FiniteMetricSpace) -> dict:
    return {
        "labels": list(space.labels),
        "matrix": [[encode_number(v) for v in row] for row in space.dist],
    }


def space_from_json(data: dict, check: bool = True) -> FiniteMetricSpace:
    rows = [[decode_number(v, exact=not isinstance(v, float)) for v in r] for r in data["matrix"]]
    return validate_metric(data.get("labels"), rows, check_triangle=check)


def _terminating_decimal(q: Fraction):
    digits = 0
    while (q * 10**digits).denominator != 1:
        digits += 1
        if digits > 30:
            return None
    return str(Decimal(int(q * 10**digits)).scaleb(-digits))


def _fmt_csv(value):
    if isinstance(value, Fraction) and value.denominator != 1:
        text = _terminating_decimal(value)
        if text is not None:
            return text
    value = encode_number(value)
    return repr(value) if isinstance(value, float) else str(value)


def dump_matrix(space: FiniteMetricSpace, format: str = "matrix-csv", header: bool = True) -> str:
    """Serialize a space so that :func:`parse_input` reads it back unchanged.

    Floats are written with ``repr`` (shortest round-tripping form), exact
    rationals with a terminating decimal expansion as decimals, and other
    rationals as ``p/q``.
    """
    if format == "matrix-json":
        return json.dumps(space_to_json(space), indent=None) + "\n"
    if format != "matrix-csv":
        raise ValueError(f"cannot write a matrix as {format!r}")
    out = _io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    if header:
        w.writerow(space.labels)
    for row in space.dist:
        w.writerow([_fmt_csv(v) for v in row])
    return out.getvalue()


def dump_edges(space: FiniteMetricSpace) -> str:
    """Every pair as an ``src,dst,weight`` row; reads back unchanged as edges-csv."""
    out = _io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["src", "dst", "weight"])
    for i in range(space.n):
        for j in range(i + 1, space.n):
            w.writerow([space.labels[i], space.labels[j], _fmt_csv(space.dist[i][j])])
    return out.getvalue()


def _merges(dend: Dendrogram):
    n = dend.n
    ids = {(i,): i for i in range(n)}
    next_id = n
    merges = []
    for h, prev, level in zip(dend.heights[1:], dend.levels, dend.levels[1:]):
        prev_set = set(prev.blocks)
        for block in level.blocks:
            if block in prev_set:
                continue
            members = set(block)
            parents = sorted(ids[b] for b in prev.blocks if b[0] in members)
            ids[block] = next_id
            merges.append({"height": h, "parents": parents, "child": next_id, "block": block})
            next_id += 1
    return merges


def dendrogram_to_json(dend: Dendrogram) -> dict:
    merges = _merges(dend)
    return {
        "labels": list(dend.labels),
        "heights": [encode_number(h) for h in dend.heights],
        "levels": [[list(b) for b in level.blocks] for level in dend.levels],
        "merges": [
            {"height": encode_number(m["height"]), "parents": m["parents"], "child": m["child"]}
            for m in merges
        ],
    }


def dendrogram_from_json(data: dict) -> Dendrogram:
    from .metric import Partition

    n = len(data["labels"])
    heights = tuple(decode_number(h, exact=not isinstance(h, float)) for h in data["heights"])
    levels = tuple(Partition(level, n) for level in data["levels"])
    return Dendrogram(heights, levels, tuple(data["labels"]))


def _newick_label(label) -> str:
    text = str(label)
    if any(c in text for c in " ():;,[]'\t\n"):
        return "'" + text.replace("'", "''") + "'"
    return text


def _newick_number(value) -> str:
    if isinstance(value, Fraction):
        value = value.numerator if value.denominator == 1 else float(value)
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    return repr(value) if isinstance(value, float) else str(value)


def to_newick(dend: Dendrogram) -> str:
    n = dend.n
    if n == 1:
        return _newick_label(dend.labels[0]) + ";"
    node_height = {i: 0 for i in range(n)}
    children = {}
    for m in _merges(dend):
        children[m["child"]] = m["parents"]
        node_height[m["child"]] = m["height"]
    root = max(children)

    def render(node, parent_height):
        if node < n:
            text = _newick_label(dend.labels[node])
        else:
            text = "(" + ",".join(render(c, node_height[node]) for c in children[node]) + ")"
        if parent_height is None:
            return text
        return f"{text}:{_newick_number(parent_height - node_height[node])}"

    return render(root, None) + ";"


def to_dot(dend: Dendrogram) -> str:
    lines = ["digraph dendrogram {", "  node [shape=box];"]
    for li, (h, level) in enumerate(zip(dend.heights, dend.levels)):
        lines.append(f"  subgraph cluster_level_{li} {{")
        lines.append(f'    label="t = {_newick_number(h)}";')
        for bi, block in enumerate(level.blocks):
            lines.append(f"    subgraph cluster_level_{li}_block_{bi} {{")
            lines.append('      label="";')
            for x in block:
                name = json.dumps(f"L{li}:{dend.labels[x]}")
                lines.append(f"      {name} [label={json.dumps(str(dend.labels[x]))}];")
            lines.append("    }")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_dendrogram(dend: Dendrogram, format: str = "json") -> bytes:
    """Serialize a dendrogram; output is byte-identical for equal inputs."""
    if format == "json":
        return (json.dumps(dendrogram_to_json(dend), sort_keys=True) + "\n").encode()
    if format == "newick":
        return (to_newick(dend) + "\n").encode()
    if format == "dot":
        return to_dot(dend).encode()
    raise ValueError(f"unknown dendrogram format {format!r}")
