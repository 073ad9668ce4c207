"""Text formats: ``.dg`` graph files and partition JSON."""

from __future__ import annotations

import json
from pathlib import Path

from .graph_core import OrientedGraph, Partition, iter_bits


class GraphFormatError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _fields(text: str) -> list[tuple[int, str]]:
    """Whitespace-separated fields of a line with their 1-based columns."""
    out = []
    i = 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        j = i
        while j < len(text) and not text[j].isspace():
            j += 1
        out.append((i + 1, text[i:j]))
        i = j
    return out


def _int_field(col: int, tok: str, lineno: int) -> int:
    try:
        value = int(tok)
    except ValueError:
        raise GraphFormatError(f"expected an integer, got {tok!r}", lineno, col) from None
    if value < 0:
        raise GraphFormatError(f"negative value {value}", lineno, col)
    return value


def parse_dg(text: str) -> OrientedGraph:
    header = None
    edges: list[tuple[int, int]] = []
    seen: dict[tuple[int, int], int] = {}
    for lineno, line in enumerate(text.split("\n"), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = _fields(line)
        if len(fields) != 2:
            col = fields[2][0] if len(fields) > 2 else 1
            raise GraphFormatError(f"expected two integers, found {len(fields)} fields", lineno, col)
        a, b = (_int_field(c, t, lineno) for c, t in fields)
        if header is None:
            header = (a, b)
            continue
        n = header[0]
        for (col, _), x in zip(fields, (a, b)):
            if x >= n:
                raise GraphFormatError(f"vertex {x} out of range for n={n}", lineno, col)
        if a == b:
            raise GraphFormatError(f"loop at vertex {a}", lineno, fields[1][0])
        if (a, b) in seen:
            raise GraphFormatError(f"duplicate edge {a} {b} (first on line {seen[a, b]})", lineno)
        if (b, a) in seen:
            raise GraphFormatError(f"antiparallel edge {a} {b} (reverse on line {seen[b, a]})", lineno)
        seen[a, b] = lineno
        edges.append((a, b))
    if header is None:
        raise GraphFormatError("missing 'n m' header", 1)
    n, m = header
    if len(edges) != m:
        raise GraphFormatError(f"header declares {m} edges, found {len(edges)}", lineno)
    return OrientedGraph(n, edges)


def format_dg(G: OrientedGraph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"{G.n} {G.num_edges()}")
    for u in range(G.n):
        lines.extend(f"{u} {v}" for v in iter_bits(G.out[u]))
    return "\n".join(lines) + "\n"


def read_dg(path) -> OrientedGraph:
    return parse_dg(Path(path).read_text())


def write_dg(G: OrientedGraph, path, comment: str | None = None) -> None:
    Path(path).write_text(format_dg(G, comment), newline="\n")


def partition_to_json(P: Partition) -> dict:
    return {"parts": P.as_lists()}


def partition_from_json(obj, n: int | None = None) -> Partition:
    parts = obj["parts"] if isinstance(obj, dict) else obj
    return Partition(parts, n)


def read_partition(path, n: int | None = None) -> Partition:
    return partition_from_json(json.loads(Path(path).read_text()), n)


def write_partition(P: Partition, path) -> None:
    Path(path).write_text(json.dumps(partition_to_json(P)) + "\n")
