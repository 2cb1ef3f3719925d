"""The ".3g" hypergraph text format.

Line 1: "n m".  Then m lines "a b c" with 0-indexed strictly ascending
vertices.  Lines starting with '#' are comments.  Parsing is strict:
duplicate edges, unsorted or repeated vertices, out-of-range indices and
edge-count mismatches are all errors carrying a line number.
"""

from __future__ import annotations

import io
from typing import TextIO

from .core import ThreeGraph


class Format3GError(ValueError):
    def __init__(self, line_no: int, msg: str):
        super().__init__(f"line {line_no}: {msg}")
        self.line_no = line_no


def read_3g(stream: TextIO) -> ThreeGraph:
    n = m = None
    triples: list[tuple[int, int, int]] = []
    seen: set[tuple[int, int, int]] = set()
    for line_no, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2:
                raise Format3GError(line_no, "header must be 'n m'")
            try:
                n, m = int(parts[0]), int(parts[1])
            except ValueError:
                raise Format3GError(line_no, "header must be two integers")
            if n < 1 or m < 0:
                raise Format3GError(line_no, "need n >= 1 and m >= 0")
            continue
        if len(parts) != 3:
            raise Format3GError(line_no, "edge line must be 'a b c'")
        try:
            a, b, c = (int(x) for x in parts)
        except ValueError:
            raise Format3GError(line_no, "edge line must be three integers")
        if len({a, b, c}) != 3:
            raise Format3GError(line_no, f"vertices not distinct: {a} {b} {c}")
        if not (a < b < c):
            raise Format3GError(line_no, f"vertices not ascending: {a} {b} {c}")
        if c >= n or a < 0:
            raise Format3GError(line_no, f"vertex outside [0, {n})")
        if (a, b, c) in seen:
            raise Format3GError(line_no, f"duplicate edge {a} {b} {c}")
        seen.add((a, b, c))
        triples.append((a, b, c))
    if n is None:
        raise Format3GError(0, "empty file")
    if len(triples) != m:
        raise Format3GError(0, f"header declared {m} edges, found {len(triples)}")
    return ThreeGraph.from_edges(n, triples)


def write_3g_stream(H: ThreeGraph, stream: TextIO) -> None:
    stream.write(f"{H.n} {H.num_edges}\n")
    for (a, b, c) in H.edges:
        stream.write(f"{a} {b} {c}\n")


def parse_3g(path: str) -> ThreeGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return read_3g(fh)


def write_3g(H: ThreeGraph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        write_3g_stream(H, fh)


def loads_3g(text: str) -> ThreeGraph:
    return read_3g(io.StringIO(text))


def dumps_3g(H: ThreeGraph) -> str:
    buf = io.StringIO()
    write_3g_stream(H, buf)
    return buf.getvalue()
