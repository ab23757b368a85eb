"""Oriented finite graphs and their structural matrices.

Vertices are indexed ``0..n-1`` and edges ``0..m-1`` in input order; every
matrix produced here indexes rows and columns against those orders.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple

from .linalg import RationalMatrix


class GraphParseError(ValueError):
    """Raised when an edge-list document is malformed."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class DisconnectedGraphError(ValueError):
    pass


class Cell(NamedTuple):
    kind: str  # "vertex" | "edge"
    index: int

    def __str__(self):
        return f"{'v' if self.kind == 'vertex' else 'e'}{self.index}"


@dataclass(frozen=True)
class Graph:
    """A finite graph with a fixed orientation on every edge.

    ``edges[l] = (tail, head)``. Parallel edges are allowed, self-loops are not.
    ``labels`` keeps the vertex ids as they appeared in the source document.
    """

    n_vertices: int
    edges: tuple[tuple[int, int], ...] = ()
    labels: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n_vertices < 0:
            raise ValueError("negative vertex count")
        edges = tuple((int(t), int(h)) for t, h in self.edges)
        object.__setattr__(self, "edges", edges)
        for l, (t, h) in enumerate(edges):
            if not (0 <= t < self.n_vertices and 0 <= h < self.n_vertices):
                raise ValueError(f"edge {l} has an endpoint outside 0..{self.n_vertices - 1}")
            if t == h:
                raise ValueError(f"edge {l} is a self-loop at vertex {t}")
        if self.labels is None:
            object.__setattr__(self, "labels", tuple(range(self.n_vertices)))
        elif len(self.labels) != self.n_vertices:
            raise ValueError("labels must have one entry per vertex")

    @property
    def vertices(self) -> range:
        return range(self.n_vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def incident_edges(self, v: int) -> list[int]:
        return [l for l, (t, h) in enumerate(self.edges) if v in (t, h)]

    def other_endpoint(self, e: int, v: int) -> int:
        t, h = self.edges[e]
        if v == t:
            return h
        if v == h:
            return t
        raise ValueError(f"vertex {v} is not an endpoint of edge {e}")

    def is_simple(self) -> bool:
        seen = {frozenset(e) for e in self.edges}
        return len(seen) == len(self.edges)

    def cells(self) -> list[Cell]:
        return [Cell("vertex", v) for v in self.vertices] + [
            Cell("edge", e) for e in range(self.n_edges)
        ]

    def label(self, v: int) -> int:
        return self.labels[v]

    def to_text(self) -> str:
        """Serialize in the edge-list format (with a vertex-count header).

        Vertex ids are written as internal indices.
        """
        lines = [f"vertices {self.n_vertices}"]
        lines += [f"{t} {h}" for t, h in self.edges]
        return "\n".join(lines) + "\n"


_HEADER = re.compile(r"^vertices\s+(\d+)$")


def parse_graph(text: str) -> Graph:
    """Parse an edge-list document.

    The optional first non-comment line ``vertices N`` fixes the vertex set to
    ids ``0..N-1``; otherwise vertices are numbered by first appearance.
    """
    n_header = None
    raw_edges = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        m = _HEADER.match(line)
        if m:
            if n_header is not None or raw_edges:
                raise GraphParseError(lineno, "vertex-count header must precede all edges")
            n_header = int(m.group(1))
            continue
        parts = line.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise GraphParseError(lineno, f"expected 'tail head' with non-negative integer ids, got {line!r}")
        tail, head = int(parts[0]), int(parts[1])
        if tail == head:
            raise GraphParseError(lineno, f"self-loop at vertex {tail}")
        if n_header is not None:
            for v in (tail, head):
                if v >= n_header:
                    raise GraphParseError(lineno, f"unknown vertex id {v} (header declares {n_header})")
        raw_edges.append((tail, head))

    if n_header is not None:
        return Graph(n_header, raw_edges)

    index: dict[int, int] = {}
    for t, h in raw_edges:
        for v in (t, h):
            index.setdefault(v, len(index))
    edges = [(index[t], index[h]) for t, h in raw_edges]
    return Graph(len(index), edges, labels=tuple(index))


def read_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def adjacency_matrix(g: Graph) -> RationalMatrix:
    """0/1 adjacency, ignoring orientation; parallel edges still give 1."""
    n = g.n_vertices
    rows = [[0] * n for _ in range(n)]
    for t, h in g.edges:
        rows[t][h] = rows[h][t] = 1
    return RationalMatrix(rows, shape=(n, n))


def valence_matrix(g: Graph) -> RationalMatrix:
    n = g.n_vertices
    deg = [0] * n
    for t, h in g.edges:
        deg[t] += 1
        deg[h] += 1
    return RationalMatrix.diagonal(deg)


def incidence_matrix(g: Graph) -> RationalMatrix:
    """|V| x |E| matrix: -1 at the tail of each edge, +1 at its head."""
    rows = [[0] * g.n_edges for _ in range(g.n_vertices)]
    for l, (t, h) in enumerate(g.edges):
        rows[t][l] = -1
        rows[h][l] = 1
    return RationalMatrix(rows, shape=(g.n_vertices, g.n_edges))


def connected_components(g: Graph) -> list[list[int]]:
    """Vertex classes of the underlying unoriented graph, each sorted, in order of least vertex."""
    parent = list(g.vertices)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for t, h in g.edges:
        rt, rh = find(t), find(h)
        if rt != rh:
            parent[max(rt, rh)] = min(rt, rh)
    classes: dict[int, list[int]] = {}
    for v in g.vertices:
        classes.setdefault(find(v), []).append(v)
    return [classes[r] for r in sorted(classes)]


def cycle_rank(g: Graph) -> int:
    return g.n_edges - g.n_vertices + len(connected_components(g))


@dataclass(frozen=True)
class SpanningTree:
    root: int
    edges: frozenset[int]
    parent: dict[int, int | None]  # vertex -> parent vertex
    parent_edge: dict[int, int | None]
    depth: dict[int, int]


def spanning_tree(g: Graph, root: int) -> SpanningTree:
    """Breadth-first spanning tree; neighbours are discovered by scanning edges in input order."""
    if not 0 <= root < g.n_vertices:
        raise ValueError(f"root {root} is not a vertex")
    incident = [[] for _ in g.vertices]
    for l, (t, h) in enumerate(g.edges):
        incident[t].append(l)
        incident[h].append(l)

    depth = {root: 0}
    parent: dict[int, int | None] = {root: None}
    parent_edge: dict[int, int | None] = {root: None}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for l in incident[v]:
            w = g.other_endpoint(l, v)
            if w not in depth:
                depth[w] = depth[v] + 1
                parent[w] = v
                parent_edge[w] = l
                queue.append(w)

    if len(depth) != g.n_vertices:
        missing = next(v for v in g.vertices if v not in depth)
        raise DisconnectedGraphError(
            f"graph is disconnected: vertex {g.label(missing)} is unreachable from root {g.label(root)}"
        )
    tree_edges = frozenset(l for l in parent_edge.values() if l is not None)
    return SpanningTree(root, tree_edges, parent, parent_edge, depth)
