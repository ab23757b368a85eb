"""Discrete Morse functions on graphs.

A vertex is a face of each edge it bounds. A Morse function assigns a rational
value to every cell such that each cell has at most one "wrong-way"
neighbour above it and at most one below it.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ContractError, InvariantViolation
from .graph import Cell, Graph, SpanningTree, incidence_matrix
from .linalg import RationalMatrix, rational_rank


class MorseInputError(ValueError):
    pass


class InvalidMorseFunction(ValueError):
    def __init__(self, report: "MorseReport"):
        super().__init__("not a discrete Morse function: " + "; ".join(str(v) for v in report.violations))
        self.report = report


@dataclass(frozen=True)
class MorseFunction:
    vertex_values: tuple[Fraction, ...]
    edge_values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertex_values", tuple(Fraction(x) for x in self.vertex_values))
        object.__setattr__(self, "edge_values", tuple(Fraction(x) for x in self.edge_values))

    def __call__(self, cell: Cell) -> Fraction:
        if cell.kind == "vertex":
            return self.vertex_values[cell.index]
        return self.edge_values[cell.index]

    def scaled(self, c) -> MorseFunction:
        c = Fraction(c)
        return MorseFunction([c * x for x in self.vertex_values], [c * x for x in self.edge_values])

    def to_text(self, g: Graph) -> str:
        lines = [f"V {g.label(v)} {x}" for v, x in enumerate(self.vertex_values)]
        lines += [f"E {e} {x}" for e, x in enumerate(self.edge_values)]
        return "\n".join(lines) + "\n"


def _check_covers(g: Graph, f: MorseFunction):
    if len(f.vertex_values) != g.n_vertices or len(f.edge_values) != g.n_edges:
        raise MorseInputError(
            f"Morse function has {len(f.vertex_values)} vertex and {len(f.edge_values)} edge values, "
            f"graph has {g.n_vertices} vertices and {g.n_edges} edges"
        )


_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


def parse_morse_function(text: str, g: Graph) -> MorseFunction:
    """Read ``V <vertex id> <value>`` / ``E <edge index> <value>`` lines.

    Vertex ids are the labels used in the graph document; edge indices are
    0-based positions in that document. Values are integers or ``p/q``.
    """
    label_to_index = {lab: i for i, lab in enumerate(g.labels)}
    vertex: dict[int, Fraction] = {}
    edge: dict[int, Fraction] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3 or parts[0] not in ("V", "E") or not parts[1].isdigit() or not _RATIONAL.match(parts[2]):
            raise MorseInputError(f"line {lineno}: expected 'V <id> <p/q>' or 'E <index> <p/q>', got {line!r}")
        kind, ident, value = parts[0], int(parts[1]), Fraction(parts[2])
        if kind == "V":
            if ident not in label_to_index:
                raise MorseInputError(f"line {lineno}: unknown vertex id {ident}")
            target, key = vertex, label_to_index[ident]
        else:
            if ident >= g.n_edges:
                raise MorseInputError(f"line {lineno}: edge index {ident} out of range (graph has {g.n_edges} edges)")
            target, key = edge, ident
        if key in target:
            raise MorseInputError(f"line {lineno}: duplicate value for {kind} {ident}")
        target[key] = value
    missing = [f"V {g.label(v)}" for v in g.vertices if v not in vertex]
    missing += [f"E {e}" for e in range(g.n_edges) if e not in edge]
    if missing:
        raise MorseInputError("missing values for " + ", ".join(missing))
    return MorseFunction([vertex[v] for v in g.vertices], [edge[e] for e in range(g.n_edges)])


def read_morse_function(path, g: Graph) -> MorseFunction:
    with open(path, encoding="utf-8") as fh:
        return parse_morse_function(fh.read(), g)


@dataclass(frozen=True)
class Violation:
    cell: Cell
    condition: str  # "MC1" | "MC2"
    offending: tuple[Cell, ...]

    def __str__(self):
        return f"{self.condition} at {self.cell}: {', '.join(map(str, self.offending))}"


@dataclass(frozen=True)
class MorseReport:
    valid: bool
    violations: tuple[Violation, ...]
    # cells where both witness sets are nonempty (impossible for a valid function)
    exclusivity_failures: tuple[Cell, ...] = ()


def witness_sets(g: Graph, f: MorseFunction, cell: Cell) -> tuple[tuple[Cell, ...], tuple[Cell, ...]]:
    """(cofaces with f <= f(cell), faces with f >= f(cell))."""
    x = f(cell)
    if cell.kind == "vertex":
        up = tuple(Cell("edge", e) for e in g.incident_edges(cell.index) if f.edge_values[e] <= x)
        return up, ()
    down = tuple(Cell("vertex", v) for v in g.edges[cell.index] if f.vertex_values[v] >= x)
    return (), down


def validate_morse(g: Graph, f: MorseFunction) -> MorseReport:
    _check_covers(g, f)
    violations = []
    both = []
    for cell in g.cells():
        up, down = witness_sets(g, f, cell)
        if len(up) > 1:
            violations.append(Violation(cell, "MC1", up))
        if len(down) > 1:
            violations.append(Violation(cell, "MC2", down))
        if up and down:
            both.append(cell)
    return MorseReport(not violations, tuple(violations), tuple(both))


def require_morse(g: Graph, f: MorseFunction) -> None:
    report = validate_morse(g, f)
    if not report.valid:
        raise InvalidMorseFunction(report)


@dataclass(frozen=True)
class CriticalCells:
    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    @property
    def c0(self) -> int:
        return len(self.vertices)

    @property
    def c1(self) -> int:
        return len(self.edges)


def critical_cells(g: Graph, f: MorseFunction) -> CriticalCells:
    require_morse(g, f)
    verts = tuple(v for v in g.vertices if not any(witness_sets(g, f, Cell("vertex", v))))
    edges = tuple(e for e in range(g.n_edges) if not any(witness_sets(g, f, Cell("edge", e))))
    return CriticalCells(verts, edges)


@dataclass(frozen=True)
class GradientField:
    """A matching of vertices with incident edges, as (vertex, edge) pairs."""

    pairs: tuple[tuple[int, int], ...]
    edge_of: Mapping[int, int] = field(init=False, repr=False, compare=False)
    vertex_of: Mapping[int, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pairs = tuple(sorted(self.pairs))
        edge_of, vertex_of = {}, {}
        for v, e in pairs:
            if v in edge_of or e in vertex_of:
                raise ContractError(f"pair ({v}, {e}) reuses a matched cell")
            edge_of[v] = e
            vertex_of[e] = v
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "edge_of", edge_of)
        object.__setattr__(self, "vertex_of", vertex_of)

    def critical(self, g: Graph) -> CriticalCells:
        return CriticalCells(
            tuple(v for v in g.vertices if v not in self.edge_of),
            tuple(e for e in range(g.n_edges) if e not in self.vertex_of),
        )


def _next_vertex(g: Graph, field_: GradientField, v: int) -> int | None:
    e = field_.edge_of.get(v)
    return None if e is None else g.other_endpoint(e, v)


def is_acyclic(g: Graph, field_: GradientField) -> bool:
    """True if following the matching from any vertex never returns to it."""
    state = {}  # 1 = on current path, 2 = known to terminate
    for start in g.vertices:
        path = []
        v = start
        while v is not None and v not in state:
            state[v] = 1
            path.append(v)
            v = _next_vertex(g, field_, v)
        if v is not None and state[v] == 1:
            return False
        for u in path:
            state[u] = 2
    return True


def gradient_field(g: Graph, f: MorseFunction) -> GradientField:
    require_morse(g, f)
    pairs = [
        (v, e)
        for e, (t, h) in enumerate(g.edges)
        for v in dict.fromkeys((t, h))
        if f.edge_values[e] <= f.vertex_values[v]
    ]
    field_ = GradientField(tuple(pairs))
    if not is_acyclic(g, field_):
        raise InvariantViolation("gradient field of a Morse function has a closed V-path")
    return field_


def flow_to_critical(g: Graph, f: MorseFunction | GradientField, v: int) -> int:
    """Follow the gradient pairing from ``v`` until an unpaired vertex is reached."""
    field_ = f if isinstance(f, GradientField) else gradient_field(g, f)
    for _ in range(g.n_vertices + 1):
        nxt = _next_vertex(g, field_, v)
        if nxt is None:
            return v
        v = nxt
    raise InvariantViolation(f"gradient flow from vertex {v} did not terminate within {g.n_vertices} steps")


@dataclass(frozen=True)
class GradientCurve:
    vertices: tuple[int, ...]  # sigma_0 .. sigma_k
    edges: tuple[int, ...]  # tau_0 .. tau_{k-1}

    def __len__(self):
        return len(self.edges)

    def cells(self) -> list[Cell]:
        out = [Cell("vertex", self.vertices[0])]
        for e, v in zip(self.edges, self.vertices[1:]):
            out += [Cell("edge", e), Cell("vertex", v)]
        return out


def is_gradient_curve(g: Graph, f: MorseFunction, curve: GradientCurve) -> bool:
    if len(curve.vertices) != len(curve.edges) + 1:
        return False
    for i, e in enumerate(curve.edges):
        a, b = curve.vertices[i], curve.vertices[i + 1]
        if a == b or set(g.edges[e]) != {a, b}:
            return False
        if not f.vertex_values[a] >= f.edge_values[e] > f.vertex_values[b]:
            return False
    return True


def gradient_curves(g: Graph, f: MorseFunction, src: int, dst: int) -> list[GradientCurve]:
    """All gradient curves from ``src`` to ``dst``, by depth-first search.

    Vertex values strictly decrease along a curve, so the search is finite.
    """
    require_morse(g, f)
    incident = [g.incident_edges(v) for v in g.vertices]
    found = []

    def extend(verts, edges):
        v = verts[-1]
        if v == dst:
            found.append(GradientCurve(tuple(verts), tuple(edges)))
        for e in incident[v]:
            w = g.other_endpoint(e, v)
            if f.vertex_values[v] >= f.edge_values[e] > f.vertex_values[w]:
                extend(verts + [w], edges + [e])

    extend([src], [])
    return found


def curve_multiplicity(curve: GradientCurve, g: Graph) -> int:
    """Sign of a gradient curve: product over steps of ``-<d tau, sigma_i> <d tau, sigma_{i+1}>``."""
    inc = incidence_matrix(g)
    sign = 1
    for i, e in enumerate(curve.edges):
        sign *= -int(inc[curve.vertices[i], e]) * int(inc[curve.vertices[i + 1], e])
    return sign


@dataclass(frozen=True)
class MorseComplex:
    critical_vertices: tuple[int, ...]
    critical_edges: tuple[int, ...]
    differential: RationalMatrix  # c0 x c1, maps critical edges to critical vertices

    @property
    def homology(self) -> tuple[int, int]:
        r = rational_rank(self.differential)
        return len(self.critical_vertices) - r, len(self.critical_edges) - r


def curve_count_differential(g: Graph, f: MorseFunction) -> RationalMatrix:
    """Morse differential from signed counts of gradient curves."""
    crit = critical_cells(g, f)
    inc = incidence_matrix(g)
    rows = []
    for sigma in crit.vertices:
        row = []
        for tau in crit.edges:
            total = 0
            for s1 in dict.fromkeys(g.edges[tau]):
                curves = gradient_curves(g, f, s1, sigma)
                total += int(inc[s1, tau]) * sum(curve_multiplicity(c, g) for c in curves)
            row.append(total)
        rows.append(row)
    return RationalMatrix(rows, shape=(crit.c0, crit.c1))


def flow_boundary_map(g: Graph, f: MorseFunction) -> RationalMatrix:
    """Morse boundary ``e -> head(e)' - tail(e)'`` where ``'`` flows to a critical vertex."""
    crit = critical_cells(g, f)
    field_ = gradient_field(g, f)
    pos = {v: i for i, v in enumerate(crit.vertices)}
    rows = [[0] * crit.c1 for _ in range(crit.c0)]
    for j, e in enumerate(crit.edges):
        t, h = g.edges[e]
        rows[pos[flow_to_critical(g, field_, h)]][j] += 1
        rows[pos[flow_to_critical(g, field_, t)]][j] -= 1
    return RationalMatrix(rows, shape=(crit.c0, crit.c1))


def morse_differential(g: Graph, f: MorseFunction) -> MorseComplex:
    crit = critical_cells(g, f)
    by_curves = curve_count_differential(g, f)
    by_flow = flow_boundary_map(g, f)
    if by_curves != by_flow:
        raise InvariantViolation("curve-count differential differs from the flow boundary map")
    return MorseComplex(crit.vertices, crit.edges, by_curves)


def height_function(g: Graph, tree: SpanningTree) -> MorseFunction:
    """Depth on vertices; on edges the larger endpoint depth, plus one off the tree."""
    depth = tree.depth
    if len(depth) != g.n_vertices:
        raise ContractError("spanning tree does not reach every vertex")
    edge_values = []
    for e, (t, h) in enumerate(g.edges):
        top = max(depth[t], depth[h])
        edge_values.append(top if e in tree.edges else top + 1)
    f = MorseFunction([depth[v] for v in g.vertices], edge_values)
    crit = critical_cells(g, f)
    expected = (tree.root,), tuple(e for e in range(g.n_edges) if e not in tree.edges)
    if (crit.vertices, crit.edges) != expected:
        raise InvariantViolation("height function critical cells are not the root plus the non-tree edges")
    return f


def tree_boundary_zero_check(g: Graph, f: MorseFunction) -> bool:
    """True if both endpoints of every critical edge flow to the same critical vertex."""
    crit = critical_cells(g, f)
    field_ = gradient_field(g, f)
    return all(
        flow_to_critical(g, field_, g.edges[e][0]) == flow_to_critical(g, field_, g.edges[e][1])
        for e in crit.edges
    )


def _flow_distance(g: Graph, field_: GradientField) -> dict[int, int]:
    # number of further paired vertices met after leaving v along the flow
    dist: dict[int, int] = {}
    for start in field_.edge_of:
        chain = []
        v = start
        while v in field_.edge_of and v not in dist:
            chain.append(v)
            v = _next_vertex(g, field_, v)
        base = dist[v] + 1 if v in dist else 0
        for u in reversed(chain):
            dist[u] = base
            base += 1
    return dist


def flat_function(g: Graph, field_: GradientField) -> MorseFunction:
    """Flat Morse function realising an acyclic matching.

    Critical cells get their dimension. Every pair first gets the shared value
    1; when that breaks the Morse conditions, the pair at flow distance ``k``
    from a critical vertex gets ``1 - 1/(2 + k)`` instead.
    """
    if not is_acyclic(g, field_):
        raise ContractError("matching has a closed V-path")
    verts = [Fraction(1) if v in field_.edge_of else Fraction(0) for v in g.vertices]
    edges = [Fraction(1) for _ in range(g.n_edges)]
    f = MorseFunction(verts, edges)
    if validate_morse(g, f).valid and gradient_field(g, f) == field_:
        return f
    dist = _flow_distance(g, field_)
    for v, e in field_.pairs:
        verts[v] = edges[e] = 1 - Fraction(1, 2 + dist[v])
    f = MorseFunction(verts, edges)
    if gradient_field(g, f) != field_:
        raise InvariantViolation("flattening changed the gradient field")
    return f


def flatten(g: Graph, f: MorseFunction) -> MorseFunction:
    return flat_function(g, gradient_field(g, f))


def is_flat(g: Graph, f: MorseFunction) -> bool:
    """Paired cells share a value (so the large-``s`` Witten limit exists)."""
    return all(f.vertex_values[v] == f.edge_values[e] for v, e in gradient_field(g, f).pairs)


def random_matching(g: Graph, rng: random.Random, density: float | None = None) -> GradientField:
    """Random acyclic vertex-edge matching; candidate pairs closing a V-path are rejected."""
    if density is None:
        density = rng.random()
    incidences = [(v, e) for e, (t, h) in enumerate(g.edges) for v in (t, h)]
    rng.shuffle(incidences)
    edge_of: dict[int, int] = {}
    used_edges: set[int] = set()
    for v, e in incidences:
        if v in edge_of or e in used_edges or rng.random() > density:
            continue
        # closing a cycle means the flow from the far endpoint returns to v
        w = g.other_endpoint(e, v)
        seen = set()
        while w in edge_of and w != v and w not in seen:
            seen.add(w)
            w = g.other_endpoint(edge_of[w], w)
        if w == v:
            continue
        edge_of[v] = e
        used_edges.add(e)
    return GradientField(tuple(edge_of.items()))


def random_morse(g: Graph, seed=None, density: float | None = None) -> MorseFunction:
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    return flat_function(g, random_matching(g, rng, density))


def morse_function_from_pairs(g: Graph, pairs: Iterable[Sequence[int]]) -> MorseFunction:
    return flat_function(g, GradientField(tuple((int(v), int(e)) for v, e in pairs)))
