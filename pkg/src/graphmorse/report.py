"""JSON-ready analysis reports shared by the CLI and library callers."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .graph import Graph, adjacency_matrix, connected_components, cycle_rank, incidence_matrix, spanning_tree, valence_matrix
from .linalg import RationalMatrix
from .morse import (
    MorseFunction,
    critical_cells,
    flatten,
    gradient_field,
    height_function,
    morse_differential,
    tree_boundary_zero_check,
    validate_morse,
)
from .spectral import (
    betti_numbers,
    cutoff_cohomology,
    cutoff_complex,
    even_laplacian,
    generalized_walk_endpoints,
    generalized_walk_matrix,
    hodge_even_laplacian,
    laplacian_forms_agree,
    odd_laplacian,
    odd_walk_endpoints,
    odd_walk_matrix,
)
from .witten import deformed_cutoff_cohomology, deformed_laplacians, limit_kernel_dims, limit_laplacians, spectral_flow

SCHEMA = "graphmorse.report/1"


def fnum(x: float):
    """Float rounded to 12 significant digits; non-finite values become strings."""
    x = float(x)
    if not math.isfinite(x):
        return "inf" if x > 0 else "-inf" if x < 0 else "nan"
    return float(f"{x:.12g}")


def rational_json(m: RationalMatrix) -> list[list[str]]:
    return m.tolist_str()


def float_json(a: np.ndarray):
    return [fnum(x) for x in a] if a.ndim == 1 else [[fnum(x) for x in row] for row in a]


def graph_summary(g: Graph) -> dict:
    return {
        "vertices": g.n_vertices,
        "edges": g.n_edges,
        "labels": list(g.labels),
        "edge_list": [[g.label(t), g.label(h)] for t, h in g.edges],
        "components": len(connected_components(g)),
        "cycle_rank": cycle_rank(g),
        "simple": g.is_simple(),
    }


def _envelope(command: str, **body) -> dict:
    return {"schema": SCHEMA, "command": command, **body}


def hodge_report(g: Graph) -> dict:
    h0, h1 = betti_numbers(g)
    return _envelope(
        "hodge",
        graph=graph_summary(g),
        matrices={
            "adjacency": rational_json(adjacency_matrix(g)),
            "valence": rational_json(valence_matrix(g)),
            "incidence": rational_json(incidence_matrix(g)),
            "even_laplacian": rational_json(even_laplacian(g)),
            "even_laplacian_hodge": rational_json(hodge_even_laplacian(g)),
            "odd_laplacian": rational_json(odd_laplacian(g)),
        },
        laplacian_forms_agree=laplacian_forms_agree(g),
        betti=[h0, h1],
    )


def _cells(g: Graph, kind: str, idx: Sequence[int]) -> list:
    return [g.label(i) for i in idx] if kind == "vertex" else list(idx)


def morse_function_json(g: Graph, f: MorseFunction) -> dict:
    return {
        "vertex_values": {str(g.label(v)): str(x) for v, x in enumerate(f.vertex_values)},
        "edge_values": [str(x) for x in f.edge_values],
    }


def morse_report(
    g: Graph,
    f: MorseFunction,
    witten: bool = False,
    flatten_first: bool = False,
    s_grid: Sequence[float] | None = None,
    cutoff: float | None = None,
) -> dict:
    """Validation, critical cells, gradient field and Morse complex; optional Witten analysis.

    An invalid function yields a report with ``valid: false`` and the violation
    listing only.
    """
    validation = validate_morse(g, f)
    out = _envelope(
        "morse",
        graph=graph_summary(g),
        function=morse_function_json(g, f),
        valid=validation.valid,
        violations=[
            {"cell": str(v.cell), "condition": v.condition, "offending": [str(c) for c in v.offending]}
            for v in validation.violations
        ],
    )
    if not validation.valid:
        return out

    crit = critical_cells(g, f)
    field_ = gradient_field(g, f)
    cx = morse_differential(g, f)
    h0, h1 = betti_numbers(g)
    out.update(
        critical={"vertices": _cells(g, "vertex", crit.vertices), "edges": list(crit.edges), "c0": crit.c0, "c1": crit.c1},
        gradient_field=[[g.label(v), e] for v, e in field_.pairs],
        morse_differential=rational_json(cx.differential),
        morse_homology=list(cx.homology),
        betti=[h0, h1],
        inequalities={"h0<=c0": h0 <= crit.c0, "h1<=c1": h1 <= crit.c1, "tight": (h0, h1) == (crit.c0, crit.c1)},
    )

    if witten:
        target = flatten(g, f) if flatten_first else f
        even, odd = deformed_laplacians(g, target)
        lim = limit_laplacians(g, target)
        w: dict = {
            "flattened": flatten_first,
            "deformed_even_laplacian": even.to_json(),
            "deformed_odd_laplacian": odd.to_json(),
            "divergences": [
                {"operator": d.operator, "row": str(d.row), "col": str(d.col), "entry": d.entry.to_json()}
                for d in lim.divergences
            ],
        }
        if flatten_first:
            w["flat_function"] = morse_function_json(g, target)
        if lim.exists:
            kern = limit_kernel_dims(g, target)
            w["limit_even"] = rational_json(lim.even)
            w["limit_odd"] = rational_json(lim.odd)
            w["limit_kernel_dims"] = list(kern.dims)
        else:
            w["limit_even"] = w["limit_odd"] = w["limit_kernel_dims"] = None
        out["witten"] = w

    if s_grid:
        flow = spectral_flow(g, flatten(g, f) if flatten_first else f, s_grid)
        out["spectral_flow"] = {
            "rows": [{"s": fnum(r.s), "even": float_json(r.even), "odd": float_json(r.odd)} for r in flow.rows],
            "even_gap": [fnum(x) for x in flow.even_gap],
            "odd_gap": [fnum(x) for x in flow.odd_gap],
            "separated": flow.separated(),
        }

    if cutoff is not None:
        c = cutoff_complex(g, cutoff)
        block = {"a": fnum(cutoff), "dims": list(c.dims), "cohomology": list(cutoff_cohomology(c))}
        if s_grid:
            block["deformed"] = [
                {"s": fnum(s), "cohomology": list(deformed_cutoff_cohomology(g, f, s, cutoff))} for s in s_grid
            ]
        out["cutoff"] = block
    return out


def tree_report(g: Graph, root: int) -> dict:
    tree = spanning_tree(g, root)
    h = height_function(g, tree)
    crit = critical_cells(g, h)
    cx = morse_differential(g, h)
    h0, h1 = betti_numbers(g)
    return _envelope(
        "tree",
        graph=graph_summary(g),
        root=g.label(root),
        tree_edges=sorted(tree.edges),
        depth={str(g.label(v)): d for v, d in sorted(tree.depth.items())},
        function=morse_function_json(g, h),
        morse_file=h.to_text(g),
        critical={"vertices": _cells(g, "vertex", crit.vertices), "edges": list(crit.edges), "c0": crit.c0, "c1": crit.c1},
        boundary_zero=tree_boundary_zero_check(g, h),
        morse_differential=rational_json(cx.differential),
        morse_homology=list(cx.homology),
        betti=[h0, h1],
        inequalities={"h0<=c0": h0 <= crit.c0, "h1<=c1": h1 <= crit.c1, "tight": (h0, h1) == (crit.c0, crit.c1)},
    )


def walks_report(g: Graph, k: int, odd: bool = False, oracle: bool = False) -> dict:
    m = odd_walk_matrix(g, k) if odd else generalized_walk_matrix(g, k)
    out = _envelope("walks", graph=graph_summary(g), k=k, odd=odd, matrix=[[int(x) for x in row] for row in m.tolist()])
    if oracle:
        n = g.n_edges if odd else g.n_vertices
        enum = odd_walk_endpoints if odd else generalized_walk_endpoints
        brute = [enum(g, k, i) for i in range(n)]
        out["oracle"] = brute
        out["verdict"] = "MATCH" if brute == out["matrix"] else "MISMATCH"
    return out
