"""Random instances and the invariant suite run by ``graphmorse fuzz``."""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import InvariantViolation
from .graph import Graph, connected_components, cycle_rank, incidence_matrix
from .linalg import RationalMatrix, rational_kernel, verify_lemma_kernel, verify_lemma_spectrum
from .morse import (
    MorseFunction,
    critical_cells,
    curve_count_differential,
    flow_boundary_map,
    morse_differential,
    random_morse,
    validate_morse,
    witness_sets,
)
from .spectral import (
    betti_numbers,
    cutoff_cohomology,
    cutoff_complex,
    generalized_walk_endpoints,
    generalized_walk_matrix,
    hodge_even_laplacian,
    odd_laplacian,
    partition_function,
)
from .witten import deformed_kernel_dims, limit_kernel_dims

FAULTS = ("laplacian",)


def random_graph(rng: random.Random, max_vertices: int = 8, max_edges: int | None = None, simple: bool = True) -> Graph:
    n = rng.randint(1, max_vertices)
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    cap = len(pairs) if simple else 2 * len(pairs)
    if max_edges is not None:
        cap = min(cap, max_edges)
    m = rng.randint(0, cap) if cap else 0
    if simple:
        chosen = rng.sample(pairs, m)
    else:
        chosen = [rng.choice(pairs) for _ in range(m)] if pairs else []
    edges = [(a, b) if rng.random() < 0.5 else (b, a) for a, b in chosen]
    return Graph(n, edges)


def _check_laplacian(g: Graph, f: MorseFunction, fault: str | None) -> None:
    lap = hodge_even_laplacian(g)
    if fault == "laplacian" and lap.rows:
        rows = lap.tolist()
        rows[0][0] += 1
        lap = RationalMatrix(rows, shape=lap.shape)
    ones = [1] * g.n_vertices
    if any(sum(row[j] * ones[j] for j in range(g.n_vertices)) for row in lap.tolist()):
        raise InvariantViolation("Delta_+ does not annihilate the constant vector")
    if rational_kernel(lap).dimension != len(connected_components(g)):
        raise InvariantViolation("dim ker Delta_+ differs from the component count")


def _check_hodge(g, f, fault):
    betti_numbers(g)
    if rational_kernel(odd_laplacian(g)).dimension != cycle_rank(g):
        raise InvariantViolation("dim ker Delta_- differs from the cycle rank")


def _check_lemmas(g, f, fault):
    inc = incidence_matrix(g)
    if not verify_lemma_kernel(inc.T) or not verify_lemma_kernel(inc):
        raise InvariantViolation("ker A != ker A^T A")
    if not verify_lemma_spectrum(inc).agree(1e-8):
        raise InvariantViolation("nonzero spectra of Delta_+ and Delta_- differ")


def _check_cutoff(g, f, fault):
    betti = betti_numbers(g)
    for a in (0.0, 0.5, 1.0, 2.5, 100.0):
        got = cutoff_cohomology(cutoff_complex(g, a))
        if got != betti:
            raise InvariantViolation(f"cutoff cohomology at a={a} is {got}, Betti numbers are {betti}")


def _check_heat(g, f, fault):
    if g.n_vertices == 0:
        return
    z1, z2, z3 = partition_function(g, 0.3), partition_function(g, 0.7), partition_function(g, 1.0)
    if not np.allclose(z1 @ z2, z3, atol=1e-9):
        raise InvariantViolation("Z(t1) Z(t2) != Z(t1 + t2)")
    if not np.allclose(z3.sum(axis=1), 1.0, atol=1e-9):
        raise InvariantViolation("rows of Z(t) do not sum to 1")


def _check_walks(g, f, fault):
    if g.n_vertices > 6:
        return
    for k in range(4):
        walks = generalized_walk_matrix(g, k)
        for i in g.vertices:
            if [int(x) for x in walks.row(i)] != generalized_walk_endpoints(g, k, i):
                raise InvariantViolation(f"walk count mismatch at k={k} from vertex {i}")


def _check_morse(g, f, fault):
    report = validate_morse(g, f)
    if not report.valid:
        raise InvariantViolation(f"generated function is not Morse: {report.violations}")
    for cell in g.cells():
        up, down = witness_sets(g, f, cell)
        if up and down:
            raise InvariantViolation(f"exclusivity fails at {cell}")
    crit = critical_cells(g, f)
    h0, h1 = betti_numbers(g)
    if not (h0 <= crit.c0 and h1 <= crit.c1):
        raise InvariantViolation("Morse inequalities fail")
    if crit.c0 - crit.c1 != g.n_vertices - g.n_edges:
        raise InvariantViolation("c0 - c1 != |V| - |E|")
    if curve_count_differential(g, f) != flow_boundary_map(g, f):
        raise InvariantViolation("curve-count differential differs from the flow boundary map")
    if morse_differential(g, f).homology != (h0, h1):
        raise InvariantViolation("Morse homology differs from the Betti numbers")
    if limit_kernel_dims(g, f).dims != (crit.c0, crit.c1):
        raise InvariantViolation("limit kernel dims differ from critical counts")


def _check_deformed(g, f, fault):
    betti = betti_numbers(g)
    for x in (Fraction(1, 2), Fraction(1, 3)):
        if deformed_kernel_dims(g, f, x) != betti:
            raise InvariantViolation(f"deformed kernel dims at exp(-s)={x} differ from Betti numbers")


CHECKS: dict[str, Callable] = {
    "laplacian": _check_laplacian,
    "hodge": _check_hodge,
    "linalg_lemmas": _check_lemmas,
    "energy_cutoff": _check_cutoff,
    "heat_semigroup": _check_heat,
    "walk_oracle": _check_walks,
    "morse": _check_morse,
    "deformed_invariance": _check_deformed,
}


def run_checks(g: Graph, f: MorseFunction, fault: str | None = None) -> list[tuple[str, str]]:
    failures = []
    for name, check in CHECKS.items():
        try:
            check(g, f, fault)
        except InvariantViolation as exc:
            failures.append((name, str(exc)))
    return failures


def minimize(g: Graph, seed: int, fault: str | None, check: str) -> tuple[Graph, MorseFunction]:
    """Greedily drop edges while ``check`` keeps failing."""
    f = random_morse(g, seed)
    changed = True
    while changed:
        changed = False
        for l in range(g.n_edges):
            smaller = Graph(g.n_vertices, g.edges[:l] + g.edges[l + 1 :])
            fs = random_morse(smaller, seed)
            try:
                CHECKS[check](smaller, fs, fault)
            except InvariantViolation:
                g, f, changed = smaller, fs, True
                break
    return g, f


@dataclass
class FuzzResult:
    instances: int = 0
    failures: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def fuzz(
    n_graphs: int,
    seed: int = 0,
    max_vertices: int = 8,
    max_edges: int | None = 15,
    fault: str | None = None,
    out_dir: str | None = None,
) -> FuzzResult:
    rng = random.Random(seed)
    result = FuzzResult()
    for i in range(n_graphs):
        g = random_graph(rng, max_vertices, max_edges)
        fseed = rng.randrange(2**32)
        f = random_morse(g, fseed)
        result.instances += 1
        for check, message in run_checks(g, f, fault):
            small_g, small_f = minimize(g, fseed, fault, check)
            entry = {"instance": i, "check": check, "message": message, "graph_edges": small_g.n_edges}
            if out_dir is not None:
                os.makedirs(out_dir, exist_ok=True)
                stem = os.path.join(out_dir, f"violation_{i}_{check}")
                with open(stem + ".graph", "w", encoding="utf-8") as fh:
                    fh.write(small_g.to_text())
                with open(stem + ".morse", "w", encoding="utf-8") as fh:
                    fh.write(small_f.to_text(small_g))
                entry["files"] = [stem + ".graph", stem + ".morse"]
            result.failures.append(entry)
    return result
