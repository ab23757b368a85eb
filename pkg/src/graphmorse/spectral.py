"""Graph Laplacians, Hodge-theoretic Betti numbers, heat evolution and walk counts.

Convention: the incidence matrix ``I`` is |V| x |E|, the coboundary from
vertex functions to edge functions is ``I^T``, so ``ker Delta_+ = ker I^T``
counts components and ``ker Delta_- = ker I`` counts independent cycles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError, InvariantViolation
from .graph import Graph, adjacency_matrix, connected_components, cycle_rank, incidence_matrix, valence_matrix
from .linalg import DEFAULT_TOL, RationalMatrix, numeric_symmetric_spectrum, rational_kernel, symmetric_spectrum, zero_threshold


def even_laplacian(g: Graph) -> RationalMatrix:
    """``val - A``. On simple graphs this equals ``I I^T`` (checked)."""
    lap = valence_matrix(g) - adjacency_matrix(g)
    if g.is_simple() and lap != hodge_even_laplacian(g):
        raise InvariantViolation("val - A differs from I I^T on a simple graph")
    return lap


def hodge_even_laplacian(g: Graph) -> RationalMatrix:
    """``I I^T``; agrees with :func:`even_laplacian` except on multigraphs."""
    inc = incidence_matrix(g)
    return inc @ inc.T


def laplacian_forms_agree(g: Graph) -> bool:
    return valence_matrix(g) - adjacency_matrix(g) == hodge_even_laplacian(g)


def odd_laplacian(g: Graph) -> RationalMatrix:
    inc = incidence_matrix(g)
    return inc.T @ inc


def betti_numbers(g: Graph) -> tuple[int, int]:
    """``(dim ker Delta_+, dim ker Delta_-)`` computed exactly.

    Raises :class:`InvariantViolation` if they disagree with the component
    count and the cycle rank.
    """
    h0 = rational_kernel(hodge_even_laplacian(g)).dimension
    h1 = rational_kernel(odd_laplacian(g)).dimension
    if h0 != len(connected_components(g)):
        raise InvariantViolation(f"dim ker Delta_+ = {h0} but the graph has {len(connected_components(g))} components")
    if h1 != cycle_rank(g):
        raise InvariantViolation(f"dim ker Delta_- = {h1} but the cycle rank is {cycle_rank(g)}")
    return h0, h1


def _heat_operator(g: Graph, t: float) -> np.ndarray:
    spec = symmetric_spectrum(hodge_even_laplacian(g))
    q, w = spec.eigenvectors, spec.eigenvalues
    return (q * np.exp(-w * t)) @ q.T


def partition_function(g: Graph, t: float) -> np.ndarray:
    """``Z(t) = exp(-t Delta_+)`` via the symmetric eigen-decomposition."""
    if g.n_vertices == 0:
        return np.zeros((0, 0))
    return _heat_operator(g, t)


def evolve(state, t: float, g: Graph) -> np.ndarray:
    """Solve the graph heat/Schroedinger equation ``dPsi/dt = -Delta_+ Psi`` from ``state``.

    ``t = inf`` projects onto the harmonic (locally constant) states.
    """
    if t < 0:
        raise ContractError("evolution time must be non-negative")
    psi = np.asarray(state)
    if psi.shape != (g.n_vertices,):
        raise ContractError(f"even state must have length {g.n_vertices}")
    if np.isinf(t):
        spec = symmetric_spectrum(hodge_even_laplacian(g))
        q = spec.eigenvectors[:, np.abs(spec.eigenvalues) <= spec.threshold]
        return q @ (q.T @ psi)
    return partition_function(g, t) @ psi


def generalized_walk_matrix(g: Graph, k: int) -> RationalMatrix:
    """``(-Delta_+)^k`` with ``Delta_+ = I I^T``; entries are signed walk counts."""
    if k < 0:
        raise ContractError("walk length must be non-negative")
    return (-hodge_even_laplacian(g)) ** k


def generalized_walk_count(g: Graph, k: int, i: int, j: int) -> int:
    return int(generalized_walk_matrix(g, k)[i, j])


def odd_walk_matrix(g: Graph, k: int) -> RationalMatrix:
    if k < 0:
        raise ContractError("walk length must be non-negative")
    return odd_laplacian(g) ** k


def odd_walk_count(g: Graph, k: int, a: int, b: int) -> int:
    return int(odd_walk_matrix(g, k)[a, b])


def generalized_walk_endpoints(g: Graph, k: int, i: int) -> list[int]:
    """Signed counts of generalized walks of length ``k`` from ``i``, by explicit search, indexed by end vertex.

    Each step picks an edge incident to the current vertex and then one of its
    endpoints; staying put contributes a factor -1.
    """
    incident = [g.incident_edges(v) for v in g.vertices]
    totals = [0] * g.n_vertices

    def walk(v, steps, sign):
        if steps == 0:
            totals[v] += sign
            return
        for e in incident[v]:
            walk(v, steps - 1, -sign)
            walk(g.other_endpoint(e, v), steps - 1, sign)

    walk(i, k, 1)
    return totals


def enumerate_generalized_walks(g: Graph, k: int, i: int, j: int) -> int:
    return generalized_walk_endpoints(g, k, i)[j]


def odd_walk_endpoints(g: Graph, k: int, a: int) -> list[int]:
    """Signed counts of edge sequences ``a = e_0, ..., e_k``, consecutive edges meeting at a vertex.

    A meeting at vertex ``v`` carries ``I(v, e_j) I(v, e_{j+1})``: +1 when both
    edges point into or both out of ``v``, -1 when orientations are opposite.
    """
    inc = incidence_matrix(g)
    incident = [g.incident_edges(v) for v in g.vertices]
    totals = [0] * g.n_edges

    def walk(e, steps, sign):
        if steps == 0:
            totals[e] += sign
            return
        for v in g.edges[e]:
            for e2 in incident[v]:
                walk(e2, steps - 1, sign * int(inc[v, e] * inc[v, e2]))

    walk(a, k, 1)
    return totals


def enumerate_odd_walks(g: Graph, k: int, a: int, b: int) -> int:
    return odd_walk_endpoints(g, k, a)[b]


@dataclass(frozen=True)
class CutoffComplex:
    """Low-energy subcomplex spanned by eigenvectors with eigenvalue <= ``threshold``."""

    threshold: float
    even_eigenvalues: np.ndarray
    odd_eigenvalues: np.ndarray
    even_basis: np.ndarray  # |V| x dim C^0_a
    odd_basis: np.ndarray  # |E| x dim C^1_a
    coboundary: np.ndarray  # dim C^1_a x dim C^0_a
    leakage: float  # how far the coboundary escapes the odd cutoff space
    rank_threshold: float

    @property
    def dims(self) -> tuple[int, int]:
        return self.even_basis.shape[1], self.odd_basis.shape[1]


def cutoff_from_boundary(boundary: np.ndarray, a: float, tol: float = DEFAULT_TOL) -> CutoffComplex:
    """Energy cut-off of the two-term complex whose coboundary is ``boundary.T``.

    ``boundary`` is |V| x |E| (the incidence matrix, or a deformation of it).
    """
    if a < 0:
        raise ContractError("energy cut-off must be non-negative")
    nv, ne = boundary.shape
    even = numeric_symmetric_spectrum(boundary @ boundary.T, tol)
    odd = numeric_symmetric_spectrum(boundary.T @ boundary, tol)
    q0 = even.eigenvectors[:, even.eigenvalues <= a + even.threshold] if nv else np.zeros((0, 0))
    q1 = odd.eigenvectors[:, odd.eigenvalues <= a + odd.threshold] if ne else np.zeros((0, 0))
    cob = boundary.T @ q0 if nv and ne else np.zeros((ne, q0.shape[1] if nv else 0))
    restricted = q1.T @ cob if ne else np.zeros((0, q0.shape[1] if nv else 0))
    leak = float(np.abs(cob - q1 @ restricted).max()) if cob.size else 0.0
    return CutoffComplex(
        threshold=a,
        even_eigenvalues=even.eigenvalues,
        odd_eigenvalues=odd.eigenvalues,
        even_basis=q0.reshape(nv, -1) if nv else np.zeros((0, 0)),
        odd_basis=q1.reshape(ne, -1) if ne else np.zeros((0, 0)),
        coboundary=restricted,
        leakage=leak,
        rank_threshold=zero_threshold(boundary, tol) if boundary.size else 0.0,
    )


def cutoff_complex(g: Graph, a: float, tol: float = DEFAULT_TOL) -> CutoffComplex:
    return cutoff_from_boundary(incidence_matrix(g).to_numpy(), a, tol)


def cutoff_cohomology(c: CutoffComplex) -> tuple[int, int]:
    """``(dim ker, dim coker)`` of the restricted coboundary."""
    d0, d1 = c.dims
    m = c.coboundary
    if m.size == 0:
        return d0, d1
    sv = np.linalg.svd(m, compute_uv=False)
    rank = int(np.sum(sv > np.sqrt(c.rank_threshold)))
    return d0 - rank, d1 - rank
