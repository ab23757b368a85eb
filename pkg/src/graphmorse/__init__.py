"""Graph quantum mechanics and discrete Morse theory with exact arithmetic."""

from .errors import ContractError, InvariantViolation
from .graph import (
    Cell,
    Graph,
    adjacency_matrix,
    connected_components,
    cycle_rank,
    incidence_matrix,
    parse_graph,
    read_graph,
    spanning_tree,
    valence_matrix,
)
from .linalg import RationalMatrix, rational_kernel, rational_rank, symmetric_spectrum
from .morse import (
    MorseFunction,
    critical_cells,
    flatten,
    flow_to_critical,
    gradient_curves,
    gradient_field,
    height_function,
    morse_differential,
    parse_morse_function,
    random_morse,
    validate_morse,
)
from .spectral import (
    betti_numbers,
    cutoff_cohomology,
    cutoff_complex,
    even_laplacian,
    evolve,
    generalized_walk_count,
    odd_laplacian,
    odd_walk_count,
    partition_function,
)
from .witten import ExpPoly, deform_boundary, deformed_laplacians, limit_kernel_dims, limit_laplacians

__version__ = "0.1.0"
