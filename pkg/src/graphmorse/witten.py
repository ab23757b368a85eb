"""Witten deformation of the graph complex by a discrete Morse function.

Entries of the deformed operators are exponential polynomials
``sum_q c_q exp(q s)`` with rational ``q`` and ``c_q``; they are kept exact so
that the ``s -> oo`` limit and finite-``s`` kernel dimensions need no
tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ContractError, InvariantViolation
from .graph import Cell, Graph, incidence_matrix
from .linalg import DEFAULT_TOL, RationalMatrix, numeric_symmetric_spectrum, rational_kernel
from .morse import MorseFunction, critical_cells, flatten, require_morse
from .spectral import betti_numbers, cutoff_cohomology, cutoff_from_boundary


class ExpPoly:
    """Finite sum ``sum_q c_q * exp(q*s)`` in canonical form (no zero coefficients)."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | Iterable[tuple] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Fraction, Fraction] = {}
        for q, c in items:
            q, c = Fraction(q), Fraction(c)
            acc[q] = acc.get(q, Fraction(0)) + c
        self._terms = tuple(sorted((q, c) for q, c in acc.items() if c != 0))

    @classmethod
    def const(cls, c) -> ExpPoly:
        return cls({0: c})

    @classmethod
    def exp(cls, q, c=1) -> ExpPoly:
        return cls({q: c})

    @property
    def terms(self) -> tuple[tuple[Fraction, Fraction], ...]:
        return self._terms

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ExpPoly.const(other)
        if not isinstance(other, ExpPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(self._terms)

    def __add__(self, other: ExpPoly) -> ExpPoly:
        return ExpPoly(self._terms + other._terms)

    def __neg__(self) -> ExpPoly:
        return ExpPoly((q, -c) for q, c in self._terms)

    def __sub__(self, other: ExpPoly) -> ExpPoly:
        return self + (-other)

    def __mul__(self, other: ExpPoly) -> ExpPoly:
        return ExpPoly((q1 + q2, c1 * c2) for q1, c1 in self._terms for q2, c2 in other._terms)

    def max_exponent(self) -> Fraction | None:
        return self._terms[-1][0] if self._terms else None

    def __call__(self, s: float) -> float:
        return float(sum(float(c) * np.exp(float(q) * s) for q, c in self._terms))

    def limit(self) -> Fraction:
        """Value as ``s -> oo``; raises if a positive exponent survives."""
        if self._terms and self._terms[-1][0] > 0:
            raise ArithmeticError(f"{self} diverges as s -> oo")
        return dict(self._terms).get(Fraction(0), Fraction(0))

    def substitute(self, x: Fraction, step: Fraction = Fraction(1)) -> Fraction:
        """Exact value with ``exp(-step*s) := x``; every exponent must be a multiple of ``step``."""
        total = Fraction(0)
        for q, c in self._terms:
            k = q / step
            if k.denominator != 1:
                raise ValueError(f"exponent {q} is not a multiple of {step}")
            total += c * Fraction(x) ** int(-k)
        return total

    def __repr__(self):
        return f"ExpPoly({str(self)!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for q, c in reversed(self._terms):
            if q == 0:
                parts.append(str(c))
            else:
                mono = f"exp({q}s)" if q != 1 else "exp(s)"
                parts.append(mono if c == 1 else f"-{mono}" if c == -1 else f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> list[dict[str, str]]:
        return [{"exponent": str(q), "coeff": str(c)} for q, c in self._terms]

    @classmethod
    def from_json(cls, data) -> ExpPoly:
        return cls((Fraction(t["exponent"]), Fraction(t["coeff"])) for t in data)


@dataclass(frozen=True)
class DeformedOperator:
    entries: tuple[tuple[ExpPoly, ...], ...]
    shape: tuple[int, int]
    role: str  # "boundary", "coboundary", "even_laplacian", "odd_laplacian"

    def __getitem__(self, ij) -> ExpPoly:
        i, j = ij
        return self.entries[i][j]

    @property
    def T(self) -> DeformedOperator:
        n, m = self.shape
        return DeformedOperator(tuple(tuple(self.entries[i][j] for i in range(n)) for j in range(m)), (m, n), self.role)

    def matmul(self, other: DeformedOperator, role: str) -> DeformedOperator:
        n, k = self.shape
        k2, m = other.shape
        if k != k2:
            raise ValueError("shape mismatch")
        zero = ExpPoly()
        out = []
        for i in range(n):
            row = []
            for j in range(m):
                acc = zero
                for l in range(k):
                    a, b = self.entries[i][l], other.entries[l][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(tuple(row))
        return DeformedOperator(tuple(out), (n, m), role)

    def is_symmetric(self) -> bool:
        n, m = self.shape
        return n == m and all(self.entries[i][j] == self.entries[j][i] for i in range(n) for j in range(i))

    def evaluate(self, s: float) -> np.ndarray:
        return np.array([[e(s) for e in row] for row in self.entries], dtype=float).reshape(self.shape)

    def exponent_step(self) -> Fraction:
        """Largest ``step`` such that every exponent is an integer multiple of it."""
        dens = [q.denominator for row in self.entries for e in row for q, _ in e.terms]
        return Fraction(1, lcm(*dens)) if dens else Fraction(1)

    def substitute(self, x, step: Fraction | None = None) -> RationalMatrix:
        step = self.exponent_step() if step is None else step
        return RationalMatrix([[e.substitute(Fraction(x), step) for e in row] for row in self.entries], shape=self.shape)

    def max_exponent(self) -> Fraction | None:
        qs = [e.max_exponent() for row in self.entries for e in row if e]
        return max(qs) if qs else None

    def to_json(self):
        return [[e.to_json() for e in row] for row in self.entries]


def deform_boundary(g: Graph, f: MorseFunction) -> DeformedOperator:
    """``d_s = exp(fs) I exp(-fs)``: entry ``(v, e)`` is ``I(v, e) exp((f(v) - f(e)) s)``."""
    require_morse(g, f)
    inc = incidence_matrix(g)
    rows = []
    for v in g.vertices:
        row = []
        for e in range(g.n_edges):
            c = inc[v, e]
            row.append(ExpPoly.exp(f.vertex_values[v] - f.edge_values[e], c) if c else ExpPoly())
        rows.append(tuple(row))
    return DeformedOperator(tuple(rows), (g.n_vertices, g.n_edges), "boundary")


def deform_coboundary(g: Graph, f: MorseFunction) -> DeformedOperator:
    """``d_s* = exp(-fs) I^T exp(fs)``, built directly (it is the transpose of ``d_s``)."""
    require_morse(g, f)
    inc = incidence_matrix(g)
    rows = []
    for e in range(g.n_edges):
        row = []
        for v in g.vertices:
            c = inc[v, e]
            row.append(ExpPoly.exp(-f.edge_values[e] + f.vertex_values[v], c) if c else ExpPoly())
        rows.append(tuple(row))
    cob = DeformedOperator(tuple(rows), (g.n_edges, g.n_vertices), "coboundary")
    return cob


def deformed_laplacians(g: Graph, f: MorseFunction) -> tuple[DeformedOperator, DeformedOperator]:
    """``(d_s d_s*, d_s* d_s)`` acting on vertices and edges respectively."""
    d = deform_boundary(g, f)
    dstar = deform_coboundary(g, f)
    if dstar.entries != d.T.entries:
        raise InvariantViolation("deformed coboundary is not the transpose of the deformed boundary")
    even = d.matmul(dstar, "even_laplacian")
    odd = dstar.matmul(d, "odd_laplacian")
    if not (even.is_symmetric() and odd.is_symmetric()):
        raise InvariantViolation("deformed Laplacians are not symmetric")
    return even, odd


@dataclass(frozen=True)
class Divergence:
    operator: str
    row: Cell
    col: Cell
    entry: ExpPoly


@dataclass(frozen=True)
class LimitLaplacians:
    even: RationalMatrix | None
    odd: RationalMatrix | None
    divergences: tuple[Divergence, ...]
    flattened: bool = False

    @property
    def exists(self) -> bool:
        return not self.divergences


def _limit(op: DeformedOperator, kind: str, name: str, divergences: list) -> RationalMatrix:
    n, _ = op.shape
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            e = op[i, j]
            if e and e.max_exponent() > 0:
                divergences.append(Divergence(name, Cell(kind, i), Cell(kind, j), e))
                row.append(Fraction(0))
            else:
                row.append(e.limit())
        rows.append(row)
    return RationalMatrix(rows, shape=(n, n))


def limit_laplacians(g: Graph, f: MorseFunction, flatten_first: bool = False) -> LimitLaplacians:
    """Entrywise ``s -> oo`` limits of the deformed Laplacians.

    Entries with a surviving positive exponent are reported as divergences and
    both limit matrices are then withheld (``None``).
    """
    if flatten_first:
        f = flatten(g, f)
    even, odd = deformed_laplacians(g, f)
    div: list[Divergence] = []
    lim_even = _limit(even, "vertex", "even", div)
    lim_odd = _limit(odd, "edge", "odd", div)
    if div:
        return LimitLaplacians(None, None, tuple(div), flatten_first)
    return LimitLaplacians(lim_even, lim_odd, (), flatten_first)


def zero_columns(m: RationalMatrix) -> list[int]:
    return [j for j in range(m.cols) if not any(m.column(j))]


@dataclass(frozen=True)
class LimitKernels:
    dims: tuple[int, int]
    even_basis: tuple
    odd_basis: tuple


def limit_kernel_dims(g: Graph, f: MorseFunction, flatten_first: bool = False) -> LimitKernels:
    """Exact kernel dimensions of the limit Laplacians, checked against ``(c0, c1)`` and the Morse inequalities."""
    lim = limit_laplacians(g, f, flatten_first)
    if not lim.exists:
        raise ContractError(
            "s -> oo limit diverges at " + ", ".join(f"{d.operator}({d.row},{d.col})" for d in lim.divergences)
        )
    k0, k1 = rational_kernel(lim.even), rational_kernel(lim.odd)
    crit = critical_cells(g, f)
    if (k0.dimension, k1.dimension) != (crit.c0, crit.c1):
        raise InvariantViolation(
            f"limit kernel dims {(k0.dimension, k1.dimension)} differ from critical counts {(crit.c0, crit.c1)}"
        )
    if len(zero_columns(lim.even)) != crit.c0 or len(zero_columns(lim.odd)) != crit.c1:
        raise InvariantViolation("zero-column count of a limit Laplacian differs from the critical count")
    h0, h1 = betti_numbers(g)
    if not (h0 <= crit.c0 and h1 <= crit.c1):
        raise InvariantViolation("Morse inequalities fail")
    return LimitKernels((k0.dimension, k1.dimension), k0.basis, k1.basis)


def deformed_kernel_dims(g: Graph, f: MorseFunction, x) -> tuple[int, int]:
    """Exact ``(dim ker Delta_{+,s}, dim ker Delta_{-,s})`` at ``exp(-step*s) = x``.

    ``step`` is the common exponent unit of the operators, so when every Morse
    value difference is an integer ``x`` is literally ``exp(-s)``.
    """
    x = Fraction(x)
    if not 0 < x < 1:
        raise ContractError("substituted value exp(-s) must lie in (0, 1)")
    even, odd = deformed_laplacians(g, f)
    step = Fraction(1, lcm(even.exponent_step().denominator, odd.exponent_step().denominator))
    return (
        rational_kernel(even.substitute(x, step)).dimension,
        rational_kernel(odd.substitute(x, step)).dimension,
    )


def deformed_boundary_at(g: Graph, f: MorseFunction, s: float) -> np.ndarray:
    return deform_boundary(g, f).evaluate(s)


def deformed_cutoff_cohomology(g: Graph, f: MorseFunction, s: float, a: float, tol: float = DEFAULT_TOL) -> tuple[int, int]:
    if a < 0:
        raise ContractError("energy cut-off must be non-negative")
    return cutoff_cohomology(cutoff_from_boundary(deformed_boundary_at(g, f, s), a, tol))


@dataclass(frozen=True)
class FlowRow:
    s: float
    even: np.ndarray
    odd: np.ndarray


@dataclass(frozen=True)
class SpectralFlow:
    rows: tuple[FlowRow, ...]
    c0: int
    c1: int
    even_gap: tuple[float, float]  # (largest low eigenvalue, smallest high eigenvalue) at the last s
    odd_gap: tuple[float, float]

    def separated(self) -> bool:
        return self.even_gap[0] < self.even_gap[1] and self.odd_gap[0] < self.odd_gap[1]


def _gap(w: np.ndarray, c: int) -> tuple[float, float]:
    low = float(w[c - 1]) if c > 0 else 0.0
    high = float(w[c]) if c < len(w) else float("inf")
    return low, high


def spectral_flow(g: Graph, f: MorseFunction, s_grid: Sequence[float], tol: float = DEFAULT_TOL) -> SpectralFlow:
    """Spectra of the deformed Laplacians along an ascending grid of ``s``."""
    grid = list(s_grid)
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ContractError("s grid must be ascending")
    crit = critical_cells(g, f)
    even_op, odd_op = deformed_laplacians(g, f)
    rows = []
    for s in grid:
        ev = numeric_symmetric_spectrum(even_op.evaluate(s), tol).eigenvalues
        od = numeric_symmetric_spectrum(odd_op.evaluate(s), tol).eigenvalues
        rows.append(FlowRow(float(s), ev, od))
    if rows:
        even_gap, odd_gap = _gap(rows[-1].even, crit.c0), _gap(rows[-1].odd, crit.c1)
    else:
        even_gap = odd_gap = (0.0, float("inf"))
    return SpectralFlow(tuple(rows), crit.c0, crit.c1, even_gap, odd_gap)
