"""Lazy random-walk matrix, normalized walk-power columns, smooth functions.

The walk matrix P = (W - D)/d_max + I is symmetric, doubly stochastic, and
has spectrum inside [-1, 1]. Walk powers are built by repeated sparse
multiplication; dense eigendecompositions appear only in the synthesis and
diagnostic paths, never in column construction.
"""

import csv
import io
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ._util import atomic_write_text
from .graphs import Graph


@dataclass
class TransitionMatrix:
    """Lazy walk matrix with its max-degree normalizer."""

    n: int
    matrix: sp.csr_matrix
    d_max: float


def lazy_walk_matrix(graph: Graph) -> TransitionMatrix:
    """Build P = (W - D)/d_max + I for a graph with at least one edge."""
    if graph.m == 0:
        raise ValueError("graph has no edges, d_max would be zero")
    adjacency = graph.adjacency()
    degrees = graph.degrees()
    d_max = float(degrees.max())
    matrix = adjacency / d_max + sp.diags(1.0 - degrees / d_max)
    matrix = sp.csr_matrix(matrix)
    row_sums = np.asarray(matrix.sum(axis=1)).ravel()
    if np.max(np.abs(row_sums - 1.0)) > 1e-12:
        raise ValueError("walk matrix rows failed to normalize")
    return TransitionMatrix(graph.n, matrix, d_max)


@dataclass
class NormalizedColumns:
    """Unit-normalized columns of a walk power, plus the uniform target.

    matrix holds the raw power P^ell (symmetric, sparse); column i of the
    normalized family is matrix[:, i] / column_norms[i]. target is the unit
    vector 1/sqrt(n) that every column is compared against.
    """

    ell: int
    matrix: sp.csc_matrix
    column_norms: np.ndarray
    target: np.ndarray

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def column(self, i: int) -> np.ndarray:
        """Dense unit-norm column i."""
        col = np.asarray(self.matrix[:, i].todense()).ravel()
        return col / self.column_norms[i]

    def alignments(self, x: np.ndarray) -> np.ndarray:
        """Inner product of every normalized column with x, one matvec."""
        return (self.matrix.T @ x) / self.column_norms

    def combine(self, coefficients: np.ndarray) -> np.ndarray:
        """Linear combination sum_i coefficients[i] * (column i / norm i)."""
        return self.matrix @ (coefficients / self.column_norms)


def normalized_columns(walk: TransitionMatrix, ell: int, dense_cutoff: int = 2048) -> NormalizedColumns:
    """Normalized columns of P^ell.

    Small graphs go through a dense BLAS matrix power (repeated squaring, so
    large ell stays cheap); above dense_cutoff vertices the power is built by
    sequential sparse multiplication to avoid densifying huge graphs.
    """
    if ell < 1:
        raise ValueError("ell must be a positive integer")
    if walk.n <= dense_cutoff:
        power = np.linalg.matrix_power(walk.matrix.toarray(), ell)
    else:
        power = walk.matrix
        for _ in range(ell - 1):
            power = power @ walk.matrix
    power = sp.csc_matrix(power)
    norms = np.sqrt(np.asarray(power.multiply(power).sum(axis=0)).ravel())
    if np.any(norms <= 0):
        raise ValueError("walk power has a zero column")
    target = np.full(walk.n, 1.0 / np.sqrt(walk.n))
    return NormalizedColumns(ell, power, norms, target)


def eigendecomposition(walk: TransitionMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Full orthonormal eigenbasis of P, eigenvalues descending.

    Dense; intended for synthesis, diagnostics, and modest n.
    """
    values, vectors = np.linalg.eigh(walk.matrix.toarray())
    order = np.argsort(-values, kind="stable")
    return values[order], vectors[:, order]


def top_eigenvectors(walk: TransitionMatrix, k: int, dense_cutoff: int = 600) -> np.ndarray:
    """Eigenvectors of the k largest eigenvalues, as columns, descending.

    Small problems go through the dense path; larger ones use Lanczos with a
    fixed seeded start vector so repeated calls are reproducible.
    """
    if not (1 <= k <= walk.n):
        raise ValueError("k must be in 1..n")
    if walk.n <= dense_cutoff or k > walk.n - 2:
        _, vectors = eigendecomposition(walk)
        return vectors[:, :k]
    v0 = np.random.default_rng(0).standard_normal(walk.n)
    values, vectors = spla.eigsh(walk.matrix, k=k, which="LA", v0=v0)
    order = np.argsort(-values, kind="stable")
    return vectors[:, order]


@dataclass
class GraphFunction:
    """Vertex function, optionally with its spectral coefficients."""

    values: np.ndarray
    coefficients: np.ndarray | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64).reshape(-1)
        if self.coefficients is not None:
            self.coefficients = np.asarray(self.coefficients, dtype=np.float64).reshape(-1)

    def mean(self) -> float:
        return float(self.values.mean())


def synthesize_smooth_function(
    walk: TransitionMatrix,
    eigenvalue_threshold: float,
    coefficients: np.ndarray | None = None,
    seed: int | None = None,
) -> GraphFunction:
    """Build a function spanned by eigenvectors with |eigenvalue| above threshold.

    Coefficients may be supplied (one per retained eigenvector, in descending
    eigenvalue order) or drawn standard normal from the seed.
    """
    if not (0.0 < eigenvalue_threshold < 1.0):
        raise ValueError("eigenvalue_threshold must be in (0, 1)")
    values, vectors = eigendecomposition(walk)
    keep = np.abs(values) > eigenvalue_threshold
    count = int(keep.sum())
    if count == 0:
        raise ValueError("no eigenvalues above the threshold")
    if coefficients is None:
        if seed is None:
            raise ValueError("provide coefficients or a seed")
        coefficients = np.random.default_rng(seed).standard_normal(count)
    coefficients = np.asarray(coefficients, dtype=np.float64).reshape(-1)
    if len(coefficients) != count:
        raise ValueError(f"expected {count} coefficients, got {len(coefficients)}")
    return GraphFunction(vectors[:, keep] @ coefficients, coefficients)


def smoothness_norm(function: GraphFunction) -> float:
    """Euclidean norm of the spectral coefficient vector."""
    if function.coefficients is None:
        raise ValueError("function has no spectral coefficients")
    return float(np.linalg.norm(function.coefficients))


def dump_diagnostics_csv(walk: TransitionMatrix, columns: NormalizedColumns, path_prefix: str) -> None:
    """Write the walk matrix and column norms as CSV files (diagnostics)."""
    dense = walk.matrix.toarray()
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in dense:
        writer.writerow(["%.17g" % x for x in row])
    atomic_write_text(path_prefix + ".walk.csv", buf.getvalue())
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["vertex", "column_norm"])
    for i, norm in enumerate(columns.column_norms):
        writer.writerow([str(i), "%.17g" % norm])
    atomic_write_text(path_prefix + ".column_norms.csv", buf.getvalue())
