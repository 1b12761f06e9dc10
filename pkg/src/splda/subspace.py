"""Supervised locality-preserving projection onto the aligned subspace.

The projection pulls same-class samples together regardless of their
domain: the similarity graph connects two samples exactly when their labels
match, and the projection solves the induced generalized eigenproblem.
Embeddings are centered on the mean of all source and target projections
and then L2-normalized.
"""

from dataclasses import dataclass

import numpy as np

from . import linalg
from .preprocess import l2_normalize_columns


@dataclass(frozen=True)
class SimilarityGraph:
    """Label-equality adjacency with its degree vector and Laplacian."""

    adjacency: np.ndarray
    degree: np.ndarray
    laplacian: np.ndarray


@dataclass(frozen=True)
class SlppModel:
    """Learned projection plus the mean used to center embeddings."""

    projection: np.ndarray
    embedding_mean: np.ndarray

    @property
    def n_components(self) -> int:
        return self.projection.shape[1]


def build_graph(labels) -> SimilarityGraph:
    """Dense 0/1 similarity graph: adjacency(i, j) = 1 iff labels match."""
    labels = np.asarray(labels, dtype=int)
    if labels.ndim != 1:
        raise ValueError("labels must be a 1-D sequence")
    try:
        adjacency = (labels[:, None] == labels[None, :]).astype(float)
        degree = adjacency.sum(axis=1)
        laplacian = np.diag(degree) - adjacency
    except MemoryError as exc:
        gib = 3 * 8 * labels.size**2 / 2**30
        raise MemoryError(
            f"dense similarity graph for {labels.size} samples needs about "
            f"{gib:.1f} GiB; reduce the labeled set or add memory"
        ) from exc
    return SimilarityGraph(adjacency=adjacency, degree=degree, laplacian=laplacian)


def slpp_fit(labeled_data, labels, n_components: int, all_data=None) -> SlppModel:
    """Fit the projection on labeled columns (source plus selected targets).

    Solves ``X D X^T p = value (X L X^T + I) p`` for the top eigenvectors,
    where D and L come from the label-equality graph. ``all_data`` supplies
    the full source+target matrix over which the embedding mean is taken;
    it defaults to the labeled columns.
    """
    x = np.asarray(labeled_data, dtype=float)
    labels = np.asarray(labels, dtype=int)
    if x.ndim != 2:
        raise ValueError("labeled_data must be a 2-D matrix")
    d, m = x.shape
    if labels.shape != (m,):
        raise ValueError(f"labels must align with the {m} data columns")
    if not 1 <= n_components <= d:
        raise ValueError(f"n_components must be in 1..{d}, got {n_components}")
    graph = build_graph(labels)
    a = (x * graph.degree) @ x.T
    b = x @ graph.laplacian @ x.T + np.eye(d)
    pairs = linalg.gen_eig(0.5 * (a + a.T), 0.5 * (b + b.T), n_components)
    projection = pairs.vectors
    reference = x if all_data is None else np.asarray(all_data, dtype=float)
    if reference.shape[0] != d:
        raise ValueError(
            f"all_data row count {reference.shape[0]} does not match d={d}"
        )
    embedding_mean = (projection.T @ reference).mean(axis=1)
    return SlppModel(projection=projection, embedding_mean=embedding_mean)


def embed(model: SlppModel, x) -> np.ndarray:
    """Project columns, subtract the embedding mean and L2-normalize."""
    x = np.asarray(x, dtype=float)
    if x.shape[0] != model.projection.shape[0]:
        raise ValueError(
            f"dimension mismatch: model expects d={model.projection.shape[0]}, "
            f"got {x.shape[0]}"
        )
    centered = model.projection.T @ x - model.embedding_mean[:, None]
    return l2_normalize_columns(centered)
