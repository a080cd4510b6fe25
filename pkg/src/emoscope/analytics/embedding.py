"""2-D embeddings of distance matrices and the shared reference-fitted projection.

The default embedding is deterministic classical (metric) MDS; exact t-SNE on
the precomputed distances is available as an opt-in mode.  The scatter
projection for solution sets is a PCA fitted once on the reference set and
then applied to every generation of every run, so all scatterplots share one
plane.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ..core import ReferenceSet
from ..similarity import SimilarityMatrix

__all__ = ["Embedding2D", "embed_algorithms", "PlaneProjection", "project_reference_pca"]

EMBED_METHODS = ("metric_mds", "tsne")


@dataclass(frozen=True, eq=False)
class Embedding2D:
    labels: tuple[str, ...]
    coords: np.ndarray
    method: str

    def __post_init__(self) -> None:
        coords = np.array(self.coords, dtype=np.float64, copy=True)
        if coords.shape != (len(self.labels), 2):
            raise ValueError(f"coords shape {coords.shape} does not match {len(self.labels)} labels")
        if not np.all(np.isfinite(coords)):
            raise ValueError("embedding coordinates must be finite")
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "labels", tuple(self.labels))


def _fix_signs(coords: np.ndarray) -> np.ndarray:
    # deterministic orientation: the largest-magnitude coordinate on each axis is positive
    for j in range(coords.shape[1]):
        col = coords[:, j]
        k = int(np.argmax(np.abs(col)))
        if col[k] < 0:
            coords[:, j] = -col
    return coords


def classical_mds(D: np.ndarray) -> np.ndarray:
    """Double-centering eigendecomposition of squared distances, top 2 axes."""
    n = D.shape[0]
    J = np.eye(n) - np.full((n, n), 1.0 / n)
    B = -0.5 * J @ (D**2) @ J
    B = (B + B.T) / 2.0
    eigvals, eigvecs = np.linalg.eigh(B)
    order = np.argsort(eigvals)[::-1][:2]
    lam = np.clip(eigvals[order], 0.0, None)
    coords = eigvecs[:, order] * np.sqrt(lam)[None, :]
    return _fix_signs(coords)


def _tsne_embed(D: np.ndarray, seed: int) -> np.ndarray:
    from sklearn.manifold import TSNE

    n = D.shape[0]
    perplexity = min(5.0, (n - 1) / 3.0)
    tsne = TSNE(
        n_components=2,
        metric="precomputed",
        method="exact",
        init="random",
        random_state=seed,
        perplexity=perplexity,
        max_iter=1000,
    )
    return tsne.fit_transform(np.array(D, copy=True))


def embed_algorithms(M: SimilarityMatrix, method: str = "metric_mds", seed: int = 0) -> Embedding2D:
    """Embed a distance matrix in the plane for the similarity scatterplot."""
    if method not in EMBED_METHODS:
        raise ValueError(f"unknown embedding method {method!r}; choose from {EMBED_METHODS}")
    if M.n < 2:
        raise ValueError("need at least 2 entities to embed")
    if not np.all(np.isfinite(M.values)):
        raise ValueError("distances must be finite")
    if method == "metric_mds":
        coords = classical_mds(M.values)
    else:
        coords = _tsne_embed(M.values, seed)
    return Embedding2D(labels=M.labels, coords=coords, method=method)


@dataclass(frozen=True, eq=False)
class PlaneProjection:
    """Affine map from m-dimensional objective space onto a fixed 2-D plane."""

    mean: np.ndarray
    components: np.ndarray  # (2, m) orthonormal rows
    method: str

    def apply(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts[None, :]
        if pts.shape[1] != self.mean.shape[0]:
            raise ValueError(f"expected m={self.mean.shape[0]} columns, got {pts.shape[1]}")
        return (pts - self.mean) @ self.components.T


def project_reference_pca(P: ReferenceSet) -> PlaneProjection:
    """Fit the shared 2-D projection on the reference set.

    For two objectives the identity embedding is used.  A degenerate
    covariance falls back to the first two coordinate axes with a warning.
    """
    m = P.m
    if m == 2:
        return PlaneProjection(mean=np.zeros(2), components=np.eye(2), method="identity")
    if P.n < 3:
        raise ValueError("need at least 3 reference points to fit a projection")
    X = P.points
    mean = X.mean(axis=0)
    centered = X - mean
    U, s, Vt = np.linalg.svd(centered, full_matrices=False)
    rank = int(np.sum(s > s[0] * 1e-12)) if s.size and s[0] > 0 else 0
    if rank < 2:
        warnings.warn("reference set is degenerate; projecting onto the first two objectives")
        comps = np.zeros((2, m))
        comps[0, 0] = 1.0
        comps[1, 1] = 1.0
        return PlaneProjection(mean=mean, components=comps, method="axis_fallback")
    comps = Vt[:2].copy()
    # deterministic sign: largest-magnitude loading positive per component
    for i in range(2):
        k = int(np.argmax(np.abs(comps[i])))
        if comps[i, k] < 0:
            comps[i] = -comps[i]
    return PlaneProjection(mean=mean, components=comps, method="pca")
