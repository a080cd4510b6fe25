"""Local Outlier Factor in the original objective space.

Standard Breunig et al. definition with k-distance neighborhoods: ties at the
k-distance are all included.  A score near 1 means the point sits in a region
of homogeneous density; clearly larger scores flag sparse-region points.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial.distance import cdist

from ..core import SolutionSet

__all__ = ["lof"]


def lof(S: SolutionSet | np.ndarray, k_lof: int) -> np.ndarray:
    """LOF score per point; requires more points than neighbors."""
    X = S.objectives if isinstance(S, SolutionSet) else np.asarray(S, dtype=np.float64)
    n = X.shape[0]
    if k_lof < 1:
        raise ValueError(f"k_lof must be >= 1, got {k_lof}")
    if n <= k_lof:
        raise ValueError(f"need more than k_lof={k_lof} points, got {n}")

    D = cdist(X, X)
    np.fill_diagonal(D, np.inf)
    sorted_d = np.sort(D, axis=1)
    k_dist = sorted_d[:, k_lof - 1]

    # neighborhoods include every point within the k-distance (ties included)
    neigh_mask = D <= k_dist[:, None]
    reach = np.maximum(D, k_dist[None, :])  # reach-dist(p, o) = max(k_dist(o), d(p, o))
    counts = neigh_mask.sum(axis=1)
    sum_reach = np.where(neigh_mask, reach, 0.0).sum(axis=1)
    with np.errstate(divide="ignore"):
        lrd = np.where(sum_reach > 0, counts / sum_reach, np.inf)

    ratio = lrd[None, :] / lrd[:, None]
    # duplicates collapse both densities to infinity; their ratio is neutral
    ratio = np.where(np.isinf(lrd)[:, None] & np.isinf(lrd)[None, :], 1.0, ratio)
    scores = np.where(neigh_mask, ratio, 0.0).sum(axis=1) / counts
    return scores
