"""Kamada-Kawai graph layout via stress majorization.

Minimizes sum_{i<j} (||p_i - p_j|| - d_ij)^2 / d_ij^2 with the SMACOF
(Guttman transform) iteration, which never increases the stress.  The
initial configuration is a deterministic circle, so layouts are
reproducible without a seed.
"""

from __future__ import annotations

import numpy as np

__all__ = ["kamada_kawai", "layout_stress"]


def layout_stress(coords: np.ndarray, dist: np.ndarray) -> float:
    """Weighted stress of a configuration against target distances."""
    diff = coords[:, None, :] - coords[None, :, :]
    D = np.sqrt((diff**2).sum(axis=2))
    iu = np.triu_indices(len(coords), k=1)
    d = dist[iu]
    return float(np.sum((D[iu] - d) ** 2 / d**2))


def _circular_init(n: int, radius: float) -> np.ndarray:
    angles = 2.0 * np.pi * np.arange(n) / n
    return np.column_stack([radius * np.cos(angles), radius * np.sin(angles)])


def kamada_kawai(
    dist: np.ndarray,
    init: np.ndarray | None = None,
    max_sweeps: int = 500,
    rel_tol: float = 1e-6,
) -> np.ndarray:
    """Layout coordinates for symmetric positive target distances.

    Iterates the Guttman transform with weights 1/d^2 until the relative
    stress improvement drops below rel_tol or max_sweeps is reached.
    """
    dist = np.asarray(dist, dtype=np.float64)
    n = dist.shape[0]
    if dist.shape != (n, n):
        raise ValueError(f"distance matrix must be square, got {dist.shape}")
    if n == 1:
        return np.zeros((1, 2))
    off = ~np.eye(n, dtype=bool)
    if np.any(dist[off] <= 0) or not np.all(np.isfinite(dist)):
        raise ValueError("off-diagonal target distances must be positive and finite")
    if np.max(np.abs(dist - dist.T)) > 1e-9:
        raise ValueError("target distances must be symmetric")

    W = np.zeros((n, n))
    W[off] = 1.0 / dist[off] ** 2
    V = np.diag(W.sum(axis=1)) - W
    V_pinv = np.linalg.pinv(V)

    if init is None:
        X = _circular_init(n, radius=float(dist.max()) / 2.0)
    else:
        X = np.array(init, dtype=np.float64, copy=True)
        if X.shape != (n, 2):
            raise ValueError(f"init must be ({n}, 2), got {X.shape}")

    stress = layout_stress(X, dist)
    for _ in range(max_sweeps):
        diff = X[:, None, :] - X[None, :, :]
        D = np.sqrt((diff**2).sum(axis=2))
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(D > 0, dist / D, 0.0)
        B = -W * ratio
        np.fill_diagonal(B, 0.0)
        np.fill_diagonal(B, -B.sum(axis=1))
        X_new = V_pinv @ (B @ X)
        new_stress = layout_stress(X_new, dist)
        if new_stress > stress:  # majorization guarantees descent; keep the better iterate
            break
        X = X_new
        if stress > 0 and (stress - new_stress) / stress < rel_tol:
            stress = new_stress
            break
        stress = new_stress
        if stress == 0.0:
            break
    return X
