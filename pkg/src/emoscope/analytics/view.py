"""Solution-set inspection payloads: biased sampling, KDE grids, reference modes.

Points flagged by LOF or sitting at a per-objective extremum are always kept
("crosses"); the remainder is thinned by a seeded uniform sample.  Density
grids use a product Gaussian kernel with per-axis Scott bandwidths on a 64x64
grid over bounds padded wide enough that the grid mass sums to ~1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core import ReferenceSet, SolutionSet
from .embedding import PlaneProjection
from .outliers import lof

__all__ = ["ViewConfig", "DensityGrid", "GenerationView", "SolutionViewModel", "sample_solution_view", "kde_grid"]


@dataclass(frozen=True)
class ViewConfig:
    lof_threshold: float = 1.5
    k_lof: int = 20
    grid_size: int = 64
    pad_bandwidths: float = 4.0
    seed: int = 0


@dataclass(frozen=True, eq=False)
class DensityGrid:
    """Row-major density values over [x0, x1] x [y0, y1]."""

    values: np.ndarray  # (g, g), row r = y bin r, column c = x bin c
    x0: float
    x1: float
    y0: float
    y1: float

    @property
    def cell_area(self) -> float:
        g = self.values.shape[0]
        return ((self.x1 - self.x0) / g) * ((self.y1 - self.y0) / g)


@dataclass(frozen=True, eq=False)
class GenerationView:
    coords: np.ndarray  # (n, 2) projected coordinates of the full set
    kept: np.ndarray  # indices into the original set (marked points included)
    marked: np.ndarray  # indices flagged by LOF or extremum preservation
    kde: DensityGrid


@dataclass(frozen=True, eq=False)
class SolutionViewModel:
    generations: tuple[GenerationView, ...]
    reference_scatter: np.ndarray  # (r, 2)
    reference_density: DensityGrid
    reference_hull: np.ndarray  # (h, 2) hull vertices in traversal order


def _scott_bandwidths(P: np.ndarray) -> np.ndarray:
    n = P.shape[0]
    sigma = P.std(axis=0, ddof=1) if n > 1 else np.zeros(P.shape[1])
    factor = n ** (-1.0 / 6.0)  # Scott's rule for d=2
    h = sigma * factor
    spans = P.max(axis=0) - P.min(axis=0)
    floor = np.where(spans > 0, spans * 1e-3, 1e-3)
    return np.maximum(h, floor)


def kde_grid(P: np.ndarray, grid_size: int = 64, pad_bandwidths: float = 4.0) -> DensityGrid:
    """Gaussian product-kernel density of 2-D points on a padded grid.

    The grid integrates (Riemann sum x cell area) to ~1 because the padding
    extends several bandwidths beyond the data.
    """
    P = np.asarray(P, dtype=np.float64)
    if P.ndim != 2 or P.shape[1] != 2 or P.shape[0] == 0:
        raise ValueError(f"expected non-empty (n, 2) points, got shape {P.shape}")
    h = _scott_bandwidths(P)
    x0, y0 = P.min(axis=0) - pad_bandwidths * h
    x1, y1 = P.max(axis=0) + pad_bandwidths * h
    g = grid_size
    xc = x0 + (np.arange(g) + 0.5) * (x1 - x0) / g
    yc = y0 + (np.arange(g) + 0.5) * (y1 - y0) / g
    # separable kernel: density = (1/n) * Ky @ Kx^T evaluated on the grid
    Kx = np.exp(-0.5 * ((xc[:, None] - P[None, :, 0]) / h[0]) ** 2) / (h[0] * np.sqrt(2 * np.pi))
    Ky = np.exp(-0.5 * ((yc[:, None] - P[None, :, 1]) / h[1]) ** 2) / (h[1] * np.sqrt(2 * np.pi))
    values = (Ky @ Kx.T) / P.shape[0]
    return DensityGrid(values=values, x0=float(x0), x1=float(x1), y0=float(y0), y1=float(y1))


def _hull_vertices(P: np.ndarray) -> np.ndarray:
    uniq = np.unique(P, axis=0)
    if uniq.shape[0] < 3:
        return uniq
    from scipy.spatial import QhullError, ConvexHull

    try:
        hull = ConvexHull(uniq)
    except QhullError:
        # collinear projection: fall back to the extreme segment
        order = np.lexsort((uniq[:, 1], uniq[:, 0]))
        return uniq[[order[0], order[-1]]]
    return uniq[hull.vertices]


def _marked_indices(S: SolutionSet, cfg: ViewConfig) -> np.ndarray:
    n = S.n
    marked = set()
    for j in range(S.m):  # per-objective extrema preserve the spread
        marked.add(int(np.argmin(S.objectives[:, j])))
        marked.add(int(np.argmax(S.objectives[:, j])))
    k = min(cfg.k_lof, n - 1)
    if k >= 1:
        scores = lof(S, k)
        marked.update(int(i) for i in np.nonzero(scores > cfg.lof_threshold)[0])
    return np.array(sorted(marked), dtype=np.int64)


def sample_solution_view(
    generations: list[SolutionSet],
    rate: float,
    projection: PlaneProjection,
    reference: ReferenceSet,
    cfg: Optional[ViewConfig] = None,
) -> SolutionViewModel:
    """Build the magnified-inspection payload for the selected generations."""
    if not 0.0 < rate <= 1.0:
        raise ValueError(f"sample rate must be in (0, 1], got {rate}")
    if not generations:
        raise ValueError("need at least one selected generation")
    cfg = cfg or ViewConfig()
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=cfg.seed)))

    views = []
    for S in generations:
        coords = projection.apply(S.objectives)
        marked = _marked_indices(S, cfg)
        rest = np.setdiff1d(np.arange(S.n), marked)
        take = int(round(rate * rest.size))
        if take >= rest.size:
            sampled = rest
        elif take == 0:
            sampled = rest[:0]
        else:
            sampled = np.sort(rng.choice(rest, size=take, replace=False))
        kept = np.union1d(marked, sampled)
        views.append(GenerationView(coords=coords, kept=kept, marked=marked, kde=kde_grid(coords, cfg.grid_size, cfg.pad_bandwidths)))

    ref_coords = projection.apply(reference.points)
    return SolutionViewModel(
        generations=tuple(views),
        reference_scatter=ref_coords,
        reference_density=kde_grid(ref_coords, cfg.grid_size, cfg.pad_bandwidths),
        reference_hull=_hull_vertices(ref_coords),
    )
