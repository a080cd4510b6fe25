"""Per-generation quality measures: IGD, hypervolume, spacing, maximum spread.

Hypervolume is exact for m <= 4 (2-D sweep, recursive slicing above that) and
falls back to a seeded Monte Carlo estimate for m > 4.  IGD keeps the full
per-reference-point distance profile because the timeline histograms need it,
not just the mean.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.spatial.distance import cdist

from .core import AlgorithmRun, ReferenceSet, SolutionSet, non_dominated_mask

__all__ = [
    "MeasureConfig",
    "IgdDistanceProfile",
    "MeasureSeries",
    "igd",
    "hypervolume",
    "spacing",
    "maximum_spread",
    "measure_run",
    "default_anchor",
]


@dataclass(frozen=True, eq=False)
class MeasureConfig:
    """Hypervolume settings shared by a workspace.

    Solutions that do not strictly dominate the anchor contribute zero volume.
    ``mc_seed`` pins the Monte Carlo stream so repeated evaluations are
    identical.
    """

    hv_anchor: np.ndarray
    hv_mc_samples: int = 100_000
    mc_seed: int = 0

    def __post_init__(self) -> None:
        anchor = np.array(self.hv_anchor, dtype=np.float64, copy=True)
        if anchor.ndim != 1 or anchor.size < 2:
            raise ValueError(f"hv_anchor must be a vector of >= 2 objectives, got shape {anchor.shape}")
        if not np.all(np.isfinite(anchor)):
            raise ValueError("hv_anchor must be finite")
        if self.hv_mc_samples < 1:
            raise ValueError("hv_mc_samples must be positive")
        anchor.setflags(write=False)
        object.__setattr__(self, "hv_anchor", anchor)


@dataclass(frozen=True, eq=False)
class IgdDistanceProfile:
    """Nearest-solution distance for every reference point; the mean is IGD."""

    distances: np.ndarray
    mean: float


@dataclass(frozen=True, eq=False)
class MeasureSeries:
    """The four measure series for one run, aligned with its generations.

    ``gen_indices`` carries the original generation indices (down-sampled runs
    have gaps).  Best-generation fields hold original indices as well; ties go
    to the earliest generation.
    """

    gen_indices: np.ndarray
    igd: np.ndarray
    hv: np.ndarray
    sp: np.ndarray
    ms: np.ndarray
    best_igd_gen: int
    best_hv_gen: int
    best_sp_gen: int
    best_ms_gen: int
    igd_profiles: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.gen_indices)

    def position_of(self, gen_index: int) -> int:
        pos = np.nonzero(self.gen_indices == gen_index)[0]
        if pos.size == 0:
            raise KeyError(f"no generation {gen_index} in series")
        return int(pos[0])

    @property
    def best_positions(self) -> dict[str, int]:
        return {
            "igd": self.position_of(self.best_igd_gen),
            "hv": self.position_of(self.best_hv_gen),
            "sp": self.position_of(self.best_sp_gen),
            "ms": self.position_of(self.best_ms_gen),
        }


def igd(S, P) -> IgdDistanceProfile:
    """Distance from each reference point to its nearest solution.

    The mean of the profile is the inverted generational distance.  Accepts
    SolutionSet/ReferenceSet or raw (n, m) arrays; the measure itself does
    not require a validated reference.
    """
    S_pts = S.objectives if isinstance(S, SolutionSet) else np.asarray(S, dtype=np.float64)
    P_pts = P.points if isinstance(P, ReferenceSet) else np.asarray(P, dtype=np.float64)
    if S_pts.shape[1] != P_pts.shape[1]:
        raise ValueError(f"dimension mismatch: solutions m={S_pts.shape[1]}, reference m={P_pts.shape[1]}")
    d = cdist(P_pts, S_pts).min(axis=1)
    return IgdDistanceProfile(distances=d, mean=float(d.mean()))


def default_anchor(reference: ReferenceSet, scale: float = 1.1) -> np.ndarray:
    """Workspace-default HV anchor: component-wise reference maximum x 1.1."""
    return reference.points.max(axis=0) * scale


def _hv_2d(F: np.ndarray, anchor: np.ndarray) -> float:
    # sweep in f1; between consecutive x cuts the dominated height is the best f2 so far
    order = np.argsort(F[:, 0], kind="stable")
    xs = F[order, 0]
    ys = F[order, 1]
    volume = 0.0
    best_y = anchor[1]
    cut = np.append(xs[1:], anchor[0])
    for i in range(len(xs)):
        if ys[i] < best_y:
            best_y = ys[i]
        volume += (cut[i] - xs[i]) * (anchor[1] - best_y)
    return volume


def _pareto_min_rows(F: np.ndarray) -> np.ndarray:
    return F[non_dominated_mask(F)]


def _hv_wfg(F: np.ndarray, anchor: np.ndarray) -> float:
    # exclusive-volume recursion: hv(F) = sum_i excl(p_i, F[i+1:])
    n = F.shape[0]
    if n == 0:
        return 0.0
    if n == 1:
        return float(np.prod(anchor - F[0]))
    F = F[np.argsort(F[:, 0], kind="stable")]
    total = 0.0
    for i in range(n):
        p = F[i]
        box = float(np.prod(anchor - p))
        tail = F[i + 1 :]
        if tail.shape[0]:
            limited = np.maximum(tail, p)
            limited = _pareto_min_rows(limited)
            box -= _hv_wfg(limited, anchor)
        total += box
    return total


def _hv_monte_carlo(F: np.ndarray, anchor: np.ndarray, samples: int, seed: int) -> float:
    lower = F.min(axis=0)
    box = np.prod(anchor - lower)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    hits = 0
    chunk = 100_000
    remaining = samples
    while remaining > 0:
        take = min(chunk, remaining)
        U = lower + rng.random((take, F.shape[1])) * (anchor - lower)
        dominated = np.zeros(take, dtype=bool)
        for p in F:
            dominated |= np.all(p <= U, axis=1)
            if dominated.all():
                break
        hits += int(dominated.sum())
        remaining -= take
    return float(box) * hits / samples


def hypervolume(S: SolutionSet, cfg: MeasureConfig) -> float:
    """Union volume of the boxes spanned by each solution and the anchor.

    Exact for m <= 4; Monte Carlo with cfg.hv_mc_samples for m > 4.
    """
    anchor = cfg.hv_anchor
    if S.m != anchor.shape[0]:
        raise ValueError(f"dimension mismatch: solutions m={S.m}, anchor m={anchor.shape[0]}")
    F = S.objectives
    F = F[np.all(F < anchor, axis=1)]
    if F.shape[0] == 0:
        return 0.0
    m = F.shape[1]
    if m == 2:
        return _hv_2d(F, anchor)
    F = _pareto_min_rows(F)
    if m <= 4:
        return _hv_wfg(F, anchor)
    return _hv_monte_carlo(F, anchor, cfg.hv_mc_samples, cfg.mc_seed)


def spacing(S: SolutionSet) -> float:
    """Schott's spacing: std-dev style variation of nearest-neighbor distances.

    Zero for a singleton by convention.
    """
    n = S.n
    if n < 2:
        return 0.0
    D = cdist(S.objectives, S.objectives)
    np.fill_diagonal(D, np.inf)
    d = D.min(axis=1)
    mean = d.mean()
    return float(np.sqrt(np.sum((mean - d) ** 2) / (n - 1)))


def maximum_spread(S: SolutionSet) -> float:
    """Diagonal length of the per-objective bounding box."""
    ranges = S.objectives.max(axis=0) - S.objectives.min(axis=0)
    return float(np.sqrt(np.sum(ranges**2)))


def measure_run(
    run: AlgorithmRun,
    P: ReferenceSet,
    cfg: MeasureConfig,
    profile_positions: Optional[set[int]] = None,
) -> MeasureSeries:
    """All four measure series plus best-generation indices for one run.

    IGD distance profiles are retained for the best-IGD and last generations
    (plus any positions explicitly requested).
    """
    if run.m != P.m:
        raise ValueError(f"dimension mismatch: run m={run.m}, reference m={P.m}")
    T = len(run.generations)
    gen_indices = np.array([g.index for g in run.generations], dtype=np.int64)
    igd_v = np.empty(T)
    hv_v = np.empty(T)
    sp_v = np.empty(T)
    ms_v = np.empty(T)
    profiles_by_pos: dict[int, IgdDistanceProfile] = {}
    for t, rec in enumerate(run.generations):
        prof = igd(rec.solutions, P)
        profiles_by_pos[t] = prof
        igd_v[t] = prof.mean
        hv_v[t] = hypervolume(rec.solutions, cfg)
        sp_v[t] = spacing(rec.solutions)
        ms_v[t] = maximum_spread(rec.solutions)

    best = {
        "igd": int(np.argmin(igd_v)),
        "hv": int(np.argmax(hv_v)),
        "sp": int(np.argmin(sp_v)),
        "ms": int(np.argmax(ms_v)),
    }
    keep = {best["igd"], T - 1}
    if profile_positions:
        keep |= {p for p in profile_positions if 0 <= p < T}
    igd_profiles = {int(gen_indices[p]): profiles_by_pos[p] for p in sorted(keep)}
    return MeasureSeries(
        gen_indices=gen_indices,
        igd=igd_v,
        hv=hv_v,
        sp=sp_v,
        ms=ms_v,
        best_igd_gen=int(gen_indices[best["igd"]]),
        best_hv_gen=int(gen_indices[best["hv"]]),
        best_sp_gen=int(gen_indices[best["sp"]]),
        best_ms_gen=int(gen_indices[best["ms"]]),
        igd_profiles=igd_profiles,
    )
