"""Objective-space vocabulary shared by every other module.

All objectives are minimized.  Maximization problems must be negated before
they enter the workbench.  Objective data lives in float64 numpy arrays that
are frozen after construction, so instances can be shared freely across
threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

__all__ = [
    "ProblemMeta",
    "SolutionSet",
    "ReferenceSet",
    "GenerationRecord",
    "AlgorithmRun",
    "dominates",
    "dominance_matrix",
    "non_dominated_mask",
    "non_dominated_filter",
]


def _frozen_array(values, ndim: int, name: str) -> np.ndarray:
    arr = np.array(values, dtype=np.float64, copy=True)
    if arr.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values (NaN/Inf are rejected at load)")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ProblemMeta:
    """Static description of a multi-objective problem instance.

    ``d`` and ``bounds`` are optional because imported run logs know the
    objective dimension but not necessarily the decision space.
    """

    name: str
    m: int
    d: Optional[int] = None
    bounds: Optional[tuple[tuple[float, float], ...]] = None

    def __post_init__(self) -> None:
        if self.m < 2:
            raise ValueError(f"need at least 2 objectives, got m={self.m}")
        if self.d is not None:
            if self.d < self.m:
                raise ValueError(f"decision dimension d={self.d} must be >= m={self.m}")
            if self.bounds is not None:
                bounds = tuple((float(lo), float(hi)) for lo, hi in self.bounds)
                if len(bounds) != self.d:
                    raise ValueError(f"expected {self.d} bound pairs, got {len(bounds)}")
                for lo, hi in bounds:
                    if not lo < hi:
                        raise ValueError(f"invalid bound pair ({lo}, {hi})")
                object.__setattr__(self, "bounds", bounds)

    @property
    def lower(self) -> np.ndarray:
        if self.bounds is None:
            raise ValueError(f"problem {self.name!r} has no box bounds")
        return np.array([lo for lo, _ in self.bounds])

    @property
    def upper(self) -> np.ndarray:
        if self.bounds is None:
            raise ValueError(f"problem {self.name!r} has no box bounds")
        return np.array([hi for _, hi in self.bounds])


@dataclass(frozen=True, eq=False)
class SolutionSet:
    """One generation's output: an (n, m) matrix of objective vectors.

    Decision vectors are optional; every analytic in the workbench operates
    in objective space.  Duplicate rows are permitted and every measure must
    tolerate them.
    """

    objectives: np.ndarray
    decisions: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        obj = _frozen_array(self.objectives, 2, "objectives")
        object.__setattr__(self, "objectives", obj)
        if self.decisions is not None:
            dec = _frozen_array(self.decisions, 2, "decisions")
            if dec.shape[0] != obj.shape[0]:
                raise ValueError(
                    f"decisions cardinality {dec.shape[0]} != objectives cardinality {obj.shape[0]}"
                )
            object.__setattr__(self, "decisions", dec)

    @property
    def n(self) -> int:
        return self.objectives.shape[0]

    @property
    def m(self) -> int:
        return self.objectives.shape[1]


@dataclass(frozen=True, eq=False)
class ReferenceSet:
    """Sampled true Pareto front used as ground truth for the measures.

    Mutual non-domination is checked at construction.
    """

    points: np.ndarray

    def __post_init__(self) -> None:
        pts = _frozen_array(self.points, 2, "reference points")
        object.__setattr__(self, "points", pts)
        if not np.all(non_dominated_mask(pts)):
            raise ValueError("reference set contains dominated points")

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def m(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True, eq=False)
class GenerationRecord:
    """Solution set emitted at one generation of an evolutionary run."""

    index: int
    solutions: SolutionSet

    def __post_init__(self) -> None:
        if self.index < 0:
            raise ValueError(f"generation index must be >= 0, got {self.index}")


@dataclass(frozen=True, eq=False)
class AlgorithmRun:
    """Ordered sequence of generation records for one algorithm execution."""

    algorithm_id: str
    problem: str
    m: int
    generations: tuple[GenerationRecord, ...]
    d: Optional[int] = None
    source: str = "builtin"

    def __post_init__(self) -> None:
        if not self.algorithm_id:
            raise ValueError("algorithm_id must be non-empty")
        if self.source not in ("builtin", "imported"):
            raise ValueError(f"unknown run source {self.source!r}")
        gens = tuple(self.generations)
        if not gens:
            raise ValueError("run must contain at least one generation")
        indices = [g.index for g in gens]
        if any(b <= a for a, b in zip(indices, indices[1:])):
            raise ValueError("generation indices must be strictly increasing")
        for g in gens:
            if g.solutions.m != self.m:
                raise ValueError(
                    f"generation {g.index} has m={g.solutions.m}, run declares m={self.m}"
                )
        object.__setattr__(self, "generations", gens)

    def __len__(self) -> int:
        return len(self.generations)

    @property
    def indices(self) -> list[int]:
        return [g.index for g in self.generations]

    def record_at(self, gen_index: int) -> GenerationRecord:
        for g in self.generations:
            if g.index == gen_index:
                return g
        raise KeyError(f"run {self.algorithm_id!r} has no generation {gen_index}")


def dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    """Pareto dominance: a is no worse than b everywhere and better somewhere."""
    av = np.asarray(a, dtype=np.float64)
    bv = np.asarray(b, dtype=np.float64)
    if av.shape != bv.shape or av.ndim != 1:
        raise ValueError(f"dimension mismatch: {av.shape} vs {bv.shape}")
    return bool(np.all(av <= bv) and np.any(av < bv))


def dominance_matrix(F: np.ndarray) -> np.ndarray:
    """Boolean (n, n) matrix where entry [i, j] is True iff row i dominates row j.

    Accumulates one 2-D comparison per objective: dominance is "<= everywhere
    and not equal everywhere".
    """
    F = np.asarray(F, dtype=np.float64)
    n = F.shape[0]
    le = np.ones((n, n), dtype=bool)
    eq = np.ones((n, n), dtype=bool)
    for j in range(F.shape[1]):
        col = F[:, j]
        le &= col[:, None] <= col[None, :]
        eq &= col[:, None] == col[None, :]
    return le & ~eq


def non_dominated_mask(F: np.ndarray) -> np.ndarray:
    """Mask of rows not dominated by any other row."""
    return ~dominance_matrix(F).any(axis=0)


def non_dominated_filter(s: SolutionSet) -> SolutionSet:
    """Keep exactly the members not dominated by any other member, order preserved."""
    mask = non_dominated_mask(s.objectives)
    dec = s.decisions[mask] if s.decisions is not None else None
    return SolutionSet(objectives=s.objectives[mask], decisions=dec)
