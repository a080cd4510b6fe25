"""Two levels of similarity: EMD between solution sets, series distances between runs.

Generation similarity is the exact first-order Wasserstein distance between
the uniform discrete distributions on two objective-vector sets.  Equal-size
sets reduce to a linear assignment (the transport polytope's vertices are
permutation matrices there); unequal sizes go through an exact LP.  Algorithm
similarity compares measure series with DTW or the Euclidean norm, or takes
the EMD between the two runs' best generations.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse
from scipy.optimize import linear_sum_assignment, linprog
from scipy.spatial.distance import cdist

from .core import AlgorithmRun, SolutionSet

__all__ = [
    "SIMILARITY_KINDS",
    "SimilarityMatrix",
    "emd",
    "dtw",
    "euclid_series",
    "generation_similarity_matrix",
    "algorithm_similarity_matrix",
    "worker_count",
]

SIMILARITY_KINDS = (
    "gen_emd",
    "alg_dtw_igd",
    "alg_dtw_hv",
    "alg_euclid_igd",
    "alg_euclid_hv",
    "alg_best_igd_emd",
    "alg_best_hv_emd",
)

# exact-solver guard: the LP grows quadratically in the support sizes
MAX_EMD_SUPPORT = 500


@dataclass(frozen=True, eq=False)
class SimilarityMatrix:
    """Symmetric pairwise distances over generations or algorithms."""

    kind: str
    labels: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.kind not in SIMILARITY_KINDS:
            raise ValueError(f"unknown similarity kind {self.kind!r}")
        labels = tuple(self.labels)
        vals = np.array(self.values, dtype=np.float64, copy=True)
        n = len(labels)
        if vals.shape != (n, n):
            raise ValueError(f"values shape {vals.shape} does not match {n} labels")
        if not np.all(np.isfinite(vals)):
            raise ValueError("similarity values must be finite")
        if np.any(vals < 0):
            raise ValueError("similarity values must be non-negative")
        if np.any(np.abs(np.diag(vals)) > 0):
            raise ValueError("similarity diagonal must be zero")
        if np.max(np.abs(vals - vals.T), initial=0.0) > 1e-9:
            raise ValueError("similarity matrix must be symmetric to 1e-9")
        vals.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return len(self.labels)

    def index_of(self, label: str) -> int:
        return self.labels.index(label)

    def submatrix(self, labels: Sequence[str]) -> "SimilarityMatrix":
        idx = [self.index_of(lb) for lb in labels]
        return SimilarityMatrix(
            kind=self.kind, labels=tuple(labels), values=self.values[np.ix_(idx, idx)]
        )


def _objectives(A) -> np.ndarray:
    if isinstance(A, SolutionSet):
        return A.objectives
    arr = np.asarray(A, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise ValueError(f"expected an (n, m) point set, got shape {arr.shape}")
    return arr


def emd(A, B) -> float:
    """Exact Wasserstein-1 distance between two uniform point clouds.

    Euclidean ground metric.  Accepts SolutionSets or (n, m) arrays.  The
    arguments are ordered canonically before solving, so emd(A, B) and
    emd(B, A) run identical arithmetic and symmetry holds exactly.
    """
    FA = _objectives(A)
    FB = _objectives(B)
    if FA.shape[1] != FB.shape[1]:
        raise ValueError(f"dimension mismatch: {FA.shape[1]} vs {FB.shape[1]}")
    if (FB.shape[0], FB.tobytes()) < (FA.shape[0], FA.tobytes()):
        FA, FB = FB, FA
    a, b = FA.shape[0], FB.shape[0]
    if a > MAX_EMD_SUPPORT or b > MAX_EMD_SUPPORT:
        raise ValueError(
            f"solution sets of {a}x{b} exceed the exact-solver cap of {MAX_EMD_SUPPORT}; "
            "raise the down-sampling rate to shrink the inputs"
        )
    C = cdist(FA, FB)
    if a == b:
        rows, cols = linear_sum_assignment(C)
        return float(C[rows, cols].sum() / a)
    return _emd_lp(C, a, b)


def _emd_lp(C: np.ndarray, a: int, b: int) -> float:
    # transport LP: row sums 1/a, column sums 1/b, minimize <T, C>
    row = sparse.kron(sparse.eye(a, format="csr"), np.ones((1, b)))
    col = sparse.kron(np.ones((1, a)), sparse.eye(b, format="csr"))
    A_eq = sparse.vstack([row, col]).tocsr()
    b_eq = np.concatenate([np.full(a, 1.0 / a), np.full(b, 1.0 / b)])
    res = linprog(C.ravel(), A_eq=A_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if res.status != 0:
        raise RuntimeError(f"transport LP failed: {res.message}")
    return float(res.fun)


def dtw(s: Sequence[float], t: Sequence[float]) -> float:
    """Classic DTW with |a - b| local cost and no window constraint.

    Two-row dynamic program over the boundary-matched monotone recurrence
    D[i, j] = c[i, j] + min(D[i-1, j], D[i-1, j-1], D[i, j-1]).  Costs
    accumulate stepwise along paths, so the optimum is bit-identical to
    exhaustive path enumeration.
    """
    sv = np.asarray(s, dtype=np.float64)
    tv = np.asarray(t, dtype=np.float64)
    if sv.ndim != 1 or tv.ndim != 1:
        raise ValueError("dtw expects 1-D series")
    if sv.size == 0 or tv.size == 0:
        raise ValueError("dtw series must be non-empty")
    n, m = sv.size, tv.size
    cost = np.abs(sv[:, None] - tv[None, :]).tolist()
    inf = float("inf")
    prev = [inf] * (m + 1)
    prev[0] = 0.0
    for i in range(n):
        row = [inf] * (m + 1)
        ci = cost[i]
        for j in range(1, m + 1):
            best = prev[j]
            if prev[j - 1] < best:
                best = prev[j - 1]
            if row[j - 1] < best:
                best = row[j - 1]
            row[j] = ci[j - 1] + best
        prev = row
    return prev[-1]


def euclid_series(s: Sequence[float], t: Sequence[float]) -> float:
    """L2 norm of the elementwise difference; lengths must match."""
    sv = np.asarray(s, dtype=np.float64)
    tv = np.asarray(t, dtype=np.float64)
    if sv.shape != tv.shape or sv.ndim != 1:
        raise ValueError(
            f"series length mismatch ({sv.shape} vs {tv.shape}); "
            "down-sample runs to a common target first"
        )
    return float(np.linalg.norm(sv - tv))


def worker_count(explicit: int | None = None) -> int:
    """Resolve the similarity worker count; EMOSCOPE_WORKERS overrides."""
    env = os.environ.get("EMOSCOPE_WORKERS")
    if env is not None:
        try:
            n = int(env)
        except ValueError:
            raise ValueError(f"EMOSCOPE_WORKERS must be an integer, got {env!r}") from None
        return max(1, n)
    if explicit is not None:
        return max(1, explicit)
    return 1


def _emd_task(args) -> float:
    FA, FB = args
    return emd(FA, FB)


def _pairwise_emd(sets: list[np.ndarray], workers: int) -> np.ndarray:
    n = len(sets)
    values = np.zeros((n, n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    if workers > 1 and len(pairs) > 32:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_emd_task, ((sets[i], sets[j]) for i, j in pairs), chunksize=64))
    else:
        results = [emd(sets[i], sets[j]) for i, j in pairs]
    for (i, j), v in zip(pairs, results):
        values[i, j] = v
        values[j, i] = v
    return values


def generation_labels(runs: Iterable[AlgorithmRun]) -> list[str]:
    return [f"{run.algorithm_id}#{rec.index}" for run in runs for rec in run.generations]


def generation_similarity_matrix(
    runs: Sequence[AlgorithmRun], workers: int | None = None
) -> SimilarityMatrix:
    """EMD between every pair of generations across the given runs.

    Labels are "algorithmId#generationIndex".  Entries are independent pure
    computations, so the builder may fan out across processes; results are
    identical to sequential execution.
    """
    runs = list(runs)
    if not runs:
        raise ValueError("need at least one run")
    sets = [rec.solutions.objectives for run in runs for rec in run.generations]
    labels = generation_labels(runs)
    values = _pairwise_emd(sets, worker_count(workers))
    return SimilarityMatrix(kind="gen_emd", labels=tuple(labels), values=values)


def algorithm_similarity_matrix(workspace, kind: str) -> SimilarityMatrix:
    """Pairwise distances between whole runs under the chosen comparison.

    dtw/euclid kinds compare IGD or HV series; best_*_emd kinds compare the
    solution sets of each run's best-IGD (or best-HV) generation.  Requires
    measures to be computed for every run.
    """
    if kind not in SIMILARITY_KINDS or kind == "gen_emd":
        raise ValueError(f"unknown algorithm similarity kind {kind!r}")
    runs = workspace.runs
    labels = tuple(r.algorithm_id for r in runs)
    n = len(runs)
    for r in runs:
        if r.algorithm_id not in workspace.measures:
            raise ValueError(f"measures not computed for run {r.algorithm_id!r}")

    def series(run, measure):
        ms = workspace.measures[run.algorithm_id]
        return ms.igd if measure == "igd" else ms.hv

    def best_set(run, measure):
        ms = workspace.measures[run.algorithm_id]
        gen = ms.best_igd_gen if measure == "igd" else ms.best_hv_gen
        return run.record_at(gen).solutions

    values = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            if kind == "alg_dtw_igd":
                v = dtw(series(runs[i], "igd"), series(runs[j], "igd"))
            elif kind == "alg_dtw_hv":
                v = dtw(series(runs[i], "hv"), series(runs[j], "hv"))
            elif kind == "alg_euclid_igd":
                v = euclid_series(series(runs[i], "igd"), series(runs[j], "igd"))
            elif kind == "alg_euclid_hv":
                v = euclid_series(series(runs[i], "hv"), series(runs[j], "hv"))
            elif kind == "alg_best_igd_emd":
                v = emd(best_set(runs[i], "igd"), best_set(runs[j], "igd"))
            else:
                v = emd(best_set(runs[i], "hv"), best_set(runs[j], "hv"))
            values[i, j] = values[j, i] = v
    return SimilarityMatrix(kind=kind, labels=labels, values=values)
