"""DTLZ test problems and analytic reference sets.

The first three DTLZ problems (Deb et al.) are provided with the standard
dimensioning d = m + k - 1, where k = 5 for DTLZ1 and k = 10 for DTLZ2/3.
Reference sets are generated from Das-Dennis simplex-lattice weights mapped
onto the known true front, instead of being shipped as data files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import ProblemMeta, ReferenceSet

__all__ = [
    "BenchmarkProblem",
    "dtlz",
    "reference_set",
    "das_dennis_weights",
    "reference_to_csv",
    "save_reference_csv",
]

SIMPLEX_PLANE = "simplex_plane"
UNIT_SPHERE_OCTANT = "unit_sphere_octant"


@dataclass(frozen=True, eq=False)
class BenchmarkProblem:
    """A box-bounded test problem with a known true-front geometry."""

    meta: ProblemMeta
    front_kind: str
    _evaluate_batch: Callable[[np.ndarray], np.ndarray]

    def evaluate(self, x) -> np.ndarray:
        """Map one decision vector to its objective vector."""
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 1 or x.shape[0] != self.meta.d:
            raise ValueError(f"expected decision vector of length {self.meta.d}, got shape {x.shape}")
        return self._evaluate_batch(x[None, :])[0]

    def evaluate_batch(self, X: np.ndarray) -> np.ndarray:
        """Vectorized evaluation of an (n, d) matrix of decision vectors."""
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.meta.d:
            raise ValueError(f"expected (n, {self.meta.d}) decision matrix, got shape {X.shape}")
        return self._evaluate_batch(X)


def _dtlz1_g(Xm: np.ndarray) -> np.ndarray:
    k = Xm.shape[1]
    return 100.0 * (k + np.sum((Xm - 0.5) ** 2 - np.cos(20.0 * np.pi * (Xm - 0.5)), axis=1))


def _dtlz1(X: np.ndarray, m: int) -> np.ndarray:
    g = _dtlz1_g(X[:, m - 1 :])
    F = np.empty((X.shape[0], m))
    for i in range(m):
        f = 0.5 * (1.0 + g) * np.prod(X[:, : m - 1 - i], axis=1)
        if i > 0:
            f = f * (1.0 - X[:, m - 1 - i])
        F[:, i] = f
    return F


def _dtlz2_shape(X: np.ndarray, m: int, g: np.ndarray) -> np.ndarray:
    F = np.empty((X.shape[0], m))
    theta = X[:, : m - 1] * (np.pi / 2.0)
    for i in range(m):
        f = (1.0 + g) * np.prod(np.cos(theta[:, : m - 1 - i]), axis=1)
        if i > 0:
            f = f * np.sin(theta[:, m - 1 - i])
        F[:, i] = f
    return F


def _dtlz2(X: np.ndarray, m: int) -> np.ndarray:
    g = np.sum((X[:, m - 1 :] - 0.5) ** 2, axis=1)
    return _dtlz2_shape(X, m, g)


def _dtlz3(X: np.ndarray, m: int) -> np.ndarray:
    g = _dtlz1_g(X[:, m - 1 :])
    return _dtlz2_shape(X, m, g)


_DTLZ = {
    1: (_dtlz1, 5, SIMPLEX_PLANE),
    2: (_dtlz2, 10, UNIT_SPHERE_OCTANT),
    3: (_dtlz3, 10, UNIT_SPHERE_OCTANT),
}


def dtlz(problem_id: int, m: int) -> BenchmarkProblem:
    """Build DTLZ1/2/3 with the standard k (5 for DTLZ1, 10 for DTLZ2/3).

    DTLZ3 with m=3 yields the 12-dimensional decision space used by the
    benchmark protocol.
    """
    if problem_id not in _DTLZ:
        raise ValueError(f"unsupported DTLZ id {problem_id}; supported: 1, 2, 3")
    if m < 2:
        raise ValueError(f"need m >= 2 objectives, got {m}")
    fn, k, front_kind = _DTLZ[problem_id]
    d = m + k - 1
    meta = ProblemMeta(
        name=f"dtlz{problem_id}",
        m=m,
        d=d,
        bounds=tuple((0.0, 1.0) for _ in range(d)),
    )
    return BenchmarkProblem(meta=meta, front_kind=front_kind, _evaluate_batch=lambda X: fn(X, m))


def das_dennis_weights(m: int, divisions: int) -> np.ndarray:
    """Simplex-lattice weight vectors: all m-part compositions of `divisions`.

    Returns C(divisions + m - 1, m - 1) rows in lexicographic order, each
    summing to 1.
    """
    if divisions < 1:
        raise ValueError(f"divisions must be >= 1, got {divisions}")
    rows: list[list[int]] = []

    def compose(prefix: list[int], remaining: int, slots: int) -> None:
        if slots == 1:
            rows.append(prefix + [remaining])
            return
        for c in range(remaining + 1):
            compose(prefix + [c], remaining - c, slots - 1)

    compose([], divisions, m)
    return np.array(rows, dtype=np.float64) / float(divisions)


def reference_set(problem: BenchmarkProblem, divisions: int = 12) -> ReferenceSet:
    """Sample the true front through Das-Dennis weights.

    simplex_plane fronts live on sum(f) = 0.5; unit_sphere_octant fronts on
    the nonnegative unit sphere, so weights are scaled or normalized
    accordingly.
    """
    W = das_dennis_weights(problem.meta.m, divisions)
    if problem.front_kind == SIMPLEX_PLANE:
        pts = 0.5 * W
    elif problem.front_kind == UNIT_SPHERE_OCTANT:
        pts = W / np.linalg.norm(W, axis=1, keepdims=True)
    else:
        raise ValueError(f"unknown front kind {problem.front_kind!r}")
    return ReferenceSet(points=pts)


def expected_reference_size(m: int, divisions: int) -> int:
    return math.comb(divisions + m - 1, m - 1)


def reference_to_csv(ref: ReferenceSet) -> str:
    """Render a reference set as CSV with header f1,...,fm."""
    header = ",".join(f"f{i + 1}" for i in range(ref.m))
    lines = [header]
    for row in ref.points:
        lines.append(",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def save_reference_csv(ref: ReferenceSet, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(reference_to_csv(ref))
