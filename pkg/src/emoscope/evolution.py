"""Two built-in evolution engines emitting one generation record per iteration.

Both engines follow the generic loop: mating selection -> variation
(simulated binary crossover + polynomial mutation) -> environmental
selection.  NSGA-II selects (mu+lambda) by non-domination rank and crowding
distance; SMS-EMOA is steady state and drops the worst-rank member with the
least hypervolume contribution, one offspring at a time, where one
"generation" is population_size steps.

Reproducibility: the generator is PCG64.  Generation g of a run seeded with
s draws from ``SeedSequence(entropy=s, spawn_key=(g,))``; within a
generation the draw order is mating indices, then crossover (pair gate,
variable gate, beta), then mutation (gate, u).  Record 0 is the evaluated
initial population, drawn from the g=0 stream; every later record is the
population after one full iteration.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .benchmarks import BenchmarkProblem
from .core import AlgorithmRun, GenerationRecord, SolutionSet, dominance_matrix

__all__ = [
    "EvolutionConfig",
    "run_nsga2",
    "run_sms_emoa",
    "nondomination_ranks",
    "crowding_distance",
    "environmental_select",
    "hv_contributions",
    "generation_stream",
]


@dataclass(frozen=True)
class EvolutionConfig:
    """Engine settings; defaults follow common NSGA-II practice.

    mutation_prob defaults to 1/d, resolved against the problem at run time.
    """

    population_size: int
    generations: int
    seed: int = 0
    sbx_eta: float = 20.0
    sbx_prob: float = 1.0
    mutation_eta: float = 20.0
    mutation_prob: Optional[float] = None

    def __post_init__(self) -> None:
        if self.population_size < 4 or self.population_size % 2 != 0:
            raise ValueError(f"population_size must be even and >= 4, got {self.population_size}")
        if self.generations < 1:
            raise ValueError(f"generations must be >= 1, got {self.generations}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        if self.sbx_eta <= 0 or self.mutation_eta <= 0:
            raise ValueError("distribution indices must be positive")
        if not 0.0 <= self.sbx_prob <= 1.0:
            raise ValueError(f"sbx_prob must be in [0, 1], got {self.sbx_prob}")
        if self.mutation_prob is not None and not 0.0 <= self.mutation_prob <= 1.0:
            raise ValueError(f"mutation_prob must be in [0, 1], got {self.mutation_prob}")


def generation_stream(seed: int, generation: int) -> np.random.Generator:
    """Per-generation PCG64 stream; the documented splitting rule."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(generation,))))


def ranks_from_dominance(dom: np.ndarray) -> np.ndarray:
    """Peel non-domination fronts off a precomputed dominance matrix."""
    counts = dom.sum(axis=0).astype(np.int64)
    ranks = np.full(dom.shape[0], -1, dtype=np.int64)
    r = 0
    while True:
        front = np.nonzero((counts == 0) & (ranks < 0))[0]
        if front.size == 0:
            break
        ranks[front] = r
        counts -= dom[front].sum(axis=0)
        r += 1
    return ranks


def nondomination_ranks(F: np.ndarray) -> np.ndarray:
    """0-based non-domination rank per row (rank 0 = non-dominated)."""
    return ranks_from_dominance(dominance_matrix(F))


def crowding_distance(F: np.ndarray) -> np.ndarray:
    """NSGA-II crowding distance within one front; boundary points get inf."""
    s, m = F.shape
    if s <= 2:
        return np.full(s, np.inf)
    dist = np.zeros(s)
    for j in range(m):
        order = np.argsort(F[:, j], kind="stable")
        fj = F[order, j]
        dist[order[0]] = np.inf
        dist[order[-1]] = np.inf
        span = fj[-1] - fj[0]
        if span == 0:
            continue
        dist[order[1:-1]] += (fj[2:] - fj[:-2]) / span
    return dist


def _rank_and_crowding(F: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    ranks = nondomination_ranks(F)
    crowd = np.empty(F.shape[0])
    for r in range(int(ranks.max()) + 1):
        members = np.nonzero(ranks == r)[0]
        crowd[members] = crowding_distance(F[members])
    return ranks, crowd


def _tournament(rng: np.random.Generator, ranks, crowd, n_picks: int) -> np.ndarray:
    n = len(ranks)
    a = rng.integers(0, n, n_picks)
    b = rng.integers(0, n, n_picks)
    a_wins = (ranks[a] < ranks[b]) | (
        (ranks[a] == ranks[b]) & ((crowd[a] > crowd[b]) | ((crowd[a] == crowd[b]) & (a <= b)))
    )
    return np.where(a_wins, a, b)


def _sbx(rng, P1, P2, eta, prob_pair, lower, upper):
    npairs, d = P1.shape
    gate_pair = rng.random(npairs) <= prob_pair
    gate_var = rng.random((npairs, d)) <= 0.5
    u = rng.random((npairs, d))
    exp = 1.0 / (eta + 1.0)
    beta = np.where(u <= 0.5, (2.0 * u) ** exp, (1.0 / (2.0 * (1.0 - u))) ** exp)
    c1 = 0.5 * ((1.0 + beta) * P1 + (1.0 - beta) * P2)
    c2 = 0.5 * ((1.0 - beta) * P1 + (1.0 + beta) * P2)
    apply = gate_pair[:, None] & gate_var
    C1 = np.where(apply, c1, P1)
    C2 = np.where(apply, c2, P2)
    return np.clip(C1, lower, upper), np.clip(C2, lower, upper)


def _polynomial_mutation(rng, X, eta, prob, lower, upper):
    gate = rng.random(X.shape) <= prob
    u = rng.random(X.shape)
    span = upper - lower
    d1 = (X - lower) / span
    d2 = (upper - X) / span
    exp = 1.0 / (eta + 1.0)
    low = (2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1) ** (eta + 1.0)) ** exp - 1.0
    high = 1.0 - (2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2) ** (eta + 1.0)) ** exp
    delta = np.where(u <= 0.5, low, high)
    X_new = np.where(gate, X + delta * span, X)
    return np.clip(X_new, lower, upper)


def environmental_select(F_union: np.ndarray, target: int) -> np.ndarray:
    """(mu+lambda) survivor indices: whole fronts by rank, boundary by crowding.

    Returns indices into the union, ordered front by front; the truncated
    boundary front is ordered by descending crowding with ties going to the
    lower index.  Deterministic for fixed input.
    """
    ranks = nondomination_ranks(F_union)
    selected: list[np.ndarray] = []
    taken = 0
    for r in range(int(ranks.max()) + 1):
        members = np.nonzero(ranks == r)[0]
        if taken + members.size <= target:
            selected.append(members)
            taken += members.size
            if taken == target:
                break
        else:
            crowd = crowding_distance(F_union[members])
            order = np.lexsort((members, -crowd))
            selected.append(members[order[: target - taken]])
            break
    return np.concatenate(selected)


# --- exact hypervolume contributions (engine-internal fast path) -----------
#
# Computes, for a mutually non-dominated set, the volume each point covers
# exclusively inside [point, anchor].  2-D reduces to neighbor rectangles;
# 3-D uses a sweep along the third objective maintaining the 2-D staircase
# with per-point exclusive rectangles.  This route is intentionally distinct
# from the WFG slicing in the measures module, which serves as its oracle.


def _contrib_2d(P: np.ndarray, anchor: np.ndarray) -> np.ndarray:
    uniq, inverse, counts = np.unique(P, axis=0, return_inverse=True, return_counts=True)
    xs = uniq[:, 0]
    ys = uniq[:, 1]
    right = np.append(xs[1:], anchor[0])
    upper_y = np.concatenate(([anchor[1]], ys[:-1]))
    rect = (right - xs) * (upper_y - ys)
    rect = np.where(counts == 1, rect, 0.0)  # duplicated points cover nothing alone
    return rect[inverse]


def _excl_rect_area(x: float, y: float, X: float, Y: float, shadow: list) -> float:
    # rectangle [x, X) x [y, Y) minus the union of shadow quadrants [sx, r1) x [sy, r2)
    # clipped to the rectangle; shadow corners are x-ascending / y-descending
    area = (X - x) * (Y - y)
    prev_y = Y
    for sx, sy in shadow:
        if sx >= X:
            break
        if sy >= prev_y:
            continue
        area -= (X - sx) * (prev_y - sy)
        prev_y = sy
    return area


def _contrib_3d(P: np.ndarray, anchor: np.ndarray) -> np.ndarray:
    n = P.shape[0]
    r1, r2, r3 = float(anchor[0]), float(anchor[1]), float(anchor[2])
    order = np.lexsort((P[:, 1], P[:, 0], P[:, 2]))
    acc = np.zeros(n)
    # staircase kept sorted by x ascending (hence y descending); a point that
    # 2-D-dominated others on insertion keeps their corners as its "shadow":
    # those points still exist at higher z and shade parts of its rectangle
    xs: list[float] = []
    ys: list[float] = []
    owners: list[int] = []
    areas: list[float] = []
    zlast: list[float] = []
    shadows: list[list] = []
    dead: list[bool] = []

    def flush(pos: int, z: float) -> None:
        acc[owners[pos]] += areas[pos] * (z - zlast[pos])
        zlast[pos] = z

    def neighbor_bounds(pos: int) -> tuple[float, float]:
        X = xs[pos + 1] if pos + 1 < len(xs) else r1
        Y = ys[pos - 1] if pos > 0 else r2
        return X, Y

    def refresh(pos: int) -> None:
        if dead[pos]:
            areas[pos] = 0.0
            return
        X, Y = neighbor_bounds(pos)
        areas[pos] = _excl_rect_area(xs[pos], ys[pos], X, Y, shadows[pos])

    for t in order:
        x, y, z = float(P[t, 0]), float(P[t, 1]), float(P[t, 2])
        pos = bisect_left(xs, x)
        if pos > 0 and ys[pos - 1] <= y:
            continue  # covered from the left: zero exclusive volume
        if pos < len(xs) and xs[pos] == x and ys[pos] <= y:
            if ys[pos] == y:
                # exact duplicate column: incumbent stops being exclusive here
                flush(pos, z)
                dead[pos] = True
                areas[pos] = 0.0
            continue
        # remove staircase points weakly dominated by (x, y); they remain in
        # the set, so their corners become the newcomer's shadow
        j = pos
        shadow = []
        while j < len(xs) and ys[j] >= y:
            flush(j, z)
            shadow.append((xs[j], ys[j]))
            j += 1
        if j > pos:
            del xs[pos:j], ys[pos:j], owners[pos:j], areas[pos:j], zlast[pos:j]
            del shadows[pos:j], dead[pos:j]
        xs.insert(pos, x)
        ys.insert(pos, y)
        owners.insert(pos, t)
        areas.insert(pos, 0.0)
        zlast.insert(pos, z)
        shadows.insert(pos, shadow)
        dead.insert(pos, False)
        refresh(pos)
        if pos > 0:
            flush(pos - 1, z)
            refresh(pos - 1)
        if pos + 1 < len(xs):
            flush(pos + 1, z)
            refresh(pos + 1)

    for pos in range(len(xs)):
        flush(pos, r3)
    return acc


def hv_contributions(F: np.ndarray, anchor) -> np.ndarray:
    """Exclusive hypervolume contribution of every row of F.

    F must be mutually non-dominated (one front).  Points that do not
    strictly dominate the anchor contribute zero.  Exact for m in {2, 3};
    higher dimensions fall back to leave-one-out WFG slicing.
    """
    F = np.asarray(F, dtype=np.float64)
    anchor = np.asarray(anchor, dtype=np.float64)
    n, m = F.shape
    contrib = np.zeros(n)
    mask = np.all(F < anchor, axis=1)
    if not mask.any():
        return contrib
    P = F[mask]
    if m == 2:
        contrib[mask] = _contrib_2d(P, anchor)
    elif m == 3:
        contrib[mask] = _contrib_3d(P, anchor)
    else:
        from .core import SolutionSet as _SS
        from .measures import MeasureConfig, hypervolume

        cfg = MeasureConfig(hv_anchor=anchor)
        total = hypervolume(_SS(objectives=P), cfg)
        vals = np.empty(P.shape[0])
        for i in range(P.shape[0]):
            rest = np.delete(P, i, axis=0)
            vals[i] = total if rest.shape[0] == 0 else total - hypervolume(_SS(objectives=rest), cfg)
        contrib[mask] = vals
    return contrib


def contribution_anchor(front: np.ndarray) -> np.ndarray:
    """Anchor used for steady-state removal: front maximum + 1 per objective."""
    return front.max(axis=0) + 1.0


def _initial_population(problem: BenchmarkProblem, cfg: EvolutionConfig):
    lower, upper = problem.meta.lower, problem.meta.upper
    rng = generation_stream(cfg.seed, 0)
    X = lower + rng.random((cfg.population_size, problem.meta.d)) * (upper - lower)
    return X, problem.evaluate_batch(X)


def _record(gen_index: int, X: np.ndarray, F: np.ndarray) -> GenerationRecord:
    return GenerationRecord(index=gen_index, solutions=SolutionSet(objectives=F, decisions=X))


def _make_run(problem, algorithm_id, records) -> AlgorithmRun:
    return AlgorithmRun(
        algorithm_id=algorithm_id,
        problem=problem.meta.name,
        m=problem.meta.m,
        d=problem.meta.d,
        generations=tuple(records),
        source="builtin",
    )


def run_nsga2(problem: BenchmarkProblem, cfg: EvolutionConfig, algorithm_id: str = "nsga2") -> AlgorithmRun:
    """NSGA-II: binary tournament on (rank, crowding), SBX, polynomial mutation,
    (mu+lambda) environmental selection.  Deterministic for a fixed seed."""
    lower, upper = problem.meta.lower, problem.meta.upper
    mut_prob = cfg.mutation_prob if cfg.mutation_prob is not None else 1.0 / problem.meta.d
    X, F = _initial_population(problem, cfg)
    records = [_record(0, X, F)]
    ranks, crowd = _rank_and_crowding(F)
    n = cfg.population_size
    for g in range(1, cfg.generations):
        rng = generation_stream(cfg.seed, g)
        parents = _tournament(rng, ranks, crowd, n)
        P1, P2 = X[parents[0::2]], X[parents[1::2]]
        C1, C2 = _sbx(rng, P1, P2, cfg.sbx_eta, cfg.sbx_prob, lower, upper)
        Q = np.vstack([C1, C2])
        Q = _polynomial_mutation(rng, Q, cfg.mutation_eta, mut_prob, lower, upper)
        FQ = problem.evaluate_batch(Q)
        XU = np.vstack([X, Q])
        FU = np.vstack([F, FQ])
        keep = environmental_select(FU, n)
        X, F = XU[keep], FU[keep]
        ranks, crowd = _rank_and_crowding(F)
        records.append(_record(g, X, F))
    return _make_run(problem, algorithm_id, records)


def run_sms_emoa(problem: BenchmarkProblem, cfg: EvolutionConfig, algorithm_id: str = "sms-emoa") -> AlgorithmRun:
    """Steady-state engine: every step adds one offspring and removes the
    worst-rank member with the least hypervolume contribution (anchor = front
    maximum + 1; ties to the lower index).  One generation record is emitted
    per population_size steps."""
    lower, upper = problem.meta.lower, problem.meta.upper
    mut_prob = cfg.mutation_prob if cfg.mutation_prob is not None else 1.0 / problem.meta.d
    X, F = _initial_population(problem, cfg)
    records = [_record(0, X, F)]
    n = cfg.population_size
    dom = dominance_matrix(F)  # maintained incrementally across steps
    for g in range(1, cfg.generations):
        rng = generation_stream(cfg.seed, g)
        for _ in range(n):
            ranks = ranks_from_dominance(dom)
            crowd = np.empty(n)
            for r in range(int(ranks.max()) + 1):
                members = np.nonzero(ranks == r)[0]
                crowd[members] = crowding_distance(F[members])
            parents = _tournament(rng, ranks, crowd, 2)
            C1, _ = _sbx(rng, X[parents[0]][None, :], X[parents[1]][None, :], cfg.sbx_eta, cfg.sbx_prob, lower, upper)
            child = _polynomial_mutation(rng, C1, cfg.mutation_eta, mut_prob, lower, upper)
            f_child = problem.evaluate_batch(child)[0]
            XU = np.vstack([X, child])
            FU = np.vstack([F, f_child])
            dom_u = np.zeros((n + 1, n + 1), dtype=bool)
            dom_u[:n, :n] = dom
            le = np.all(F <= f_child, axis=1)
            eq = np.all(F == f_child, axis=1)
            dom_u[:n, n] = le & ~eq
            ge = np.all(F >= f_child, axis=1)
            dom_u[n, :n] = ge & ~eq
            union_ranks = ranks_from_dominance(dom_u)
            worst = np.nonzero(union_ranks == union_ranks.max())[0]
            front = FU[worst]
            contribs = hv_contributions(front, contribution_anchor(front))
            drop = worst[int(np.argmin(contribs))]
            keep = np.concatenate([np.arange(drop), np.arange(drop + 1, n + 1)])
            X, F = XU[keep], FU[keep]
            dom = dom_u[np.ix_(keep, keep)]
        records.append(_record(g, X, F))
    return _make_run(problem, algorithm_id, records)
