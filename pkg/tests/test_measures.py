import numpy as np
import pytest

from emoscope.core import AlgorithmRun, GenerationRecord, ReferenceSet, SolutionSet
from emoscope.measures import (
    MeasureConfig,
    default_anchor,
    hypervolume,
    igd,
    maximum_spread,
    measure_run,
    spacing,
)


def igd_double_loop(S, P):
    """Naive oracle: mean over reference points of the min Euclidean distance."""
    total = 0.0
    for r in P:
        best = min(float(np.linalg.norm(r - x)) for x in S)
        total += best
    return total / len(P)


def hv_monte_carlo_oracle(F, anchor, n_samples, seed):
    rng = np.random.default_rng(seed)
    lower = F.min(axis=0)
    box = float(np.prod(anchor - lower))
    U = lower + rng.random((n_samples, F.shape[1])) * (anchor - lower)
    dominated = np.zeros(n_samples, dtype=bool)
    for p in F:
        dominated |= np.all(p <= U, axis=1)
    p_hat = dominated.mean()
    se = box * np.sqrt(p_hat * (1 - p_hat) / n_samples)
    return box * p_hat, se


class TestIgd:
    def test_identical_sets_zero(self):
        pts = [[0.0, 1.0], [1.0, 0.0], [0.5, 0.5]]
        prof = igd(SolutionSet(objectives=pts), ReferenceSet(points=pts))
        assert prof.mean == 0.0

    def test_single_distance(self):
        prof = igd(SolutionSet(objectives=[[3.0, 4.0]]), ReferenceSet(points=[[0.0, 0.0]]))
        assert prof.mean == 5.0

    def test_two_reference_points(self):
        # raw-array reference: (0,0) dominates (2,0), so it cannot be a
        # validated ReferenceSet, but the measure is still defined
        prof = igd(np.array([[1.0, 0.0]]), np.array([[0.0, 0.0], [2.0, 0.0]]))
        assert prof.mean == 1.0
        assert prof.distances.tolist() == [1.0, 1.0]

    def test_double_loop_oracle_100_cases(self):
        rng = np.random.default_rng(10)
        for _ in range(100):
            m = int(rng.integers(2, 5))
            S = rng.random((int(rng.integers(1, 15)), m))
            # reference: non-dominated filter of random points
            from emoscope.core import non_dominated_mask

            P = rng.random((int(rng.integers(1, 15)), m))
            P = P[non_dominated_mask(P)]
            prof = igd(SolutionSet(objectives=S), ReferenceSet(points=P))
            assert abs(prof.mean - igd_double_loop(S, P)) < 1e-12

    def test_profile_mean_matches_distances(self):
        rng = np.random.default_rng(11)
        S = rng.random((20, 3))
        P = ReferenceSet(points=[[0.1, 0.1, 0.9], [0.9, 0.1, 0.1]])
        prof = igd(SolutionSet(objectives=S), P)
        assert abs(prof.mean - prof.distances.mean()) < 1e-12

    def test_monotone_under_addition(self):
        rng = np.random.default_rng(12)
        P = ReferenceSet(points=[[0.0, 1.0], [1.0, 0.0]])
        for _ in range(30):
            S = rng.random((8, 2))
            x = rng.random(2)
            before = igd(SolutionSet(objectives=S), P).mean
            after = igd(SolutionSet(objectives=np.vstack([S, x])), P).mean
            assert after <= before + 1e-15

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            igd(SolutionSet(objectives=[[1.0, 2.0]]), ReferenceSet(points=[[1.0, 2.0, 3.0]]))


class TestHypervolume:
    def test_two_point_inclusion_exclusion(self):
        cfg = MeasureConfig(hv_anchor=[3.0, 3.0])
        assert hypervolume(SolutionSet(objectives=[[1, 2], [2, 1]]), cfg) == 3.0

    def test_unit_box(self):
        cfg = MeasureConfig(hv_anchor=[1.0, 1.0])
        assert hypervolume(SolutionSet(objectives=[[0.0, 0.0]]), cfg) == 1.0

    def test_points_outside_anchor_contribute_zero(self):
        cfg = MeasureConfig(hv_anchor=[1.0, 1.0])
        assert hypervolume(SolutionSet(objectives=[[2.0, 2.0]]), cfg) == 0.0
        assert hypervolume(SolutionSet(objectives=[[0.5, 1.0]]), cfg) == 0.0  # boundary is not strict

    def test_exact_matches_monte_carlo_20_cases_3d(self):
        rng = np.random.default_rng(13)
        cfg_anchor = np.array([2.0, 2.0, 2.0])
        for case in range(20):
            F = rng.random((10, 3)) * 1.8
            exact = hypervolume(SolutionSet(objectives=F), MeasureConfig(hv_anchor=cfg_anchor))
            mc, se = hv_monte_carlo_oracle(F, cfg_anchor, 1_000_000, seed=2000 + case)
            assert abs(exact - mc) <= 3 * se + 1e-12

    def test_4d_wfg_against_monte_carlo(self):
        rng = np.random.default_rng(14)
        anchor = np.array([1.5] * 4)
        F = rng.random((8, 4))
        exact = hypervolume(SolutionSet(objectives=F), MeasureConfig(hv_anchor=anchor))
        mc, se = hv_monte_carlo_oracle(F, anchor, 1_000_000, seed=77)
        assert abs(exact - mc) <= 3 * se + 1e-12

    def test_monte_carlo_path_for_high_dims(self):
        rng = np.random.default_rng(15)
        anchor = np.array([1.5] * 5)
        F = rng.random((6, 5))
        cfg = MeasureConfig(hv_anchor=anchor, hv_mc_samples=200_000, mc_seed=3)
        est = hypervolume(SolutionSet(objectives=F), cfg)
        mc, se = hv_monte_carlo_oracle(F, anchor, 1_000_000, seed=99)
        assert abs(est - mc) <= 5 * se + 5e-3
        # deterministic for a fixed seed
        assert est == hypervolume(SolutionSet(objectives=F), cfg)

    def test_monotone_under_addition(self):
        rng = np.random.default_rng(16)
        cfg = MeasureConfig(hv_anchor=[1.5, 1.5, 1.5])
        for _ in range(20):
            F = rng.random((6, 3))
            x = rng.random(3)
            before = hypervolume(SolutionSet(objectives=F), cfg)
            after = hypervolume(SolutionSet(objectives=np.vstack([F, x])), cfg)
            assert after >= before - 1e-12

    def test_strictly_increasing_for_new_non_dominated_point(self):
        cfg = MeasureConfig(hv_anchor=[2.0, 2.0])
        F = np.array([[1.0, 0.5], [0.5, 1.0]])
        before = hypervolume(SolutionSet(objectives=F), cfg)
        after = hypervolume(SolutionSet(objectives=np.vstack([F, [0.6, 0.6]])), cfg)
        assert after > before

    def test_invariant_to_dominated_points(self):
        rng = np.random.default_rng(17)
        cfg = MeasureConfig(hv_anchor=[2.0, 2.0, 2.0])
        F = rng.random((8, 3))
        hv = hypervolume(SolutionSet(objectives=F), cfg)
        dominated = F[0] + 0.05  # strictly worse everywhere
        hv2 = hypervolume(SolutionSet(objectives=np.vstack([F, dominated])), cfg)
        assert abs(hv - hv2) < 1e-12


class TestSpacingAndSpread:
    def test_equally_spaced_collinear_zero(self):
        assert spacing(SolutionSet(objectives=[[0, 0], [1, 0], [2, 0]])) == 0.0

    def test_hand_derived_value(self):
        # d = (1, 1, 2), mean 4/3 -> sqrt(1/3)
        val = spacing(SolutionSet(objectives=[[0, 0], [1, 0], [3, 0]]))
        assert abs(val - np.sqrt(1.0 / 3.0)) < 1e-12

    def test_singleton_zero_by_convention(self):
        assert spacing(SolutionSet(objectives=[[4, 2]])) == 0.0

    def test_nearest_neighbor_oracle(self):
        rng = np.random.default_rng(18)
        for _ in range(20):
            F = rng.random((12, 3))
            d = []
            for i in range(len(F)):
                d.append(min(np.linalg.norm(F[i] - F[j]) for j in range(len(F)) if j != i))
            d = np.array(d)
            expected = np.sqrt(np.sum((d.mean() - d) ** 2) / (len(F) - 1))
            assert abs(spacing(SolutionSet(objectives=F)) - expected) < 1e-12

    def test_duplicates_tolerated(self):
        assert spacing(SolutionSet(objectives=[[1, 1], [1, 1], [2, 2]])) >= 0.0

    def test_spread_examples(self):
        assert abs(maximum_spread(SolutionSet(objectives=[[0, 0], [1, 1]])) - np.sqrt(2)) < 1e-15
        assert maximum_spread(SolutionSet(objectives=[[7, 7]])) == 0.0
        assert abs(maximum_spread(SolutionSet(objectives=[[0, 0], [1, 0], [0, 2]])) - np.sqrt(5)) < 1e-15

    def test_spread_zero_iff_identical(self):
        assert maximum_spread(SolutionSet(objectives=[[1, 2], [1, 2]])) == 0.0
        assert maximum_spread(SolutionSet(objectives=[[1, 2], [1, 2.1]])) > 0.0


def _run_from_sets(sets):
    gens = tuple(
        GenerationRecord(index=i, solutions=SolutionSet(objectives=s)) for i, s in enumerate(sets)
    )
    return AlgorithmRun(algorithm_id="test", problem="p", m=len(sets[0][0]), generations=gens)


class TestMeasureRun:
    def test_constant_run_constant_series(self):
        pts = [[0.2, 0.8], [0.8, 0.2]]
        run = _run_from_sets([pts, pts, pts])
        P = ReferenceSet(points=[[0.0, 1.0], [1.0, 0.0]])
        series = measure_run(run, P, MeasureConfig(hv_anchor=[2.0, 2.0]))
        assert np.all(series.igd == series.igd[0])
        assert series.best_igd_gen == 0 and series.best_hv_gen == 0
        assert series.best_sp_gen == 0 and series.best_ms_gen == 0

    def test_best_matches_recomputation_oracle(self):
        rng = np.random.default_rng(19)
        sets = [rng.random((10, 2)) for _ in range(8)]
        run = _run_from_sets(sets)
        P = ReferenceSet(points=[[0.0, 1.0], [0.5, 0.5], [1.0, 0.0]])
        cfg = MeasureConfig(hv_anchor=[2.0, 2.0])
        series = measure_run(run, P, cfg)
        per_gen = [igd(SolutionSet(objectives=s), P).mean for s in sets]
        assert series.igd.tolist() == per_gen
        assert series.best_igd_gen == int(np.argmin(per_gen))
        assert series.igd.min() == min(per_gen)

    def test_series_align_with_generations(self):
        rng = np.random.default_rng(20)
        sets = [rng.random((5, 2)) for _ in range(7)]
        run = _run_from_sets(sets)
        P = ReferenceSet(points=[[0.0, 0.0]])
        series = measure_run(run, P, MeasureConfig(hv_anchor=[2.0, 2.0]))
        assert len(series) == 7
        assert series.gen_indices.tolist() == list(range(7))

    def test_profiles_kept_for_best_and_last(self):
        rng = np.random.default_rng(21)
        sets = [rng.random((6, 2)) for _ in range(5)]
        run = _run_from_sets(sets)
        P = ReferenceSet(points=[[0.0, 1.0], [1.0, 0.0]])
        series = measure_run(run, P, MeasureConfig(hv_anchor=[2.0, 2.0]))
        assert series.best_igd_gen in series.igd_profiles
        assert 4 in series.igd_profiles
        prof = series.igd_profiles[series.best_igd_gen]
        assert abs(prof.mean - series.igd.min()) < 1e-12

    def test_default_anchor_rule(self):
        P = ReferenceSet(points=[[0.0, 1.0], [1.0, 0.0]])
        assert default_anchor(P).tolist() == [1.1, 1.1]
