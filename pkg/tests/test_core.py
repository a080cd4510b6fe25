import numpy as np
import pytest

from emoscope.core import (
    AlgorithmRun,
    GenerationRecord,
    ProblemMeta,
    ReferenceSet,
    SolutionSet,
    dominates,
    non_dominated_filter,
    non_dominated_mask,
)


def brute_force_non_dominated(F):
    """O(n^2) pairwise-check oracle."""
    n = len(F)
    keep = []
    for i in range(n):
        dominated = False
        for j in range(n):
            if j != i and dominates(F[j], F[i]):
                dominated = True
                break
        if not dominated:
            keep.append(i)
    return keep


class TestDominates:
    def test_strict_improvement(self):
        assert dominates((1, 1), (2, 2)) is True

    def test_incomparable_pair(self):
        assert dominates((1, 2), (2, 1)) is False

    def test_equality_is_not_dominance(self):
        assert dominates((1, 1), (1, 1)) is False

    def test_weak_improvement(self):
        assert dominates((1, 2), (1, 3)) is True

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            dominates((1, 2), (1, 2, 3))

    def test_irreflexive_antisymmetric_transitive(self):
        rng = np.random.default_rng(0)
        for _ in range(300):
            a, b, c = rng.random((3, 3))
            assert not dominates(a, a)
            assert not (dominates(a, b) and dominates(b, a))
            if dominates(a, b) and dominates(b, c):
                assert dominates(a, c)


class TestNonDominatedFilter:
    def test_dominated_point_removed(self):
        s = SolutionSet(objectives=[[1, 2], [2, 1], [2, 2]])
        out = non_dominated_filter(s)
        assert out.objectives.tolist() == [[1, 2], [2, 1]]

    def test_singleton(self):
        s = SolutionSet(objectives=[[5, 5]])
        assert non_dominated_filter(s).objectives.tolist() == [[5, 5]]

    def test_matches_brute_force_oracle(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            F = rng.random((20, 3))
            expected = brute_force_non_dominated(F)
            mask = non_dominated_mask(F)
            assert list(np.nonzero(mask)[0]) == expected

    def test_idempotent(self):
        rng = np.random.default_rng(2)
        s = SolutionSet(objectives=rng.random((30, 2)))
        once = non_dominated_filter(s)
        twice = non_dominated_filter(once)
        assert np.array_equal(once.objectives, twice.objectives)

    def test_removed_points_dominated_by_a_survivor(self):
        rng = np.random.default_rng(3)
        F = rng.random((25, 3))
        mask = non_dominated_mask(F)
        kept = F[mask]
        for x in F[~mask]:
            assert any(dominates(k, x) for k in kept)

    def test_duplicates_are_kept(self):
        s = SolutionSet(objectives=[[1, 2], [1, 2], [3, 3]])
        out = non_dominated_filter(s)
        assert out.objectives.tolist() == [[1, 2], [1, 2]]

    def test_order_preserved(self):
        s = SolutionSet(objectives=[[2, 1], [0.5, 3], [1, 2]])
        assert non_dominated_filter(s).objectives.tolist() == [[2, 1], [0.5, 3], [1, 2]]

    def test_decisions_filtered_alongside(self):
        s = SolutionSet(objectives=[[1, 2], [2, 2]], decisions=[[0.1, 0.2, 0.3], [0.4, 0.5, 0.6]])
        out = non_dominated_filter(s)
        assert out.decisions.tolist() == [[0.1, 0.2, 0.3]]


class TestTypes:
    def test_non_finite_objectives_rejected(self):
        with pytest.raises(ValueError):
            SolutionSet(objectives=[[1.0, np.nan]])
        with pytest.raises(ValueError):
            SolutionSet(objectives=[[np.inf, 1.0]])

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            SolutionSet(objectives=np.empty((0, 2)))

    def test_decision_cardinality_checked(self):
        with pytest.raises(ValueError):
            SolutionSet(objectives=[[1, 2], [3, 4]], decisions=[[0.0]])

    def test_objectives_frozen(self):
        s = SolutionSet(objectives=[[1, 2]])
        with pytest.raises(ValueError):
            s.objectives[0, 0] = 9.0

    def test_reference_set_rejects_dominated_points(self):
        with pytest.raises(ValueError):
            ReferenceSet(points=[[1, 1], [2, 2]])

    def test_problem_meta_invariants(self):
        with pytest.raises(ValueError):
            ProblemMeta(name="x", m=1)
        with pytest.raises(ValueError):
            ProblemMeta(name="x", m=3, d=2)
        meta = ProblemMeta(name="x", m=2, d=3, bounds=((0, 1), (0, 1), (0, 1)))
        assert meta.lower.tolist() == [0, 0, 0]

    def test_run_indices_strictly_increasing(self):
        g = lambda i: GenerationRecord(index=i, solutions=SolutionSet(objectives=[[1.0, 2.0]]))
        with pytest.raises(ValueError):
            AlgorithmRun(algorithm_id="a", problem="p", m=2, generations=(g(0), g(0)))
        run = AlgorithmRun(algorithm_id="a", problem="p", m=2, generations=(g(0), g(5)))
        assert run.indices == [0, 5]
        assert run.record_at(5).index == 5
        with pytest.raises(KeyError):
            run.record_at(3)
