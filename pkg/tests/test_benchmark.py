"""Metrics, grid search, and the multi-trial benchmark runner."""

import numpy as np
import pytest

from hullknn.benchmark import (
    ClassifierSpec,
    EvalReport,
    accuracy,
    confusion_matrix,
    error_rates,
    grid_search,
    run_benchmark,
)
from hullknn.dataset import Dataset
from hullknn.rng import derive_seed
from oracles import enclosing_corners


def separable(seed=0, n_per=25):
    rng = np.random.default_rng(seed)
    X = np.vstack(
        [rng.normal((-3.0, 0.0), 0.6, (n_per, 2)), rng.normal((3.0, 0.0), 0.6, (n_per, 2))]
    )
    return Dataset("sep", X, np.repeat([0, 1], n_per))


def random_labels(seed=1, n=200):
    rng = np.random.default_rng(seed)
    return Dataset("noise", rng.normal(size=(n, 2)), rng.integers(0, 2, n).astype(np.int64))


class TestMetrics:
    def test_accuracy_worked_examples(self):
        truth = np.zeros(21, dtype=int)
        predicted = truth.copy()
        predicted[:3] = 1
        assert accuracy(predicted, truth) == pytest.approx(18 / 21)  # 85.71%
        truth = np.zeros(14, dtype=int)
        predicted = truth.copy()
        predicted[:5] = 1
        assert accuracy(predicted, truth) == pytest.approx(9 / 14)  # 64.29%

    def test_accuracy_validation(self):
        with pytest.raises(ValueError):
            accuracy([0, 1], [0])
        with pytest.raises(ValueError):
            accuracy([], [])

    def test_confusion_matrix(self):
        m = confusion_matrix([0, 1, 1, 2, 0], [0, 1, 2, 2, 1], n_classes=3)
        assert m.tolist() == [[1, 0, 0], [1, 1, 0], [0, 1, 1]]
        assert m.sum() == 5


class TestClassifierSpec:
    def test_validation(self):
        with pytest.raises(ValueError):
            ClassifierSpec(kind="forest")
        with pytest.raises(ValueError):
            ClassifierSpec(kind="knn")  # no k
        with pytest.raises(ValueError):
            ClassifierSpec(kind="hull-knn", k=3)  # no threshold
        with pytest.raises(ValueError):
            ClassifierSpec(kind="svm")  # no gamma

    def test_params_mask_inapplicable_fields(self):
        knn = ClassifierSpec(kind="knn", k=5)
        assert knn.params == {"k": 5, "threshold": None, "gamma": None}
        svm = ClassifierSpec(kind="svm", gamma=0.25)
        assert svm.params["gamma"] == 0.25 and svm.params["k"] is None
        hull = ClassifierSpec(kind="hull-knn", k=3, threshold=2.0)
        assert hull.params["threshold"] == 2.0


class TestErrorRates:
    def test_classic_k1_train_error_is_zero(self):
        ds = separable()
        tr, val = error_rates(ClassifierSpec(kind="knn", k=1), ds, ds)
        assert tr == 0.0 and val == 0.0

    def test_validation(self):
        ds = separable()
        empty = Dataset("e", np.empty((0, 2)), np.empty(0, dtype=np.int64))
        with pytest.raises(ValueError):
            error_rates(ClassifierSpec(kind="knn", k=1), ds, empty)


class TestGridSearch:
    def test_ties_prefer_smaller_k_then_smaller_threshold(self):
        ds = separable()
        train, val = ds.subset(range(0, 50, 2)), ds.subset(range(1, 50, 2))
        result = grid_search(train, val, k_grid=[5, 3], t_grid=[2.0, 1.0], kind="knn")
        errors = {cell[3] for cell in result.grid}
        assert errors == {0.0}  # trivially separable: every cell ties
        assert result.best == (3, 1.0)

    def test_grid_matches_cell_by_cell_oracle(self):
        ds = separable(seed=4)
        train, val = ds.subset(range(0, 50, 2)), ds.subset(range(1, 50, 2))
        k_grid, t_grid = [1, 3], [0.5, 2.0, 8.0]
        result = grid_search(train, val, k_grid, t_grid, base_seed=6)
        assert len(result.grid) == 6
        for ik, k in enumerate(k_grid):
            for it, t in enumerate(t_grid):
                spec = ClassifierSpec(kind="hull-knn", k=k, threshold=t)
                seed = derive_seed(6, ik * len(t_grid) + it)
                want = error_rates(spec, train, val, seed)
                cell = result.grid[ik * len(t_grid) + it]
                assert cell == (k, t, want[0], want[1])
        best_by_hand = min(result.grid, key=lambda c: (c[3], c[0], c[1]))
        assert result.best == (best_by_hand[0], best_by_hand[1])

    def test_validation(self):
        ds = separable()
        with pytest.raises(ValueError):
            grid_search(ds, ds, [], [1.0])


class TestRunBenchmark:
    def test_report_invariants(self):
        ds = separable(seed=2)
        reports = run_benchmark(
            ds, [ClassifierSpec(kind="knn", k=3)], trials=4, test_fraction=0.2, base_seed=1
        )
        (r,) = reports
        assert r.test_size == 4 * 10
        assert r.accuracy == np.trace(r.confusion) / r.test_size
        assert r.confusion.sum() == r.test_size
        assert len(r.trials) == 4
        assert r.min_accuracy <= r.mean_accuracy <= r.max_accuracy

    def test_same_inputs_same_reports(self):
        ds = separable(seed=3)
        specs = [
            ClassifierSpec(kind="hull-knn", k=3, threshold=2.0),
            ClassifierSpec(kind="knn", k=3),
            ClassifierSpec(kind="svm", gamma=0.5),
        ]
        a = run_benchmark(ds, specs, trials=3, test_fraction=0.2, base_seed=7)
        b = run_benchmark(ds, specs, trials=3, test_fraction=0.2, base_seed=7)
        assert [r.to_dict() for r in a] == [r.to_dict() for r in b]

    def test_workers_do_not_change_results(self):
        ds = separable(seed=8)
        specs = [
            ClassifierSpec(kind="hull-knn", k=3, threshold=2.0),
            ClassifierSpec(kind="knn", k=3),
        ]
        seq = run_benchmark(ds, specs, trials=6, test_fraction=0.2, base_seed=5)
        par = run_benchmark(ds, specs, trials=6, test_fraction=0.2, base_seed=5, workers=4)
        assert [r.to_dict() for r in seq] == [r.to_dict() for r in par]

    def test_all_enclosing_override_ties_hull_to_classic(self):
        """Same trial, same split: an open gate must reproduce classic k-NN."""
        ds = separable(seed=9)
        corners = enclosing_corners(ds.features, pad=5.0)
        specs = [
            ClassifierSpec(kind="hull-knn", k=3, threshold=1.0, hull_override=corners),
            ClassifierSpec(kind="knn", k=3),
        ]
        hull_r, knn_r = run_benchmark(ds, specs, trials=3, test_fraction=0.2, base_seed=2)
        assert hull_r.trials == knn_r.trials
        assert np.array_equal(hull_r.confusion, knn_r.confusion)
        assert hull_r.in_hull_neighbor_deficit == 0.0

    def test_random_labels_score_near_chance(self):
        ds = random_labels()
        (r,) = run_benchmark(
            ds, [ClassifierSpec(kind="knn", k=1)], trials=20, test_fraction=0.1, base_seed=3
        )
        assert abs(r.mean_accuracy - 0.5) < 0.15

    def test_iris_classic_k10_mean_accuracy(self, iris):
        (r,) = run_benchmark(
            iris, [ClassifierSpec(kind="knn", k=10)], trials=30, test_fraction=0.1, base_seed=0
        )
        assert r.mean_accuracy >= 0.90

    def test_deficit_rises_when_threshold_shrinks(self):
        ds = separable(seed=12)
        out = {}
        for t in (0.4, 6.0):
            (r,) = run_benchmark(
                ds,
                [ClassifierSpec(kind="hull-knn", k=3, threshold=t)],
                trials=30,
                test_fraction=0.25,
                base_seed=4,
            )
            out[t] = r.in_hull_neighbor_deficit
        assert out[0.4] > out[6.0]

    def test_validation(self):
        ds = separable()
        with pytest.raises(ValueError):
            run_benchmark(ds, [], trials=1)
        with pytest.raises(ValueError):
            run_benchmark(ds, [ClassifierSpec(kind="knn", k=1)], trials=0)


class TestEvalReport:
    def test_round_trip(self):
        r = EvalReport(
            classifier_id="knn",
            params={"k": 3, "threshold": None, "gamma": None},
            accuracy=0.9,
            confusion=np.array([[9, 1], [1, 9]], dtype=np.int64),
            test_size=20,
            seed=11,
            trials=[0.9, 0.9],
            in_hull_neighbor_deficit=None,
        )
        back = EvalReport.from_dict(r.to_dict())
        assert back.to_dict() == r.to_dict()
        assert back.confusion.dtype == np.int64

    def test_single_trial_stats_fall_back_to_accuracy(self):
        r = EvalReport("knn", {}, 0.75, np.eye(2, dtype=np.int64), 4, 0, trials=[])
        assert r.mean_accuracy == r.min_accuracy == r.max_accuracy == 0.75
