"""Accuracy metrics, k/threshold grid search, and multi-trial benchmarks.

Single-split accuracies are seed-dependent, so the benchmark runner
repeats seeded stratified splits and reports per-trial accuracies plus
their mean/min/max.  Within one trial every classifier is evaluated on
the identical split; trial seeds and per-classifier seeds are derived
from the benchmark seed, so runs are reproducible and trials can execute
concurrently without changing any result.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset, minmax_scale, split
from .knn import KnnConfig, KnnModel
from .rng import derive_seed
from .svm import DEFAULT_C, predict_batch, train_svm

_KINDS = ("hull-knn", "knn", "svm")


@dataclass(frozen=True)
class ClassifierSpec:
    """One classifier configuration to benchmark.

    kind is "hull-knn" (gated), "knn" (classic), or "svm" (RBF baseline).
    hull_override is a diagnostic hook: a fixed point set used as the
    hyperstructure for every test instance instead of sampling one.
    """

    kind: str
    k: int | None = None
    threshold: float | None = None
    gamma: float | None = None
    C: float = DEFAULT_C
    point_count: int | None = None
    hull_only: bool = False
    ensure_enclosure: bool = False
    hull_override: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown classifier kind {self.kind!r}")
        if self.kind in ("knn", "hull-knn") and (self.k is None or self.k < 1):
            raise ValueError(f"{self.kind} requires k >= 1")
        if self.kind == "hull-knn" and self.threshold is None:
            raise ValueError("hull-knn requires a threshold")
        if self.kind == "svm" and (self.gamma is None or self.gamma <= 0):
            raise ValueError("svm requires gamma > 0")

    @property
    def params(self) -> dict:
        """Parameters relevant to this classifier (None where not applicable)."""
        p = {"k": None, "threshold": None, "gamma": None}
        if self.kind in ("knn", "hull-knn"):
            p["k"] = self.k
        if self.kind == "hull-knn":
            p["threshold"] = self.threshold
        if self.kind == "svm":
            p["gamma"] = self.gamma
            p["C"] = self.C
        return p


@dataclass
class EvalReport:
    """Aggregated evaluation of one classifier over one or more trials.

    confusion is pooled over trials (rows = truth, columns = predicted)
    and test_size counts all pooled predictions, so the invariant
    accuracy == trace(confusion) / test_size holds exactly.
    """

    classifier_id: str
    params: dict
    accuracy: float
    confusion: np.ndarray
    test_size: int
    seed: int
    trials: list[float] = field(default_factory=list)
    in_hull_neighbor_deficit: float | None = None

    @property
    def mean_accuracy(self) -> float:
        return float(np.mean(self.trials)) if self.trials else self.accuracy

    @property
    def min_accuracy(self) -> float:
        return float(np.min(self.trials)) if self.trials else self.accuracy

    @property
    def max_accuracy(self) -> float:
        return float(np.max(self.trials)) if self.trials else self.accuracy

    def to_dict(self) -> dict:
        return {
            "classifier_id": self.classifier_id,
            "params": dict(self.params),
            "accuracy": self.accuracy,
            "confusion": self.confusion.tolist(),
            "test_size": self.test_size,
            "seed": self.seed,
            "trials": list(self.trials),
            "in_hull_neighbor_deficit": self.in_hull_neighbor_deficit,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EvalReport":
        return cls(
            classifier_id=d["classifier_id"],
            params=dict(d["params"]),
            accuracy=d["accuracy"],
            confusion=np.asarray(d["confusion"], dtype=np.int64),
            test_size=d["test_size"],
            seed=d["seed"],
            trials=list(d["trials"]),
            in_hull_neighbor_deficit=d["in_hull_neighbor_deficit"],
        )


@dataclass
class GridResult:
    """All (k, threshold, train_error, validation_error) cells plus the winner."""

    grid: list[tuple[int, float, float, float]]
    best: tuple[int, float]


def accuracy(predicted, truth) -> float:
    predicted = np.asarray(predicted)
    truth = np.asarray(truth)
    if len(predicted) != len(truth):
        raise ValueError(f"length mismatch: {len(predicted)} vs {len(truth)}")
    if len(predicted) == 0:
        raise ValueError("cannot score zero predictions")
    return float(np.mean(predicted == truth))


def confusion_matrix(predicted, truth, n_classes: int) -> np.ndarray:
    predicted = np.asarray(predicted, dtype=np.int64)
    truth = np.asarray(truth, dtype=np.int64)
    m = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(m, (truth, predicted), 1)
    return m


def _evaluate(spec: ClassifierSpec, train: Dataset, test: Dataset, seed: int):
    """Fit spec on train, predict test; returns (labels, deficit or None)."""
    if spec.kind == "svm":
        model = train_svm(train, spec.gamma, spec.C, seed=seed)
        return predict_batch(model, test.features), None
    mode = "hull" if spec.kind == "hull-knn" else "classic"
    cfg = KnnConfig(
        k=spec.k,
        mode=mode,
        threshold=spec.threshold if mode == "hull" else 0.0,
        point_count=spec.point_count,
        base_seed=seed,
        hull_only=spec.hull_only,
        ensure_enclosure=spec.ensure_enclosure,
    )
    model = KnnModel(train, cfg)
    labels, in_hull = model.predict_detail(test.features, hull_override=spec.hull_override)
    deficit = float(np.mean(in_hull < spec.k)) if mode == "hull" else None
    return labels, deficit


def error_rates(spec: ClassifierSpec, train: Dataset, validation: Dataset, seed: int = 0):
    """(train_error, validation_error) for a model fit on train."""
    if len(train) == 0 or len(validation) == 0:
        raise ValueError("train and validation sets must be nonempty")
    if train.features.shape[1] != validation.features.shape[1]:
        raise ValueError("train/validation dimensionality mismatch")
    pred_train, _ = _evaluate(spec, train, train, seed)
    pred_val, _ = _evaluate(spec, train, validation, seed)
    return (
        1.0 - accuracy(pred_train, train.labels),
        1.0 - accuracy(pred_val, validation.labels),
    )


def grid_search(
    train: Dataset,
    validation: Dataset,
    k_grid,
    t_grid,
    base_seed: int = 0,
    kind: str = "hull-knn",
) -> GridResult:
    """Evaluate every (k, threshold) cell; pick the lowest validation error.

    Each cell gets its own derived seed keyed to its grid coordinates, so
    adding or reordering grid values does not perturb other cells' results.
    Ties go to the smaller k, then the smaller threshold.
    """
    k_grid = list(k_grid)
    t_grid = list(t_grid)
    if not k_grid or not t_grid:
        raise ValueError("k_grid and t_grid must be nonempty")
    grid = []
    for ik, k in enumerate(k_grid):
        for it, t in enumerate(t_grid):
            cell_seed = derive_seed(base_seed, ik * len(t_grid) + it)
            spec = ClassifierSpec(kind=kind, k=k, threshold=t)
            tr_err, val_err = error_rates(spec, train, validation, cell_seed)
            grid.append((k, t, tr_err, val_err))
    best = min(grid, key=lambda cell: (cell[3], cell[0], cell[1]))
    return GridResult(grid=grid, best=(best[0], best[1]))


def _run_trial(ds, classifiers, test_fraction, base_seed, t, scale=False):
    trial_seed = derive_seed(base_seed, t)
    sp = split(ds, test_fraction, trial_seed)
    if scale:
        sp = minmax_scale(sp)
    results = []
    for ci, spec in enumerate(classifiers):
        labels, deficit = _evaluate(spec, sp.train, sp.test, derive_seed(trial_seed, ci))
        results.append(
            (
                accuracy(labels, sp.test.labels),
                confusion_matrix(labels, sp.test.labels, ds.n_classes),
                deficit,
                len(sp.test),
            )
        )
    return results


def run_benchmark(
    ds: Dataset,
    classifiers: list[ClassifierSpec],
    trials: int = 1,
    test_fraction: float = 0.1,
    base_seed: int = 0,
    workers: int = 1,
    scale: bool = False,
) -> list[EvalReport]:
    """Evaluate the classifiers over seeded stratified trials.

    Trial t splits with seed derive_seed(base_seed, t) and every classifier
    in that trial sees the identical train/test sets.  workers > 1 runs
    trials on a thread pool; aggregation is by trial index, so the reports
    are identical to a sequential run.  scale applies per-trial min-max
    rescaling fit on the training half.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not classifiers:
        raise ValueError("need at least one classifier")

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_trial = list(
                pool.map(
                    lambda t: _run_trial(ds, classifiers, test_fraction, base_seed, t, scale),
                    range(trials),
                )
            )
    else:
        per_trial = [
            _run_trial(ds, classifiers, test_fraction, base_seed, t, scale)
            for t in range(trials)
        ]

    reports = []
    for ci, spec in enumerate(classifiers):
        accs = [per_trial[t][ci][0] for t in range(trials)]
        confusion = sum(per_trial[t][ci][1] for t in range(trials))
        total = sum(per_trial[t][ci][3] for t in range(trials))
        deficits = [per_trial[t][ci][2] for t in range(trials)]
        deficit = None if deficits[0] is None else float(np.mean(deficits))
        reports.append(
            EvalReport(
                classifier_id=spec.kind,
                params=spec.params,
                accuracy=float(np.trace(confusion)) / total,
                confusion=confusion,
                test_size=total,
                seed=base_seed,
                trials=accs,
                in_hull_neighbor_deficit=deficit,
            )
        )
    return reports
