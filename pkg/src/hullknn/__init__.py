"""Hull-gated k-nearest-neighbor classification.

Neighbor candidacy is gated by membership in the convex hull of a random
point cloud (a "hyperstructure") sampled around each test instance inside a
threshold-expanded box.  The package also ships a classic k-NN and an
SMO-trained RBF SVM baseline, dataset loaders, a k/threshold tuning harness,
and a benchmark CLI.
"""

from .rng import Mt19937, derive_seed
from .lp import MembershipResult, feasible_convex_combination
from .geometry import (
    Hyperstructure,
    bounding_interval,
    build_hyperstructure,
    collinear3,
    contains,
)
from .dataset import Dataset, Split, load_dataset, split
from .knn import KnnConfig, KnnModel, euclidean, majority_vote
from .svm import SvmModel, rbf_kernel, train_svm, predict_svm
from .benchmark import (
    ClassifierSpec,
    EvalReport,
    GridResult,
    accuracy,
    error_rates,
    grid_search,
    run_benchmark,
)

__all__ = [
    "Mt19937",
    "derive_seed",
    "MembershipResult",
    "feasible_convex_combination",
    "Hyperstructure",
    "bounding_interval",
    "build_hyperstructure",
    "collinear3",
    "contains",
    "Dataset",
    "Split",
    "load_dataset",
    "split",
    "KnnConfig",
    "KnnModel",
    "euclidean",
    "majority_vote",
    "SvmModel",
    "rbf_kernel",
    "train_svm",
    "predict_svm",
    "ClassifierSpec",
    "EvalReport",
    "GridResult",
    "accuracy",
    "error_rates",
    "grid_search",
    "run_benchmark",
]

__version__ = "0.1.0"
