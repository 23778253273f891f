"""Classic and hull-gated k-nearest-neighbor classification.

In hull mode each test instance gets its own randomized hyperstructure;
training points inside its convex hull keep their Euclidean distance and
points outside are pushed to an unreachable sentinel (+inf).  The k nearest
entries after a sentinel-aware sort vote on the label.  When fewer than k
training points fall inside the hull, sentinel entries fill the remaining
slots and vote like any other neighbor; the optional hull-only mode
restricts the vote to in-hull entries instead (falling back to classic
neighbors when the hull is empty).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset
from .lp import EPS_GEOMETRY, membership_batch
from .rng import Mt19937, derive_seed
from .geometry import build_hyperstructure

SENTINEL = math.inf


@dataclass
class NeighborList:
    """Ordered (train_index, distance) pairs; distance may be the sentinel."""

    entries: list[tuple[int, float]]
    k: int


@dataclass(frozen=True)
class KnnConfig:
    k: int
    mode: str = "classic"  # "classic" or "hull"
    threshold: float = 0.0
    point_count: int | None = None  # default 4n-1
    base_seed: int = 0
    hull_only: bool = False
    ensure_enclosure: bool = False
    per_dimension: bool = False

    def __post_init__(self):
        if self.mode not in ("classic", "hull"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.threshold < 0:
            raise ValueError("threshold must be >= 0")


def euclidean(a, b) -> float:
    """Euclidean distance; zero iff the points coincide."""
    av = np.asarray(a, dtype=np.float64)
    bv = np.asarray(b, dtype=np.float64)
    if av.shape != bv.shape:
        raise ValueError(f"dimension mismatch: {av.shape} vs {bv.shape}")
    return float(np.sqrt(((av - bv) ** 2).sum()))


def _sorted_neighbors(distances: np.ndarray, k: int) -> list[tuple[int, float]]:
    # Ascending distance, ties (including sentinel blocks) by ascending index;
    # lexsort's last key is primary.
    order = np.lexsort((np.arange(distances.size), distances))
    return [(int(i), float(distances[i])) for i in order[:k]]


class KnnModel:
    """Training data stored verbatim plus the classification configuration."""

    def __init__(self, train: Dataset, config: KnnConfig):
        if config.k > len(train.labels):
            raise ValueError(f"k={config.k} exceeds training size {len(train.labels)}")
        self.train = train
        self.config = config

    @property
    def n_dims(self) -> int:
        return self.train.features.shape[1]

    def _distances(self, x: np.ndarray) -> np.ndarray:
        diff = self.train.features - x
        return np.sqrt((diff * diff).sum(axis=1))

    def predict(self, X, instance_ids=None, hull_override=None) -> np.ndarray:
        labels, _ = self.predict_detail(X, instance_ids, hull_override)
        return labels

    def predict_detail(self, X, instance_ids=None, hull_override=None):
        """Labels plus the per-instance count of in-hull training points.

        Instance i derives its hyperstructure generator from
        (base_seed, instance_ids[i]) — default identity 0,1,2,... — so
        predictions are independent of evaluation order and schedule.
        In classic mode the in-hull count is the full training size.
        """
        Xv = np.asarray(X, dtype=np.float64)
        if Xv.ndim == 1:
            Xv = Xv.reshape(1, -1) if Xv.size else Xv.reshape(0, self.n_dims)
        if Xv.shape[0] and Xv.shape[1] != self.n_dims:
            raise ValueError(
                f"dimension mismatch: model is {self.n_dims}-D, got {Xv.shape[1]}-D"
            )
        ids = range(Xv.shape[0]) if instance_ids is None else instance_ids

        labels = np.empty(Xv.shape[0], dtype=np.int64)
        counts = np.empty(Xv.shape[0], dtype=np.int64)
        for row, (x, iid) in enumerate(zip(Xv, ids)):
            if self.config.mode == "classic":
                nb = neighbors_classic(self, x)
                counts[row] = len(self.train.labels)
            else:
                nb, counts[row] = self._hull_neighbors(x, int(iid), hull_override)
            labels[row] = majority_vote(nb, self.train.labels)
        return labels, counts

    def _hull_neighbors(self, x, instance_id: int, hull_override=None):
        cfg = self.config
        if hull_override is not None:
            hull_points = np.asarray(hull_override, dtype=np.float64)
        else:
            rng = Mt19937(derive_seed(cfg.base_seed, instance_id))
            h = build_hyperstructure(
                x,
                cfg.threshold,
                rng,
                point_count=cfg.point_count,
                per_dimension=cfg.per_dimension,
                ensure_enclosure=cfg.ensure_enclosure,
            )
            hull_points = h.points

        inside = membership_batch(hull_points, self.train.features, EPS_GEOMETRY)
        n_inside = int(inside.sum())
        distances = self._distances(x)
        distances[~inside] = SENTINEL

        if cfg.hull_only:
            if n_inside == 0:
                return neighbors_classic(self, x), 0
            kept = [(i, d) for i, d in _sorted_neighbors(distances, cfg.k) if d < SENTINEL]
            return NeighborList(kept, cfg.k), n_inside
        return NeighborList(_sorted_neighbors(distances, cfg.k), cfg.k), n_inside


def neighbors_classic(model: KnnModel, x, k: int | None = None) -> NeighborList:
    """The k nearest training points by Euclidean distance, ties by index."""
    k = model.config.k if k is None else k
    if not 1 <= k <= len(model.train.labels):
        raise ValueError(f"k={k} out of range [1, {len(model.train.labels)}]")
    distances = model._distances(np.asarray(x, dtype=np.float64))
    return NeighborList(_sorted_neighbors(distances, k), k)


def neighbors_hull(
    model: KnnModel,
    x,
    rng: Mt19937,
    k: int | None = None,
    hull_override=None,
) -> NeighborList:
    """Hull-gated neighbor list for one test instance.

    Builds one hyperstructure from `rng`, gates the training set on hull
    membership, and returns the first k entries of the sentinel-aware sort.
    Sentinel entries appear whenever fewer than k training points are inside.
    """
    cfg = model.config
    k = cfg.k if k is None else k
    if not 1 <= k <= len(model.train.labels):
        raise ValueError(f"k={k} out of range [1, {len(model.train.labels)}]")
    xv = np.asarray(x, dtype=np.float64)
    if hull_override is not None:
        hull_points = np.asarray(hull_override, dtype=np.float64)
    else:
        h = build_hyperstructure(
            xv,
            cfg.threshold,
            rng,
            point_count=cfg.point_count,
            per_dimension=cfg.per_dimension,
            ensure_enclosure=cfg.ensure_enclosure,
        )
        hull_points = h.points
    inside = membership_batch(hull_points, model.train.features, EPS_GEOMETRY)
    distances = model._distances(xv)
    distances[~inside] = SENTINEL
    return NeighborList(_sorted_neighbors(distances, k), k)


def majority_vote(neighbors: NeighborList, labels) -> int:
    """Most frequent label among the entries; ties go to the smallest label.

    Sentinel entries vote like any other (their train_index still names a
    training point); hull-only mode prunes them before calling this.
    """
    if not neighbors.entries:
        raise ValueError("empty neighbor list")
    labels = np.asarray(labels)
    votes = np.bincount([int(labels[i]) for i, _ in neighbors.entries])
    return int(votes.argmax())
