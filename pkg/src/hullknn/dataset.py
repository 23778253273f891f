"""Dataset loading and seeded stratified train/test splitting.

Supported file formats (labels are remapped to dense 0-based integers):

  haberman     comma-separated, 3 integer features + class in {1, 2}
  banknote     comma-separated, 4 real features + class in {0, 1}
  iris         comma-separated, 4 real features + class name string
  seeds        whitespace-separated, 7 real features + class in {1, 2, 3}
  generic-csv  trailing column is the label, optional header row

Note on the banknote file: it has 4 numeric features; summaries sometimes
quote 5 attributes by counting the class column.
"""

from dataclasses import dataclass

import numpy as np

from .rng import Mt19937


class DataError(ValueError):
    """Malformed or unusable input data."""


@dataclass
class Dataset:
    """Labeled points in R^n with provenance name.

    `labels` are 0-based class ids; `label_names[c]` is the original class
    token for id c.  Subsets may lack some classes entirely, in which case
    the ids keep their meaning in the parent's label space.
    """

    name: str
    features: np.ndarray
    labels: np.ndarray
    label_names: list[str] | None = None

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.features.ndim != 2 or self.features.shape[1] < 1:
            raise DataError("features must be a 2-D matrix with >= 1 column")
        if self.features.shape[0] != self.labels.shape[0]:
            raise DataError(
                f"{self.features.shape[0]} feature rows vs {self.labels.shape[0]} labels"
            )
        if len(self.labels) and self.labels.min() < 0:
            raise DataError("labels must be non-negative class ids")

    @property
    def n_classes(self) -> int:
        return int(self.labels.max()) + 1 if len(self.labels) else 0

    def __len__(self) -> int:
        return len(self.labels)

    def subset(self, indices, name: str | None = None) -> "Dataset":
        idx = np.asarray(indices, dtype=np.int64)
        return Dataset(
            name or self.name,
            self.features[idx].copy(),
            self.labels[idx].copy(),
            self.label_names,
        )


@dataclass
class Split:
    train: Dataset
    test: Dataset
    seed: int
    test_fraction: float


_FORMATS = ("haberman", "banknote", "iris", "seeds", "generic-csv")


def _parse_float(token: str, path: str, lineno: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise DataError(
            f"{path}:{lineno}: non-numeric feature value {token!r}"
        ) from None


def _parse_rows(path, delimiter, n_features, allowed_labels=None):
    rows, raw_labels = [], []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            parts = line.split(delimiter) if delimiter else line.split()
            if len(parts) != n_features + 1:
                raise DataError(
                    f"{path}:{lineno}: expected {n_features + 1} columns, got {len(parts)}"
                )
            rows.append([_parse_float(p, str(path), lineno) for p in parts[:-1]])
            label = parts[-1].strip()
            if allowed_labels is not None and label not in allowed_labels:
                raise DataError(
                    f"{path}:{lineno}: class {label!r} not in {sorted(allowed_labels)}"
                )
            raw_labels.append(label)
    if not rows:
        raise DataError(f"{path}: no instances")
    return np.asarray(rows, dtype=np.float64), raw_labels


def _encode_first_appearance(raw_labels):
    names: list[str] = []
    index: dict[str, int] = {}
    encoded = []
    for token in raw_labels:
        if token not in index:
            index[token] = len(names)
            names.append(token)
        encoded.append(index[token])
    return np.asarray(encoded, dtype=np.int64), names


def _load_generic_csv(path) -> tuple[np.ndarray, list[str]]:
    with open(path, "r", encoding="utf-8") as fh:
        lines = [l.strip() for l in fh if l.strip()]
    if not lines:
        raise DataError(f"{path}: no instances")
    first = lines[0].split(",")
    if len(first) < 2:
        raise DataError(f"{path}:1: need at least one feature column plus a label")
    try:
        [float(tok) for tok in first[:-1]]
        start = 0
    except ValueError:
        start = 1  # header row
    if start == len(lines):
        raise DataError(f"{path}: no instances")

    n_cols = len(lines[start].split(","))
    rows, raw_labels = [], []
    for lineno, line in enumerate(lines[start:], start + 1):
        parts = line.split(",")
        if len(parts) != n_cols:
            raise DataError(f"{path}:{lineno}: expected {n_cols} columns, got {len(parts)}")
        rows.append([_parse_float(p, str(path), lineno) for p in parts[:-1]])
        raw_labels.append(parts[-1].strip())
    return np.asarray(rows, dtype=np.float64), raw_labels


def load_dataset(path, fmt: str) -> Dataset:
    """Load a dataset file in one of the named formats.

    Class tokens are mapped to 0-based ids: string labels (iris, generic) in
    first-appearance order, the documented integer classes of the named
    formats by their natural order.
    """
    if fmt not in _FORMATS:
        raise DataError(f"unknown format {fmt!r}; expected one of {_FORMATS}")

    if fmt == "haberman":
        feats, raw = _parse_rows(path, ",", 3, allowed_labels={"1", "2"})
        labels = np.asarray([int(t) - 1 for t in raw], dtype=np.int64)
        names = ["1", "2"]
    elif fmt == "banknote":
        feats, raw = _parse_rows(path, ",", 4, allowed_labels={"0", "1"})
        labels = np.asarray([int(t) for t in raw], dtype=np.int64)
        names = ["0", "1"]
    elif fmt == "iris":
        feats, raw = _parse_rows(path, ",", 4)
        labels, names = _encode_first_appearance(raw)
    elif fmt == "seeds":
        feats, raw = _parse_rows(path, None, 7, allowed_labels={"1", "2", "3"})
        labels = np.asarray([int(t) - 1 for t in raw], dtype=np.int64)
        names = ["1", "2", "3"]
    else:
        feats, raw = _load_generic_csv(path)
        labels, names = _encode_first_appearance(raw)

    if not np.isfinite(feats).all():
        raise DataError(f"{path}: non-finite feature values")
    return Dataset(fmt if fmt != "generic-csv" else str(path), feats, labels, names)


def split(ds: Dataset, test_fraction: float, seed: int, stratified: bool = True) -> Split:
    """Seeded train/test partition of the dataset rows.

    Deterministic for fixed inputs; shuffling runs on a fresh MT19937 state.
    Stratified mode allocates per-class test counts by largest remainder, so
    each class's test count is within 1 of test_fraction times its size, and
    always leaves at least one instance of every class in the training set.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ValueError("test_fraction must be in (0, 1)")
    n = len(ds)
    if n < 2:
        raise DataError("need at least 2 instances to split")
    n_test = round(test_fraction * n)
    if n_test == 0 or n_test == n:
        raise DataError(
            f"test_fraction {test_fraction} yields an empty "
            f"{'test' if n_test == 0 else 'train'} set for {n} rows"
        )

    rng = Mt19937(seed)
    if stratified:
        test_idx: list[int] = []
        per_class = [np.flatnonzero(ds.labels == c).tolist() for c in range(ds.n_classes)]
        base = [int(test_fraction * len(idx)) for idx in per_class]
        remainders = [test_fraction * len(idx) - b for idx, b in zip(per_class, base)]
        counts = list(base)
        leftover = n_test - sum(base)
        for c in sorted(range(len(counts)), key=lambda c: (-remainders[c], c)):
            if leftover <= 0:
                break
            if counts[c] < len(per_class[c]):
                counts[c] += 1
                leftover -= 1
        for c, idx in enumerate(per_class):
            counts[c] = min(counts[c], len(idx) - 1)  # keep every class in train
            rng.shuffle(idx)
            test_idx.extend(idx[: counts[c]])
    else:
        order = list(range(n))
        rng.shuffle(order)
        test_idx = order[:n_test]

    test_set = set(test_idx)
    train_idx = [i for i in range(n) if i not in test_set]
    if not train_idx or not test_idx:
        raise DataError("split produced an empty train or test set")
    return Split(
        train=ds.subset(sorted(train_idx)),
        test=ds.subset(sorted(test_idx)),
        seed=seed,
        test_fraction=test_fraction,
    )


def minmax_scale(sp: Split) -> Split:
    """Rescale features to [0, 1] using the training set's column ranges.

    Experimentation aid, off by default everywhere: the classifiers operate
    on raw features unless explicitly asked.  Constant columns map to 0.
    """
    lo = sp.train.features.min(axis=0)
    span = sp.train.features.max(axis=0) - lo
    span[span == 0.0] = 1.0

    def rescale(ds: Dataset) -> Dataset:
        return Dataset(ds.name, (ds.features - lo) / span, ds.labels.copy(), ds.label_names)

    return Split(rescale(sp.train), rescale(sp.test), sp.seed, sp.test_fraction)
