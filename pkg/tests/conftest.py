import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make oracles importable

from hullknn.dataset import load_dataset
from hullknn.lp import membership_batch

REPO_ROOT = Path(__file__).resolve().parent.parent
DATA_DIR = REPO_ROOT / "data"

# Canonical on-disk locations for the four benchmark datasets.  Only the
# files actually present can be tested; suites that need a missing one
# either skip (unit tests) or fail with the path (acceptance).
DATASET_FILES = {
    "haberman": DATA_DIR / "haberman.data",
    "iris": DATA_DIR / "iris.data",
    "banknote": DATA_DIR / "data_banknote_authentication.txt",
    "seeds": DATA_DIR / "seeds_dataset.txt",
}


@pytest.fixture(scope="session", autouse=True)
def warm_jit():
    """Compile the numba kernels once so timed tests measure the algorithm."""
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    membership_batch(pts, np.array([[0.25, 0.25], [2.0, 2.0]]))


@pytest.fixture(scope="session")
def iris():
    return load_dataset(DATASET_FILES["iris"], "iris")


def require_dataset(name):
    path = DATASET_FILES[name]
    if not path.exists():
        pytest.skip(f"dataset file not present: {path}")
    return load_dataset(path, name)
