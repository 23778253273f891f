"""SMO-trained RBF SVM: kernel math, convergence health, and voting."""

import math

import numpy as np
import pytest

from hullknn.dataset import Dataset
from hullknn.svm import (
    DEFAULT_TOL,
    SvmModel,
    kkt_violations,
    predict_batch,
    predict_svm,
    rbf_kernel,
    train_svm,
)


def blobs(seed=0, n_per=30, centers=((-2.0, -2.0), (2.0, 2.0)), spread=0.5):
    rng = np.random.default_rng(seed)
    X = np.vstack(
        [rng.normal(c, spread, size=(n_per, len(c))) for c in centers]
    )
    y = np.repeat(np.arange(len(centers)), n_per)
    return Dataset("blobs", X, y)


XOR = Dataset(
    "xor",
    np.array([[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]]),
    np.array([0, 0, 1, 1]),
)


def test_rbf_kernel_values():
    assert rbf_kernel([1.0, 2.0], [1.0, 2.0], 3.0) == 1.0
    assert rbf_kernel([0.0, 0.0], [1.0, 0.0], 1.0) == pytest.approx(math.exp(-1))
    assert rbf_kernel([0.0], [2.0], 0.5) == pytest.approx(math.exp(-2))
    assert rbf_kernel([0.0], [5.0], 0.0) == 1.0  # gamma 0 flattens everything


def test_rbf_kernel_validation():
    with pytest.raises(ValueError):
        rbf_kernel([0.0, 0.0], [1.0], 1.0)
    with pytest.raises(ValueError):
        rbf_kernel([0.0], [1.0], -0.5)


def test_train_validation():
    ds = blobs()
    with pytest.raises(ValueError):
        train_svm(ds, gamma=0.0)
    with pytest.raises(ValueError):
        train_svm(ds, gamma=1.0, C=0.0)
    one_class = Dataset("one", np.zeros((4, 2)), np.array([0, 0, 0, 0]))
    with pytest.raises(ValueError):
        train_svm(one_class, gamma=1.0)


def test_separable_blobs_reach_perfect_train_accuracy():
    ds = blobs()
    model = train_svm(ds, gamma=0.5, seed=0)
    assert model.converged
    assert np.array_equal(predict_batch(model, ds.features), ds.labels)
    assert kkt_violations(model, ds) == 0


def test_xor_fixture():
    model = train_svm(XOR, gamma=1.0, C=10.0, seed=0)
    assert predict_batch(model, XOR.features).tolist() == [0, 0, 1, 1]
    assert kkt_violations(model, XOR) == 0


def test_dual_coefficients_balance():
    """The equality constraint sum(alpha_i * y_i) = 0 survives training."""
    model = train_svm(blobs(seed=3, spread=1.2), gamma=0.7, seed=1)
    assert abs(model.dual_coefficients.sum()) <= 1e-6


def test_dual_objective_never_decreases():
    ds = blobs(seed=5, spread=1.5)  # overlap forces many SMO steps
    model = train_svm(ds, gamma=0.8, seed=2, track_objective=True)
    trace = np.array(model.objective_trace)
    assert len(trace) > 1
    assert np.all(np.diff(trace) >= -1e-9)


def test_interior_support_vectors_sit_on_the_margin():
    ds = blobs(seed=7, spread=1.4)
    model = train_svm(ds, gamma=0.6, seed=0)
    alpha = np.abs(model.dual_coefficients)
    interior = (alpha > 1e-8) & (alpha < model.C * (1.0 - 1e-8))
    assert interior.any()
    y = np.sign(model.dual_coefficients[interior])
    f = model.decision_function(model.support_vectors[interior])
    assert np.abs(y * f - 1.0).max() <= DEFAULT_TOL + 1e-9


def test_kkt_audit_flags_a_corrupted_model():
    ds = blobs()
    model = train_svm(ds, gamma=0.5, seed=0)
    model.bias += 2.5  # push every margin off its bucket
    assert kkt_violations(model, ds) > 0


def test_training_is_deterministic():
    ds = blobs(seed=9, spread=1.3)
    a = train_svm(ds, gamma=0.9, seed=11)
    b = train_svm(ds, gamma=0.9, seed=11)
    assert np.array_equal(a.dual_coefficients, b.dual_coefficients)
    assert a.bias == b.bias
    assert np.array_equal(a.support_indices, b.support_indices)


def test_multiclass_one_vs_one():
    ds = blobs(centers=((-3.0, 0.0), (3.0, 0.0), (0.0, 4.0)), n_per=20)
    model = train_svm(ds, gamma=0.5, seed=0)
    assert model.class_pair is None
    assert [m.class_pair for m in model.pairwise_models] == [(0, 1), (0, 2), (1, 2)]
    assert np.array_equal(predict_batch(model, ds.features), ds.labels)
    assert kkt_violations(model, ds) == 0
    assert predict_svm(model, [-3.0, 0.0]) == 0


def test_vote_tie_goes_to_smallest_label():
    """A 1-1-1 one-vs-one vote must resolve to the smallest class id."""

    def fixed(pair, bias):
        return SvmModel(
            support_vectors=np.empty((0, 2)),
            dual_coefficients=np.empty(0),
            bias=bias,
            gamma=1.0,
            C=1.0,
            class_pair=pair,
        )

    container = SvmModel(
        support_vectors=np.empty((0, 2)),
        dual_coefficients=np.empty(0),
        bias=0.0,
        gamma=1.0,
        C=1.0,
        class_pair=None,
        pairwise_models=[fixed((0, 1), -1.0), fixed((0, 2), 1.0), fixed((1, 2), -1.0)],
    )
    # votes: (0,1) -> 0, (0,2) -> 2, (1,2) -> 1; tie over {0, 1, 2}
    assert predict_svm(container, [0.0, 0.0]) == 0


def test_predict_batch_validation():
    model = train_svm(blobs(), gamma=0.5)
    assert predict_batch(model, np.empty((0, 2))).shape == (0,)
    with pytest.raises(ValueError):
        predict_batch(model, np.zeros((3, 5)))


def test_decision_function_binary_only():
    ds = blobs(centers=((-3.0, 0.0), (3.0, 0.0), (0.0, 4.0)), n_per=10)
    model = train_svm(ds, gamma=0.5)
    with pytest.raises(ValueError):
        model.decision_function(np.zeros((1, 2)))
