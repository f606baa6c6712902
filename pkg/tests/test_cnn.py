"""Convolutional classifier: construction, gradients, training behavior."""

from __future__ import annotations

import numpy as np
import pytest

from budsid.learn import (
    CnnModel,
    TrainConfig,
    build_cnn,
    cnn_fit,
    cnn_forward,
    cnn_train,
    grad_check,
    parameter_count,
    predict,
    predict_proba,
)
from budsid.learn.cnn import TENSOR_ORDER


def _zero_model(n_samples: int, n_classes: int) -> CnnModel:
    model = build_cnn(n_samples, n_classes, seed=0)
    for name in TENSOR_ORDER:
        getattr(model, name)[...] = 0.0
    return model


def _bump_windows(n_per_class: int, n_classes: int, n_samples: int, seed: int):
    """Separable synthetic taps: class k gets a bump on channel k%3 at a class-specific spot."""
    rng = np.random.Generator(np.random.PCG64(seed))
    windows = 0.05 * rng.standard_normal((n_per_class * n_classes, n_samples, 3)) + 0.5
    labels = np.repeat(np.arange(n_classes), n_per_class)
    for i, lab in enumerate(labels):
        start = 2 + 4 * int(lab)
        windows[i, start : start + 4, lab % 3] += 0.4
    order = rng.permutation(labels.shape[0])
    return windows[order], labels[order]


def test_parameter_counts_match_deployment_sizes() -> None:
    assert parameter_count(80, 3) == 168_515
    assert parameter_count(100, 9) == 209_673
    assert build_cnn(80, 3, seed=1).parameter_total() == 168_515
    assert build_cnn(100, 9, seed=1).parameter_total() == 209_673


def test_parameter_count_closed_form() -> None:
    for n, k in [(8, 2), (40, 5), (60, 9)]:
        expected = (
            32 * 3 * 3 + 32
            + (n // 2) * 32 * 128 + 128
            + 128 * 32 + 32
            + 32 * k + k
        )
        assert parameter_count(n, k) == expected
        assert build_cnn(n, k, seed=0).parameter_total() == expected


def test_build_rejects_bad_shapes() -> None:
    with pytest.raises(ValueError):
        build_cnn(15, 3, seed=0)  # odd length breaks the pool
    with pytest.raises(ValueError):
        build_cnn(2, 3, seed=0)
    with pytest.raises(ValueError):
        build_cnn(16, 1, seed=0)


def test_build_is_seed_deterministic() -> None:
    a = build_cnn(32, 4, seed=9)
    b = build_cnn(32, 4, seed=9)
    c = build_cnn(32, 4, seed=10)
    for name in TENSOR_ORDER:
        assert np.array_equal(getattr(a, name), getattr(b, name))
    assert not np.array_equal(a.conv_w, c.conv_w)
    # biases start flat, weights stay inside the fan-in bound
    assert np.all(a.conv_b == 0.0) and np.all(a.b3 == 0.0)
    assert np.max(np.abs(a.conv_w)) <= np.sqrt(6.0 / 9.0)
    assert np.max(np.abs(a.w1)) <= np.sqrt(6.0 / a.w1.shape[0])


def test_zero_weights_give_uniform_probabilities() -> None:
    model = _zero_model(16, 5)
    probs = cnn_forward(model, np.random.default_rng(0).random((16, 3)))
    assert np.allclose(probs, 0.2, atol=1e-12)


def test_probabilities_normalized_and_shaped() -> None:
    model = build_cnn(20, 4, seed=3)
    x = np.random.default_rng(1).random((7, 20, 3))
    probs = predict_proba(model, x)
    assert probs.shape == (7, 4)
    assert np.all(probs >= 0.0)
    assert np.allclose(probs.sum(axis=1), 1.0, atol=1e-9)
    assert predict(model, x).shape == (7,)


def test_window_shape_mismatch_rejected() -> None:
    model = build_cnn(20, 4, seed=3)
    with pytest.raises(ValueError):
        predict_proba(model, np.zeros((5, 18, 3)))
    with pytest.raises(ValueError):
        cnn_forward(model, np.zeros((20, 2)))


@pytest.mark.parametrize("seed", [0, 1, 2, 3, 4])
def test_gradients_match_central_differences(seed: int) -> None:
    rng = np.random.default_rng(seed + 100)
    model = build_cnn(16, 3, seed=seed)
    x = rng.random((8, 16, 3))
    y = rng.integers(0, 3, size=8)
    worst = grad_check(model, x, y, epsilon=1e-5, n_checks=200, seed=seed)
    assert worst <= 1e-3, f"seed {seed}: worst relative gradient error {worst:.2e}"


def test_gradient_check_at_deployment_width() -> None:
    rng = np.random.default_rng(7)
    model = build_cnn(80, 3, seed=7)
    x = rng.random((6, 80, 3))
    y = rng.integers(0, 3, size=6)
    assert grad_check(model, x, y, n_checks=200, seed=7) <= 1e-3


def test_grad_check_epsilon_bounds() -> None:
    model = build_cnn(16, 3, seed=0)
    x = np.random.default_rng(0).random((4, 16, 3))
    y = np.array([0, 1, 2, 0])
    with pytest.raises(ValueError):
        grad_check(model, x, y, epsilon=1e-2)
    with pytest.raises(ValueError):
        grad_check(model, x, y, epsilon=1e-7)


def test_fit_drives_training_loss_down() -> None:
    windows, labels = _bump_windows(30, 3, 16, seed=5)
    cfg = TrainConfig(epochs=12, batch_size=16, seed=5)
    model, history = cnn_fit(windows[:72], labels[:72], windows[72:], labels[72:], 3, cfg)
    assert history.train_loss[-1] < history.train_loss[0]
    assert history.best_epoch < len(history.val_loss)
    assert model.n_classes == 3


def test_fit_requires_every_class_in_training_split() -> None:
    windows, labels = _bump_windows(10, 2, 16, seed=1)
    cfg = TrainConfig(epochs=2, seed=0)
    with pytest.raises(ValueError, match="missing classes"):
        cnn_fit(windows, labels, windows[:4], labels[:4], 3, cfg)


def test_train_separable_classes_to_full_test_accuracy() -> None:
    windows, labels = _bump_windows(60, 2, 16, seed=2)
    cfg = TrainConfig(epochs=30, batch_size=16, seed=2)
    result = cnn_train(windows, labels, cfg)
    assert result.test_accuracy == 1.0
    assert result.val_accuracy == 1.0
    assert result.test_indices.shape == result.test_predictions.shape
    assert result.test_indices.size == round(0.2 * labels.shape[0])


def test_train_is_deterministic_per_seed() -> None:
    windows, labels = _bump_windows(20, 2, 16, seed=3)
    cfg = TrainConfig(epochs=6, batch_size=16, seed=11)
    a = cnn_train(windows, labels, cfg)
    b = cnn_train(windows, labels, cfg)
    for name in TENSOR_ORDER:
        assert np.array_equal(getattr(a.model, name), getattr(b.model, name))
    assert a.history.train_loss == b.history.train_loss
    assert a.test_accuracy == b.test_accuracy


def test_train_rejects_singleton_classes() -> None:
    windows = np.random.default_rng(0).random((5, 16, 3))
    labels = np.array([0, 0, 0, 0, 1])
    with pytest.raises(ValueError, match="at least 2"):
        cnn_train(windows, labels, TrainConfig(epochs=1))
