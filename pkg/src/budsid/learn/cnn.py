"""From-scratch 1D convolutional classifier for normalized tap windows.

Topology: conv (32 filters, kernel 3, stride 1, same-length zero padding, ReLU)
-> max-pool 2 -> dense 128 (ReLU) -> dense 32 (ReLU) -> softmax. All forward,
backward, and optimizer arithmetic is plain numpy.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .common import TrainConfig, accuracy, stratified_split

CONV_FILTERS = 32
KERNEL = 3
IN_CHANNELS = 3
DENSE1 = 128
DENSE2 = 32
MOMENTUM = 0.9
PATIENCE = 10

_INIT_STREAM_TAG = 0xC221
_SHUFFLE_STREAM_TAG = 0x50FF

TENSOR_ORDER = ("conv_w", "conv_b", "w1", "b1", "w2", "b2", "w3", "b3")


def parameter_count(n_samples: int, n_classes: int) -> int:
    """Closed-form total for the fixed topology at a given window size."""
    flat = (n_samples // 2) * CONV_FILTERS
    return (
        CONV_FILTERS * IN_CHANNELS * KERNEL + CONV_FILTERS
        + flat * DENSE1 + DENSE1
        + DENSE1 * DENSE2 + DENSE2
        + DENSE2 * n_classes + n_classes
    )


@dataclass
class CnnModel:
    n_samples: int
    n_classes: int
    conv_w: np.ndarray  # (filters, in_channels, kernel)
    conv_b: np.ndarray
    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray
    w3: np.ndarray
    b3: np.ndarray

    def tensors(self) -> dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in TENSOR_ORDER}

    def parameter_total(self) -> int:
        return sum(t.size for t in self.tensors().values())

    def copy(self) -> "CnnModel":
        return CnnModel(
            self.n_samples, self.n_classes, *(getattr(self, n).copy() for n in TENSOR_ORDER)
        )


def build_cnn(n_samples: int, n_classes: int, seed: int) -> CnnModel:
    """Seeded fan-in-scaled uniform init; biases start at zero."""
    if n_samples < 4 or n_samples % 2 != 0:
        raise ValueError("n_samples must be even and >= 4")
    if n_classes < 2:
        raise ValueError("n_classes must be >= 2")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), _INIT_STREAM_TAG])))
    flat = (n_samples // 2) * CONV_FILTERS

    def uniform(shape: tuple[int, ...], fan_in: int) -> np.ndarray:
        bound = np.sqrt(6.0 / fan_in)
        return rng.uniform(-bound, bound, shape)

    model = CnnModel(
        n_samples=n_samples,
        n_classes=n_classes,
        conv_w=uniform((CONV_FILTERS, IN_CHANNELS, KERNEL), IN_CHANNELS * KERNEL),
        conv_b=np.zeros(CONV_FILTERS),
        w1=uniform((flat, DENSE1), flat),
        b1=np.zeros(DENSE1),
        w2=uniform((DENSE1, DENSE2), DENSE1),
        b2=np.zeros(DENSE2),
        w3=uniform((DENSE2, n_classes), DENSE2),
        b3=np.zeros(n_classes),
    )
    assert model.parameter_total() == parameter_count(n_samples, n_classes)
    return model


def _im2col(x: np.ndarray) -> np.ndarray:
    """(B, n, C) -> (B*n, C*KERNEL) patches for the zero-padded kernel-3 conv."""
    b, n, c = x.shape
    padded = np.zeros((b, n + KERNEL - 1, c))
    padded[:, 1 : n + 1, :] = x
    # patch layout matches conv_w.reshape(filters, C*KERNEL): channel-major, then tap
    cols = np.empty((b, n, c, KERNEL))
    for k in range(KERNEL):
        cols[:, :, :, k] = padded[:, k : k + n, :]
    return cols.reshape(b * n, c * KERNEL)


def _forward(model: CnnModel, x: np.ndarray, keep: bool):
    b, n, _ = x.shape
    cols = _im2col(x)
    z_conv = (cols @ model.conv_w.reshape(CONV_FILTERS, -1).T).reshape(b, n, CONV_FILTERS) + model.conv_b
    a_conv = np.maximum(z_conv, 0.0)
    half = a_conv.reshape(b, n // 2, 2, CONV_FILTERS)
    pool_arg = np.argmax(half, axis=2)
    pooled = np.take_along_axis(half, pool_arg[:, :, None, :], axis=2)[:, :, 0, :]
    flat = pooled.reshape(b, -1)
    z1 = flat @ model.w1 + model.b1
    h1 = np.maximum(z1, 0.0)
    z2 = h1 @ model.w2 + model.b2
    h2 = np.maximum(z2, 0.0)
    logits = h2 @ model.w3 + model.b3
    shifted = logits - logits.max(axis=1, keepdims=True)
    expd = np.exp(shifted)
    probs = expd / expd.sum(axis=1, keepdims=True)
    if not keep:
        return probs, None
    cache = (cols, z_conv, pool_arg, flat, z1, h1, z2, h2)
    return probs, cache


def predict_proba(model: CnnModel, windows: np.ndarray) -> np.ndarray:
    windows = np.asarray(windows, dtype=np.float64)
    if windows.ndim == 2:
        windows = windows[None, :, :]
    if windows.shape[1:] != (model.n_samples, IN_CHANNELS):
        raise ValueError(
            f"window shape {windows.shape[1:]} does not match model ({model.n_samples}, {IN_CHANNELS})"
        )
    probs, _ = _forward(model, windows, keep=False)
    return probs


def cnn_forward(model: CnnModel, window: np.ndarray) -> np.ndarray:
    """Probability vector for one normalized window."""
    return predict_proba(model, np.asarray(window, dtype=np.float64))[0]


def predict(model: CnnModel, windows: np.ndarray) -> np.ndarray:
    return np.argmax(predict_proba(model, windows), axis=1)


def _loss_and_grads(model: CnnModel, x: np.ndarray, y: np.ndarray):
    b = x.shape[0]
    probs, cache = _forward(model, x, keep=True)
    cols, z_conv, pool_arg, flat, z1, h1, z2, h2 = cache
    loss = float(-np.mean(np.log(np.clip(probs[np.arange(b), y], 1e-12, None))))

    dlogits = probs.copy()
    dlogits[np.arange(b), y] -= 1.0
    dlogits /= b
    grads = {}
    grads["w3"] = h2.T @ dlogits
    grads["b3"] = dlogits.sum(axis=0)
    dh2 = dlogits @ model.w3.T
    dz2 = dh2 * (z2 > 0.0)
    grads["w2"] = h1.T @ dz2
    grads["b2"] = dz2.sum(axis=0)
    dh1 = dz2 @ model.w2.T
    dz1 = dh1 * (z1 > 0.0)
    grads["w1"] = flat.T @ dz1
    grads["b1"] = dz1.sum(axis=0)
    dflat = dz1 @ model.w1.T
    n = model.n_samples
    dpool = dflat.reshape(b, n // 2, CONV_FILTERS)
    dhalf = np.zeros((b, n // 2, 2, CONV_FILTERS))
    np.put_along_axis(dhalf, pool_arg[:, :, None, :], dpool[:, :, None, :], axis=2)
    da_conv = dhalf.reshape(b, n, CONV_FILTERS)
    dz_conv = da_conv * (z_conv > 0.0)
    dz2d = dz_conv.reshape(b * n, CONV_FILTERS)
    grads["conv_w"] = (dz2d.T @ cols).reshape(model.conv_w.shape)
    grads["conv_b"] = dz2d.sum(axis=0)
    return loss, grads


def batch_loss(model: CnnModel, x: np.ndarray, y: np.ndarray) -> float:
    probs, _ = _forward(model, np.asarray(x, dtype=np.float64), keep=False)
    return float(-np.mean(np.log(np.clip(probs[np.arange(len(y)), y], 1e-12, None))))


@dataclass
class FitHistory:
    train_loss: list[float] = field(default_factory=list)
    val_loss: list[float] = field(default_factory=list)
    best_epoch: int = 0


def cnn_fit(
    x_train: np.ndarray,
    y_train: np.ndarray,
    x_val: np.ndarray,
    y_val: np.ndarray,
    n_classes: int,
    cfg: TrainConfig,
) -> tuple[CnnModel, FitHistory]:
    """Mini-batch gradient descent with momentum; keeps the best-validation weights."""
    x_train = np.asarray(x_train, dtype=np.float64)
    x_val = np.asarray(x_val, dtype=np.float64)
    y_train = np.asarray(y_train, dtype=np.int64)
    y_val = np.asarray(y_val, dtype=np.int64)
    present = np.unique(y_train)
    if present.shape[0] < n_classes:
        missing = sorted(set(range(n_classes)) - set(present.tolist()))
        raise ValueError(f"training split is missing classes {missing}")

    model = build_cnn(x_train.shape[1], n_classes, cfg.seed)
    velocity = {name: np.zeros_like(t) for name, t in model.tensors().items()}
    rng = np.random.Generator(
        np.random.PCG64(np.random.SeedSequence([int(cfg.seed), _SHUFFLE_STREAM_TAG]))
    )
    history = FitHistory()
    best = model.copy()
    best_val = np.inf
    stale = 0
    order = np.arange(x_train.shape[0])
    for epoch in range(cfg.epochs):
        rng.shuffle(order)
        epoch_loss = 0.0
        for start in range(0, order.shape[0], cfg.batch_size):
            batch = order[start : start + cfg.batch_size]
            loss, grads = _loss_and_grads(model, x_train[batch], y_train[batch])
            epoch_loss += loss * batch.shape[0]
            for name, grad in grads.items():
                v = velocity[name]
                v *= MOMENTUM
                v -= cfg.learning_rate * grad
                getattr(model, name)[...] += v
        history.train_loss.append(epoch_loss / order.shape[0])
        val_loss = batch_loss(model, x_val, y_val)
        history.val_loss.append(val_loss)
        if val_loss < best_val - 1e-9:
            best_val = val_loss
            best = model.copy()
            history.best_epoch = epoch
            stale = 0
        else:
            stale += 1
            if stale >= PATIENCE:
                break
    return best, history


@dataclass
class TrainResult:
    model: CnnModel
    history: FitHistory
    train_accuracy: float
    val_accuracy: float
    test_accuracy: float
    test_indices: np.ndarray
    test_predictions: np.ndarray


def cnn_train(windows: np.ndarray, labels: np.ndarray, cfg: TrainConfig) -> TrainResult:
    """Stratified split per cfg ratios, fit with early stopping, score all three parts."""
    windows = np.asarray(windows, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    classes, counts = np.unique(labels, return_counts=True)
    if counts.min() < 2:
        raise ValueError("every class needs at least 2 examples")
    n_classes = int(classes.max()) + 1
    tr, va, te = stratified_split(labels, cfg.split, cfg.seed)
    model, history = cnn_fit(windows[tr], labels[tr], windows[va], labels[va], n_classes, cfg)
    test_pred = predict(model, windows[te]) if te.size else np.zeros(0, dtype=np.int64)
    return TrainResult(
        model=model,
        history=history,
        train_accuracy=accuracy(predict(model, windows[tr]), labels[tr]),
        val_accuracy=accuracy(predict(model, windows[va]), labels[va]),
        test_accuracy=accuracy(test_pred, labels[te]) if te.size else float("nan"),
        test_indices=te,
        test_predictions=test_pred,
    )


def grad_check(
    model: CnnModel,
    windows: np.ndarray,
    labels: np.ndarray,
    epsilon: float = 1e-5,
    n_checks: int = 200,
    seed: int = 0,
) -> float:
    """Max relative disagreement between analytic and central-difference gradients."""
    if not 1e-6 <= epsilon <= 1e-3:
        raise ValueError("epsilon must be within [1e-6, 1e-3]")
    x = np.asarray(windows, dtype=np.float64)
    y = np.asarray(labels, dtype=np.int64)
    if x.shape[0] == 0:
        raise ValueError("batch must be nonempty")
    _, grads = _loss_and_grads(model, x, y)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), 0x94AD])))
    sizes = [model.tensors()[name].size for name in TENSOR_ORDER]
    total = sum(sizes)
    worst = 0.0
    for flat_index in rng.choice(total, size=min(n_checks, total), replace=False):
        remaining = int(flat_index)
        for name, size in zip(TENSOR_ORDER, sizes):
            if remaining < size:
                break
            remaining -= size
        tensor = getattr(model, name)
        idx = np.unravel_index(remaining, tensor.shape)
        original = tensor[idx]
        tensor[idx] = original + epsilon
        up = batch_loss(model, x, y)
        tensor[idx] = original - epsilon
        down = batch_loss(model, x, y)
        tensor[idx] = original
        numeric = (up - down) / (2.0 * epsilon)
        analytic = grads[name][idx]
        scale = max(abs(analytic), abs(numeric), 1e-6)
        worst = max(worst, abs(analytic - numeric) / scale)
    return worst
