"""Shuffled private SGD with per-client budgets at desk scale.

Each epoch visits every client once in a fresh random order.  A client's
update is the clipped average gradient over its shard plus isotropic Gaussian
noise scaled by that client's own (epsilon, delta).  One epoch is one
shuffled release, so T epochs compose to a sqrt(T) * mu central guarantee.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .accountant import Cohort, amplify_composed, central_budget
from .data import Dataset, Pca
from .noise import NoiseSource
from .tradeoff import GdpParam, PrivacyBudget

__all__ = [
    "LinearSoftmax",
    "OneHiddenLayer",
    "TrainConfig",
    "TrainReport",
    "clip_gradient",
    "gradient_check",
    "make_model",
    "noise_scale",
    "train",
]

MODEL_SPECS = ("linear-softmax", "one-hidden-layer")


def noise_scale(clip_bound: float, clients: int, budget: PrivacyBudget) -> float:
    """Per-client Gaussian noise level (2C/m) * sqrt(2 ln(1.25/delta)) / epsilon."""
    if not clip_bound > 0.0:
        raise ValueError(f"clip bound must be > 0, got {clip_bound}")
    if clients < 1:
        raise ValueError(f"client count must be >= 1, got {clients}")
    if not budget.epsilon > 0.0:
        raise ValueError("Gaussian mechanism requires epsilon > 0")
    if not 0.0 < budget.delta < 1.0:
        raise ValueError("Gaussian mechanism requires delta in (0, 1)")
    return (2.0 * clip_bound / clients) * math.sqrt(
        2.0 * math.log(1.25 / budget.delta)) / budget.epsilon


def clip_gradient(gradient: np.ndarray, clip_bound: float) -> np.ndarray:
    """Scale the gradient onto the L2 ball of radius ``clip_bound``.

    g / max(1, |g| / C): identity inside the ball, direction preserved.
    """
    if not clip_bound > 0.0:
        raise ValueError(f"clip bound must be > 0, got {clip_bound}")
    gradient = np.asarray(gradient, dtype=float)
    norm = float(np.linalg.norm(gradient))
    return gradient / max(1.0, norm / clip_bound)


def _softmax(logits):
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


class LinearSoftmax:
    """Multinomial logistic regression with flat parameters (weights + bias)."""

    def __init__(self, dim: int, classes: int):
        self.dim = dim
        self.classes = classes
        self.size = (dim + 1) * classes

    def init_params(self, rng) -> np.ndarray:
        return 0.01 * rng.standard_normal(self.size)

    def _unpack(self, params):
        w = params[: self.dim * self.classes].reshape(self.dim, self.classes)
        b = params[self.dim * self.classes:]
        return w, b

    def loss_and_grad(self, params, x, y):
        w, b = self._unpack(params)
        probs = _softmax(x @ w + b)
        count = x.shape[0]
        loss = -float(np.mean(np.log(probs[np.arange(count), y] + 1e-300)))
        residual = probs
        residual[np.arange(count), y] -= 1.0
        residual /= count
        grad = np.concatenate([(x.T @ residual).ravel(), residual.sum(axis=0)])
        return loss, grad

    def predict(self, params, x):
        w, b = self._unpack(params)
        return np.argmax(x @ w + b, axis=1)


class OneHiddenLayer:
    """One rectifier hidden layer followed by a softmax output layer."""

    def __init__(self, dim: int, classes: int, hidden: int = 32):
        self.dim = dim
        self.classes = classes
        self.hidden = hidden
        self._sizes = (dim * hidden, hidden, hidden * classes, classes)
        self.size = sum(self._sizes)

    def init_params(self, rng) -> np.ndarray:
        w1 = rng.standard_normal(self._sizes[0]) * math.sqrt(2.0 / self.dim)
        b1 = np.zeros(self._sizes[1])
        w2 = rng.standard_normal(self._sizes[2]) * math.sqrt(1.0 / self.hidden)
        b2 = np.zeros(self._sizes[3])
        return np.concatenate([w1, b1, w2, b2])

    def _unpack(self, params):
        bounds = np.cumsum(self._sizes)
        w1 = params[: bounds[0]].reshape(self.dim, self.hidden)
        b1 = params[bounds[0]: bounds[1]]
        w2 = params[bounds[1]: bounds[2]].reshape(self.hidden, self.classes)
        b2 = params[bounds[2]:]
        return w1, b1, w2, b2

    def loss_and_grad(self, params, x, y):
        w1, b1, w2, b2 = self._unpack(params)
        pre = x @ w1 + b1
        hidden = np.maximum(pre, 0.0)
        probs = _softmax(hidden @ w2 + b2)
        count = x.shape[0]
        loss = -float(np.mean(np.log(probs[np.arange(count), y] + 1e-300)))
        residual = probs
        residual[np.arange(count), y] -= 1.0
        residual /= count
        grad_w2 = hidden.T @ residual
        grad_b2 = residual.sum(axis=0)
        back = (residual @ w2.T) * (pre > 0.0)
        grad_w1 = x.T @ back
        grad_b1 = back.sum(axis=0)
        return loss, np.concatenate([grad_w1.ravel(), grad_b1,
                                     grad_w2.ravel(), grad_b2])

    def predict(self, params, x):
        w1, b1, w2, b2 = self._unpack(params)
        hidden = np.maximum(x @ w1 + b1, 0.0)
        return np.argmax(hidden @ w2 + b2, axis=1)


def make_model(spec: str, dim: int, classes: int, hidden: int = 32):
    if spec == "linear-softmax":
        return LinearSoftmax(dim, classes)
    if spec == "one-hidden-layer":
        return OneHiddenLayer(dim, classes, hidden)
    raise ValueError(f"unknown model spec {spec!r}; expected one of {MODEL_SPECS}")


def gradient_check(model, params, x, y, points: int = 10, step: float = 1e-6,
                   rng=None) -> float:
    """Largest relative error of the analytic gradient vs central differences."""
    rng = np.random.default_rng(0) if rng is None else rng
    _, grad = model.loss_and_grad(params, x, y)
    worst = 0.0
    for idx in rng.choice(params.size, size=min(points, params.size), replace=False):
        h = step * (1.0 + abs(params[idx]))
        bumped = params.copy()
        bumped[idx] = params[idx] + h
        up, _ = model.loss_and_grad(bumped, x, y)
        bumped[idx] = params[idx] - h
        down, _ = model.loss_and_grad(bumped, x, y)
        numeric = (up - down) / (2.0 * h)
        worst = max(worst, abs(numeric - grad[idx]) / max(abs(grad[idx]), 1e-8))
    return worst


@dataclass(frozen=True)
class TrainConfig:
    """Configuration of one shuffled private SGD run."""

    cohort: Cohort
    epochs: int
    clients: int
    samples: int
    clip_bound: float = 2.0
    step_size: float = 0.05
    model: str = "linear-softmax"
    hidden_units: int = 32
    pca_components: int | None = None
    seed: int = 0
    target_delta: float = 1e-4
    check_gradients: bool = True

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.clients < 1:
            raise ValueError("clients must be >= 1")
        if self.samples % self.clients != 0:
            raise ValueError("clients must divide the number of samples")
        if self.cohort.n != self.clients:
            raise ValueError("need one budget per client")
        if not self.clip_bound > 0.0:
            raise ValueError("clip bound must be > 0")
        if not self.step_size > 0.0:
            raise ValueError("step size must be > 0")
        if self.model not in MODEL_SPECS:
            raise ValueError(f"unknown model spec {self.model!r}")
        for budget in self.cohort.budgets:
            if not 0.0 < budget.delta < 1.0:
                raise ValueError("Gaussian mechanism requires every delta in (0, 1)")


@dataclass(frozen=True)
class TrainReport:
    """Final parameters, per-epoch metrics, and the accounted guarantee."""

    config: TrainConfig
    final_parameters: np.ndarray
    train_loss: tuple
    test_accuracy: tuple
    accounted_mu: GdpParam
    central: PrivacyBudget


def train(dataset: Dataset, config: TrainConfig,
          noise: NoiseSource | None = None) -> TrainReport:
    """Run shuffled private SGD; deterministic given the config seed.

    Shards are contiguous equal blocks of the training set, one per client.
    Per epoch, clients are visited in a fresh uniform order; each applies
    theta <- theta - eta * (clip(mean shard gradient, C) + N(0, sigma_i^2 I))
    with sigma_i from that client's own budget.
    """
    if dataset.x_train.shape[0] != config.samples:
        raise ValueError("config.samples must equal the training set size")
    x_train, y_train = dataset.x_train, dataset.y_train
    x_test, y_test = dataset.x_test, dataset.y_test
    if config.pca_components is not None:
        pca = Pca(x_train, config.pca_components)
        x_train, x_test = pca.transform(x_train), pca.transform(x_test)

    model = make_model(config.model, x_train.shape[1], dataset.num_classes,
                       config.hidden_units)
    rng_init = np.random.default_rng([config.seed, 0])
    rng_perm = np.random.default_rng([config.seed, 1])
    if noise is None:
        noise = NoiseSource.seeded([config.seed, 2])
    params = model.init_params(rng_init)

    if config.check_gradients:
        probe = min(64, config.samples)
        worst = gradient_check(model, params, x_train[:probe], y_train[:probe],
                               rng=np.random.default_rng([config.seed, 3]))
        if worst > 1e-5:
            raise ArithmeticError(
                f"analytic gradient disagrees with finite differences: {worst:.3g}")

    shard = config.samples // config.clients
    sigmas = [noise_scale(config.clip_bound, config.clients, budget)
              for budget in config.cohort.budgets]
    losses, accuracies = [], []
    for _ in range(config.epochs):
        for client in rng_perm.permutation(config.clients):
            rows = slice(client * shard, (client + 1) * shard)
            _, grad = model.loss_and_grad(params, x_train[rows], y_train[rows])
            update = clip_gradient(grad, config.clip_bound)
            update = update + noise.normal(sigmas[client], size=update.shape)
            params = params - config.step_size * update
        loss, _ = model.loss_and_grad(params, x_train, y_train)
        losses.append(loss)
        accuracies.append(float(np.mean(model.predict(params, x_test) == y_test)))

    return TrainReport(
        config=config,
        final_parameters=params,
        train_loss=tuple(losses),
        test_accuracy=tuple(accuracies),
        accounted_mu=amplify_composed(config.cohort, config.epochs),
        central=central_budget(config.cohort, config.target_delta),
    )
