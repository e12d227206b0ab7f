"""Small dense MLP classifier trained with adaptive-moment gradient descent.

ReLU hidden layers, softmax output, cross-entropy loss with an L2 weight
penalty, minibatch updates, and early stopping on a training-loss plateau.
Everything is deterministic under the seed.  A central finite-difference
gradient check guards the backpropagation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateLabels

# hidden layer search grid used by the experiment pipeline
HIDDEN_GRID = ((50,), (100,), (50, 50), (150, 50))

DEFAULTS = {
    "lr": 1e-3,
    "beta1": 0.9,
    "beta2": 0.999,
    "eps": 1e-8,
    "l2": 0.01,
    "max_epochs": 300,
    "batch_size": 200,
    "plateau": 20,
    "plateau_tol": 1e-4,
}


@dataclass(eq=False)
class MlpModel:
    sizes: tuple[int, ...]
    weights: list  # W_l of shape (in, out)
    biases: list
    classes: np.ndarray
    config: dict = field(default_factory=dict)


def _softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def _forward(weights, biases, X):
    """Returns (hidden activations including input, logits)."""
    hs = [X]
    h = X
    for W, b in zip(weights[:-1], biases[:-1]):
        h = np.maximum(h @ W + b, 0.0)
        hs.append(h)
    return hs, h @ weights[-1] + biases[-1]


def _loss_and_grads(weights, biases, X, onehot, l2):
    B = len(X)
    hs, logits = _forward(weights, biases, X)
    probs = _softmax(logits)
    hit = np.sum(probs * onehot, axis=1)
    data_loss = -float(np.mean(np.log(np.maximum(hit, np.finfo(hit.dtype).tiny))))
    penalty = 0.5 * l2 * sum(float(np.sum(W**2)) for W in weights) / B
    grads_w = [None] * len(weights)
    grads_b = [None] * len(biases)
    delta = (probs - onehot) / B
    for layer in range(len(weights) - 1, -1, -1):
        grads_w[layer] = hs[layer].T @ delta + (l2 / B) * weights[layer]
        grads_b[layer] = delta.sum(axis=0)
        if layer > 0:
            delta = (delta @ weights[layer].T) * (hs[layer] > 0)
    return data_loss + penalty, grads_w, grads_b


def _init_params(sizes, rng, dtype=np.float64):
    weights, biases = [], []
    for fan_in, fan_out in zip(sizes, sizes[1:]):
        bound = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)).astype(dtype))
        biases.append(np.zeros(fan_out, dtype=dtype))
    return weights, biases


def train_mlp(
    features, labels, hidden=(100,), seed: int = 0, dtype=np.float64, **overrides
) -> MlpModel:
    """Fit the classifier; hidden layer sizes come from ``HIDDEN_GRID``-style
    tuples.  Raises ``DegenerateLabels`` when only one class is present.

    ``dtype=np.float32`` halves the arithmetic cost for large feature blocks;
    finite-difference gradient checking needs the float64 default.
    """
    X = np.asarray(features, dtype=dtype)
    y = np.asarray(labels)
    classes = np.unique(y)
    if len(classes) < 2:
        raise DegenerateLabels("training labels contain a single class")
    if not np.isfinite(X).all():
        raise ValueError("features contain NaN or Inf")
    cfg = {**DEFAULTS, **overrides}
    index = np.searchsorted(classes, y)
    onehot = np.eye(len(classes), dtype=dtype)[index]

    rng = np.random.default_rng(seed)
    sizes = (X.shape[1], *hidden, len(classes))
    weights, biases = _init_params(sizes, rng, dtype)

    moments = [
        [np.zeros_like(p) for p in params] for params in (weights, biases)
    ]
    second = [
        [np.zeros_like(p) for p in params] for params in (weights, biases)
    ]
    lr, b1, b2, eps = cfg["lr"], cfg["beta1"], cfg["beta2"], cfg["eps"]
    batch = min(cfg["batch_size"], len(X))
    best = np.inf
    stall = 0
    step = 0
    for _epoch in range(cfg["max_epochs"]):
        order = rng.permutation(len(X))
        epoch_loss = 0.0
        for start in range(0, len(X), batch):
            sel = order[start : start + batch]
            loss, gw, gb = _loss_and_grads(
                weights, biases, X[sel], onehot[sel], cfg["l2"]
            )
            epoch_loss += loss * len(sel)
            step += 1
            bias1 = 1 - b1**step
            bias2 = 1 - b2**step
            for params, grads, m, v in (
                (weights, gw, moments[0], second[0]),
                (biases, gb, moments[1], second[1]),
            ):
                for i, g in enumerate(grads):
                    m[i] *= b1
                    m[i] += (1 - b1) * g
                    np.square(g, out=g)
                    v[i] *= b2
                    v[i] += (1 - b2) * g
                    np.sqrt(v[i] / bias2, out=g)
                    g += eps
                    g *= bias1
                    params[i] -= lr * (m[i] / g)
        epoch_loss /= len(X)
        if epoch_loss < best - cfg["plateau_tol"]:
            best = epoch_loss
            stall = 0
        else:
            stall += 1
            if stall >= cfg["plateau"]:
                break
    return MlpModel(
        sizes=sizes, weights=weights, biases=biases, classes=classes, config=cfg
    )


def predict_proba(model: MlpModel, features) -> np.ndarray:
    X = np.asarray(features, dtype=model.weights[0].dtype)
    _, logits = _forward(model.weights, model.biases, X)
    return _softmax(logits)


def predict(model: MlpModel, features) -> np.ndarray:
    return model.classes[np.argmax(predict_proba(model, features), axis=1)]


def accuracy(model: MlpModel, features, labels) -> float:
    return float(np.mean(predict(model, features) == np.asarray(labels)))


def finite_diff_gradcheck(
    model: MlpModel,
    features,
    labels,
    n_coords: int = 50,
    h: float = 1e-5,
    seed: int = 0,
) -> float:
    """Max relative deviation between backprop and central differences.

    Inputs are jittered until every hidden preactivation sits at least 1e-3
    from its ReLU kink, so the h-perturbations cannot flip an activation.
    The 0/0 case (both gradients numerically zero) counts as deviation 0.
    """
    rng = np.random.default_rng(seed)
    X = np.asarray(features, dtype=float).copy()
    y = np.asarray(labels)
    index = np.searchsorted(model.classes, y)
    onehot = np.eye(len(model.classes))[index]
    l2 = model.config.get("l2", DEFAULTS["l2"])

    for _ in range(50):
        if _min_kink_distance(model, X) >= 1e-3:
            break
        X = X + rng.normal(scale=1e-2, size=X.shape)

    _, gw, gb = _loss_and_grads(model.weights, model.biases, X, onehot, l2)
    analytic = np.concatenate([g.ravel() for g in gw + gb])
    params = model.weights + model.biases
    offsets = np.cumsum([0] + [p.size for p in params])

    def loss_at() -> float:
        loss, _, _ = _loss_and_grads(
            model.weights, model.biases, X, onehot, l2
        )
        return loss

    total = offsets[-1]
    coords = rng.choice(total, size=min(n_coords, total), replace=False)
    worst = 0.0
    for c in coords:
        p_idx = int(np.searchsorted(offsets, c, side="right") - 1)
        flat_idx = int(c - offsets[p_idx])
        target = params[p_idx]
        original = target.flat[flat_idx]
        target.flat[flat_idx] = original + h
        up = loss_at()
        target.flat[flat_idx] = original - h
        down = loss_at()
        target.flat[flat_idx] = original
        fd = (up - down) / (2 * h)
        an = analytic[c]
        scale = max(abs(fd), abs(an))
        if scale < 1e-12:
            continue
        worst = max(worst, abs(fd - an) / scale)
    return worst


def _min_kink_distance(model: MlpModel, X) -> float:
    """Smallest |preactivation| across hidden layers (inf with no hidden)."""
    h = X
    smallest = np.inf
    for W, b in zip(model.weights[:-1], model.biases[:-1]):
        z = h @ W + b
        smallest = min(smallest, float(np.abs(z).min()))
        h = np.maximum(z, 0.0)
    return smallest
