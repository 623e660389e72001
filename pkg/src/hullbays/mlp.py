"""One-hidden-layer sigmoid perceptron trained by online backpropagation with momentum.

The loss for one sample is the squared error against a one-hot target,
averaged over the output units: ``mean((o - t)**2)``.  Averaging keeps the
step size independent of the class count; with the summed error the default
``learning_rate=0.8, momentum=0.7`` drives a 10-output net into saturation.
Each weight update is ``dw = -learning_rate * grad + momentum * dw_prev``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .errors import CorruptFile, VersionMismatch
from .features import LAYOUT_VERSION

MODEL_FORMAT = "hullbays-mlp"
MODEL_VERSION = 1
PARAMS = ("w_hidden", "b_hidden", "w_out", "b_out")
# Relative errors are taken against max(|analytic|, |numeric|, floor) so that
# parameters with vanishing gradients do not turn round-off into failures.
GRAD_CHECK_FLOOR = 1e-6


@dataclass
class TrainConfig:
    learning_rate: float = 0.8
    momentum: float = 0.7
    epochs: int = 50
    hidden_dim: int = 110
    seed: int = 0
    shuffle: bool = True
    patience: int | None = None  # early stop on training-accuracy plateau

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be > 0")
        if not 0 <= self.momentum < 1:
            raise ValueError("momentum must be in [0, 1)")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.hidden_dim < 1:
            raise ValueError("hidden_dim must be >= 1")


def sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


@dataclass
class MlpModel:
    w_hidden: np.ndarray  # (n_in, n_hidden)
    b_hidden: np.ndarray
    w_out: np.ndarray  # (n_hidden, n_out)
    b_out: np.ndarray
    norm_min: np.ndarray
    norm_max: np.ndarray
    seed: int = 0
    config: dict = field(default_factory=dict)
    feature_layout: str = LAYOUT_VERSION
    v_w_hidden: np.ndarray = None
    v_b_hidden: np.ndarray = None
    v_w_out: np.ndarray = None
    v_b_out: np.ndarray = None

    def __post_init__(self):
        for name in PARAMS:
            setattr(self, name, np.array(getattr(self, name), dtype=float))
            if getattr(self, "v_" + name) is None:
                setattr(self, "v_" + name, np.zeros_like(getattr(self, name)))
            else:
                setattr(self, "v_" + name, np.array(getattr(self, "v_" + name), dtype=float))
        self.norm_min = np.array(self.norm_min, dtype=float)
        self.norm_max = np.array(self.norm_max, dtype=float)
        n_in, n_hidden = self.w_hidden.shape
        n_out = self.w_out.shape[1]
        if (
            self.b_hidden.shape != (n_hidden,)
            or self.w_out.shape != (n_hidden, n_out)
            or self.b_out.shape != (n_out,)
            or self.norm_min.shape != (n_in,)
            or self.norm_max.shape != (n_in,)
        ):
            raise ValueError("inconsistent parameter shapes")
        if np.any(self.norm_min > self.norm_max):
            raise ValueError("norm_min must not exceed norm_max")

    @classmethod
    def initialize(cls, n_in, n_hidden, n_out, seed=0, norm_min=None, norm_max=None):
        """Weights and biases uniform in [-0.5, 0.5] from a seeded generator."""
        rng = np.random.default_rng(seed)
        return cls(
            w_hidden=rng.uniform(-0.5, 0.5, (n_in, n_hidden)),
            b_hidden=rng.uniform(-0.5, 0.5, n_hidden),
            w_out=rng.uniform(-0.5, 0.5, (n_hidden, n_out)),
            b_out=rng.uniform(-0.5, 0.5, n_out),
            norm_min=np.zeros(n_in) if norm_min is None else norm_min,
            norm_max=np.ones(n_in) if norm_max is None else norm_max,
            seed=seed,
        )

    @classmethod
    def zeros(cls, n_in, n_hidden, n_out):
        return cls(
            np.zeros((n_in, n_hidden)),
            np.zeros(n_hidden),
            np.zeros((n_hidden, n_out)),
            np.zeros(n_out),
            np.zeros(n_in),
            np.ones(n_in),
        )

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.w_hidden.shape[0], self.w_hidden.shape[1], self.w_out.shape[1]


# -- normalisation --------------------------------------------------------


def fit_norm(features) -> tuple[np.ndarray, np.ndarray]:
    features = np.asarray(features, dtype=float)
    return features.min(axis=0), features.max(axis=0)


def normalize(features, norm_min, norm_max) -> np.ndarray:
    """Min-max scale into [0, 1]; constant features map to 0, others are clamped."""
    features = np.asarray(features, dtype=float)
    span = norm_max - norm_min
    safe = np.where(span > 0, span, 1.0)
    scaled = np.where(span > 0, (features - norm_min) / safe, 0.0)
    return np.clip(scaled, 0.0, 1.0)


def denormalize(scaled, norm_min, norm_max) -> np.ndarray:
    return np.asarray(scaled, dtype=float) * (norm_max - norm_min) + norm_min


# -- forward / backward ---------------------------------------------------


def forward(model: MlpModel, x) -> np.ndarray:
    """Output activations for one normalised input or a batch of rows."""
    return _forward(model, np.asarray(x, dtype=float))[1]


def _forward(model, x):
    hidden = sigmoid(x @ model.w_hidden + model.b_hidden)
    return hidden, sigmoid(hidden @ model.w_out + model.b_out)


def loss(model: MlpModel, x, target) -> float:
    return float(np.mean((forward(model, x) - target) ** 2))


def gradients(model: MlpModel, x, target) -> dict[str, np.ndarray]:
    """Analytic gradient of the single-sample loss for every parameter."""
    x = np.asarray(x, dtype=float)
    hidden, out = _forward(model, x)
    delta_out = (2.0 / out.size) * (out - target) * out * (1.0 - out)
    delta_hidden = (model.w_out @ delta_out) * hidden * (1.0 - hidden)
    return {
        "w_hidden": np.outer(x, delta_hidden),
        "b_hidden": delta_hidden,
        "w_out": np.outer(hidden, delta_out),
        "b_out": delta_out,
    }


def train_step(model: MlpModel, x, target, learning_rate: float, momentum: float) -> None:
    """Single online update; :func:`train_epoch` inlines the same arithmetic."""
    grads = gradients(model, x, target)
    for name in PARAMS:
        v = getattr(model, "v_" + name)
        v *= momentum
        v -= learning_rate * grads[name]
        getattr(model, name)[...] += v


def gradient_check(model: MlpModel, x, target, h: float = 1e-5) -> float:
    """Largest relative gap between analytic and central-difference gradients."""
    analytic = gradients(model, x, target)
    worst = 0.0
    for name in PARAMS:
        param = getattr(model, name)
        flat = param.reshape(-1)
        grad = analytic[name].reshape(-1)
        for i in range(flat.size):
            saved = flat[i]
            flat[i] = saved + h
            up = loss(model, x, target)
            flat[i] = saved - h
            down = loss(model, x, target)
            flat[i] = saved
            numeric = (up - down) / (2 * h)
            denom = max(abs(grad[i]), abs(numeric), GRAD_CHECK_FLOOR)
            worst = max(worst, abs(grad[i] - numeric) / denom)
    return worst


# -- training -------------------------------------------------------------


def one_hot(labels, n_classes: int = 10) -> np.ndarray:
    labels = np.asarray(labels, dtype=int)
    out = np.zeros((len(labels), n_classes))
    out[np.arange(len(labels)), labels] = 1.0
    return out


def evaluate_fit(model: MlpModel, x, targets) -> tuple[float, float]:
    """Mean squared error per output unit and accuracy (fraction) on normalised rows."""
    out = forward(model, x)
    mse = float(np.mean((out - targets) ** 2))
    acc = float(np.mean(out.argmax(axis=1) == targets.argmax(axis=1)))
    return mse, acc


def train_epoch(model: MlpModel, x, targets, config: TrainConfig, rng=None) -> dict:
    """One pass of per-sample updates over normalised rows ``x``.

    The visiting order is shuffled with ``rng`` when ``config.shuffle`` is set.
    Returns the post-epoch ``mse`` and ``accuracy`` on the same rows.
    """
    x = np.asarray(x, dtype=float)
    order = np.arange(len(x))
    if config.shuffle:
        if rng is None:
            rng = np.random.default_rng(config.seed)
        rng.shuffle(order)

    w_h, b_h, w_o, b_o = model.w_hidden, model.b_hidden, model.w_out, model.b_out
    v_w_h, v_b_h, v_w_o, v_b_o = model.v_w_hidden, model.v_b_hidden, model.v_w_out, model.v_b_out
    lr, mom = config.learning_rate, config.momentum
    scale = 2.0 / w_o.shape[1]
    for i in order:
        xi = x[i]
        hidden = 1.0 / (1.0 + np.exp(-(xi @ w_h + b_h)))
        out = 1.0 / (1.0 + np.exp(-(hidden @ w_o + b_o)))
        delta_out = scale * (out - targets[i]) * out * (1.0 - out)
        delta_hidden = (w_o @ delta_out) * hidden * (1.0 - hidden)

        v_w_o *= mom
        v_w_o -= lr * np.outer(hidden, delta_out)
        v_b_o *= mom
        v_b_o -= lr * delta_out
        v_w_h *= mom
        v_w_h -= lr * np.outer(xi, delta_hidden)
        v_b_h *= mom
        v_b_h -= lr * delta_hidden
        w_o += v_w_o
        b_o += v_b_o
        w_h += v_w_h
        b_h += v_b_h

    mse, acc = evaluate_fit(model, x, targets)
    return {"mse": mse, "accuracy": acc}


def train(features, labels, config: TrainConfig, n_classes: int = 10, log=None):
    """Fit normalisation on ``features``, then train a fresh model.

    Returns ``(model, history)`` where ``history`` holds one metrics dict per
    epoch.  ``log`` is called with each epoch's dict as it completes.
    """
    features = np.asarray(features, dtype=float)
    norm_min, norm_max = fit_norm(features)
    x = normalize(features, norm_min, norm_max)
    targets = one_hot(labels, n_classes)
    model = MlpModel.initialize(
        x.shape[1], config.hidden_dim, n_classes, config.seed, norm_min, norm_max
    )
    model.config = asdict(config)
    rng = np.random.default_rng([config.seed, 1])
    history = []
    best, stale = -1.0, 0
    for epoch in range(1, config.epochs + 1):
        metrics = {"epoch": epoch, **train_epoch(model, x, targets, config, rng)}
        history.append(metrics)
        if log is not None:
            log(metrics)
        if config.patience is not None:
            if metrics["accuracy"] > best:
                best, stale = metrics["accuracy"], 0
            else:
                stale += 1
                if stale >= config.patience:
                    break
    return model, history


# -- inference ------------------------------------------------------------


def predict_proba(model: MlpModel, features) -> np.ndarray:
    return forward(model, normalize(features, model.norm_min, model.norm_max))


def predict(model: MlpModel, features) -> int:
    """Class of one raw feature vector; ties go to the lowest class index."""
    return int(np.argmax(predict_proba(model, features)))


def predict_batch(model: MlpModel, features) -> np.ndarray:
    return np.argmax(predict_proba(model, np.atleast_2d(features)), axis=1)


# -- persistence ----------------------------------------------------------


def model_to_dict(model: MlpModel) -> dict:
    doc = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "feature_layout": model.feature_layout,
        "dims": list(model.dims),
        "seed": int(model.seed),
        "config": model.config,
        "norm_min": model.norm_min.tolist(),
        "norm_max": model.norm_max.tolist(),
    }
    for name in PARAMS:
        doc[name] = getattr(model, name).tolist()
        doc["v_" + name] = getattr(model, "v_" + name).tolist()
    return doc


def save_model(model: MlpModel, path) -> None:
    """Write the model as JSON; floats round-trip exactly."""
    Path(path).write_text(json.dumps(model_to_dict(model), indent=1) + "\n")


def load_model(path) -> MlpModel:
    """Read a model written by :func:`save_model`.

    Raises:
        VersionMismatch: the file is from another format version.
        CorruptFile: unparsable JSON, missing fields or inconsistent shapes.
    """
    try:
        doc = json.loads(Path(path).read_text())
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CorruptFile(f"{path}: not a readable model file ({exc})") from exc
    if not isinstance(doc, dict) or doc.get("format") != MODEL_FORMAT:
        raise CorruptFile(f"{path}: not a {MODEL_FORMAT} file")
    if doc.get("version") != MODEL_VERSION:
        raise VersionMismatch(
            f"{path}: model version {doc.get('version')!r}, expected {MODEL_VERSION}"
        )
    try:
        kwargs = {name: doc[name] for name in PARAMS}
        kwargs.update({"v_" + name: doc["v_" + name] for name in PARAMS})
        model = MlpModel(
            norm_min=doc["norm_min"],
            norm_max=doc["norm_max"],
            seed=doc["seed"],
            config=doc["config"],
            feature_layout=doc.get("feature_layout", ""),
            **kwargs,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptFile(f"{path}: {exc}") from exc
    if list(model.dims) != doc.get("dims"):
        raise CorruptFile(f"{path}: dims field disagrees with weight shapes")
    return model
