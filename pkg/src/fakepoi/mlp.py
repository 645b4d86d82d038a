"""Multilayer perceptron: ReLU hidden layers, softmax output, cross-entropy.

Weights are stored per layer as ``(fan_out, fan_in)`` matrices. All routines
accept either one example (1-D input) or a batch of row vectors.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np

from .errors import FormatVersionError, ValidationError

MODEL_FORMAT = "fakepoi-mlp"
MODEL_VERSION = 1


@dataclass
class Network:
    layer_sizes: tuple
    weights: List[np.ndarray]
    biases: List[np.ndarray]
    hidden_activation: str = "relu"
    output_activation: str = "softmax"

    @property
    def n_layers(self):
        return len(self.weights)

    def params(self):
        """Weights then biases, in layer order (the order optimizers use)."""
        return list(self.weights) + list(self.biases)

    def copy(self):
        return Network(tuple(self.layer_sizes), [w.copy() for w in self.weights],
                       [b.copy() for b in self.biases], self.hidden_activation, self.output_activation)

    def check(self):
        sizes = self.layer_sizes
        if len(self.weights) != len(sizes) - 1 or len(self.biases) != len(sizes) - 1:
            raise ValidationError("parameter count does not match layer_sizes")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.shape != (sizes[i + 1], sizes[i]) or b.shape != (sizes[i + 1],):
                raise ValidationError(f"layer {i}: shapes {w.shape}, {b.shape} do not chain")
        return self

    def to_dict(self):
        return {
            "format": MODEL_FORMAT,
            "version": MODEL_VERSION,
            "layer_sizes": list(self.layer_sizes),
            "hidden_activation": self.hidden_activation,
            "output_activation": self.output_activation,
            "weights": [w.tolist() for w in self.weights],
            "biases": [b.tolist() for b in self.biases],
        }

    @classmethod
    def from_dict(cls, d):
        if d.get("format") != MODEL_FORMAT or d.get("version") != MODEL_VERSION:
            raise FormatVersionError(f"unsupported model {d.get('format')!r} version {d.get('version')!r}")
        if d["hidden_activation"] != "relu" or d["output_activation"] != "softmax":
            raise FormatVersionError("only relu hidden / softmax output networks are supported")
        net = cls(tuple(d["layer_sizes"]),
                  [np.array(w, dtype=float).reshape(o, i) for w, o, i in
                   zip(d["weights"], d["layer_sizes"][1:], d["layer_sizes"][:-1])],
                  [np.array(b, dtype=float) for b in d["biases"]])
        return net.check()

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_dict()), encoding="utf-8")

    @classmethod
    def load(cls, path):
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass
class DropoutMask:
    masks: List[np.ndarray]
    keep_prob: float


@dataclass
class ForwardTrace:
    inputs: np.ndarray
    pre_activations: List[np.ndarray]
    activations: List[np.ndarray]
    output: np.ndarray
    mask: Optional[DropoutMask] = None


@dataclass(frozen=True)
class LossConfig:
    l1: float = 0.0
    l2: float = 0.0
    prob_clamp: float = 1e-15

    def __post_init__(self):
        if self.l1 < 0 or self.l2 < 0:
            raise ValidationError("regularization coefficients must be nonnegative")
        if not 0 < self.prob_clamp < 0.5:
            raise ValidationError("prob_clamp must be in (0, 0.5)")


@dataclass
class Gradients:
    weights: List[np.ndarray]
    biases: List[np.ndarray] = field(default_factory=list)

    def params(self):
        return list(self.weights) + list(self.biases)


def init(layer_sizes, seed=None, mode="scaled"):
    """Random weights, zero biases.

    ``mode="scaled"`` draws ``U(-0.05, 0.05) / sqrt(fan_in)``; ``"literal"``
    draws ``U(0, 1)`` as a fidelity option (it saturates wide layers).
    """
    sizes = tuple(int(s) for s in layer_sizes)
    if len(sizes) < 2 or min(sizes) < 1:
        raise ValidationError(f"invalid layer sizes {layer_sizes!r}")
    if mode not in ("scaled", "literal"):
        raise ValidationError(f"unknown init mode {mode!r}")
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        if mode == "scaled":
            w = rng.uniform(-0.05, 0.05, size=(fan_out, fan_in)) / np.sqrt(fan_in)
        else:
            w = rng.uniform(0.0, 1.0, size=(fan_out, fan_in))
        weights.append(w)
        biases.append(np.zeros(fan_out))
    return Network(sizes, weights, biases)


def relu(z):
    return np.maximum(z, 0.0)


def softmax(z):
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def draw_dropout(net, ratio, rng, batch=None):
    """Bernoulli keep-masks for every hidden layer."""
    keep = 1.0 - ratio
    shape = (lambda n: (n,)) if batch is None else (lambda n: (batch, n))
    masks = [rng.random(shape(n)) < keep for n in net.layer_sizes[1:-1]]
    return DropoutMask(masks, keep)


def forward(net, x, mask=None):
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != net.layer_sizes[0]:
        raise ValidationError(f"input width {x.shape[-1]} != network input {net.layer_sizes[0]}")
    a = x
    pre, acts = [], []
    last = net.n_layers - 1
    for i, (w, b) in enumerate(zip(net.weights, net.biases)):
        z = a @ w.T + b
        pre.append(z)
        if i < last:
            a = relu(z)
            if mask is not None:
                a = a * mask.masks[i] / mask.keep_prob
        else:
            a = softmax(z)
        acts.append(a)
    return ForwardTrace(x, pre, acts, acts[-1], mask)


def regularization(net, cfg):
    total = 0.0
    if cfg.l1:
        total += cfg.l1 * sum(np.abs(w).sum() for w in net.weights)
    if cfg.l2:
        total += cfg.l2 * sum((w * w).sum() for w in net.weights)
    return float(total)


def data_loss(output, target, prob_clamp=1e-15):
    """Cross-entropy summed over output units and examples (no penalty)."""
    o = np.clip(output, prob_clamp, 1.0 - prob_clamp)
    t = np.asarray(target, dtype=float)
    return float(-(t * np.log(o) + (1.0 - t) * np.log(1.0 - o)).sum())


def loss(trace, target, cfg, net):
    return data_loss(trace.output, target, cfg.prob_clamp) + regularization(net, cfg)


def backward(net, trace, target, cfg):
    """Gradients of :func:`loss` with respect to every weight and bias."""
    t = np.asarray(target, dtype=float)
    o = trace.output
    if t.shape != o.shape:
        raise ValidationError(f"target shape {t.shape} != output shape {o.shape}")
    o2 = np.atleast_2d(o)
    t2 = np.atleast_2d(t)
    eps = cfg.prob_clamp
    inside = (o2 > eps) & (o2 < 1.0 - eps)
    # dL/dO, zero where the clamp is active
    with np.errstate(divide="ignore", invalid="ignore"):
        g = np.where(inside, -t2 / o2 + (1.0 - t2) / (1.0 - o2), 0.0)
    # softmax Jacobian: dL/dz_k = O_k (g_k - sum_y g_y O_y)
    delta = o2 * (g - (g * o2).sum(axis=1, keepdims=True))

    inputs = [np.atleast_2d(trace.inputs)] + [np.atleast_2d(a) for a in trace.activations[:-1]]
    gw = [None] * net.n_layers
    gb = [None] * net.n_layers
    for i in range(net.n_layers - 1, -1, -1):
        gw[i] = delta.T @ inputs[i]
        gb[i] = delta.sum(axis=0)
        if i > 0:
            delta = delta @ net.weights[i]
            delta = delta * (np.atleast_2d(trace.pre_activations[i - 1]) > 0)
            if trace.mask is not None:
                m = np.atleast_2d(trace.mask.masks[i - 1])
                delta = delta * m / trace.mask.keep_prob
    for i, w in enumerate(net.weights):
        if cfg.l1:
            gw[i] = gw[i] + cfg.l1 * np.sign(w)
        if cfg.l2:
            gw[i] = gw[i] + 2.0 * cfg.l2 * w
    return Gradients(gw, gb)


def predict_proba(net, x):
    """Class probabilities ``[P(fake), P(real)]`` with dropout disabled."""
    return forward(net, x).output


def predict(net, x):
    """Return ``(class, prob_fake)``; ties go to class 0 (fake)."""
    proba = predict_proba(net, x)
    cls = np.argmax(proba, axis=-1)  # argmax picks the first maximum
    return cls, proba[..., 0]
