"""Optimizers and training loops (sequential and lock-free node-averaged)."""

import csv
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np

from .errors import DivergenceError, ValidationError
from .mlp import LossConfig, backward, data_loss, draw_dropout, forward

log = logging.getLogger(__name__)

# spawn-key namespaces for the streams derived from one run seed
STREAM_TRAIN = 0
STREAM_INIT = 1
STREAM_SPLIT = 2
STREAM_SMOTE = 3


def derive_rng(seed, *key):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(key)))


def derive_seed(seed, *key):
    """A 32-bit integer seed derived from ``seed`` for a named purpose."""
    return int(np.random.SeedSequence(seed, spawn_key=tuple(key)).generate_state(1)[0])


def resolve_seed(seed):
    """Seed ``-1`` means draw fresh entropy; the drawn value is returned for logging."""
    if seed is None or seed == -1:
        drawn = int(np.random.SeedSequence().generate_state(1)[0])
        log.info("seed -1: drew seed %d", drawn)
        return drawn
    if seed < 0:
        raise ValidationError(f"seed must be -1 or nonnegative, got {seed}")
    return int(seed)


@dataclass
class TrainConfig:
    epochs: int = 10
    hidden_size: int = 200
    hidden_layers: int = 1
    dropout_ratio: float = 0.5
    l1: float = 1e-5
    l2: float = 1e-5
    optimizer: str = "adadelta"
    rho: float = 0.99
    epsilon: float = 1e-8
    learning_rate: float = 0.005
    nodes: int = 1
    cores_per_node: int = 1
    samples_per_iteration: Optional[int] = None
    seed: int = -1
    init_mode: str = "scaled"
    score_every: str = "epoch"
    prob_clamp: float = 1e-15

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.epochs < 1:
            raise ValidationError(f"epochs must be at least 1, got {self.epochs}")
        if self.hidden_layers < 0 or (self.hidden_layers and self.hidden_size < 1):
            raise ValidationError("hidden layers need a positive hidden_size")
        if not 0.0 <= self.dropout_ratio < 1.0:
            raise ValidationError(f"dropout_ratio must be in [0, 1), got {self.dropout_ratio}")
        if self.l1 < 0 or self.l2 < 0:
            raise ValidationError("l1 and l2 must be nonnegative")
        if self.optimizer not in ("adadelta", "sgd"):
            raise ValidationError(f"unknown optimizer {self.optimizer!r}")
        if not 0.0 < self.rho < 1.0:
            raise ValidationError(f"rho must be in (0, 1), got {self.rho}")
        if self.epsilon <= 0:
            raise ValidationError("epsilon must be positive")
        if self.learning_rate < 0:
            raise ValidationError("learning_rate must be nonnegative")
        if self.nodes < 1 or self.cores_per_node < 1:
            raise ValidationError("nodes and cores_per_node must be at least 1")
        if self.samples_per_iteration is not None and self.samples_per_iteration < 1:
            raise ValidationError("samples_per_iteration must be positive")
        if self.init_mode not in ("scaled", "literal"):
            raise ValidationError(f"unknown init_mode {self.init_mode!r}")
        if self.score_every not in ("epoch", "iteration"):
            raise ValidationError(f"score_every must be 'epoch' or 'iteration'")
        return self

    @property
    def layer_sizes_hidden(self):
        return (self.hidden_size,) * self.hidden_layers

    @property
    def loss_config(self):
        return LossConfig(self.l1, self.l2, self.prob_clamp)

    @property
    def parallel(self):
        return self.nodes * self.cores_per_node > 1 or self.samples_per_iteration is not None

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValidationError(f"unknown TrainConfig keys: {sorted(unknown)}")
        return cls(**d)


@dataclass
class AdadeltaState:
    sq_grad: List[np.ndarray]
    sq_delta: List[np.ndarray]

    @classmethod
    def zeros_like(cls, net):
        return cls([np.zeros_like(p) for p in net.params()],
                   [np.zeros_like(p) for p in net.params()])


@dataclass
class RunLog:
    seed: int = None
    entries: list = field(default_factory=list)
    iterations: list = field(default_factory=list)

    def add(self, epoch, train_loss, val_loss, seconds, param_norm):
        self.entries.append({"epoch": epoch, "train_loss": train_loss, "val_loss": val_loss,
                             "seconds": seconds, "param_norm": param_norm})

    @property
    def train_loss(self):
        return [e["train_loss"] for e in self.entries]

    @property
    def val_loss(self):
        return [e["val_loss"] for e in self.entries]

    def __len__(self):
        return len(self.entries)

    def to_csv(self, path):
        with Path(path).open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["epoch", "train_loss", "val_loss", "seconds"])
            for e in self.entries:
                writer.writerow([e["epoch"], repr(e["train_loss"]), repr(e["val_loss"]),
                                 f"{e['seconds']:.3f}"])


def _check_finite(arrays, what):
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise DivergenceError(f"non-finite {what}")


def sgd_step(net, grads, learning_rate, check_finite=True):
    """``p -= learning_rate * g`` for every parameter, in place."""
    gs = grads.params()
    if check_finite:
        _check_finite(gs, "gradient")
    for p, g in zip(net.params(), gs):
        if p.shape != g.shape:
            raise ValidationError(f"gradient shape {g.shape} != parameter shape {p.shape}")
        p -= learning_rate * g
    return net


def adadelta_step(net, grads, state, rho, epsilon, check_finite=True):
    """One ADADELTA update of every parameter, in place; returns ``(net, state)``."""
    gs = grads.params()
    if check_finite:
        _check_finite(gs, "gradient")
    for p, g, eg, ex in zip(net.params(), gs, state.sq_grad, state.sq_delta):
        eg *= rho
        eg += (1.0 - rho) * np.square(g)
        # step = sqrt(E[dx^2] + eps) / sqrt(E[g^2] + eps) * g, applied as p -= step
        step = ex + epsilon
        np.sqrt(step, out=step)
        denom = eg + epsilon
        np.sqrt(denom, out=denom)
        step /= denom
        step *= g
        ex *= rho
        ex += (1.0 - rho) * np.square(step)
        p -= step
    if check_finite:
        _check_finite(state.sq_grad + state.sq_delta, "optimizer state")
    return net, state


def one_hot(labels, n_classes=2):
    labels = np.asarray(labels, dtype=np.int64)
    out = np.zeros((len(labels), n_classes))
    out[np.arange(len(labels)), labels] = 1.0
    return out


def mean_data_loss(net, X, y, prob_clamp=1e-15):
    """Mean per-example cross-entropy with dropout off."""
    if len(y) == 0:
        return math.nan
    out = forward(net, X).output
    return data_loss(out, one_hot(y, out.shape[1]), prob_clamp) / len(y)


def param_norm(net):
    return float(math.sqrt(sum(float((p * p).sum()) for p in net.params())))


class _Worker:
    """Per-example update loop shared by both trainers."""

    def __init__(self, net, cfg, state):
        self.net = net
        self.cfg = cfg
        self.loss_cfg = cfg.loss_config
        self.state = state
        self.dropout = cfg.dropout_ratio > 0 and len(net.layer_sizes) > 2

    def run(self, X, T, indices, rng):
        net, cfg = self.net, self.cfg
        # overflow surfaces as a non-finite output and is raised below
        with np.errstate(over="ignore", invalid="ignore"):
            self._run(X, T, indices, rng)

    def _run(self, X, T, indices, rng):
        net, cfg = self.net, self.cfg
        for i in indices:
            mask = draw_dropout(net, cfg.dropout_ratio, rng) if self.dropout else None
            trace = forward(net, X[i], mask)
            if not np.all(np.isfinite(trace.output)):
                raise DivergenceError("non-finite network output")
            grads = backward(net, trace, T[i], self.loss_cfg)
            if cfg.optimizer == "adadelta":
                adadelta_step(net, grads, self.state, cfg.rho, cfg.epsilon, check_finite=False)
            else:
                sgd_step(net, grads, cfg.learning_rate, check_finite=False)


def _check_inputs(net, data, val):
    if len(data) == 0:
        raise ValidationError("training data is empty")
    if data.matrix.shape[1] != net.layer_sizes[0]:
        raise ValidationError(
            f"data width {data.matrix.shape[1]} != network input {net.layer_sizes[0]}"
        )
    if val is not None and len(val) and val.matrix.shape[1] != net.layer_sizes[0]:
        raise ValidationError("validation width does not match the network")


def _score(net, data, val, cfg, epoch, started, run_log):
    train_loss = mean_data_loss(net, data.matrix, data.labels, cfg.prob_clamp)
    val_loss = (mean_data_loss(net, val.matrix, val.labels, cfg.prob_clamp)
                if val is not None and len(val) else math.nan)
    norm = param_norm(net)
    if not (math.isfinite(train_loss) and math.isfinite(norm)):
        raise DivergenceError(f"training diverged at epoch {epoch}", epoch=epoch)
    run_log.add(epoch, train_loss, val_loss, time.perf_counter() - started, norm)
    log.debug("epoch %d train %.5f val %.5f", epoch, train_loss, val_loss)


def train_sequential(net, data, cfg, val=None):
    """Per-example training on one worker; returns ``(trained_net, RunLog)``.

    Deterministic for a fixed nonnegative ``cfg.seed``. ``net`` is not modified.
    """
    _check_inputs(net, data, val)
    seed = resolve_seed(cfg.seed)
    net = net.copy()
    rng = derive_rng(seed, STREAM_TRAIN, 0, 0)
    worker = _Worker(net, cfg, AdadeltaState.zeros_like(net))
    X, T = data.matrix, one_hot(data.labels, net.layer_sizes[-1])
    run_log = RunLog(seed=seed)
    started = time.perf_counter()
    for epoch in range(1, cfg.epochs + 1):
        order = rng.permutation(len(data))
        try:
            worker.run(X, T, order, rng)
        except DivergenceError as exc:
            raise DivergenceError(f"{exc} at epoch {epoch}", epoch=epoch) from None
        _score(net, data, val, cfg, epoch, started, run_log)
    return net, run_log


class _Node:
    def __init__(self, index, n_examples, seed, cfg, template):
        self.index = index
        self.n = n_examples
        self.rng = derive_rng(seed, STREAM_TRAIN, index, 0)
        # core 0 shares the node stream; reduces to the sequential trainer
        self.core_rngs = [self.rng] + [derive_rng(seed, STREAM_TRAIN, index, c)
                                       for c in range(1, cfg.cores_per_node)]
        self.state = AdadeltaState.zeros_like(template)
        self.order = np.empty(0, dtype=np.int64)
        self.cursor = 0

    def select(self, count):
        if self.cursor + count > len(self.order):
            self.order = self.rng.permutation(self.n)
            self.cursor = 0
        chosen = self.order[self.cursor:self.cursor + count]
        self.cursor += count
        return chosen


def _average_into(target, nets):
    for i, p in enumerate(target.params()):
        total = nets[0].params()[i].copy()
        for other in nets[1:]:
            total += other.params()[i]
        p[...] = total / len(nets)


def train_hogwild(net, data, cfg, val=None):
    """Node-averaged lock-free training; returns ``(trained_net, RunLog)``.

    Every outer iteration each node copies the global parameters, draws
    ``samples_per_iteration`` examples, splits them across its cores and lets
    the cores update the node copy concurrently without locks. The global
    parameters then become the mean of the node copies. Optimizer state is
    private to a node and persists across its iterations.
    """
    _check_inputs(net, data, val)
    seed = resolve_seed(cfg.seed)
    n = len(data)
    spi = cfg.samples_per_iteration or n
    if spi > n:
        raise ValidationError(f"samples_per_iteration {spi} exceeds training size {n}")
    per_epoch = math.ceil(n / spi)
    global_net = net.copy()
    nodes = [_Node(k, n, seed, cfg, global_net) for k in range(cfg.nodes)]
    X, T = data.matrix, one_hot(data.labels, net.layer_sizes[-1])
    run_log = RunLog(seed=seed)
    n_workers = cfg.nodes * cfg.cores_per_node
    pool = ThreadPoolExecutor(max_workers=n_workers) if n_workers > 1 else None
    started = time.perf_counter()
    try:
        for epoch in range(1, cfg.epochs + 1):
            for it in range(per_epoch):
                local_nets = [global_net.copy() for _ in nodes]
                jobs = []
                for node, local in zip(nodes, local_nets):
                    worker = _Worker(local, cfg, node.state)
                    parts = np.array_split(node.select(spi), cfg.cores_per_node)
                    for part, core_rng in zip(parts, node.core_rngs):
                        jobs.append((worker, part, core_rng))
                try:
                    if pool is None:
                        for worker, part, core_rng in jobs:
                            worker.run(X, T, part, core_rng)
                    else:
                        futures = [pool.submit(w.run, X, T, part, r) for w, part, r in jobs]
                        for f in futures:
                            f.result()
                except DivergenceError as exc:
                    raise DivergenceError(f"{exc} at epoch {epoch}", epoch=epoch) from None
                _average_into(global_net, local_nets)
                if cfg.score_every == "iteration":
                    run_log.iterations.append({
                        "epoch": epoch, "iteration": it,
                        "train_loss": mean_data_loss(global_net, X, data.labels, cfg.prob_clamp),
                    })
            _score(global_net, data, val, cfg, epoch, started, run_log)
    finally:
        if pool is not None:
            pool.shutdown()
    return global_net, run_log


def train(net, data, cfg, val=None):
    """Dispatch to the Hogwild trainer when the topology asks for parallelism."""
    if cfg.parallel:
        return train_hogwild(net, data, cfg, val)
    return train_sequential(net, data, cfg, val)
