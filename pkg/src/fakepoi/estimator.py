"""Scikit-learn compatible classifier around the MLP and its trainers."""

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from . import mlp
from .errors import ValidationError
from .features import EncodedDataset
from .train import STREAM_INIT, TrainConfig, derive_seed, resolve_seed, train

_CONFIG_PARAMS = (
    "epochs", "hidden_size", "hidden_layers", "dropout_ratio", "l1", "l2", "optimizer",
    "rho", "epsilon", "learning_rate", "nodes", "cores_per_node", "samples_per_iteration",
    "init_mode", "score_every",
)


class FakePOIClassifier(ClassifierMixin, BaseEstimator):
    """MLP classifier for real (1) vs fake (0) records.

    Defaults follow the hyperparameter table the model was tuned with:
    one hidden layer of 200 ReLU units, 10 epochs, dropout 0.5, L1 = L2 = 1e-5,
    ADADELTA with rho 0.99 and epsilon 1e-8. ``hidden_layers=0`` gives a
    plain logistic (softmax) model trained the same way.

    ``random_state=-1`` draws a fresh seed; the value used is kept in
    ``seed_``.
    """

    def __init__(self, hidden_size=200, hidden_layers=1, epochs=10, dropout_ratio=0.5,
                 l1=1e-5, l2=1e-5, optimizer="adadelta", rho=0.99, epsilon=1e-8,
                 learning_rate=0.005, nodes=1, cores_per_node=1, samples_per_iteration=None,
                 init_mode="scaled", score_every="epoch", random_state=-1):
        self.hidden_size = hidden_size
        self.hidden_layers = hidden_layers
        self.epochs = epochs
        self.dropout_ratio = dropout_ratio
        self.l1 = l1
        self.l2 = l2
        self.optimizer = optimizer
        self.rho = rho
        self.epsilon = epsilon
        self.learning_rate = learning_rate
        self.nodes = nodes
        self.cores_per_node = cores_per_node
        self.samples_per_iteration = samples_per_iteration
        self.init_mode = init_mode
        self.score_every = score_every
        self.random_state = random_state

    def train_config(self, seed=None):
        params = {p: getattr(self, p) for p in _CONFIG_PARAMS}
        return TrainConfig(seed=self.random_state if seed is None else seed, **params)

    @classmethod
    def from_config(cls, cfg):
        return cls(random_state=cfg.seed, **{p: getattr(cfg, p) for p in _CONFIG_PARAMS})

    def fit(self, X, y, X_val=None, y_val=None):
        X, y = check_X_y(X, y, dtype=np.float64)
        if not set(np.unique(y)) <= {0, 1}:
            raise ValidationError("labels must be 0 (fake) or 1 (real)")
        self.seed_ = resolve_seed(self.random_state)
        cfg = self.train_config(self.seed_)
        sizes = (X.shape[1],) + cfg.layer_sizes_hidden + (2,)
        net = mlp.init(sizes, derive_seed(self.seed_, STREAM_INIT), cfg.init_mode)
        val = None
        if X_val is not None:
            X_val, y_val = check_X_y(X_val, y_val, dtype=np.float64)
            val = EncodedDataset(X_val, y_val.astype(np.int64))
        self.net_, self.run_log_ = train(net, EncodedDataset(X, y.astype(np.int64)), cfg, val)
        self.classes_ = np.array([0, 1])
        self.n_features_in_ = X.shape[1]
        return self

    def predict_proba(self, X):
        check_is_fitted(self, "net_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValidationError(f"expected {self.n_features_in_} features, got {X.shape[1]}")
        return mlp.predict_proba(self.net_, X)

    def predict(self, X):
        # argmax keeps the first maximum, so ties resolve to class 0 (fake)
        return self.classes_[np.argmax(self.predict_proba(X), axis=1)]

    @classmethod
    def from_network(cls, net, **params):
        clf = cls(hidden_layers=len(net.layer_sizes) - 2,
                  hidden_size=net.layer_sizes[1] if len(net.layer_sizes) > 2 else 200, **params)
        clf.net_ = net
        clf.classes_ = np.array([0, 1])
        clf.n_features_in_ = net.layer_sizes[0]
        return clf
