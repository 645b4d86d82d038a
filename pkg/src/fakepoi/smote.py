"""SMOTE oversampling in encoded feature space."""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_X_y

from .errors import DataError, ValidationError
from .features import EncodedDataset


def nearest_neighbors(points, k):
    """Indices of the ``k`` nearest other points (Euclidean), ties to lower index."""
    points = np.asarray(points, dtype=float)
    d2 = np.empty((len(points), len(points)))
    for i, row in enumerate(points):
        diff = points - row
        d2[i] = np.einsum("ij,ij->i", diff, diff)
    np.fill_diagonal(d2, np.inf)
    return np.argsort(d2, axis=1, kind="stable")[:, :k]


def _class_counts(labels):
    classes, counts = np.unique(labels, return_counts=True)
    if len(classes) != 2:
        raise DataError("SMOTE needs exactly two classes")
    minority = classes[np.argmin(counts)] if counts[0] != counts[1] else classes[0]
    majority = classes[1] if minority == classes[0] else classes[0]
    return minority, majority, counts.min(), counts.max()


def oversample(X, y, k=5, target_ratio=1.0, seed=0):
    """Return ``(X_new, y_new, parents)``; synthetic rows are appended after the originals.

    ``parents`` holds one ``(p, q)`` pair of row indices into ``X`` per synthetic row.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    minority, _, n_min, n_maj = _class_counts(y)
    if k < 1:
        raise ValidationError(f"k must be at least 1, got {k}")
    if n_min < k + 1:
        raise DataError(f"minority class has {n_min} samples; need at least k+1 = {k + 1}")
    current = n_min / n_maj
    if not current < target_ratio <= 1.0:
        raise ValidationError(f"target_ratio must be in ({current:.4f}, 1], got {target_ratio}")
    n_new = int(round(target_ratio * n_maj)) - n_min
    members = np.flatnonzero(y == minority)
    if n_new <= 0:
        return X.copy(), y.copy(), np.empty((0, 2), dtype=np.int64)
    neighbors = nearest_neighbors(X[members], k)
    rng = np.random.default_rng(seed)
    p_local = rng.integers(len(members), size=n_new)
    q_local = neighbors[p_local, rng.integers(k, size=n_new)]
    lam = rng.random(n_new)[:, None]
    p, q = members[p_local], members[q_local]
    synthetic = X[p] + lam * (X[q] - X[p])
    X_new = np.vstack([X, synthetic])
    y_new = np.concatenate([y, np.full(n_new, minority, dtype=y.dtype)])
    return X_new, y_new, np.column_stack([p, q])


def smote(data, k=5, target_ratio=1.0, seed=0):
    """Oversample the minority class of an :class:`EncodedDataset`."""
    X, y, _ = oversample(data.matrix, data.labels, k, target_ratio, seed)
    return EncodedDataset(X, y, data.spec)


class SMOTE(BaseEstimator):
    """Resampler with the ``fit_resample`` convention of imbalanced-learn."""

    def __init__(self, k_neighbors=5, target_ratio=1.0, random_state=0):
        self.k_neighbors = k_neighbors
        self.target_ratio = target_ratio
        self.random_state = random_state

    def fit_resample(self, X, y):
        X, y = check_X_y(X, y)
        X_new, y_new, self.parents_ = oversample(
            X, y, self.k_neighbors, self.target_ratio, self.random_state
        )
        self.n_synthetic_ = len(self.parents_)
        return X_new, y_new
