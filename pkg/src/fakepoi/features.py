"""Fixed-width numeric encoding of POI records.

Each active attribute contributes one block, laid out in canonical attribute
order:

* coordinates (X, Y): ``[z-score, missing]``
* categorical (CATE, U, MUN, PR): one-hot over the training vocabulary with a
  trailing ``<UNK>`` slot, then ``[missing]``
* free text (LM_ID, LM_NAME, STR_ADD, PC, PHONE, WEBSITE): hashed character
  trigram counts scaled by ``1 / max(1, n_trigrams)``, then ``[valid, missing]``
"""

import json
import math
import zlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .data import ATTRIBUTES, MISSING, Dataset, PoiRecord
from .errors import FormatVersionError, ValidationError
from .patterns import is_valid

NUMERIC = ("X", "Y")
CATEGORICAL = ("CATE", "U", "MUN", "PR")
TEXT = ("LM_ID", "LM_NAME", "STR_ADD", "PC", "PHONE", "WEBSITE")
UNK = "<UNK>"

# LM_ID is opt-in: fabricated ids come from their own namespace.
DEFAULT_ACTIVE = tuple(a for a in ATTRIBUTES if a != "LM_ID")
DEFAULT_HASH_DIMS = 16

SPEC_FORMAT = "fakepoi-feature-spec"
SPEC_VERSION = 1


def canonical(attributes):
    """Order ``attributes`` as in the record schema; reject unknown names."""
    attributes = set(attributes)
    unknown = attributes - set(ATTRIBUTES)
    if unknown:
        raise ValidationError(f"unknown attributes: {sorted(unknown)}")
    return tuple(a for a in ATTRIBUTES if a in attributes)


@dataclass(frozen=True)
class FeatureSpec:
    active_attributes: tuple
    hash_dims: dict = field(default_factory=dict)
    numeric_stats: dict = field(default_factory=dict)
    category_vocab: dict = field(default_factory=dict)

    def block_width(self, attribute):
        if attribute in NUMERIC:
            return 2
        if attribute in CATEGORICAL:
            return len(self.category_vocab[attribute]) + 1
        return self.hash_dims[attribute] + 2

    @property
    def width(self):
        return sum(self.block_width(a) for a in self.active_attributes)

    def blocks(self):
        """``[(attribute, start, stop), ...]`` column ranges of each block."""
        out, start = [], 0
        for a in self.active_attributes:
            stop = start + self.block_width(a)
            out.append((a, start, stop))
            start = stop
        return out

    def feature_names(self):
        names = []
        for a in self.active_attributes:
            if a in NUMERIC:
                names += [f"{a}__z", f"{a}__missing"]
            elif a in CATEGORICAL:
                vocab = sorted(self.category_vocab[a].items(), key=lambda kv: kv[1])
                names += [f"{a}={v}" for v, _ in vocab] + [f"{a}__missing"]
            else:
                names += [f"{a}__h{i}" for i in range(self.hash_dims[a])]
                names += [f"{a}__valid", f"{a}__missing"]
        return names

    def to_dict(self):
        return {
            "format": SPEC_FORMAT,
            "version": SPEC_VERSION,
            "active_attributes": list(self.active_attributes),
            "hash_dims": {a: self.hash_dims[a] for a in self.active_attributes if a in self.hash_dims},
            "numeric_stats": {a: list(self.numeric_stats[a]) for a in self.active_attributes
                              if a in self.numeric_stats},
            "category_vocab": {a: self.category_vocab[a] for a in self.active_attributes
                               if a in self.category_vocab},
        }

    @classmethod
    def from_dict(cls, d):
        if d.get("format") != SPEC_FORMAT or d.get("version") != SPEC_VERSION:
            raise FormatVersionError(
                f"unsupported feature spec {d.get('format')!r} version {d.get('version')!r}"
            )
        return cls(
            active_attributes=canonical(d["active_attributes"]),
            hash_dims={a: int(v) for a, v in d["hash_dims"].items()},
            numeric_stats={a: (float(m), float(s)) for a, (m, s) in d["numeric_stats"].items()},
            category_vocab={a: {k: int(i) for k, i in v.items()} for a, v in d["category_vocab"].items()},
        )

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_dict(), indent=1, sort_keys=True), encoding="utf-8")

    @classmethod
    def load(cls, path):
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass(frozen=True)
class FeatureVector:
    values: np.ndarray
    label: int


@dataclass(frozen=True)
class EncodedDataset:
    matrix: np.ndarray
    labels: np.ndarray
    spec: FeatureSpec = None

    def __post_init__(self):
        if self.matrix.ndim != 2 or self.matrix.shape[0] != len(self.labels):
            raise ValidationError(
                f"matrix shape {self.matrix.shape} does not match {len(self.labels)} labels"
            )
        if self.spec is not None and self.matrix.shape[1] != self.spec.width:
            raise ValidationError(f"matrix width {self.matrix.shape[1]} != spec width {self.spec.width}")

    def __len__(self):
        return len(self.labels)


def _is_missing(rec, attribute):
    value = rec.get(attribute)
    if attribute in NUMERIC:
        return attribute in rec.missing or math.isnan(value)
    return value == MISSING or value == "" or attribute in rec.missing


def fit_encoder(train, active=DEFAULT_ACTIVE, hash_dims=DEFAULT_HASH_DIMS):
    """Fit normalization statistics and vocabularies on ``train`` records."""
    active = canonical(active)
    if not active:
        raise ValidationError("active attribute set is empty")
    records = list(train)
    if not records:
        raise ValidationError("cannot fit an encoder on an empty dataset")
    if isinstance(hash_dims, int):
        hash_dims = {a: hash_dims for a in TEXT}
    dims, stats, vocab = {}, {}, {}
    for a in active:
        if a in NUMERIC:
            values = np.array([r.get(a) for r in records], dtype=float)
            values = values[np.isfinite(values)]
            mean = float(values.mean()) if values.size else 0.0
            std = float(values.std()) if values.size else 0.0
            stats[a] = (mean, std if std > 0 else 1.0)
        elif a in CATEGORICAL:
            seen = sorted({r.get(a) for r in records if not _is_missing(r, a)})
            table = {v: i for i, v in enumerate(seen)}
            table[UNK] = len(seen)
            vocab[a] = table
        else:
            d = int(hash_dims.get(a, DEFAULT_HASH_DIMS))
            if d < 1:
                raise ValidationError(f"hash_dims for {a} must be positive, got {d}")
            dims[a] = d
    return FeatureSpec(active, dims, stats, vocab)


def trigrams(text):
    padded = f"^{text.lower()}$"
    return [padded[i:i + 3] for i in range(len(padded) - 2)]


def hashed_trigrams(text, dims):
    out = np.zeros(dims)
    grams = trigrams(text)
    for g in grams:
        out[zlib.crc32(g.encode("utf-8")) % dims] += 1.0
    return out / max(1, len(grams))


def _encode_into(out, rec, spec):
    for a, start, stop in spec.blocks():
        block = out[start:stop]
        missing = _is_missing(rec, a)
        if a in NUMERIC:
            value = rec.get(a)
            mean, std = spec.numeric_stats[a]
            block[0] = 0.0 if math.isnan(value) else (value - mean) / std
            block[1] = 1.0 if missing else 0.0
        elif missing:
            block[:] = 0.0
            block[-1] = 1.0
        elif a in CATEGORICAL:
            table = spec.category_vocab[a]
            block[:] = 0.0
            block[table.get(rec.get(a), table[UNK])] = 1.0
        else:
            value = rec.get(a)
            d = spec.hash_dims[a]
            block[:d] = hashed_trigrams(value, d)
            block[d] = 1.0 if is_valid(a, value) else 0.0
            block[d + 1] = 0.0
    return out


def encode(rec, spec):
    return FeatureVector(_encode_into(np.zeros(spec.width), rec, spec), rec.label)


def encode_dataset(ds, spec):
    records = list(ds)
    matrix = np.zeros((len(records), spec.width))
    for i, rec in enumerate(records):
        _encode_into(matrix[i], rec, spec)
    labels = np.array([r.label for r in records], dtype=np.int64)
    return EncodedDataset(matrix, labels, spec)


def ablate(spec, removed):
    """Drop the blocks of ``removed`` attributes from a fitted spec."""
    removed = set(removed)
    extra = removed - set(spec.active_attributes)
    if extra:
        raise ValidationError(f"cannot remove inactive attributes: {sorted(extra)}")
    active = tuple(a for a in spec.active_attributes if a not in removed)
    if not active:
        raise ValidationError("removal would empty the feature set")
    return FeatureSpec(
        active,
        {a: d for a, d in spec.hash_dims.items() if a in active},
        {a: s for a, s in spec.numeric_stats.items() if a in active},
        {a: v for a, v in spec.category_vocab.items() if a in active},
    )


def _records(X):
    if isinstance(X, (Dataset, list, tuple)) and all(isinstance(r, PoiRecord) for r in X):
        return list(X)
    raise ValidationError("expected a Dataset or a sequence of PoiRecord")


class PoiEncoder(TransformerMixin, BaseEstimator):
    """Transformer turning POI records into the fixed-width feature matrix."""

    def __init__(self, active_attributes=DEFAULT_ACTIVE, hash_dims=DEFAULT_HASH_DIMS):
        self.active_attributes = active_attributes
        self.hash_dims = hash_dims

    def fit(self, X, y=None):
        self.spec_ = fit_encoder(_records(X), self.active_attributes, self.hash_dims)
        self.n_features_out_ = self.spec_.width
        return self

    def transform(self, X):
        check_is_fitted(self, "spec_")
        return encode_dataset(_records(X), self.spec_).matrix

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "spec_")
        return np.array(self.spec_.feature_names(), dtype=object)

    @classmethod
    def from_spec(cls, spec):
        enc = cls(active_attributes=spec.active_attributes,
                  hash_dims=dict(spec.hash_dims) or DEFAULT_HASH_DIMS)
        enc.spec_ = spec
        enc.n_features_out_ = spec.width
        return enc
