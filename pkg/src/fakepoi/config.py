"""Versioned JSON run configuration."""

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ValidationError
from .features import DEFAULT_ACTIVE, DEFAULT_HASH_DIMS, canonical
from .synth import FakeProfile
from .train import TrainConfig

CONFIG_VERSION = 1


@dataclass
class FeatureConfig:
    active_attributes: tuple = DEFAULT_ACTIVE
    hash_dims: int = DEFAULT_HASH_DIMS
    smote_k: int = 5
    smote_ratio: float = 1.0

    def __post_init__(self):
        self.active_attributes = canonical(self.active_attributes)
        if not self.active_attributes:
            raise ValidationError("active_attributes is empty")
        if self.smote_k < 1:
            raise ValidationError("smote_k must be at least 1")
        if not 0.0 < self.smote_ratio <= 1.0:
            raise ValidationError("smote_ratio must be in (0, 1]")


@dataclass
class RunConfig:
    train: TrainConfig = field(default_factory=TrainConfig)
    features: FeatureConfig = field(default_factory=FeatureConfig)
    fake_profile: FakeProfile = field(default_factory=FakeProfile)
    fake_count: int = 500
    fake_seed: int = 0
    split_ratios: tuple = (0.70, 0.15, 0.15)
    paths: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "version": CONFIG_VERSION,
            "train": self.train.to_dict(),
            "features": {
                "active_attributes": list(self.features.active_attributes),
                "hash_dims": self.features.hash_dims,
                "smote_k": self.features.smote_k,
                "smote_ratio": self.features.smote_ratio,
            },
            "fake_profile": self.fake_profile.to_dict(),
            "fake_count": self.fake_count,
            "fake_seed": self.fake_seed,
            "split_ratios": list(self.split_ratios),
            "paths": dict(self.paths),
        }

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        version = d.pop("version", None)
        if version != CONFIG_VERSION:
            raise ValidationError(f"unsupported config version {version!r}")
        known = {"train", "features", "fake_profile", "fake_count", "fake_seed", "split_ratios", "paths"}
        unknown = set(d) - known
        if unknown:
            raise ValidationError(f"unknown config keys: {sorted(unknown)}")
        feats = dict(d.get("features", {}))
        bad = set(feats) - set(FeatureConfig.__dataclass_fields__)
        if bad:
            raise ValidationError(f"unknown features keys: {sorted(bad)}")
        cfg = cls(
            train=TrainConfig.from_dict(d.get("train", {})),
            features=FeatureConfig(**feats),
            fake_profile=FakeProfile.from_dict(d.get("fake_profile", {})),
            fake_count=int(d.get("fake_count", 500)),
            fake_seed=int(d.get("fake_seed", 0)),
            split_ratios=tuple(d.get("split_ratios", (0.70, 0.15, 0.15))),
            paths=dict(d.get("paths", {})),
        )
        if cfg.fake_count < 1:
            raise ValidationError("fake_count must be at least 1")
        return cfg

    @classmethod
    def load(cls, path):
        try:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read config {path}: {exc}") from None
        return cls.from_dict(doc)

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n",
                              encoding="utf-8")
