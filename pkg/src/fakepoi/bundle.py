"""Model file: network, fitted encoder and imputation medians in one JSON document."""

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import FormatVersionError, ValidationError
from .features import FeatureSpec
from .mlp import Network

BUNDLE_FORMAT = "fakepoi-model-bundle"
BUNDLE_VERSION = 1


@dataclass
class ModelBundle:
    network: Network
    spec: FeatureSpec
    coordinate_medians: dict
    seed: int = None
    train_config: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.spec.width != self.network.layer_sizes[0]:
            raise ValidationError(
                f"encoder width {self.spec.width} != network input {self.network.layer_sizes[0]}"
            )

    def to_dict(self):
        return {
            "format": BUNDLE_FORMAT,
            "version": BUNDLE_VERSION,
            "seed": self.seed,
            "train_config": self.train_config,
            "coordinate_medians": self.coordinate_medians,
            "encoder": self.spec.to_dict(),
            "network": self.network.to_dict(),
        }

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_dict(), sort_keys=True), encoding="utf-8")

    @classmethod
    def load(cls, path):
        try:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read model file {path}: {exc}") from None
        if doc.get("format") != BUNDLE_FORMAT or doc.get("version") != BUNDLE_VERSION:
            raise FormatVersionError(
                f"unsupported model file {doc.get('format')!r} version {doc.get('version')!r}"
            )
        return cls(Network.from_dict(doc["network"]), FeatureSpec.from_dict(doc["encoder"]),
                   {k: float(v) for k, v in doc["coordinate_medians"].items()},
                   doc.get("seed"), doc.get("train_config", {}))
