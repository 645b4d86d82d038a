import math
import statistics

import numpy as np
import pytest

from fakepoi import data as D
from fakepoi.errors import FormatVersionError, ValidationError
from fakepoi.features import (
    DEFAULT_ACTIVE, UNK, FeatureSpec, PoiEncoder, ablate, encode, encode_dataset, fit_encoder,
    hashed_trigrams, trigrams,
)

from conftest import make_record


def test_numeric_stats_population_std():
    recs = [make_record("a", x=0.0, y=0.0), make_record("b", x=2.0, y=2.0)]
    spec = fit_encoder(recs, active=("X", "Y"))
    for a in ("X", "Y"):
        mean, std = spec.numeric_stats[a]
        assert mean == statistics.fmean([0.0, 2.0]) == 1.0
        assert std == statistics.pstdev([0.0, 2.0])


def test_constant_column_std_one():
    spec = fit_encoder([make_record("a", x=5.0), make_record("b", x=5.0)], active=("X",))
    assert spec.numeric_stats["X"] == (5.0, 1.0)


def test_vocab_includes_unk():
    recs = [make_record("a", cate="A"), make_record("b", cate="B")]
    spec = fit_encoder(recs, active=("CATE",))
    assert spec.category_vocab["CATE"] == {"A": 0, "B": 1, UNK: 2}
    assert spec.width == 4


def test_one_hot_and_unknown():
    recs = [make_record(str(i), cate=c) for i, c in enumerate("ABC")]
    spec = fit_encoder(recs, active=("CATE",))
    assert list(encode(make_record("z", cate="B"), spec).values) == [0, 1, 0, 0, 0]
    assert list(encode(make_record("z", cate="Z"), spec).values) == [0, 0, 0, 1, 0]


def test_missing_category_indicator():
    spec = fit_encoder([make_record("a", cate="A")], active=("CATE",))
    rec, _ = D.clean(D.Dataset((make_record("m", cate=""),)))
    assert list(encode(rec[0], spec).values) == [0, 0, 1]


def test_mean_encodes_to_zero():
    recs = [make_record("a", x=1.0), make_record("b", x=3.0)]
    spec = fit_encoder(recs, active=("X",))
    assert encode(make_record("m", x=2.0), spec).values[0] == 0.0


def test_text_block():
    spec = fit_encoder([make_record()], active=("PC",), hash_dims=8)
    v = encode(make_record(pc="L5B 3C1"), spec).values
    assert v.shape == (10,)
    assert math.isclose(v[:8].sum(), 1.0)
    assert v[8] == 1.0 and v[9] == 0.0
    assert encode(make_record(pc="99999"), spec).values[8] == 0.0


def test_trigrams():
    assert trigrams("Ab") == ["^ab", "ab$"]
    h = hashed_trigrams("abcd", 4)
    assert math.isclose(h.sum(), 1.0) and h.shape == (4,)


def test_width_matches_feature_names(bundled):
    ds, _ = D.clean(bundled)
    spec = fit_encoder(ds)
    assert len(spec.feature_names()) == spec.width
    mat = encode_dataset(ds, spec).matrix
    assert mat.shape == (len(ds), spec.width)
    assert np.isfinite(mat).all()


def test_blocks_are_contiguous():
    spec = fit_encoder([make_record()], active=DEFAULT_ACTIVE)
    blocks = spec.blocks()
    assert blocks[0][1] == 0 and blocks[-1][2] == spec.width
    assert all(a[2] == b[1] for a, b in zip(blocks, blocks[1:]))


def test_ablate_identity_and_naming():
    spec = fit_encoder([make_record()], active=D.ATTRIBUTES)
    assert ablate(spec, ()) == spec
    no_name = ablate(spec, {"LM_NAME"})
    assert "LM_NAME" not in no_name.active_attributes
    assert no_name.width == spec.width - spec.block_width("LM_NAME")


def test_ablate_five_blocks():
    spec = fit_encoder([make_record()], active=D.ATTRIBUTES)
    removed = {"STR_ADD", "U", "MUN", "PR", "PC"}
    out = ablate(spec, removed)
    assert set(spec.active_attributes) - set(out.active_attributes) == removed
    assert out.width == spec.width - sum(spec.block_width(a) for a in removed)


def test_ablate_errors():
    spec = fit_encoder([make_record()], active=("X", "Y"))
    with pytest.raises(ValidationError):
        ablate(spec, {"PC"})
    with pytest.raises(ValidationError):
        ablate(spec, {"X", "Y"})


def test_spec_roundtrip(tmp_path):
    spec = fit_encoder([make_record("a"), make_record("b", x=1.0)])
    spec.save(tmp_path / "spec.json")
    assert FeatureSpec.load(tmp_path / "spec.json") == spec
    bad = spec.to_dict()
    bad["version"] = 99
    with pytest.raises(FormatVersionError):
        FeatureSpec.from_dict(bad)


def test_encoder_sklearn_api(bundled):
    ds, _ = D.clean(bundled)
    enc = PoiEncoder(hash_dims=8)
    X = enc.fit_transform(ds)
    assert X.shape == (len(ds), enc.spec_.width)
    assert enc.get_params() == {"active_attributes": DEFAULT_ACTIVE, "hash_dims": 8}
    assert len(enc.get_feature_names_out()) == X.shape[1]
    assert np.array_equal(PoiEncoder.from_spec(enc.spec_).transform(ds), X)


def test_encoder_rejects_arrays():
    with pytest.raises(ValidationError):
        PoiEncoder().fit(np.zeros((2, 2)))


def test_unknown_attribute():
    with pytest.raises(ValidationError):
        fit_encoder([make_record()], active=("ZIP",))
