import numpy as np
import pytest

from fakepoi import data as D
from fakepoi import synth


def make_record(lm_id="1", x=43.6, y=-79.7, label=D.REAL, **fields):
    defaults = dict(lm_name="Civic Centre", cate="Recreation Centre", str_add="300 City Centre Dr",
                    unit="", mun="Mississauga", pr="ON", pc="L5B 3C1", phone="905-615-3200",
                    website="https://www.mississauga.ca")
    defaults.update(fields)
    return D.PoiRecord(lm_id=lm_id, x=x, y=y, label=label, **defaults)


@pytest.fixture(scope="session")
def bundled():
    return D.load_csv(synth.bundled_path())


@pytest.fixture(scope="session")
def merged(bundled):
    return synth.merge_labeled(bundled, synth.generate_fake(500, seed=0))


@pytest.fixture(scope="session")
def small_merged():
    """About 240 rows: quick enough for pipeline and CLI tests."""
    real = synth.generate_reference(n=160, seed=3, duplicates=2, missing_coordinates=2)
    return synth.merge_labeled(real, synth.generate_fake(80, seed=4))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
