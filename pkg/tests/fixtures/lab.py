import pytest

from climate_front.environment.climate import (
    make_climate,
    make_expansion_rate,
)
from climate_front.lab_config import LabConfig
from climate_front.models import ModelParams

REFERENCE = {
    'd': 1.0,
    'a': 1.0,
    'a0': -1.0,
    'b': 1.0,
    'c': 0.5,
    'h0': 2.0,
}

# coarse numerics for unit tests
DESK = {
    'n_points': 64,
    't_max': 0.5,
    'sample_every': 0.1,
    'bvp_dx': 0.02,
    'threads': 2,
}


@pytest.fixture
def reference_document():
    return dict(REFERENCE)


@pytest.fixture
def reference_params():
    return ModelParams(**REFERENCE)


@pytest.fixture
def reference_climate(reference_params):
    return make_climate(reference_params)


@pytest.fixture
def reference_mu(reference_params):
    return make_expansion_rate(reference_params, mu0=1.0)


@pytest.fixture
def reference_config():
    return LabConfig(document=dict(REFERENCE))


@pytest.fixture
def desk_config(tmp_path):
    document = dict(REFERENCE, **DESK)
    document['out_dir'] = str(tmp_path / 'out')
    return LabConfig(document=document)
