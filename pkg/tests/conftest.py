import numpy as np
import pytest

from vmmdse import explore
from vmmdse.cells import CellSpec, load_cell_spec
from vmmdse.fixtures import fixture_path


@pytest.fixture(scope="session")
def default_config():
    return explore.load_config()


@pytest.fixture(scope="session")
def fixtures(default_config):
    return explore.load_fixtures(default_config)


@pytest.fixture(scope="session")
def cell_b1():
    return load_cell_spec(fixture_path("cell_b1.json"))


@pytest.fixture(scope="session")
def cell_b4():
    return load_cell_spec(fixture_path("cell_b4.json"))


@pytest.fixture
def make_cell():
    """Factory for synthetic cell specs with sane defaults."""

    def _make(inl, sigma, b=1, **kw):
        params = dict(
            e_op=1e-15,
            e_op_per_r=5e-16,
            d_step=2e-11,
            d_max=4e-11,
            cpp=1e-7,
            h_cell=5e-7,
        )
        params.update(kw)
        return CellSpec(bit_width=b, inl=np.array(inl), sigma=np.array(sigma), **params)

    return _make
