import pytest

from junctionlab import GaussianProfile, JunctionSpec, get_material


@pytest.fixture
def si():
    return get_material("Si")


@pytest.fixture
def worked_profile():
    # N0 = 1e18 cm^-3, N_B = 1e15 cm^-3, L_d = 10 um
    return GaussianProfile(n0=1e24, l_d=1e-5, n_b=1e21)


@pytest.fixture
def worked_spec(si, worked_profile):
    return JunctionSpec(material=si, profile=worked_profile)
