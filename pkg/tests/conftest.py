import numpy as np
import pytest

from modality import MixtureSpec, sample_mixture

WELL_SEPARATED = MixtureSpec(((0.5, -2.0, 0.3), (0.5, 2.0, 0.3)), 400)
BARELY_SEPARATED = MixtureSpec(((0.5, -0.5, 0.4), (0.5, 0.5, 0.4)), 600)
NEAR_UNIMODAL = MixtureSpec(((0.5, 0.0, 0.6), (0.5, 1.5, 0.6)), 600)
EXTREME_SEPARATION = MixtureSpec(((0.5, -5.0, 0.5), (0.5, 5.0, 0.5)), 400)
UNEQUAL_WEIGHTS = MixtureSpec(((0.2, -2.0, 0.3), (0.8, 2.0, 0.3)), 500)
TRIMODAL = MixtureSpec(
    ((1.0 / 3, -3.0, 0.3), (1.0 / 3, 0.0, 0.3), (1.0 / 3, 3.0, 0.3)), 450
)


@pytest.fixture(scope="session")
def well_separated():
    return sample_mixture(WELL_SEPARATED, 0)


@pytest.fixture(scope="session")
def barely_separated():
    return sample_mixture(BARELY_SEPARATED, 0)


@pytest.fixture(scope="session")
def near_unimodal():
    # seed 1 draws a sample whose merge bandwidth sits near the case mean
    return sample_mixture(NEAR_UNIMODAL, 1)


@pytest.fixture(scope="session")
def trimodal():
    return sample_mixture(TRIMODAL, 0)


@pytest.fixture(scope="session")
def normal_500():
    rng = np.random.default_rng(11)
    return np.sort(rng.normal(0.0, 1.0, 500))
