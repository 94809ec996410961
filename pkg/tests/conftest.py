import numpy as np
import pytest

from dtwsse.autoencoder import fit_autoencoder
from dtwsse.config import AutoencoderConfig
from dtwsse.datasets import make_imbalanced_classes, make_warped_classes

ACCEPTANCE_RESULTS = []

FAST_AE = AutoencoderConfig(n_pairs=128, max_epochs=8, latent_mult=3, hidden_mult=2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def warped_small():
    return make_warped_classes(n_per_class=5, length=6, seed=11)


@pytest.fixture(scope="session")
def imbalanced_small():
    return make_imbalanced_classes([3, 5, 9], length=6, seed=5)


@pytest.fixture(scope="session")
def fast_siamese(imbalanced_small):
    return fit_autoencoder(imbalanced_small, FAST_AE, seed=1)


@pytest.fixture(scope="session")
def fast_naive(imbalanced_small):
    return fit_autoencoder(imbalanced_small, FAST_AE, seed=1, naive=True)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, passed, detail in sorted(ACCEPTANCE_RESULTS):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {number:>2}. {name}: {detail}")
