import numpy as np
import pytest

from bilgamma import LinearCombinationModel, build_mixture
from bilgamma.models import (
    KAPPA_SINGLE,
    MARTINGALE,
    MODEL_GRID,
    PRICING_GAMMA,
)

KS_CRIT_001 = 1.628  # asymptotic two-sample coefficient at level 0.01


@pytest.fixture(scope="session")
def model_grid():
    return MODEL_GRID


@pytest.fixture(scope="session")
def mixture_grid():
    """Mixtures of the whole grid at certified tail mass 1e-12."""
    return {name: build_mixture(model, tail_tol=1e-12)
            for name, model in MODEL_GRID.items()}


@pytest.fixture(scope="session")
def mixture_grid_deep():
    """Deeper truncation for polynomially-weighted pmf sums (moments up to
    order 4 amplify the tail by the fourth power of the support size)."""
    return {name: build_mixture(model, tail_tol=1e-14)
            for name, model in MODEL_GRID.items()}


@pytest.fixture(scope="session")
def laplace_model():
    return MODEL_GRID["laplace"]


@pytest.fixture(scope="session")
def pair_integer():
    return MODEL_GRID["pair_integer"]


@pytest.fixture(scope="session")
def pair_nonint():
    return MODEL_GRID["pair_nonint"]


@pytest.fixture(scope="session")
def kappa_single():
    return KAPPA_SINGLE


@pytest.fixture(scope="session")
def pricing_gamma():
    return PRICING_GAMMA


@pytest.fixture(scope="session")
def martingale_model():
    return MARTINGALE


def single(alpha, p, beta, q, w1=1.0, w2=1.0) -> LinearCombinationModel:
    return LinearCombinationModel.from_components([(alpha, p, beta, q, w1, w2)])


def block_cumulant_se(draws: np.ndarray, k: int, blocks: int = 50):
    """Unbiased cumulant estimate and its standard error from block
    k-statistics."""
    from scipy.stats import kstat

    usable = len(draws) - len(draws) % blocks
    parts = draws[:usable].reshape(blocks, -1)
    stats = np.array([kstat(row, k) for row in parts])
    return float(stats.mean()), float(stats.std(ddof=1) / np.sqrt(blocks))
