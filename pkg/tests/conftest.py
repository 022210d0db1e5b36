"""Shared fixtures: cached Monte Carlo samples reused across test modules."""

import pytest

from pvalmeta import mc
from pvalmeta.metadist import LIMIT, MetaDistParams
from pvalmeta.mc import MCConfig

MC_DRAWS = 1_000_000
MC_SEED = 20180115


@pytest.fixture(scope="session")
def mc_config():
    return MCConfig(draws=MC_DRAWS, seed=MC_SEED, stream_count=4)


@pytest.fixture(scope="session")
def uniform_samples(mc_config):
    return mc.sample_pvalues(MetaDistParams(0.5, LIMIT), mc_config)


@pytest.fixture(scope="session")
def fig_params_samples(mc_config):
    """Samples for the canonical finite-n configuration (median 0.15, n 20)."""
    return mc.sample_pvalues(MetaDistParams(0.15, 20), mc_config)
