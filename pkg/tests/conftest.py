from __future__ import annotations

import os

import hypothesis
import numpy as np
import pytest

np.seterr(all="warn")

hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.register_profile("thorough", max_examples=200, deadline=None)
hypothesis.settings.load_profile(os.environ.get("WRP_TEST_PROFILE", "fast"))


@pytest.fixture(scope="session")
def bm_gamma_triplet():
    from wrp.levy import bm_gamma

    # sigma = alpha = beta = 1, mu = -beta/alpha, zeta = 0.9
    return bm_gamma(alpha=1.0, beta=1.0, sigma=1.0)


@pytest.fixture(scope="session")
def pure_bm_triplet():
    from wrp.levy import brownian

    return brownian(sigma=1.0, zeta=0.9)


@pytest.fixture(scope="session")
def put_payoff():
    from wrp.payoff import make_put

    return make_put(K=-0.2, zeta=0.9)


@pytest.fixture(scope="session")
def indicator_payoff():
    from wrp.payoff import make_indicator

    return make_indicator(K=-0.2, zeta=0.9)
