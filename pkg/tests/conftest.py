import numpy as np
import pytest

from zetaconv import ZetaParams, sieve, taylor_coefficients


@pytest.fixture(scope="session")
def params2():
    return ZetaParams(sigma=2.0)


@pytest.fixture(scope="session")
def ptable2(params2):
    return sieve(params2.prime_limit)


@pytest.fixture(scope="session")
def coeffs2(params2, ptable2):
    return taylor_coefficients(params2, ptable2)


@pytest.fixture(scope="session")
def rng():
    return np.random.Generator(np.random.Philox(key=np.array([1234, 0], dtype=np.uint64)))
