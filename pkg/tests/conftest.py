import numpy as np
import pytest

from thirdperiodic.spectra import PeriodicSignal, SpectralCoefficients


def random_coeffs(rng, K, d, real=False):
    c = rng.standard_normal((2 * K + 1, d)) + 1j * rng.standard_normal((2 * K + 1, d))
    if real:
        c[K] = c[K].real
        c[:K] = c[:K:-1].conj()
    return SpectralCoefficients(c)


def direct_synthesis(c, N):
    """Sample-by-sample evaluation of sum_k e^{ikt_j} c_k."""
    out = np.zeros((N, c.d), dtype=complex)
    for j in range(N):
        t = 2 * np.pi * j / N
        for k in range(-c.K, c.K + 1):
            out[j] += np.exp(1j * k * t) * c[k]
    return PeriodicSignal(out)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)
