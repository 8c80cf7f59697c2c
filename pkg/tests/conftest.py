import numpy as np
import pytest

from peskin2d import cubic, hookean


@pytest.fixture
def hookean_law():
    return hookean()


@pytest.fixture
def cubic_law():
    return cubic()


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


def random_y_modes(rng, K, decay=2.0, amp=1e-3):
    """Random perturbation coefficients with |a_k| ~ amp |k|^-decay, modes 0,1 zero."""
    k = np.arange(-K, K + 1)
    mag = np.zeros(k.size)
    nz = k != 0
    mag[nz] = np.abs(k[nz]).astype(float) ** (-decay)
    phases = rng.uniform(0, 2 * np.pi, size=k.size)
    modes = amp * mag * np.exp(1j * phases)
    modes[K + 0] = 0.0
    modes[K + 1] = 0.0
    return modes
