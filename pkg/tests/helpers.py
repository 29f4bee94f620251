"""Random inputs shared by the test modules."""

import numpy as np

from exotela import ElasticityTensor


def random_kelvin(rng, scale=1.0):
    a = rng.normal(size=(6, 6)) * scale
    return 0.5 * (a + a.T)


def random_tensor(rng):
    return ElasticityTensor(random_kelvin(rng))


def random_spd(rng, shift=12.0):
    """Well conditioned positive definite tensor."""
    return ElasticityTensor(random_kelvin(rng) + shift * np.eye(6))


def random_deviator(rng):
    h = rng.normal(size=(3, 3))
    h = 0.5 * (h + h.T)
    return h - np.trace(h) / 3.0 * np.eye(3)


def relative(a, b):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300))
