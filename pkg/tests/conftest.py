import itertools
import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo", derandomize=True, deadline=None, max_examples=200,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


def random_chamber_point(rng):
    """Uniform sample from the open Weyl chamber by rejection."""
    while True:
        c1 = rng.uniform(0, math.pi)
        c2 = rng.uniform(0, math.pi / 2)
        c3 = rng.uniform(0, math.pi / 2)
        if c1 >= c2 >= c3 and c1 + c2 <= math.pi and (c3 > 1e-6 or c1 <= math.pi / 2):
            return (c1, c2, c3)


def circular_multiset_distance(a, b):
    """Smallest max circular distance over all pairings of two phase lists."""
    a = np.asarray(a)
    best = math.inf
    for perm in itertools.permutations(b):
        d = np.abs(np.angle(np.exp(1j * (a - np.asarray(perm)))))
        best = min(best, float(d.max()))
    return best


def taylor_expm(H, terms=80):
    """Plain power-series exponential with scaling and squaring (test oracle)."""
    H = np.asarray(H, dtype=complex)
    s = max(0, int(np.ceil(np.log2(max(np.abs(H).sum(axis=1).max(), 1e-300)))) + 1)
    A = H / 2 ** s
    out = np.eye(H.shape[0], dtype=complex)
    term = np.eye(H.shape[0], dtype=complex)
    for k in range(1, terms):
        term = term @ A / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
