import itertools

import numpy as np
import pytest

from beamsel.channel import ScenarioConfig, generate_channel


def random_hbar(rng, n, k):
    """Dense complex test matrix with no structure."""
    return rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))


def drawn_hbar(seed, n=16, k=3):
    """Physically drawn beamspace channel, one realization."""
    cfg = ScenarioConfig(n_antennas=n, n_users=k)
    return generate_channel(cfg, np.random.default_rng(seed)).h_bar


def brute_trace(hbar, beams, ridge=0.0):
    """Independent trace metric: plain Gram inversion, no shared kernels."""
    rows = np.asarray(hbar)[np.asarray(beams, dtype=int), :]
    gram = rows.conj().T @ rows + ridge * np.eye(rows.shape[1])
    return float(np.trace(np.linalg.inv(gram)).real)


def brute_exhaustive(hbar, k, ridge=0.0):
    """Independent oracle: scan every size-k subset with plain inversion."""
    n = hbar.shape[0]
    best, best_trace = None, np.inf
    for combo in itertools.combinations(range(n), k):
        try:
            t = brute_trace(hbar, combo, ridge)
        except np.linalg.LinAlgError:
            continue
        if np.isfinite(t) and t < best_trace:
            best, best_trace = combo, t
    return np.array(best, dtype=np.int64), best_trace


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
