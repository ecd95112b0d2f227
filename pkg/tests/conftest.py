import numpy as np
import pytest


def separated_locations(rng, S, min_gap, T):
    """Rejection-sample S locations on the circle with wrap-around gaps >= min_gap."""
    if S * min_gap > T:
        raise ValueError("infeasible separation request")
    while True:
        locs = np.sort(rng.uniform(0.0, T, S))
        gaps = np.diff(np.concatenate([locs, [locs[0] + T]]))
        if S == 1 or gaps.min() >= min_gap:
            return locs


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
