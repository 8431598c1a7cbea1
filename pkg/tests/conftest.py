import math

import numpy as np
import pytest

from lyapspec import LinearCookieCutter, TwoBranchMap

E = math.e


@pytest.fixture(scope="session")
def two_branch_corpus():
    """50 random two-branch maps with log-slope ratio in (1, 50).

    The shallow log slope is kept >= 0.75 so that 1/a + 1/b <= 1 holds for
    every ratio.
    """
    rng = np.random.default_rng(20240817)
    maps = []
    while len(maps) < 50:
        log_a = rng.uniform(0.75, 2.0)
        ratio = rng.uniform(1.001, 50.0)
        maps.append(TwoBranchMap(math.exp(log_a), math.exp(log_a * ratio)))
    return maps


@pytest.fixture(scope="session")
def nbranch_corpus():
    """50 random 3-5 branch maps with slope logs in (0.1, 60), rejection
    sampled until the branch domains fit in [0, 1]."""
    rng = np.random.default_rng(11235813)
    maps = []
    while len(maps) < 50:
        n = int(rng.integers(3, 6))
        logs = rng.uniform(0.1, 60.0, size=n)
        if sum(math.exp(-v) for v in logs) <= 1.0:
            maps.append(LinearCookieCutter(tuple(math.exp(v) for v in logs)))
    return maps


@pytest.fixture(scope="session")
def paper_maps():
    return {
        "e10": LinearCookieCutter((E, math.exp(10))),
        "e45": LinearCookieCutter((E, math.exp(45))),
        "fig2_concave": LinearCookieCutter((E, math.exp(2), math.exp(4))),
        "fig2_non1": LinearCookieCutter((E, math.exp(2), math.exp(8))),
        "fig2_non2": LinearCookieCutter((E, math.exp(2), math.exp(16))),
        "golden": LinearCookieCutter((2, 4)),
    }
