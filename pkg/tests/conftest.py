import os

# Pin BLAS to one thread before numpy loads: the matrices here are small and
# per-call thread synchronization otherwise dominates the runtime budgets.
for _var in ("OPENBLAS_NUM_THREADS", "OMP_NUM_THREADS", "MKL_NUM_THREADS"):
    os.environ.setdefault(_var, "1")

import itertools  # noqa: E402

import numpy as np  # noqa: E402
import pytest  # noqa: E402


def brute_force_assignment(cost):
    """Exhaustive assignment oracle; first optimum in lexicographic order."""
    cost = np.asarray(cost, dtype=float)
    n = cost.shape[0]
    perms = np.array(list(itertools.permutations(range(n))))
    totals = cost[np.arange(n), perms].sum(axis=1)
    best = int(np.argmin(totals))
    return perms[best], float(totals[best])


def random_spd(rng, n, shift=None):
    g = rng.normal(size=(n, n))
    if shift is None:
        shift = n
    return g @ g.T + shift * np.eye(n)


@pytest.fixture
def rng():
    return np.random.default_rng(0)
