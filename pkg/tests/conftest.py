import itertools
import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from hybridfit.geometry import FittingProblem
from hybridfit.hypergraph import HyperedgeSet

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# hyperedges of the six-edge example hypergraph, shifted to 0-based labels
TWELVE_VERTEX_EDGES = [(0, 4, 5), (1, 6, 7), (2, 8, 9), (3, 10, 11), (0, 1, 2), (1, 2, 3)]


@pytest.fixture
def twelve_vertex_edges():
    return HyperedgeSet(12, TWELVE_VERTEX_EDGES)


def random_line_problem(rng, n, outliers=None, epsilon=0.3):
    """Points near ``b = a x`` in the unit square with a few gross errors."""
    a = rng.uniform(0, 1, n)
    x = rng.uniform(0, 1)
    b = a * x + rng.normal(0, 0.1, n)
    k = rng.integers(1, max(2, n // 3)) if outliers is None else outliers
    bad = rng.permutation(n)[:k]
    b[bad] += rng.normal(0, 1.5, k)
    return FittingProblem(a[:, None], np.clip(b, 0, 1), epsilon)


def random_edges(rng, n, m, max_size):
    """``m`` distinct random edges, fewer if the vertex count runs out."""
    edges = HyperedgeSet(n)
    m = min(m, sum(math.comb(n, k) for k in range(1, max_size + 1)))
    while len(edges) < m:
        size = int(rng.integers(1, min(max_size, n) + 1))
        edges.add(rng.choice(n, size=size, replace=False))
    return edges


def brute_force_cover(edges):
    """Minimum cover size by trying every vertex subset by size."""
    n = edges.n_vertices
    for k in range(n + 1):
        for chosen in itertools.combinations(range(n), k):
            s = set(chosen)
            if all(s.intersection(e) for e in edges):
                return k
    return n


def brute_force_qubo(Q, offset=0.0):
    """All energies of ``v Q v + offset``, indexed by ``sum v_i 2**i``."""
    n = Q.shape[0]
    codes = np.arange(1 << n)
    V = ((codes[:, None] >> np.arange(n)) & 1).astype(float)
    return (V @ Q * V).sum(axis=1) + offset
