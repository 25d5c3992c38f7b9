"""Hypergraph of infeasible bases and its vertex-cover problems.

A hyperedge is a sorted tuple of 0-based point indices. ``HyperedgeSet``
keeps insertion order and set semantics, which is what the hybrid loop needs
when it grows its sampled edge set one basis at a time.
"""
from itertools import combinations

import numpy as np

from .geometry import feasibility
from .simplex import linprog_standard

ENUMERATION_LIMIT = 25
EXACT_COVER_LIMIT = 30


class HyperedgeSet:
    """Ordered collection of distinct hyperedges over ``n_vertices`` vertices."""

    def __init__(self, n_vertices, edges=()):
        if n_vertices < 1:
            raise ValueError("hypergraph needs at least one vertex")
        self.n_vertices = int(n_vertices)
        self._edges = []
        self._index = set()
        for e in edges:
            self.add(e)

    def add(self, edge):
        """Insert an edge; returns False if it was already present."""
        e = tuple(sorted(int(v) for v in edge))
        if not e:
            raise ValueError("hyperedges must be nonempty")
        if len(set(e)) != len(e):
            raise ValueError(f"duplicate vertex in hyperedge {e}")
        if e[0] < 0 or e[-1] >= self.n_vertices:
            raise ValueError(f"hyperedge {e} out of range for N={self.n_vertices}")
        if e in self._index:
            return False
        self._edges.append(e)
        self._index.add(e)
        return True

    @property
    def edges(self):
        return list(self._edges)

    def __len__(self):
        return len(self._edges)

    def __iter__(self):
        return iter(self._edges)

    def __contains__(self, edge):
        return tuple(sorted(edge)) in self._index

    def __eq__(self, other):
        return (isinstance(other, HyperedgeSet) and self.n_vertices == other.n_vertices
                and self._edges == other._edges)

    def __repr__(self):
        return f"HyperedgeSet(n_vertices={self.n_vertices}, edges={self._edges})"

    def prefix(self, count):
        """The first ``count`` edges in insertion order."""
        return HyperedgeSet(self.n_vertices, self._edges[:count])

    def max_edge_size(self):
        return max((len(e) for e in self._edges), default=0)

    def incidence(self):
        """``(N, M)`` 0/1 matrix whose columns are the edge indicators."""
        A = np.zeros((self.n_vertices, len(self._edges)))
        for m, e in enumerate(self._edges):
            A[list(e), m] = 1.0
        return A


def enumerate_infeasible_bases(problem):
    """All minimal infeasible subsets of size at most the combinatorial dimension.

    Brute force over subsets; only meant as a test oracle on small instances.
    """
    n = problem.n_points
    if n > ENUMERATION_LIMIT:
        raise ValueError("enumeration oracle restricted to desk scale "
                         f"(N={n} > {ENUMERATION_LIMIT})")
    found = HyperedgeSet(n)
    masks = []
    for size in range(1, min(problem.comb_dim, n) + 1):
        for subset in combinations(range(n), size):
            mask = 0
            for v in subset:
                mask |= 1 << v
            if any(m & mask == m for m in masks):
                continue
            if feasibility(problem, subset):
                found.add(subset)
                masks.append(mask)
    return found


def is_cover(edges, z):
    z = np.asarray(z).reshape(-1)
    if z.size != edges.n_vertices:
        raise ValueError(f"cover vector has length {z.size}, expected {edges.n_vertices}")
    return int(all(z[list(e)].any() for e in edges))


def solve_cover_exact(edges):
    """Minimum vertex cover by depth-first branch and bound.

    Branches on the first uncovered edge (insertion order), trying its
    vertices in ascending order. Returns ``(z, size)``.
    """
    n = edges.n_vertices
    if n > EXACT_COVER_LIMIT:
        raise ValueError(f"exact cover restricted to N <= {EXACT_COVER_LIMIT}")
    edge_masks = []
    for e in edges:
        mask = 0
        for v in e:
            mask |= 1 << v
        edge_masks.append(mask)
    best_size = n + 1
    best_mask = (1 << n) - 1

    def packing_bound(cover):
        # disjoint uncovered edges each need their own vertex
        used = 0
        count = 0
        for m in edge_masks:
            if m & cover == 0 and m & used == 0:
                used |= m
                count += 1
        return count

    def search(cover, size):
        nonlocal best_size, best_mask
        target = 0
        for m in edge_masks:
            if m & cover == 0:
                target = m
                break
        if target == 0:
            if size < best_size:
                best_size, best_mask = size, cover
            return
        if size + packing_bound(cover) >= best_size:
            return
        v = 0
        while target:
            if target & 1:
                search(cover | (1 << v), size + 1)
            target >>= 1
            v += 1

    search(0, 0)
    z = np.array([(best_mask >> v) & 1 for v in range(n)], dtype=np.int8)
    return z, int(best_size)


def lp_lower_bound(edges, return_solution=False):
    """LP relaxation of the cover ILP: ``min sum(z)`` s.t. every edge has mass >= 1.

    The ``z <= 1`` bounds are omitted: any optimum can be clipped to them
    without losing feasibility, so the value is unchanged.
    """
    n = edges.n_vertices
    m = len(edges)
    if m == 0:
        return (0.0, np.zeros(n)) if return_solution else 0.0
    A = np.hstack([edges.incidence().T, -np.eye(m)])
    cost = np.concatenate([np.ones(n), np.zeros(m)])
    sol = linprog_standard(cost, A, np.ones(m))
    z = sol.x[:n]
    value = float(z.sum())
    return (value, z) if return_solution else value
