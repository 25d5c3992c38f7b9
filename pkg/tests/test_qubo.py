import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import brute_force_qubo, random_edges
from hybridfit.hypergraph import HyperedgeSet, solve_cover_exact
from hybridfit.qubo import (build_qubo, constraint_matrix, decode, lifted_energy,
                            qubo_energy, qubo_from_matrix, read_qubo, to_ising, write_qubo)


@pytest.fixture
def triangle():
    return HyperedgeSet(3, [(0, 1, 2)])


def codes_to_bits(codes, n):
    return ((np.asarray(codes)[:, None] >> np.arange(n)) & 1).astype(np.int8)


def test_dimensions(triangle, twelve_vertex_edges):
    assert build_qubo(triangle, 3, 1.0).n_variables == 5
    q = build_qubo(twelve_vertex_edges, 3, 1.0)
    assert q.n_variables == 24
    assert q.n_constraints == 6
    assert not np.tril(q.matrix, -1).any()


def test_constraint_matrix_layout(triangle):
    H = constraint_matrix(triangle, 3)
    assert H.tolist() == [[1, 1, 1, -1, -1, -1]]


def test_single_edge_minimum(triangle):
    q = build_qubo(triangle, 3, 1.0)
    E = brute_force_qubo(q.matrix, q.offset)
    assert E.min() == pytest.approx(1.0)
    # at unit penalty leaving the edge uncovered costs as much as covering it
    winners = {tuple(v[:3]) for v in codes_to_bits(np.flatnonzero(np.isclose(E, 1.0)), 5)}
    assert winners == {(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)}
    q = build_qubo(triangle, 3, 2.0)
    E = brute_force_qubo(q.matrix, q.offset)
    assert E.min() == pytest.approx(1.0)
    winners = codes_to_bits(np.flatnonzero(np.isclose(E, 1.0)), 5)
    assert sorted(tuple(v) for v in winners) == [(0, 0, 1, 0, 0), (0, 1, 0, 0, 0),
                                                 (1, 0, 0, 0, 0)]


def test_energy_examples(triangle):
    q = build_qubo(triangle, 3, 1.0)
    assert qubo_energy(q, np.zeros(5)) == q.offset
    single = qubo_from_matrix([[2.5]], offset=0.25)
    assert qubo_energy(single, [1]) == 2.75
    with pytest.raises(ValueError):
        qubo_energy(q, np.zeros(4))


def test_decode_examples(triangle, twelve_vertex_edges):
    q = build_qubo(triangle, 3, 1.0)
    z, bad = decode(q, [1, 1, 0, 1, 0])
    assert z.tolist() == [1, 1, 0] and bad == 0
    q = build_qubo(twelve_vertex_edges, 3, 1.0)
    assert decode(q, np.zeros(24))[1] == 6
    with pytest.raises(ValueError):
        decode(q, np.zeros(5))


def test_build_errors(triangle):
    with pytest.raises(ValueError):
        build_qubo(triangle, 2, 1.0)
    with pytest.raises(ValueError):
        build_qubo(triangle, 3, 0.0)


@given(seed=st.integers(0, 10**6), lam=st.floats(0.01, 100))
def test_fold_matches_lifted_form(seed, lam):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 9))
    delta = int(rng.integers(2, 4))
    edges = random_edges(rng, n, int(rng.integers(1, 6)), delta)
    q = build_qubo(edges, delta, lam)
    for _ in range(5):
        v = rng.integers(0, 2, q.n_variables)
        ref = lifted_energy(edges, delta, lam, v)
        assert qubo_energy(q, v) == pytest.approx(ref, rel=1e-10, abs=1e-10)


@pytest.mark.parametrize("seed", range(15))
def test_large_penalty_is_exact(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 8))
    edges = random_edges(rng, n, int(rng.integers(1, 5)), 2)
    q = build_qubo(edges, 2, 2.0)
    if q.n_variables > 16:
        pytest.skip("too many variables for the brute-force oracle")
    E = brute_force_qubo(q.matrix, q.offset)
    best = int(np.argmin(E))
    z, bad = decode(q, codes_to_bits([best], q.n_variables)[0])
    assert bad == 0
    assert int(z.sum()) == solve_cover_exact(edges)[1] == pytest.approx(E[best])


def test_ising_examples():
    model = to_ising(qubo_from_matrix([[1.5]]))
    assert model.biases[0] * model.scale == pytest.approx(0.75)
    zero = to_ising(qubo_from_matrix(np.zeros((3, 3))))
    assert not zero.biases.any() and zero.couplings == {} and zero.scale == 1.0


def spins(n):
    return 2 * codes_to_bits(np.arange(1 << n), n).astype(float) - 1


@given(seed=st.integers(0, 10**6))
def test_ising_energy_identity(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 7))
    Q = np.triu(rng.normal(size=(n, n)) * rng.uniform(0.1, 20))
    q = qubo_from_matrix(Q, offset=float(rng.normal()))
    model = to_ising(q)
    E = brute_force_qubo(Q, q.offset)
    S = spins(n)
    ising = np.array([model.energy(s) for s in S]) * model.scale
    assert np.allclose(ising, E, rtol=1e-10, atol=1e-9)
    assert np.abs(model.biases).max(initial=0) <= 2.0 + 1e-12
    assert max((abs(w) for w in model.couplings.values()), default=0) <= 1.0 + 1e-12
    assert int(np.argmin(ising)) == int(np.argmin(E))


def test_qubo_file_roundtrip(tmp_path, twelve_vertex_edges):
    q = build_qubo(twelve_vertex_edges, 3, 0.7)
    path = tmp_path / "q.txt"
    write_qubo(q, path)
    Q, offset = read_qubo(path)
    assert np.array_equal(Q, q.matrix)
    assert offset == q.offset
    first = path.read_text().splitlines()[0].split()
    assert int(first[0]) == 24 and int(first[1]) == np.count_nonzero(q.matrix)


def test_qubo_file_errors(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("2 2\n0 0 1.0\n")
    with pytest.raises(ValueError):
        read_qubo(bad)
    bad.write_text("2 1\n1 0 1.0\n")
    with pytest.raises(ValueError):
        read_qubo(bad)
    with pytest.raises(ValueError):
        qubo_from_matrix([[0.0, 0.0], [1.0, 0.0]])
