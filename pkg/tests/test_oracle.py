"""Stabilizer tableau against a dense state-vector reference (n <= 6)."""

from __future__ import annotations

import itertools
from functools import reduce

import numpy as np
import pytest

from gsdist.errors import ForcedOutcomeImpossible, SizeMismatch
from gsdist.graph import LabeledGraph, local_complement, path_graph, random_graph, star_graph
from gsdist.oracle import StabilizerTableau, apply_gate, measure_pauli, stabilizer_equal

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.diag([1, -1]).astype(complex)
SQRT_X = (I2 - 1j * X) / np.sqrt(2)
SQRT_Z = (I2 + 1j * Z) / np.sqrt(2)


def on(n, q, U):
    """Operator ``U`` on qubit ``q``; basis index bit ``q`` is qubit ``q``."""
    mats = [U if i == q else I2 for i in reversed(range(n))]
    return reduce(np.kron, mats)


def cz_dense(n, a, b):
    d = np.ones(2**n, dtype=complex)
    for idx in range(2**n):
        if (idx >> a) & 1 and (idx >> b) & 1:
            d[idx] = -1
    return np.diag(d)


def graph_vector(G: LabeledGraph) -> np.ndarray:
    n = G.n
    psi = np.ones(2**n, dtype=complex) / np.sqrt(2**n)
    for a, b in G.edges:
        psi = cz_dense(n, a, b) @ psi
    return psi


def pauli_dense(n, p):
    x, z, k = p
    ops = [np.linalg.matrix_power(X, (x >> i) & 1) @ np.linalg.matrix_power(Z, (z >> i) & 1) for i in range(n)]
    return (1j**k) * reduce(np.kron, list(reversed(ops)))


def same_ray(a, b):
    return np.isclose(abs(np.vdot(a, b)), 1.0)


def tableau_stabilizes(T: StabilizerTableau, psi) -> bool:
    assert T.labels == list(range(T.n))
    return all(np.allclose(pauli_dense(T.n, g) @ psi, psi) for g in T.gens)


@pytest.mark.parametrize("seed", range(12))
def test_graph_state_stabilizers_match_dense(seed):
    n = 2 + seed % 5
    G = random_graph(n, 0.5, seed)
    assert tableau_stabilizes(StabilizerTableau.from_graph(G), graph_vector(G))


@pytest.mark.parametrize("seed", range(12))
def test_lc_unitary_realizes_local_complementation(seed):
    n = 2 + seed % 5
    G = random_graph(n, 0.6, seed)
    v = seed % n
    U = on(n, v, SQRT_X)
    for w in G.neighbors(v):
        U = on(n, w, SQRT_Z) @ U
    assert same_ray(U @ graph_vector(G), graph_vector(local_complement(G, v)))
    T = StabilizerTableau.from_graph(G)
    T.apply_lc(v)
    assert tableau_stabilizes(T, U @ graph_vector(G))
    assert stabilizer_equal(T, StabilizerTableau.from_graph(local_complement(G, v)))


def test_cz_and_paulis_match_dense():
    G = path_graph(4)
    T = apply_gate(StabilizerTableau.from_graph(G), ("CZ", 0, 3))
    T = apply_gate(T, ("X", 1))
    psi = on(4, 1, X) @ cz_dense(4, 0, 3) @ graph_vector(G)
    assert tableau_stabilizes(T, psi)


@pytest.mark.parametrize("outcome", [0, 1])
def test_z_measurement_matches_projection(outcome):
    G = star_graph(4)
    T, out = measure_pauli(StabilizerTableau.from_graph(G), "Z", 0, forced_outcome=outcome)
    assert out == outcome
    proj = on(4, 0, (I2 + (-1) ** outcome * Z) / 2)
    psi = proj @ graph_vector(G)
    psi /= np.linalg.norm(psi)
    # drop qubit 0 from the dense vector
    rest = psi.reshape(2, 2, 2, 2)[..., outcome].reshape(-1)
    assert tableau_stabilizes(StabilizerTableau(list(range(3)), [_shift(g) for g in T.gens]), rest)


def _shift(g):
    return g  # labels 1..3 already occupy positions 0..2 after removal


def test_deterministic_outcome_cannot_be_forced():
    T = StabilizerTableau.plus_state([0])
    assert T.copy().measure("X", 0) == 0
    with pytest.raises(ForcedOutcomeImpossible):
        T.copy().measure("X", 0, forced_outcome=1)


def test_graph_neighbors_read_from_state():
    G = random_graph(6, 0.5, 9)
    T = StabilizerTableau.from_graph(G)
    T.apply_pauli("Z", 2)
    for v in G.vertices:
        assert set(T.graph_neighbors(v)) == G.neighbors(v)


def test_distinct_z_frames_are_orthogonal():
    G = random_graph(4, 0.5, 2)
    psi = graph_vector(G)
    for b1, b2 in itertools.combinations(range(16), 2):
        v1 = reduce(lambda s, q: on(4, q, Z) @ s, [q for q in range(4) if (b1 >> q) & 1], psi)
        v2 = reduce(lambda s, q: on(4, q, Z) @ s, [q for q in range(4) if (b2 >> q) & 1], psi)
        assert abs(np.vdot(v1, v2)) < 1e-9


def test_stabilizer_equal_size_mismatch():
    with pytest.raises(SizeMismatch):
        stabilizer_equal(StabilizerTableau.plus_state([0]), StabilizerTableau.plus_state([0, 1]))


def test_tableau_stays_valid_under_random_ops(rng):
    T = StabilizerTableau.from_graph(random_graph(6, 0.5, 1))
    for _ in range(50):
        q = int(rng.integers(6))
        kind = rng.integers(3)
        if kind == 0:
            T.apply_cz(q, (q + 1) % 6)
        elif kind == 1:
            T.apply_lc(q)
        else:
            T.apply_pauli("XYZ"[int(rng.integers(3))], q)
    assert T.is_valid()
