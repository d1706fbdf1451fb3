import json

import numpy as np
import pytest

import oracles
from weakdiscord import linalg, states
from weakdiscord.errors import (
    DimensionMismatch,
    InvalidRank,
    NotHermitian,
    NotPositive,
    NotUnitary,
    NotUnitTrace,
)


def test_from_matrix_examples():
    rho = states.from_matrix(np.eye(4) / 4)
    assert rho.dim_b == 2
    pure = states.from_matrix(np.diag([1.0, 0, 0, 0]), 2)
    assert pure.purity() == pytest.approx(1.0)
    with pytest.raises(NotUnitTrace) as info:
        states.from_matrix(np.diag([1.0, 1, 0, 0]), 2)
    assert info.value.context["trace"] == pytest.approx(2.0)


def test_from_matrix_rejections():
    bad = np.eye(4, dtype=complex) / 4
    bad[0, 1] = 1e-3
    with pytest.raises(NotHermitian):
        states.from_matrix(bad)
    with pytest.raises(NotPositive) as info:
        states.from_matrix(np.diag([0.6, 0.6, -0.2, 0.0]))
    assert info.value.context["min_eigenvalue"] == pytest.approx(-0.2)
    with pytest.raises(DimensionMismatch):
        states.from_matrix(np.eye(4) / 4, 3)
    with pytest.raises(ValueError):
        states.from_matrix(np.full((4, 4), np.nan))


def test_density_matrix_is_read_only(bell_example):
    with pytest.raises(ValueError):
        bell_example.matrix[0, 0] = 1.0


def test_bell_diagonal_examples(phi_plus):
    np.testing.assert_allclose(states.bell_diagonal((0, 0, 0)).matrix, np.eye(4) / 4)
    assert phi_plus.purity() == pytest.approx(1.0, abs=1e-14)
    phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    np.testing.assert_allclose(phi_plus.matrix, np.outer(phi, phi), atol=1e-15)


def test_bell_diagonal_entries(bell_example):
    m = bell_example.matrix
    # (1 +- c3)/4 on the diagonal, (c1 -+ c2)/4 on the anti-diagonal
    np.testing.assert_allclose(np.diag(m).real, [0.325, 0.175, 0.175, 0.325], atol=1e-15)
    np.testing.assert_allclose(np.fliplr(m).diagonal().real, [-0.025, 0.075, 0.075, -0.025],
                               atol=1e-15)


def test_bell_populations_match_eigenvalues(rng):
    for _ in range(100):
        c = rng.uniform(-1, 1, 3)
        if not states.in_tetrahedron(c):
            continue
        p = states.BellDiagonalParams(*c)
        vals, _ = linalg.hermitian_eigs(states.bell_diagonal(p).matrix)
        np.testing.assert_allclose(np.sort(p.populations()), vals, atol=1e-12)
        np.testing.assert_allclose(p.populations(), oracles.bell_basis_populations(c), atol=1e-12)


def test_bell_diagonal_outside_tetrahedron():
    assert not states.in_tetrahedron((0.9, 0.9, 0.9))
    with pytest.raises(NotPositive):
        states.bell_diagonal((0.9, 0.9, 0.9))


def test_random_state_examples():
    pure = states.random_state(2, 1, 7)
    assert pure.purity() == pytest.approx(1.0, abs=1e-10)
    full = states.random_state(2, 4, 7)
    assert np.linalg.matrix_rank(full.matrix) == 4
    again = states.random_state(2, 4, 7)
    assert full.matrix.tobytes() == again.matrix.tobytes()


def test_random_state_invariants_over_500_seeds():
    for seed in range(500):
        rho = states.random_state(2, 4, seed)
        assert np.linalg.eigvalsh(rho.matrix)[0] >= -1e-12
        assert abs(np.trace(rho.matrix) - 1) <= 1e-12


def test_random_state_higher_dimension():
    rho = states.random_state(3, 6, 201)
    assert rho.matrix.shape == (6, 6)
    assert states.from_matrix(rho.matrix, 3).dim_b == 3


def test_random_state_rejects_bad_arguments():
    with pytest.raises(InvalidRank):
        states.random_state(2, 5, 0)
    with pytest.raises(InvalidRank):
        states.random_state(2, 0, 0)
    with pytest.raises(DimensionMismatch):
        states.random_state(33, 1, 0)


def test_local_unitary_examples(bell_example):
    rho = states.random_state(2, 3, 5)
    np.testing.assert_allclose(states.local_unitary(rho, np.eye(2), np.eye(2)).matrix, rho.matrix)
    flipped = states.local_unitary(np.diag([1.0, 0, 0, 0]), oracles.SX, np.eye(2))
    np.testing.assert_allclose(flipped.matrix, np.diag([0, 0, 1.0, 0]))
    same = states.local_unitary(bell_example, oracles.SZ, oracles.SZ)
    np.testing.assert_allclose(same.matrix, bell_example.matrix, atol=1e-15)


def test_local_unitary_rejects_non_unitary(bell_example):
    with pytest.raises(NotUnitary):
        states.local_unitary(bell_example, 2 * np.eye(2), np.eye(2))
    with pytest.raises(DimensionMismatch):
        states.local_unitary(bell_example, np.eye(2), np.eye(3))


def test_local_channel_preserves_trace_and_marginal(rng):
    rho = states.random_state(3, 6, 9)
    out = states.apply_local_channel_b(rho, states.random_kraus(3, 4, rng))
    assert np.trace(out.matrix).real == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(out.reduced("A"), rho.reduced("A"), atol=1e-12)


def test_swap_subsystems_round_trip(rng):
    ra, rb = oracles.random_density(3, rng), oracles.random_density(2, rng)
    swapped = states.swap_subsystems(np.kron(rb, ra), (2, 3))
    np.testing.assert_allclose(swapped, np.kron(ra, rb), atol=1e-15)


def test_json_round_trip_is_exact(tmp_path):
    rho = states.random_state(3, 2, 42)
    path = tmp_path / "state.json"
    states.save(rho, path)
    back = states.load(path)
    assert back.dim_b == 3
    assert back.matrix.tobytes() == rho.matrix.tobytes()
    data = json.loads(path.read_text())
    assert len(data["matrix"]) == 6 and len(data["matrix"][0][0]) == 2


def test_json_rejects_malformed():
    with pytest.raises(ValueError):
        states.loads('{"matrix": []}')
    with pytest.raises(ValueError):
        states.loads('{"dimB": 2, "matrix": [[1, 2]]}')
