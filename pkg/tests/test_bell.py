import numpy as np
import pytest

import oracles
from weakdiscord import bell, discord, states
from weakdiscord.errors import NotPositive
from weakdiscord.measurement import BlochProjectorPair, TwoOutcomeWeakMeasurement, channel_two_outcome
from weakdiscord.states import BellDiagonalParams


def _tetrahedron_points(n, seed):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        c = rng.uniform(-1, 1, 3)
        if states.in_tetrahedron(c):
            out.append(BellDiagonalParams(*c))
    return out


def test_bell_tqd_examples():
    assert bell.bell_tqd((0.1, 0.2, 0.3)) == 0.2
    assert bell.bell_tqd((0.0, 0.0, -0.7)) == 0.0
    assert bell.bell_tqd((0.3, 0.1, 0.2)) == 0.2
    assert discord.tqd(states.bell_diagonal((0.3, 0.1, 0.2))).value == pytest.approx(0.2, abs=1e-12)


def test_bell_qcc_examples():
    assert bell.bell_qcc((0.1, 0.2, 0.3), 1.0) == pytest.approx(oracles.BELL_QCC_X1, abs=1e-15)
    assert bell.bell_qcc((0.4, -0.2, 0.1), 0.0) == 0.0
    assert bell.bell_qcc((0.4, -0.2, 0.1), 20.0) == bell.bell_tqd((0.4, -0.2, 0.1))


def test_invalid_params_rejected():
    with pytest.raises(NotPositive):
        bell.bell_tqd((0.9, 0.9, 0.9))


def test_post_weak_examples():
    s = oracles.SECH_1
    q = bell.bell_post_weak((0.1, 0.2, 0.3), 1.0)
    assert q.as_tuple() == pytest.approx((s * 0.1, s * 0.2, 0.3), abs=1e-15)
    assert bell.bell_post_weak((0.1, 0.2, 0.3), 20.0).as_tuple() == (0.0, 0.0, 0.3)
    assert bell.bell_post_weak((0.1, 0.2, 0.3), 0.0).as_tuple() == (0.1, 0.2, 0.3)


def test_post_weak_matches_channel_along_largest_axis():
    # rotate the axis of the largest |c_k| onto the Bloch direction of that Pauli
    axes = [BlochProjectorPair(np.pi / 2, 0.0), BlochProjectorPair(np.pi / 2, np.pi / 2),
            BlochProjectorPair.z()]
    for p in _tetrahedron_points(30, 5):
        k = bell.measurement_axis(p)
        out = channel_two_outcome(states.bell_diagonal(p), TwoOutcomeWeakMeasurement(0.6, axes[k]))
        expected = states.bell_diagonal_matrix(bell.bell_post_weak(p, 0.6))
        np.testing.assert_allclose(out.matrix, expected, atol=1e-14)


def test_post_weak_stays_in_tetrahedron():
    for p in _tetrahedron_points(200, 6):
        for x in (0.1, 1.0, 5.0, 30.0):
            assert states.in_tetrahedron(bell.bell_post_weak(p, x))


def test_chain_closed_form():
    for p in _tetrahedron_points(20, 8):
        for n in range(6):
            expected = oracles.sech(0.4) ** n * bell.bell_tqd(p)
            assert bell.bell_chain_tqd(p, 0.4, n) == pytest.approx(expected, rel=1e-12, abs=1e-15)


def test_post_projective_examples():
    out = bell.bell_post_projective((0.1, 0.2, 0.3))
    np.testing.assert_allclose(out.matrix, np.diag([0.325, 0.175, 0.175, 0.325]), atol=1e-15)
    np.testing.assert_allclose(bell.bell_post_projective((0, 0, 0)).matrix, np.eye(4) / 4)
    for p in _tetrahedron_points(5, 9):
        assert discord.tqd(bell.bell_post_projective(p)).value <= 1e-9


@pytest.mark.slow
def test_closed_forms_match_optimizer():
    # 100 tetrahedron points; tqd plus qcc at four strengths
    for p in _tetrahedron_points(100, 11):
        rho = states.bell_diagonal(p)
        assert abs(discord.tqd(rho).value - bell.bell_tqd(p)) <= 1e-6
        for x in (0.1, 1.0, 5.0, 20.0):
            assert abs(discord.qcc(rho, x).value - bell.bell_qcc(p, x)) <= 1e-6
