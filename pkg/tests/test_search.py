import math

import numpy as np
import pytest

from weakdiscord.errors import ConvergenceFailure
from weakdiscord.search import SearchConfig, canonical_angles, minimize_on_sphere


def _axis_objective(target):
    # 1 - |n . m|: antipodally symmetric, minimized along +-m
    def f(theta, phi):
        n = np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])
        return 1.0 - np.abs(target @ n)
    return f


def test_finds_off_grid_axis():
    m = np.array([0.3, -0.5, -0.8])
    m /= np.linalg.norm(m)
    out = minimize_on_sphere(_axis_objective(m))
    assert out.converged
    assert out.value <= 1e-12
    assert out.value <= out.grid_best
    assert 0 <= out.basis.theta <= math.pi / 2 and 0 <= out.basis.phi < 2 * math.pi


def test_tie_break_prefers_smallest_angles():
    # constant objective: every point ties, the pole wins
    out = minimize_on_sphere(lambda t, p: np.zeros_like(t))
    assert (out.basis.theta, out.basis.phi) == (0.0, 0.0)


@pytest.mark.parametrize("theta,phi,expected", [
    (0.3, 1.0, (0.3, 1.0)),
    (math.pi - 0.3, 1.0, (0.3, 1.0 + math.pi)),
    (-0.3, 1.0, (0.3, 1.0 + math.pi)),
    (0.3, -1.0, (0.3, 2 * math.pi - 1.0)),
    (0.0, 4.0, (0.0, 0.0)),
])
def test_canonical_angles(theta, phi, expected):
    assert canonical_angles(theta, phi) == pytest.approx(expected, abs=1e-12)


def test_canonical_angles_preserve_axis():
    rng = np.random.default_rng(0)
    for _ in range(100):
        t, p = rng.uniform(-7, 7, 2)
        ct, cp = canonical_angles(t, p)
        a = np.array([math.sin(t) * math.cos(p), math.sin(t) * math.sin(p), math.cos(t)])
        b = np.array([math.sin(ct) * math.cos(cp), math.sin(ct) * math.sin(cp), math.cos(ct)])
        assert abs(abs(a @ b) - 1) <= 1e-12


def test_parse_grid():
    cfg = SearchConfig.parse_grid("32x48")
    assert (cfg.n_theta, cfg.n_phi) == (32, 48)
    for bad in ("32", "ax3", "1x8"):
        with pytest.raises(ValueError):
            SearchConfig.parse_grid(bad)


def test_stall_raises_convergence_failure():
    cfg = SearchConfig(max_rounds=2)
    m = np.array([0.0, 0.6, 0.8])
    with pytest.raises(ConvergenceFailure):
        minimize_on_sphere(_axis_objective(m), cfg)
    out = minimize_on_sphere(_axis_objective(m), cfg, raise_on_failure=False)
    assert not out.converged
