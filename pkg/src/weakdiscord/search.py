"""Global minimization over measurement directions on the Bloch sphere.

Every objective in the package is invariant under swapping the two
projectors, i.e. under the antipodal map ``n -> -n``, so a coarse grid over
the upper half-sphere sees every basis once.  The lowest grid cells are
then polished by a compass/diagonal pattern search with step halving.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ConvergenceFailure
from .measurement import BlochProjectorPair

TIE_TOL = 1e-12


@dataclass(frozen=True)
class SearchConfig:
    n_theta: int = 64
    n_phi: int = 128
    step_tol: float = 1e-10
    max_rounds: int = 40
    max_moves: int = 5000
    n_starts: int = 4

    @classmethod
    def parse_grid(cls, text, **kwargs):
        """Build a config from a ``"<ntheta>x<nphi>"`` string."""
        try:
            nt, nph = (int(v) for v in text.lower().split("x"))
        except ValueError as exc:
            raise ValueError(f"grid must look like 64x128, got {text!r}") from exc
        if nt < 2 or nph < 2:
            raise ValueError("grid needs at least 2 points per angle")
        return cls(n_theta=nt, n_phi=nph, **kwargs)

    def as_dict(self):
        return {"n_theta": self.n_theta, "n_phi": self.n_phi, "step_tol": self.step_tol,
                "max_rounds": self.max_rounds, "n_starts": self.n_starts}


DEFAULT_CONFIG = SearchConfig()


class SearchOutcome(NamedTuple):
    value: float
    basis: BlochProjectorPair
    evaluations: int
    rounds: int
    converged: bool
    grid_best: float


def canonical_angles(theta, phi):
    """Map any ``(theta, phi)`` to the equivalent point with theta in [0, pi/2]."""
    theta = math.fmod(theta, 2 * math.pi)
    if theta < 0:
        theta += 2 * math.pi
    if theta > math.pi:
        theta = 2 * math.pi - theta
        phi += math.pi
    if theta > math.pi / 2:
        theta = math.pi - theta
        phi += math.pi
    phi = math.fmod(phi, 2 * math.pi)
    if phi < 0:
        phi += 2 * math.pi
    if phi >= 2 * math.pi:
        phi = 0.0
    if theta == 0.0:
        phi = 0.0
    return theta, phi


def _evaluate(objective, theta, phi, chunk):
    out = np.empty(theta.shape[0])
    for start in range(0, theta.shape[0], chunk):
        stop = start + chunk
        out[start:stop] = objective(theta[start:stop], phi[start:stop])
    return out


def _grid_starts(values, n_theta, n_phi, n_starts):
    """Indices of the lowest local minima of the grid (phi periodic)."""
    grid = values.reshape(n_theta, n_phi)
    is_min = np.ones_like(grid, dtype=bool)
    for shift in (1, -1):
        is_min &= grid <= np.roll(grid, shift, axis=1)
    padded = np.pad(grid, ((1, 1), (0, 0)), constant_values=np.inf)
    for dt in (1, -1):
        for dp in (1, 0, -1):
            neighbour = np.roll(padded, dp, axis=1)[1 + dt:1 + dt + n_theta]
            is_min &= grid <= neighbour
    # The theta = 0 row is one point; keep only its first column.
    is_min[0, 1:] = False
    flat = np.flatnonzero(is_min.ravel())
    best = int(np.argmin(values))
    order = flat[np.argsort(values[flat], kind="stable")]
    starts = [best] + [int(i) for i in order if int(i) != best]
    return starts[:max(1, n_starts)]


_DIRECTIONS = np.array([[1, 0], [-1, 0], [0, 1], [0, -1],
                        [1, 1], [1, -1], [-1, 1], [-1, -1]], dtype=float)


def minimize_on_sphere(objective, config=DEFAULT_CONFIG, chunk=8192, raise_on_failure=True):
    """Minimize a batched objective ``f(theta[N], phi[N]) -> values[N]``.

    Returns a :class:`SearchOutcome` whose ``value`` is the objective
    re-evaluated at the canonical argmin.  Among minimizers within 1e-12 of
    the best value the smallest ``(theta, phi)`` wins.
    """
    nt, nph = config.n_theta, config.n_phi
    d_theta = (math.pi / 2) / (nt - 1)
    d_phi = 2 * math.pi / nph
    tt, pp = np.meshgrid(np.linspace(0.0, math.pi / 2, nt), np.arange(nph) * d_phi,
                         indexing="ij")
    g_theta, g_phi = tt.ravel(), pp.ravel()
    values = _evaluate(objective, g_theta, g_phi, chunk)
    evaluations = values.size
    grid_best = float(values.min())

    starts = _grid_starts(values, nt, nph, config.n_starts)
    k = len(starts)
    theta = g_theta[starts].copy()
    phi = g_phi[starts].copy()
    fval = values[starts].copy()
    step = np.ones(k)
    rounds = np.zeros(k, dtype=int)
    moves = np.zeros(k, dtype=int)
    active = np.ones(k, dtype=bool)
    scale = np.array([d_theta, d_phi])

    while active.any():
        idx = np.flatnonzero(active)
        offsets = step[idx, None, None] * _DIRECTIONS[None, :, :] * scale
        cand_t = (theta[idx, None] + offsets[..., 0]).ravel()
        cand_p = (phi[idx, None] + offsets[..., 1]).ravel()
        cand_f = objective(cand_t, cand_p).reshape(idx.size, -1)
        evaluations += cand_f.size
        best_dir = np.argmin(cand_f, axis=1)
        best_f = cand_f[np.arange(idx.size), best_dir]
        improved = best_f < fval[idx]
        for j, i in enumerate(idx):
            if improved[j] and moves[i] < config.max_moves:
                theta[i] = cand_t.reshape(idx.size, -1)[j, best_dir[j]]
                phi[i] = cand_p.reshape(idx.size, -1)[j, best_dir[j]]
                fval[i] = best_f[j]
                moves[i] += 1
            else:
                step[i] *= 0.5
                rounds[i] += 1
                if step[i] * d_phi < config.step_tol or rounds[i] >= config.max_rounds \
                        or moves[i] >= config.max_moves:
                    active[i] = False

    converged = step * d_phi < config.step_tol
    canon = [canonical_angles(float(t), float(p)) for t, p in zip(theta, phi)]
    c_theta = np.array([c[0] for c in canon])
    c_phi = np.array([c[1] for c in canon])
    final = objective(c_theta, c_phi)
    evaluations += k
    best_val = float(final.min())
    tied = [i for i in range(k) if final[i] <= best_val + TIE_TOL]
    win = min(tied, key=lambda i: (c_theta[i], c_phi[i]))
    if raise_on_failure and not converged[win]:
        raise ConvergenceFailure(
            f"pattern search stalled with step {step[win] * d_phi:.3e} rad "
            f"after {rounds[win]} rounds", step=float(step[win] * d_phi),
            rounds=int(rounds[win]))
    return SearchOutcome(float(final[win]), BlochProjectorPair(float(c_theta[win]),
                                                               float(c_phi[win])),
                         int(evaluations), int(rounds[win]), bool(converged[win]), grid_best)
