"""Weak and projective measurements on the qubit A.

A measurement basis is a pair of orthogonal rank-1 projectors given by a
Bloch direction ``(theta, phi)``.  A two-outcome weak measurement of
strength ``x`` has Kraus operators

    P(+x) = alpha pi_1 + beta pi_2,   P(-x) = beta pi_1 + alpha pi_2,

with ``alpha = sqrt((1 - tanh x)/2)`` and ``beta = sqrt((1 + tanh x)/2)``.
Everything acts as ``P (x) I_B`` on the bipartite state.
"""

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from . import linalg
from .errors import DimensionMismatch, InvalidCoefficients
from .states import DIM_A, DensityMatrix, _wrap, as_density

PROJECTIVE_STRENGTH = 20.0
PROB_FLOOR = 1e-12
COEFF_TOL = 1e-10


@dataclass(frozen=True)
class BlochProjectorPair:
    theta: float
    phi: float

    @classmethod
    def z(cls):
        return cls(0.0, 0.0)

    def vector(self):
        return np.array([math.cos(self.theta / 2),
                         np.exp(1j * self.phi) * math.sin(self.theta / 2)])

    def projectors(self):
        n = self.vector()
        p1 = np.outer(n, n.conj())
        return p1, np.eye(2) - p1

    def rotation(self):
        """Unitary ``V`` with ``V |n> = |0>``, i.e. pi_1 = V^dagger |0><0| V."""
        return basis_rotations(np.array([self.theta]), np.array([self.phi]))[0]

    def as_dict(self):
        return {"theta": float(self.theta), "phi": float(self.phi)}


def alpha_beta(x):
    """Kraus weights ``(alpha, beta)`` for strength ``x >= 0``.

    Strengths from 20 up (``math.inf`` included) are exactly projective:
    ``tanh(20)`` already rounds to 1 in double precision.

    Uses ``(1 -+ tanh x) / 2 = 1 / (1 + exp(+-2x))``, which avoids the
    cancellation in ``1 - tanh x`` and keeps ``2 alpha beta`` within a few
    ulps of ``sech x`` at every strength.
    """
    x = float(x)
    if not x >= 0.0:
        raise ValueError(f"measurement strength must be >= 0, got {x}")
    if x >= PROJECTIVE_STRENGTH:
        return 0.0, 1.0
    return 1.0 / math.sqrt(1.0 + math.exp(2.0 * x)), 1.0 / math.sqrt(1.0 + math.exp(-2.0 * x))


def overlap_factor(x):
    """``2 alpha beta``, evaluated as ``sech x`` (exactly 1 at x = 0, 0 once projective)."""
    alpha_beta(x)
    x = float(x)
    return 0.0 if x >= PROJECTIVE_STRENGTH else 1.0 / math.cosh(x)


@dataclass(frozen=True)
class TwoOutcomeWeakMeasurement:
    x: float
    basis: BlochProjectorPair = field(default_factory=BlochProjectorPair.z)
    alpha: float = field(init=False)
    beta: float = field(init=False)

    def __post_init__(self):
        a, b = alpha_beta(self.x)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @property
    def overlap(self):
        return overlap_factor(self.x)


@dataclass(frozen=True)
class MultiOutcomeWeakMeasurement:
    """Kraus operators ``P(i) = alphas[i] pi_1 + betas[i] pi_2``.

    Both coefficient vectors must be nonnegative unit vectors, which keeps
    the overlap factor ``sum alphas[i] betas[i]`` inside [0, 1].
    """

    alphas: tuple
    betas: tuple
    basis: BlochProjectorPair = field(default_factory=BlochProjectorPair.z)

    def __post_init__(self):
        a = np.asarray(self.alphas, dtype=float)
        b = np.asarray(self.betas, dtype=float)
        if a.ndim != 1 or a.shape != b.shape or a.size < 1:
            raise InvalidCoefficients("alphas and betas must be 1-D and of equal length",
                                      n_alphas=int(a.size), n_betas=int(b.size))
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise InvalidCoefficients("coefficients must be finite")
        if np.any(a < 0) or np.any(b < 0):
            raise InvalidCoefficients("coefficients must be nonnegative",
                                      alphas=a.tolist(), betas=b.tolist())
        for name, v in (("alphas", a), ("betas", b)):
            err = abs(float(np.sum(v * v)) - 1.0)
            if err > COEFF_TOL:
                raise InvalidCoefficients(f"sum of squared {name} differs from 1 by {err:.3e}",
                                          violation=err)
        object.__setattr__(self, "alphas", tuple(float(v) for v in a))
        object.__setattr__(self, "betas", tuple(float(v) for v in b))

    @classmethod
    def from_two_outcome(cls, m):
        return cls((m.alpha, m.beta), (m.beta, m.alpha), m.basis)

    @property
    def overlap(self):
        return float(np.dot(self.alphas, self.betas))

    def operators(self):
        p1, p2 = self.basis.projectors()
        return [a * p1 + b * p2 for a, b in zip(self.alphas, self.betas)]


def weak_operators(m):
    """Return the pair ``(P(+x), P(-x))`` as 2x2 matrices on A."""
    p1, p2 = m.basis.projectors()
    return m.alpha * p1 + m.beta * p2, m.beta * p1 + m.alpha * p2


def _kraus_on_a(rho, ops):
    eye = np.eye(rho.dim_b)
    out = np.zeros_like(rho.matrix)
    for op in ops:
        big = linalg.tensor(op, eye)
        out = out + big @ rho.matrix @ big.conj().T
    return _wrap(0.5 * (out + out.conj().T), rho.dim_b)


def _state(rho):
    rho = as_density(rho)
    if not isinstance(rho, DensityMatrix) or rho.matrix.shape[0] != DIM_A * rho.dim_b:
        raise DimensionMismatch("state does not match its declared dimensions")
    return rho


def channel_two_outcome(rho, m):
    """``P(+x) rho P(+x)^dagger + P(-x) rho P(-x)^dagger`` with P acting on A."""
    return _kraus_on_a(_state(rho), weak_operators(m))


def channel_multi_outcome(rho, m):
    return _kraus_on_a(_state(rho), m.operators())


def projective_channel(rho, basis):
    return _kraus_on_a(_state(rho), basis.projectors())


def block_parts(rho, basis):
    """Split ``rho`` into ``(pi1 rho pi1 + pi2 rho pi2, pi1 rho pi2 + pi2 rho pi1)``."""
    rho = _state(rho)
    p1, p2 = (linalg.tensor(p, np.eye(rho.dim_b)) for p in basis.projectors())
    m = rho.matrix
    return p1 @ m @ p1 + p2 @ m @ p2, p1 @ m @ p2 + p2 @ m @ p1


class ConditionalBranch(NamedTuple):
    state: Optional[np.ndarray]
    probability: float
    flagged: bool


def conditional_states(rho, m):
    """Post-measurement states of B and their probabilities for outcomes +x and -x.

    A branch whose probability falls below 1e-12 is returned with
    ``flagged=True`` and ``state=None``; the other branch is unaffected.
    """
    rho = _state(rho)
    eye = np.eye(rho.dim_b)
    branches = []
    for op in weak_operators(m):
        big = linalg.tensor(op, eye)
        unnorm = linalg.partial_trace(big @ rho.matrix @ big.conj().T, (DIM_A, rho.dim_b), "B")
        p = float(np.trace(unnorm).real)
        if p < PROB_FLOOR:
            branches.append(ConditionalBranch(None, max(p, 0.0), True))
        else:
            s = unnorm / p
            branches.append(ConditionalBranch(0.5 * (s + s.conj().T), p, False))
    return tuple(branches)


# Batched helpers used by the optimizers.  ``theta`` and ``phi`` are 1-D
# arrays of the same length N.

def basis_rotations(theta, phi):
    """Stack of unitaries ``V`` (shape (N, 2, 2)) rotating each |n> onto |0>."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    c = np.cos(theta / 2)
    s = np.sin(theta / 2)
    e = np.exp(1j * phi)
    v = np.empty(theta.shape + (2, 2), dtype=complex)
    v[..., 0, 0] = c
    v[..., 0, 1] = np.conj(e) * s
    v[..., 1, 0] = -e * s
    v[..., 1, 1] = c
    return v


def local_superoperator(ops):
    """Matrix of ``X -> sum_k P_k X P_k^dagger`` on 2x2 blocks, per angle.

    ``ops`` has shape (K, N, 2, 2); the result has shape (N, 4, 4) and acts
    on the block index pair ``(a, b)`` of a bipartite operator.
    """
    ops = np.asarray(ops)
    n = ops.shape[1]
    prod = ops[:, :, :, None, :, None] * np.conj(ops)[:, :, None, :, None, :]
    return prod.sum(axis=0).reshape(n, 4, 4)


def apply_local_superoperator(sup, matrix, dim_b):
    """``sum_k (P_k (x) I) rho (P_k (x) I)^dagger`` for every angle; shape (N, 2d, 2d)."""
    d = dim_b
    blocks = np.asarray(matrix).reshape(DIM_A, d, DIM_A, d).transpose(0, 2, 1, 3)
    out = sup @ blocks.reshape(DIM_A * DIM_A, d * d)
    out = out.reshape(-1, DIM_A, DIM_A, d, d).transpose(0, 1, 3, 2, 4)
    return out.reshape(-1, DIM_A * d, DIM_A * d)


def rotated_blocks(matrix, dim_b, theta, phi):
    """``(V (x) I) rho (V (x) I)^dagger`` for every angle, as shape (N, 2, d, 2, d)."""
    v = basis_rotations(theta, phi)
    out = apply_local_superoperator(local_superoperator(v[None]), matrix, dim_b)
    return out.reshape(-1, DIM_A, dim_b, DIM_A, dim_b)
