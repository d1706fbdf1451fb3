"""Trace-norm discord, weak-measurement correlation cost and super discord.

All three quantities are minima over the measurement basis on the qubit A;
the minimization is delegated to :func:`weakdiscord.search.minimize_on_sphere`.
The correlation cost is always optimized on ``||rho - Pi_2(rho)||_1``
itself, never through the factorization ``(1 - sech x) * D``, so that the
factorization stays a checkable prediction.  The fast path is available
separately as :func:`qcc_via_factorization`.
"""

from dataclasses import dataclass

import numpy as np

from . import linalg
from .measurement import (
    DIM_A,
    BlochProjectorPair,
    MultiOutcomeWeakMeasurement,
    PROB_FLOOR,
    alpha_beta,
    overlap_factor,
    apply_local_superoperator,
    local_superoperator,
    rotated_blocks,
)
from .search import DEFAULT_CONFIG, minimize_on_sphere
from .states import as_density


@dataclass(frozen=True)
class OptimizationResult:
    value: float
    basis: BlochProjectorPair
    objective_evaluations: int
    refinement_rounds: int
    converged: bool

    def as_dict(self):
        return {"value": self.value, "basis": self.basis.as_dict(),
                "objective_evaluations": self.objective_evaluations,
                "refinement_rounds": self.refinement_rounds, "converged": self.converged}


@dataclass(frozen=True)
class CorrelationReport:
    tqd: float
    qcc: float
    overlap_factor: float
    residual: float
    basis_tqd: BlochProjectorPair
    basis_qcc: BlochProjectorPair

    def as_dict(self):
        return {"tqd": self.tqd, "qcc": self.qcc, "overlap_factor": self.overlap_factor,
                "residual": self.residual, "basis_tqd": self.basis_tqd.as_dict(),
                "basis_qcc": self.basis_qcc.as_dict()}


def _chunk(dim_b):
    return max(256, 2 ** 21 // (DIM_A * dim_b) ** 2)


def _kraus_stack(theta, phi, weights):
    """Stack of A-operators ``w1 pi_1 + w2 pi_2`` for every angle; shape (K, N, 2, 2)."""
    n = np.empty(np.shape(theta) + (2,), dtype=complex)
    n[..., 0] = np.cos(np.asarray(theta) / 2)
    n[..., 1] = np.exp(1j * np.asarray(phi)) * np.sin(np.asarray(theta) / 2)
    pi1 = n[..., :, None] * np.conj(n[..., None, :])
    eye = np.eye(2)
    return np.stack([w2 * eye + (w1 - w2) * pi1 for w1, w2 in weights])


def offdiag_objective_batch(rho, theta, phi):
    """``||pi1 rho pi2 + pi2 rho pi1||_1`` for arrays of angles.

    In the measurement eigenbasis the off-diagonal part only has the (0,1)
    and (1,0) blocks; its trace norm is a 2d-dimensional Hermitian
    eigenproblem.
    """
    d = rho.dim_b
    rp = rotated_blocks(rho.matrix, d, theta, phi)
    x = np.zeros_like(rp)
    x[:, 0, :, 1, :] = rp[:, 0, :, 1, :]
    x[:, 1, :, 0, :] = rp[:, 1, :, 0, :]
    return linalg.batched_trace_norm(x.reshape(-1, DIM_A * d, DIM_A * d))


def weak_distance_batch(rho, theta, phi, weights):
    """``||rho - sum_i P(i) rho P(i)^dagger||_1`` with ``P(i) = a_i pi_1 + b_i pi_2``."""
    sup = local_superoperator(_kraus_stack(theta, phi, weights))
    out = apply_local_superoperator(sup, rho.matrix, rho.dim_b)
    return linalg.batched_trace_norm(rho.matrix[None] - out)


def weak_conditional_entropy_batch(rho, theta, phi, x):
    """``p(+x) S(rho_B|+x) + p(-x) S(rho_B|-x)`` for arrays of angles."""
    d = rho.dim_b
    a, b = alpha_beta(x)
    blocks = rho.matrix.reshape(DIM_A, d, DIM_A, d)
    ops = _kraus_stack(theta, phi, [(a, b), (b, a)])
    # Tr_A[(P (x) I) rho (P (x) I)^dagger] = sum_ab (P^dagger P)_ba rho_ab
    effects = np.conj(np.swapaxes(ops, -1, -2)) @ ops
    sub = np.einsum("knba,axby->knxy", effects, blocks)
    probs = np.real(np.trace(sub, axis1=-2, axis2=-1))
    safe = np.where(probs > PROB_FLOOR, probs, 1.0)
    vals = linalg.hermitian_eigvalsh(sub / safe[..., None, None])
    ent = linalg.entropy_from_eigenvalues(vals)
    return np.sum(np.where(probs > PROB_FLOOR, probs * ent, 0.0), axis=0)


def offdiag_objective(rho, basis):
    """Trace norm of the basis-off-diagonal part of ``rho`` (zero iff block diagonal)."""
    rho = as_density(rho)
    return float(offdiag_objective_batch(rho, np.array([basis.theta]), np.array([basis.phi]))[0])


def _optimize(objective, rho, config):
    out = minimize_on_sphere(objective, config, chunk=_chunk(rho.dim_b))
    return OptimizationResult(out.value, out.basis, out.evaluations, out.rounds, out.converged)


def tqd(rho, config=DEFAULT_CONFIG):
    """Trace-norm quantum discord: min over bases of ``||pi1 rho pi2 + pi2 rho pi1||_1``."""
    rho = as_density(rho)
    return _optimize(lambda t, p: offdiag_objective_batch(rho, t, p), rho, config)


def _trivial(rho, value=0.0):
    return OptimizationResult(value, BlochProjectorPair.z(), 0, 0, True)


def qcc(rho, x, config=DEFAULT_CONFIG):
    """Quantum correlation cost ``min ||rho - Pi_2(rho)||_1`` at strength ``x``.

    ``x = 0`` is the identity channel and returns 0 without optimizing.
    """
    rho = as_density(rho)
    a, b = alpha_beta(x)
    if a == b:
        return _trivial(rho)
    weights = [(a, b), (b, a)]
    return _optimize(lambda t, p: weak_distance_batch(rho, t, p, weights), rho, config)


def qcc_multi(rho, alphas, betas, config=DEFAULT_CONFIG):
    """Correlation cost of the n-outcome weak measurement ``P(i) = alphas[i] pi_1 + betas[i] pi_2``.

    Invalid coefficient vectors raise :class:`InvalidCoefficients`.
    """
    rho = as_density(rho)
    m = MultiOutcomeWeakMeasurement(tuple(alphas), tuple(betas))
    weights = list(zip(m.alphas, m.betas))
    if all(w1 == w2 for w1, w2 in weights):
        return _trivial(rho)
    return _optimize(lambda t, p: weak_distance_batch(rho, t, p, weights), rho, config)


def qcc_via_factorization(rho, x, config=DEFAULT_CONFIG):
    """``(1 - sech x) * tqd``: one optimization instead of a weak-channel search."""
    return (1.0 - overlap_factor(x)) * tqd(rho, config).value


def residual_quantumness(rho, x, config=DEFAULT_CONFIG):
    """Discord left over after the weak measurement, ``tqd - qcc``."""
    rho = as_density(rho)
    return tqd(rho, config).value - qcc(rho, x, config).value


def correlation_report(rho, x, config=DEFAULT_CONFIG):
    rho = as_density(rho)
    d = tqd(rho, config)
    w = qcc(rho, x, config)
    return CorrelationReport(d.value, w.value, overlap_factor(x), d.value - w.value, d.basis, w.basis)


def super_quantum_discord(rho, x, config=DEFAULT_CONFIG):
    """Entropic super discord ``min S_w(B|P(x)) + S(rho_A) - S(rho_AB)`` in bits."""
    rho = as_density(rho)
    offset = (linalg.von_neumann_entropy(rho.reduced("A"))
              - linalg.von_neumann_entropy(rho.matrix))
    res = minimize_on_sphere(lambda t, p: weak_conditional_entropy_batch(rho, t, p, x),
                             config, chunk=_chunk(rho.dim_b))
    return OptimizationResult(res.value + offset, res.basis, res.evaluations, res.rounds,
                              res.converged)


def projective_conditional_entropy(rho, basis):
    """``sum_j p_j S(rho_B|j)`` for the projective measurement in ``basis``."""
    rho = as_density(rho)
    d = rho.dim_b
    total = 0.0
    for proj in basis.projectors():
        big = np.kron(proj, np.eye(d))
        sub = linalg.partial_trace(big @ rho.matrix @ big, (DIM_A, d), "B")
        p = float(np.trace(sub).real)
        if p > PROB_FLOOR:
            total += p * linalg.von_neumann_entropy(0.5 * (sub + sub.conj().T) / p)
    return total
