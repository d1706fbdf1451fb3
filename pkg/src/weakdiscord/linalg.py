"""Small dense complex linear algebra.

Matrices are plain ``numpy`` complex arrays.  Everything here is meant for
matrices of at most 64 x 64, the largest bipartite state the package handles.
"""

from typing import NamedTuple

import numpy as np

from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    DimensionOverflow,
    InvalidDensityMatrix,
    NonHermitianInput,
)

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10
TRACE_TOL = 1e-8
MAX_DIM = 64

JACOBI_THRESHOLD = 1e-13
JACOBI_MAX_SWEEPS = 100


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(a):
    """Return ``a`` as a square complex 2-D array, rejecting NaN/Inf."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}",
                                shape=list(m.shape))
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains NaN or Inf entries")
    return m


def dagger(a):
    return np.conj(np.swapaxes(a, -1, -2))


def hermiticity_violation(a):
    a = np.asarray(a)
    return float(np.max(np.abs(a - dagger(a)))) if a.size else 0.0


def check_hermitian(a, tol=HERMITIAN_TOL):
    violation = hermiticity_violation(a)
    if violation > tol:
        raise NonHermitianInput(
            f"matrix is not Hermitian: max|A - A^dagger| = {violation:.3e} > {tol:.0e}",
            violation=violation)


def hermitian_eigs(a, tol=HERMITIAN_TOL):
    """Cyclic Jacobi eigendecomposition of a Hermitian matrix.

    Each rotation first removes the phase of the pivot ``A[p, q]`` and then
    applies the classical real Jacobi rotation, so the whole sweep stays
    unitary.  Sweeps stop once the off-diagonal Frobenius norm drops below
    ``1e-13 * max(1, ||A||_F)``.

    Returns
    -------
    EigenDecomposition
        Ascending real eigenvalues and a unitary matrix of eigenvectors
        (columns).

    Raises
    ------
    NonHermitianInput
        If ``max|A - A^dagger| > tol``.
    ConvergenceFailure
        If 100 sweeps do not reduce the off-diagonal part below threshold.
    """
    a = as_matrix(a)
    check_hermitian(a, tol)
    n = a.shape[0]
    work = 0.5 * (a + a.conj().T)
    vecs = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(work)))
    target = JACOBI_THRESHOLD * scale

    for _sweep in range(JACOBI_MAX_SWEEPS + 1):
        off = float(np.linalg.norm(work - np.diag(np.diag(work))))
        if off <= target:
            break
        if _sweep == JACOBI_MAX_SWEEPS:
            raise ConvergenceFailure(
                f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps "
                f"(off-diagonal norm {off:.3e})", off_norm=off)
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = work[p, q]
                mag = abs(b)
                if mag < 1e-300:
                    continue
                phase = b / mag
                app = work[p, p].real
                aqq = work[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                g = np.array([[c, s],
                              [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                work[:, idx] = work[:, idx] @ g
                work[idx, :] = g.conj().T @ work[idx, :]
                work[p, q] = work[q, p] = 0.0
                work[p, p] = work[p, p].real
                work[q, q] = work[q, q].real
                vecs[:, idx] = vecs[:, idx] @ g

    vals = np.real(np.diag(work))
    order = np.argsort(vals, kind="stable")
    return EigenDecomposition(vals[order].copy(), vecs[:, order].copy())


def hermitian_eigvalsh(a):
    """Eigenvalues of a (stack of) Hermitian matrices via LAPACK; no checks.

    This is the hot path used inside the optimizers, where ``a`` is a batch
    of thousands of small matrices.
    """
    return np.linalg.eigvalsh(a)


def trace_norm(a, tol=HERMITIAN_TOL):
    """Trace norm ``Tr sqrt(A A^dagger)`` of a Hermitian matrix.

    For Hermitian input this is the sum of absolute eigenvalues.
    """
    a = as_matrix(a)
    check_hermitian(a, tol)
    return float(np.sum(np.abs(hermitian_eigvalsh(0.5 * (a + a.conj().T)))))


def batched_trace_norm(stack):
    """Trace norms of a stack of Hermitian matrices with shape (..., n, n)."""
    return np.sum(np.abs(hermitian_eigvalsh(stack)), axis=-1)


def tensor(a, b, max_dim=MAX_DIM):
    """Kronecker product ``a (x) b``; refuses results larger than ``max_dim``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if max(rows, cols) > max_dim:
        raise DimensionOverflow(f"tensor product would be {rows}x{cols}, cap is {max_dim}",
                                rows=rows, cols=cols, cap=max_dim)
    return np.kron(a, b)


def partial_trace(m, dims, keep="B"):
    """Reduced matrix of a bipartite operator on ``dims = (dA, dB)``.

    ``keep`` is ``"A"`` or ``"B"``: the subsystem that survives.
    """
    m = as_matrix(m)
    d_a, d_b = (int(d) for d in dims)
    if m.shape[0] != d_a * d_b:
        raise DimensionMismatch(
            f"matrix is {m.shape[0]}x{m.shape[0]} but dims {d_a}x{d_b} give {d_a * d_b}",
            shape=list(m.shape), dims=[d_a, d_b])
    blocks = m.reshape(d_a, d_b, d_a, d_b)
    if keep in ("A", "a", 0):
        return np.einsum("ikjk->ij", blocks)
    if keep in ("B", "b", 1):
        return np.einsum("kikj->ij", blocks)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def entropy_from_eigenvalues(vals):
    """-sum p log2 p along the last axis, with 0 log 0 = 0."""
    p = np.clip(np.asarray(vals, dtype=float), 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0.0, p * np.log2(np.where(p > 0.0, p, 1.0)), 0.0)
    return -np.sum(terms, axis=-1)


def von_neumann_entropy(rho):
    """Von Neumann entropy in bits.

    Eigenvalues down to ``-1e-10`` are accepted and clamped to zero.
    """
    rho = as_matrix(rho)
    violation = hermiticity_violation(rho)
    if violation > HERMITIAN_TOL:
        raise InvalidDensityMatrix(f"not Hermitian (violation {violation:.3e})",
                                   violation=violation)
    tr = np.trace(rho)
    if abs(tr - 1.0) > TRACE_TOL:
        raise InvalidDensityMatrix(f"trace is {tr.real:.12g}, expected 1",
                                   trace=float(tr.real))
    vals = hermitian_eigvalsh(0.5 * (rho + rho.conj().T))
    if vals[0] < -PSD_TOL:
        raise InvalidDensityMatrix(f"negative eigenvalue {vals[0]:.3e}",
                                   min_eigenvalue=float(vals[0]))
    s = float(entropy_from_eigenvalues(vals))
    return min(max(s, 0.0), float(np.log2(rho.shape[0])))
