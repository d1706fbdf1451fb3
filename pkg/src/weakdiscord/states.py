"""Bipartite density matrices on C^2 (x) C^d.

Subsystem A is always the qubit and always the side that gets measured;
matrices use the row-major Kronecker ordering ``A (x) B``.
"""

import json
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import (
    DimensionMismatch,
    InvalidRank,
    NotHermitian,
    NotPositive,
    NotUnitary,
    NotUnitTrace,
)

DIM_A = 2
MAX_DIM_B = linalg.MAX_DIM // DIM_A
PRNG_ALGORITHM = "PCG64 (numpy.random.default_rng)"
UNITARY_TOL = 1e-10

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated state of the qubit A and a ``dim_b``-level system B.

    Build through :func:`from_matrix` (or the other constructors here); the
    stored array is marked read-only.
    """

    dim_b: int
    matrix: np.ndarray

    @property
    def dim_a(self):
        return DIM_A

    @property
    def dim(self):
        return DIM_A * self.dim_b

    def reduced(self, keep):
        return linalg.partial_trace(self.matrix, (DIM_A, self.dim_b), keep)

    def purity(self):
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


@dataclass(frozen=True)
class BellDiagonalParams:
    c1: float
    c2: float
    c3: float

    def as_tuple(self):
        return (self.c1, self.c2, self.c3)

    def populations(self):
        """Bell-basis weights for |Phi+>, |Phi->, |Psi+>, |Psi->."""
        c1, c2, c3 = self.as_tuple()
        return np.array([
            1 + c1 - c2 + c3,
            1 - c1 + c2 + c3,
            1 + c1 + c2 - c3,
            1 - c1 - c2 - c3,
        ]) / 4.0


def _wrap(matrix, dim_b):
    m = np.array(matrix, dtype=complex)
    m.setflags(write=False)
    return DensityMatrix(int(dim_b), m)


def from_matrix(raw, dim_b=None):
    """Validate ``raw`` as a density matrix of a qubit and a ``dim_b`` system.

    Raises :class:`NotHermitian`, :class:`NotUnitTrace` or
    :class:`NotPositive` with the measured violation in ``context``.
    """
    m = linalg.as_matrix(raw)
    n = m.shape[0]
    if dim_b is None:
        dim_b = n // DIM_A
    dim_b = int(dim_b)
    if not 2 <= dim_b <= MAX_DIM_B or n != DIM_A * dim_b:
        raise DimensionMismatch(
            f"expected a {DIM_A * dim_b}x{DIM_A * dim_b} matrix with 2 <= dimB <= {MAX_DIM_B}, "
            f"got {n}x{n}", shape=[n, n], dim_b=dim_b)
    violation = linalg.hermiticity_violation(m)
    if violation > linalg.HERMITIAN_TOL:
        raise NotHermitian(f"Hermiticity violated by {violation:.3e}", violation=violation)
    tr = np.trace(m).real
    if abs(tr - 1.0) > linalg.TRACE_TOL:
        raise NotUnitTrace(f"trace is {tr:.12g}, expected 1", trace=float(tr),
                           violation=float(abs(tr - 1.0)))
    m = 0.5 * (m + m.conj().T)
    lowest = float(linalg.hermitian_eigvalsh(m)[0])
    if lowest < -linalg.PSD_TOL:
        raise NotPositive(f"smallest eigenvalue is {lowest:.3e}", min_eigenvalue=lowest,
                          violation=-lowest)
    return _wrap(m, dim_b)


def as_density(rho, dim_b=None):
    """Accept either a :class:`DensityMatrix` or a raw array."""
    if isinstance(rho, DensityMatrix):
        return rho
    return from_matrix(rho, dim_b)


def bell_diagonal_matrix(p):
    c = p.as_tuple() if isinstance(p, BellDiagonalParams) else tuple(p)
    m = np.eye(4, dtype=complex)
    for ck, s in zip(c, PAULIS):
        m = m + ck * np.kron(s, s)
    return m / 4.0


def bell_diagonal(p):
    """The state (I + sum_k c_k sigma_k (x) sigma_k) / 4.

    Parameters outside the Bell-diagonal tetrahedron raise
    :class:`NotPositive`.
    """
    if not isinstance(p, BellDiagonalParams):
        p = BellDiagonalParams(*map(float, p))
    return from_matrix(bell_diagonal_matrix(p), 2)


def in_tetrahedron(p, tol=linalg.PSD_TOL):
    if not isinstance(p, BellDiagonalParams):
        p = BellDiagonalParams(*map(float, p))
    return bool(np.min(p.populations()) >= -tol)


def random_state(dim_b, rank, seed):
    """Normalized ``G G^dagger`` for a seeded complex Ginibre ``G`` of shape (2 dim_b, rank).

    Entries of ``G`` are i.i.d. standard complex Gaussians drawn from
    ``numpy.random.default_rng(seed)`` (PCG64), so a seed pins the state on
    every platform numpy supports.
    """
    dim_b = int(dim_b)
    n = DIM_A * dim_b
    if not 1 <= rank <= n:
        raise InvalidRank(f"rank must be in [1, {n}], got {rank}", rank=rank)
    if not 2 <= dim_b <= MAX_DIM_B:
        raise DimensionMismatch(f"dimB must be in [2, {MAX_DIM_B}]", dim_b=dim_b)
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    m = g @ g.conj().T
    m = m / np.trace(m).real
    return _wrap(0.5 * (m + m.conj().T), dim_b)


def haar_unitary(n, rng):
    """Haar-random ``n x n`` unitary (QR of a Ginibre matrix with phase fix)."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def product_state(rho_a, rho_b):
    rho_b = np.asarray(rho_b, dtype=complex)
    return from_matrix(np.kron(rho_a, rho_b), rho_b.shape[0])


def _check_unitary(u, n, name):
    u = np.asarray(u, dtype=complex)
    if u.shape != (n, n):
        raise DimensionMismatch(f"{name} must be {n}x{n}, got {u.shape}")
    err = float(np.max(np.abs(u @ u.conj().T - np.eye(n))))
    if err > UNITARY_TOL:
        raise NotUnitary(f"{name} is not unitary (max|UU^dagger - I| = {err:.3e})",
                         violation=err)
    return u


def local_unitary(rho, u_a, u_b):
    """Apply ``(u_a (x) u_b) rho (u_a (x) u_b)^dagger``."""
    rho = as_density(rho)
    u = np.kron(_check_unitary(u_a, DIM_A, "uA"), _check_unitary(u_b, rho.dim_b, "uB"))
    out = u @ rho.matrix @ u.conj().T
    return _wrap(0.5 * (out + out.conj().T), rho.dim_b)


def apply_local_channel_b(rho, kraus):
    """``(I (x) Lambda)(rho)`` for a Kraus list acting on B."""
    rho = as_density(rho)
    eye = np.eye(DIM_A)
    out = np.zeros_like(rho.matrix)
    for k in kraus:
        big = np.kron(eye, k)
        out = out + big @ rho.matrix @ big.conj().T
    return _wrap(0.5 * (out + out.conj().T), rho.dim_b)


def random_kraus(dim, n_ops, rng):
    """Kraus operators of a random CPTP map, cut from a random isometry."""
    z = rng.standard_normal((n_ops * dim, dim)) + 1j * rng.standard_normal((n_ops * dim, dim))
    q, _ = np.linalg.qr(z)
    return [q[i * dim:(i + 1) * dim, :] for i in range(n_ops)]


def swap_subsystems(raw, dims):
    """Reorder a ``dims[0] x dims[1]`` operator into ``dims[1] (x) dims[0]``.

    Use it to bring user data with the qubit second into the A-first layout.
    """
    m = linalg.as_matrix(raw)
    d1, d2 = dims
    return m.reshape(d1, d2, d1, d2).transpose(1, 0, 3, 2).reshape(d1 * d2, d1 * d2)


# JSON wire format: {"dimB": d, "matrix": [[[re, im], ...], ...]}

def to_json_dict(rho):
    rho = as_density(rho)
    return {
        "dimB": rho.dim_b,
        "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in rho.matrix],
    }


def dumps(rho, **kwargs):
    # repr() of a Python float is the shortest string that round-trips the double.
    return json.dumps(to_json_dict(rho), **kwargs)


def from_json_dict(data):
    if not isinstance(data, dict) or "matrix" not in data or "dimB" not in data:
        raise ValueError('state JSON needs keys "dimB" and "matrix"')
    try:
        raw = np.array([[complex(float(re), float(im)) for re, im in row]
                        for row in data["matrix"]])
    except (TypeError, ValueError) as exc:
        raise ValueError(f"matrix entries must be [re, im] pairs: {exc}") from exc
    return from_matrix(raw, int(data["dimB"]))


def loads(text):
    return from_json_dict(json.loads(text))


def load(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def save(rho, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(rho))
        fh.write("\n")
