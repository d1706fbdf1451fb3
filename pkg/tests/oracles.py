"""Independent reference implementations used by the tests.

Nothing here imports the package's numerical code paths: every helper is
built from explicit Kronecker products, dense SVDs or scalar math so that
disagreements point at the library rather than at shared code.
"""

import math

import numpy as np

# Frozen scalars, evaluated with mpmath at 30 digits and rounded to double.
SECH_1 = 0.6480542736638853
ALPHA_1 = 0.3452577617116197
BETA_1 = 0.9385078997951389
H2_ALPHA_SQ_1 = 0.5270653410031616
BELL_QCC_X1 = 0.07038914526722292   # (1 - sech 1) * 0.2
BELL_RESIDUAL_X1 = 0.1296108547327771  # sech 1 * 0.2
BELL_QCC_STEP2_X1 = 0.029561634940375985  # (1 - sech 1) sech(1)^2 * 0.2
CHAIN_PARTIAL_X01_N50 = 0.04495099369713198  # (1 - sech(0.1)^51) * 0.2

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def sech(x):
    return 0.0 if math.isinf(x) else 1.0 / math.cosh(x)


def binary_entropy(p):
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -(p * math.log2(p) + (1 - p) * math.log2(1 - p))


def weights(x):
    """Kraus weights from the scalar definition, no clipping at large x."""
    t = math.tanh(x)
    return math.sqrt((1 - t) / 2), math.sqrt((1 + t) / 2)


def charpoly_eigenvalues(h):
    """Eigenvalues of a Hermitian matrix as roots of its characteristic polynomial.

    Coefficients come from the Faddeev-LeVerrier recursion; the roots are
    found by ``numpy.roots`` (companion matrix) and the tiny imaginary parts
    are dropped.
    """
    n = h.shape[0]
    coeffs = [1.0 + 0j]
    m = np.zeros_like(h)
    eye = np.eye(n)
    for k in range(1, n + 1):
        m = h @ m + coeffs[-1] * eye
        coeffs.append(-np.trace(h @ m) / k)
    return np.sort(np.roots(coeffs).real)


def projectors(theta, phi):
    n = np.array([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)])
    p1 = np.outer(n, n.conj())
    return p1, np.eye(2) - p1


def lift(op, dim_b):
    return np.kron(op, np.eye(dim_b))


def svd_trace_norm(m):
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def weak_channel(rho, theta, phi, alphas, betas):
    d = rho.shape[0] // 2
    p1, p2 = projectors(theta, phi)
    out = np.zeros_like(rho)
    for a, b in zip(alphas, betas):
        k = lift(a * p1 + b * p2, d)
        out += k @ rho @ k.conj().T
    return out


def offdiag_part(rho, theta, phi):
    d = rho.shape[0] // 2
    p1, p2 = (lift(p, d) for p in projectors(theta, phi))
    return p1 @ rho @ p2 + p2 @ rho @ p1


def grid_min(fn, n_theta=129, n_phi=128):
    """Brute-force minimum of ``fn(p1, p2)`` over a uniform half-sphere grid.

    ``fn`` receives stacks of lifted projectors ``pi_i (x) I`` and returns one
    value per stack entry.
    """
    best = math.inf
    phis = np.arange(n_phi) * (2 * math.pi / n_phi)
    for th in np.linspace(0.0, math.pi / 2, n_theta):
        n = np.stack([np.full(n_phi, math.cos(th / 2)), np.exp(1j * phis) * math.sin(th / 2)], -1)
        p1 = n[:, :, None] * n[:, None, :].conj()
        p2 = np.eye(2) - p1
        best = min(best, float(np.min(fn(p1, p2))))
    return best


def lift_stack(ops, dim_b):
    k = ops.shape[0]
    eye = np.eye(dim_b)
    big = ops[:, :, None, :, None] * eye[None, None, :, None, :]
    return big.reshape(k, 2 * dim_b, 2 * dim_b)


def grid_tqd(rho, n_theta=129, n_phi=128):
    d = rho.shape[0] // 2

    def fn(p1, p2):
        a, b = lift_stack(p1, d), lift_stack(p2, d)
        off = a @ rho @ b + b @ rho @ a
        return np.linalg.svd(off, compute_uv=False).sum(-1)
    return grid_min(fn, n_theta, n_phi)


def grid_qcc(rho, alphas, betas, n_theta=129, n_phi=128):
    d = rho.shape[0] // 2

    def fn(p1, p2):
        out = np.zeros((p1.shape[0],) + rho.shape, dtype=complex)
        for a, b in zip(alphas, betas):
            k = lift_stack(a * p1 + b * p2, d)
            out += k @ rho @ k.conj().transpose(0, 2, 1)
        return np.linalg.svd(rho - out, compute_uv=False).sum(-1)
    return grid_min(fn, n_theta, n_phi)


def bell_basis_populations(c):
    """Weights of a Bell-diagonal state on Phi+, Phi-, Psi+, Psi- via explicit projections."""
    c1, c2, c3 = c
    rho = (np.eye(4) + c1 * np.kron(SX, SX) + c2 * np.kron(SY, SY) + c3 * np.kron(SZ, SZ)) / 4
    s = 1 / math.sqrt(2)
    bell = [np.array([s, 0, 0, s]), np.array([s, 0, 0, -s]),
            np.array([0, s, s, 0]), np.array([0, s, -s, 0])]
    return np.array([float(np.real(v.conj() @ rho @ v)) for v in bell])


def random_hermitian(n, rng):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (g + g.conj().T) / 2


def random_unitary(n, rng):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density(n, rng):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    m = g @ g.conj().T
    return m / np.trace(m).real
