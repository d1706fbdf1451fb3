"""Closed forms for Bell-diagonal states ``(I + sum_k c_k sigma_k (x) sigma_k) / 4``.

Measuring A along Pauli axis ``k`` leaves an off-diagonal part whose trace
norm is the larger of the two remaining ``|c_j|``, so the discord is the
middle value of ``|c_1|, |c_2|, |c_3|`` and the best axis is the one with
the largest ``|c_k|``.  These formulas serve as the analytic reference for
the numerical optimizers.
"""

import numpy as np

from .errors import NotPositive
from .measurement import overlap_factor
from .states import (
    PAULI_Z,
    BellDiagonalParams,
    _wrap,
    in_tetrahedron,
)


def _params(p):
    if not isinstance(p, BellDiagonalParams):
        p = BellDiagonalParams(*map(float, p))
    if not in_tetrahedron(p):
        lowest = float(np.min(p.populations()))
        raise NotPositive(f"coefficients {p.as_tuple()} lie outside the Bell-diagonal "
                          f"tetrahedron (smallest eigenvalue {lowest:.3e})",
                          min_eigenvalue=lowest, violation=-lowest)
    return p


def bell_tqd(p):
    p = _params(p)
    return float(np.sort(np.abs(p.as_tuple()))[1])


def bell_qcc(p, x):
    return (1.0 - overlap_factor(x)) * bell_tqd(p)


def measurement_axis(p):
    """Pauli axis (0, 1 or 2) of the largest ``|c_k|``; first one wins ties."""
    p = _params(p)
    return int(np.argmax(np.abs(p.as_tuple())))


def bell_post_weak(p, x):
    """Coefficients after the optimal weak measurement of strength ``x``.

    The weak measurement is taken along the axis of the largest ``|c_k|``;
    that coefficient survives and the other two shrink by ``sech x``.  For
    ``|c_3|`` largest this is ``(sech x c_1, sech x c_2, c_3)``.
    """
    p = _params(p)
    s = overlap_factor(x)
    keep = measurement_axis(p)
    c = [ck if k == keep else s * ck for k, ck in enumerate(p.as_tuple())]
    return BellDiagonalParams(*c)


def bell_post_projective(p):
    """The z-basis dephased state ``|0><0| (x) (I + c3 Z)/4 + |1><1| (x) (I - c3 Z)/4``."""
    p = _params(p)
    eye = np.eye(2)
    m = (np.kron(np.diag([1.0, 0.0]), eye + p.c3 * PAULI_Z)
         + np.kron(np.diag([0.0, 1.0]), eye - p.c3 * PAULI_Z)) / 4.0
    return _wrap(m, 2)


def bell_chain_tqd(p, x, n):
    """Discord after ``n`` optimal weak measurements: ``sech(x)**n * bell_tqd(p)``."""
    q = _params(p)
    for _ in range(n):
        q = bell_post_weak(q, x)
    return bell_tqd(q)
