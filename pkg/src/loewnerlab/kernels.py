"""Cyclic Jacobi diagonalization kernels.

One algorithm, two interchangeable implementations: a scalar-loop kernel
compiled with numba, and a vectorized pure-numpy twin used when numba is
unavailable or disabled (see :mod:`loewnerlab.backend`).  Both sweep the
pivots (p, q), p < q, in row-cyclic order and stop once the off-diagonal
Frobenius norm drops below ``off_tol``.

Both kernels mutate ``a`` toward diagonal form and accumulate the rotations
into ``v`` so that, at convergence, ``a_input = v @ diag(a) @ v.T``.
"""

import numpy as np

from . import backend
from .errors import NonConvergence


def _jacobi_scalar(a, v, max_sweeps, off_tol):
    # Scalar-loop twin; compiled with numba below when available.
    n = a.shape[0]
    for sweep in range(max_sweeps):
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += 2.0 * a[i, j] * a[i, j]
        if off**0.5 <= off_tol:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                sgn = 1.0 if theta >= 0.0 else -1.0
                t = sgn / (abs(theta) + (theta * theta + 1.0) ** 0.5)
                c = 1.0 / (t * t + 1.0) ** 0.5
                s = t * c
                for k in range(n):
                    if k != p and k != q:
                        akp = a[k, p]
                        akq = a[k, q]
                        a[k, p] = c * akp - s * akq
                        a[p, k] = a[k, p]
                        a[k, q] = s * akp + c * akq
                        a[q, k] = a[k, q]
                app = a[p, p]
                aqq = a[q, q]
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq
    off = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            off += 2.0 * a[i, j] * a[i, j]
    if off**0.5 <= off_tol:
        return max_sweeps
    return -1


if backend.HAVE_NUMBA:
    from numba import njit

    _jacobi_numba = njit(cache=True, nogil=True)(_jacobi_scalar)
else:  # pragma: no cover - exercised only without numba installed
    _jacobi_numba = None


def _off_norm(a):
    off2 = float(np.sum(np.square(a)) - np.sum(np.square(np.diagonal(a))))
    return max(off2, 0.0) ** 0.5


def _jacobi_numpy(a, v, max_sweeps, off_tol):
    """Vectorized twin: rotations applied as column then row updates."""
    n = a.shape[0]
    for sweep in range(max_sweeps):
        if _off_norm(a) <= off_tol:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                sgn = 1.0 if theta >= 0.0 else -1.0
                t = sgn / (abs(theta) + (theta * theta + 1.0) ** 0.5)
                c = 1.0 / (t * t + 1.0) ** 0.5
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                # the rotation annihilates this pair in exact arithmetic
                a[p, q] = 0.0
                a[q, p] = 0.0
                col_p = v[:, p].copy()
                col_q = v[:, q].copy()
                v[:, p] = c * col_p - s * col_q
                v[:, q] = s * col_p + c * col_q
    if _off_norm(a) <= off_tol:
        return max_sweeps
    return -1


def diagonalize(m, max_sweeps, off_tol):
    """Diagonalize a symmetric matrix; return (eigenvalues, vectors, sweeps).

    Eigenvalues come back ascending with eigenvector columns reordered to
    match.  Raises :class:`NonConvergence` when the sweep budget runs out
    before the off-diagonal norm reaches ``off_tol``.
    """
    a = np.array(m, dtype=np.float64, order="C", copy=True)
    n = a.shape[0]
    v = np.eye(n)
    if backend.active_backend() == "numba":
        sweeps = _jacobi_numba(a, v, max_sweeps, off_tol)
    else:
        sweeps = _jacobi_numpy(a, v, max_sweeps, off_tol)
    if sweeps < 0:
        raise NonConvergence(
            f"off-diagonal norm did not reach {off_tol:.3e} "
            f"within {max_sweeps} Jacobi sweeps (dim={n})"
        )
    w = np.diagonal(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], np.ascontiguousarray(v[:, order]), int(sweeps)
