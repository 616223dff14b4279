"""Symmetric matrix type, Jacobi eigendecomposition, spectral calculus.

Everything downstream (order predicates, power chains, theorem checks) is
built on the three primitives here: :func:`eigh`, :func:`mat_pow` and
:func:`mat_log`.  All outputs are re-symmetrized so rounding can never leak
an asymmetric matrix into the rest of the pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import NotPositiveDefinite

# Sweep budget and convergence target of the cyclic Jacobi eigensolver.
# 100 sweeps is far beyond what dims <= 64 ever need; hitting it signals
# pathological input and raises NonConvergence.
DEFAULT_MAX_SWEEPS = 100
OFF_DIAG_FACTOR = 1e-14


@dataclass(frozen=True)
class ToleranceModel:
    """Relative/absolute tolerance policy shared by every order comparison.

    ``rel`` is the slack on scale-normalized margins, ``abs`` the positivity
    gate on eigenvalues (an eigenvalue <= ``abs`` counts as not positive).
    """

    rel: float = 1e-8
    abs: float = 1e-12

    def __post_init__(self):
        for name in ("rel", "abs"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise ValueError(f"ToleranceModel.{name} must be finite and >= 0")


DEFAULT_TOL = ToleranceModel()


@dataclass(frozen=True)
class SymMatrix:
    """Dense real symmetric matrix.

    Construction symmetrizes: the stored entry (i, j) is
    ``(m[i, j] + m[j, i]) / 2``, so ``data`` is exactly symmetric.  The
    array is frozen (read-only) after construction; instances are safe to
    share across threads.
    """

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {arr.shape}")
        if arr.shape[0] < 1:
            raise ValueError("matrix dimension must be >= 1")
        if not np.all(np.isfinite(arr)):
            raise ValueError("matrix entries must be finite")
        sym = (arr + arr.T) / 2.0
        sym.flags.writeable = False
        object.__setattr__(self, "data", sym)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @property
    def entries(self) -> np.ndarray:
        """Row-major flat view of the entries (read-only)."""
        return self.data.reshape(-1)

    def frobenius(self) -> float:
        return float(np.linalg.norm(self.data))

    @staticmethod
    def identity(dim: int) -> "SymMatrix":
        return SymMatrix(np.eye(dim))

    @staticmethod
    def diagonal(values) -> "SymMatrix":
        return SymMatrix(np.diag(np.asarray(values, dtype=np.float64)))

    @staticmethod
    def from_entries(dim: int, entries) -> "SymMatrix":
        flat = np.asarray(entries, dtype=np.float64)
        if flat.size != dim * dim:
            raise ValueError(f"expected {dim * dim} entries, got {flat.size}")
        return SymMatrix(flat.reshape(dim, dim))


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending eigenvalues with the matching orthonormal column basis."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        self.eigenvalues.flags.writeable = False
        self.eigenvectors.flags.writeable = False


def eigh(m: SymMatrix, max_sweeps: int = DEFAULT_MAX_SWEEPS) -> EigenDecomposition:
    """Eigendecomposition by cyclic Jacobi rotations.

    Parameters
    ----------
    m : SymMatrix
        Matrix to diagonalize.
    max_sweeps : int
        Sweep budget; exceeded budget raises ``NonConvergence``.

    Returns
    -------
    EigenDecomposition
        Eigenvalues ascending, eigenvector column k paired with eigenvalue k,
        satisfying ``U diag(w) U.T == m`` to high relative accuracy.

    Notes
    -----
    Deterministic: identical input bits produce identical output bits for a
    fixed backend.  Convergence target is an off-diagonal Frobenius norm of
    ``1e-14 * ||m||_F``.
    """
    off_tol = OFF_DIAG_FACTOR * float(np.linalg.norm(m.data))
    w, u, _ = kernels.diagonalize(m.data, max_sweeps, off_tol)
    return EigenDecomposition(w, u)


def _is_nonneg_int(r: float) -> bool:
    return r >= 0.0 and r == np.floor(r)


def _apply_spectrum(dec: EigenDecomposition, values: np.ndarray) -> SymMatrix:
    return SymMatrix((dec.eigenvectors * values) @ dec.eigenvectors.T)


def mat_pow(a: SymMatrix, r, tol: ToleranceModel = DEFAULT_TOL) -> SymMatrix:
    """Real matrix power through the spectral decomposition.

    ``r`` may be any real for positive definite ``a``; nonnegative integer
    powers are also defined for indefinite matrices.  ``mat_pow(a, 0)`` is
    the identity and ``mat_pow(a, 1)`` is ``a`` itself, exactly.

    Raises
    ------
    NotPositiveDefinite
        If ``r`` is fractional or negative and any eigenvalue of ``a`` is
        <= ``tol.abs``.
    """
    rr = float(r)
    if rr == 0.0:
        return SymMatrix.identity(a.dim)
    if rr == 1.0:
        return a
    dec = eigh(a)
    if not _is_nonneg_int(rr) and dec.eigenvalues[0] <= tol.abs:
        raise NotPositiveDefinite(
            f"matrix power {rr} needs a positive definite input "
            f"(min eigenvalue {dec.eigenvalues[0]:.3e} <= {tol.abs:.3e})"
        )
    return _apply_spectrum(dec, dec.eigenvalues**rr)


def mat_log(a: SymMatrix, tol: ToleranceModel = DEFAULT_TOL) -> SymMatrix:
    """Matrix logarithm of a positive definite matrix (spectral map)."""
    dec = eigh(a)
    if dec.eigenvalues[0] <= tol.abs:
        raise NotPositiveDefinite(
            f"matrix logarithm needs a positive definite input "
            f"(min eigenvalue {dec.eigenvalues[0]:.3e} <= {tol.abs:.3e})"
        )
    return _apply_spectrum(dec, np.log(dec.eigenvalues))


def min_eigenvalue(m: SymMatrix) -> float:
    """Smallest eigenvalue; the primitive behind every order margin."""
    return float(eigh(m).eigenvalues[0])


def spectral_powers(
    m: SymMatrix, exponents, tol: ToleranceModel = DEFAULT_TOL
) -> list[SymMatrix]:
    """Several real powers of one positive definite matrix, single eigh.

    Equivalent to ``[mat_pow(m, e, tol) for e in exponents]`` but the
    decomposition is computed once, which is both faster and keeps all the
    powers spectrally consistent with each other.
    """
    dec = eigh(m)
    if dec.eigenvalues[0] <= tol.abs:
        raise NotPositiveDefinite(
            f"matrix powers {list(exponents)} need a positive definite input "
            f"(min eigenvalue {dec.eigenvalues[0]:.3e} <= {tol.abs:.3e})"
        )
    return [_apply_spectrum(dec, dec.eigenvalues ** float(e)) for e in exponents]
