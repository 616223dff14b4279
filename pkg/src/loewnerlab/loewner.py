"""Löwner-order and chaotic-order predicates with explicit margins.

A comparison never returns a bare boolean: it returns the scale-normalized
minimum eigenvalue of the difference (the *margin*) together with the
verdict, so callers can distinguish "fails by rounding" from "fails for
real".
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BadExponent, DimensionMismatch
from .matcore import DEFAULT_TOL, SymMatrix, ToleranceModel, mat_log, mat_pow, min_eigenvalue


@dataclass(frozen=True)
class OrderVerdict:
    """Outcome of one Löwner comparison.

    ``margin`` is ``lambda_min(A - B) / max(1, ||A||_F, ||B||_F)``; the
    verdict holds when the margin is >= ``-tol.rel`` for the tolerance used
    in the call.
    """

    holds: bool
    margin: float


def _scale(a: SymMatrix, b: SymMatrix) -> float:
    return max(1.0, a.frobenius(), b.frobenius())


def loewner_geq(
    a: SymMatrix, b: SymMatrix, tol: ToleranceModel = DEFAULT_TOL
) -> OrderVerdict:
    """Verdict for ``a >= b`` in the Löwner order (a - b positive semidef).

    Reflexive by construction: ``loewner_geq(a, a)`` holds with margin 0.
    The one-sided slack ``margin >= -tol.rel`` keeps exact-equality cases
    from failing on rounding noise.
    """
    if a.dim != b.dim:
        raise DimensionMismatch(f"dims differ: {a.dim} vs {b.dim}")
    margin = min_eigenvalue(SymMatrix(a.data - b.data)) / _scale(a, b)
    return OrderVerdict(holds=margin >= -tol.rel, margin=margin)


def chaotic_geq(
    a: SymMatrix, b: SymMatrix, tol: ToleranceModel = DEFAULT_TOL
) -> OrderVerdict:
    """Verdict for ``log a >= log b`` (chaotic order); needs both PD."""
    return loewner_geq(mat_log(a, tol), mat_log(b, tol), tol)


def loewner_heinz_check(
    a: SymMatrix, b: SymMatrix, alpha: float, tol: ToleranceModel = DEFAULT_TOL
) -> OrderVerdict:
    """Verdict for ``a**alpha >= b**alpha`` with 0 <= alpha <= 1.

    When ``a >= b > 0`` this must hold (power maps with exponent in [0, 1]
    preserve the order); a failing verdict under that precondition flags a
    numerical bug and is reported as the verdict, never as an exception.
    """
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise BadExponent(f"alpha must lie in [0, 1], got {alpha}")
    return loewner_geq(mat_pow(a, alpha, tol), mat_pow(b, alpha, tol), tol)
