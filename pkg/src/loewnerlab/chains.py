"""Palindromic power-chain expressions with exact exponent bookkeeping.

The two chain families handled here are alternating two-sided products of
fractional powers of a pair (A, B) of positive definite matrices:

* the n-factor chain
  ``B^(s/n) (A^((s-t)/n) B^(2t/n))^(n-1) A^((s-t)/n) B^(s/n)``,
  raised to ``n / D`` with ``D = (n+2)s + (n-2)t``;
* the five-factor chain
  ``B^(s/p) A^((s-t)/p) B^(2t/p) A^((s-t)/p) B^(s/p)``
  raised to ``p / (4s)``.

Both collapse to ``B`` when A == B.  Parameters are kept in exact rational
form whenever they are supplied as rationals; all matrix work happens in
float64.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational, Real

from .errors import BadParameters, DimensionMismatch
from .matcore import DEFAULT_TOL, SymMatrix, ToleranceModel, mat_pow, spectral_powers


@dataclass(frozen=True)
class GrandN:
    """n-factor chain variant; the short exponent appears n times."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 2:
            raise BadParameters(f"n must be an integer >= 2, got {self.n!r}")


@dataclass(frozen=True)
class PVersion:
    """Five-factor chain variant with free denominator exponent p > 0."""

    p: Real

    def __post_init__(self):
        if not isinstance(self.p, Real) or not self.p > 0:
            raise BadParameters(f"p must be a real > 0, got {self.p!r}")


@dataclass(frozen=True)
class ChainParams:
    """Chain parameters (s, t) plus the variant, with t > s > 0 enforced.

    ``s`` / ``t`` (and ``p``) may be ints, Fractions or floats.  When every
    parameter is rational, derived quantities stay exact rationals, which is
    what makes boundary cases like ``D == n`` decidable without an epsilon.
    """

    s: Real
    t: Real
    variant: GrandN | PVersion

    def __post_init__(self):
        if not isinstance(self.variant, (GrandN, PVersion)):
            raise BadParameters(f"unknown variant {self.variant!r}")
        if not (isinstance(self.s, Real) and isinstance(self.t, Real)):
            raise BadParameters("s and t must be real numbers")
        if not self.t > self.s > 0:
            raise BadParameters(f"need t > s > 0, got s={self.s}, t={self.t}")

    @property
    def is_exact(self) -> bool:
        """True when every parameter is rational (exact comparisons apply)."""
        scalars = [self.s, self.t]
        if isinstance(self.variant, PVersion):
            scalars.append(self.variant.p)
        return all(isinstance(x, Rational) for x in scalars)

    @property
    def power_denominator(self):
        """D in the outer exponent: (n+2)s + (n-2)t, or 4s for the p-variant."""
        if isinstance(self.variant, GrandN):
            n = self.variant.n
            return (n + 2) * self.s + (n - 2) * self.t
        return 4 * self.s


def exponent_total(params: ChainParams):
    """Collapsed exponent of the inner chain: D/n, or 4s/p.

    This is the power of B the chain reduces to at A == B.  It exceeds 1
    only under the first theorem region; the raw value is returned either
    way.  Exact (Fraction) when the parameters are rational.
    """
    if isinstance(params.variant, GrandN):
        n = params.variant.n
        if params.is_exact:
            return Fraction(params.power_denominator, 1) / n
        return params.power_denominator / n
    p = params.variant.p
    if params.is_exact:
        return Fraction(4 * params.s, 1) / Fraction(p, 1)
    return 4 * params.s / p


def lhs_scale_exponent(params: ChainParams):
    """Exponent g in ``lhs(A, c*B) == c**g * lhs(A, B)``.

    Equals ``(2s + 2(n-1)t) / D`` for the n-variant and ``(s+t) / (2s)``
    for the p-variant; always > 1 since t > s.  Exact when the parameters
    are rational.
    """
    if isinstance(params.variant, GrandN):
        n = params.variant.n
        num = 2 * params.s + 2 * (n - 1) * params.t
        if params.is_exact:
            return Fraction(num, 1) / Fraction(params.power_denominator, 1)
        return num / params.power_denominator
    if params.is_exact:
        return Fraction(params.s + params.t, 1) / Fraction(2 * params.s, 1)
    return (params.s + params.t) / (2 * params.s)


def _require(params: ChainParams, variant_type, op_name: str) -> None:
    if not isinstance(params.variant, variant_type):
        raise BadParameters(
            f"{op_name} needs a {variant_type.__name__} variant, "
            f"got {type(params.variant).__name__}"
        )


def _check_dims(a: SymMatrix, b: SymMatrix) -> None:
    if a.dim != b.dim:
        raise DimensionMismatch(f"dims differ: {a.dim} vs {b.dim}")


def grand_chain(
    a: SymMatrix, b: SymMatrix, params: ChainParams, tol: ToleranceModel = DEFAULT_TOL
) -> SymMatrix:
    """Inner n-factor chain (before the outer power), multiplied left-to-right.

    The product is mathematically symmetric and positive definite; the
    result is re-symmetrized to keep floating-point drift out of the type.
    Each distinct power of A and B comes from a single decomposition.
    """
    _require(params, GrandN, "grand_chain")
    _check_dims(a, b)
    n = params.variant.n
    k = float(n)
    s = float(params.s)
    t = float(params.t)
    b_s, b_2t = (m.data for m in spectral_powers(b, [s / k, 2.0 * t / k], tol))
    (a_x,) = (m.data for m in spectral_powers(a, [(s - t) / k], tol))
    prod = b_s
    for _ in range(n - 1):
        prod = prod @ a_x
        prod = prod @ b_2t
    prod = prod @ a_x
    prod = prod @ b_s
    return SymMatrix(prod)


def _outer_exponent_grand(params: ChainParams) -> float:
    n = params.variant.n
    s = float(params.s)
    t = float(params.t)
    return float(n) / ((n + 2.0) * s + (n - 2.0) * t)


def grand_lhs(
    a: SymMatrix, b: SymMatrix, params: ChainParams, tol: ToleranceModel = DEFAULT_TOL
) -> SymMatrix:
    """n-variant left-hand side: the inner chain raised to ``n / D``."""
    chain = grand_chain(a, b, params, tol)
    return mat_pow(chain, _outer_exponent_grand(params), tol)


def _p_chain(
    a: SymMatrix, b: SymMatrix, params: ChainParams, tol: ToleranceModel = DEFAULT_TOL
) -> SymMatrix:
    _require(params, PVersion, "p_lhs")
    _check_dims(a, b)
    k = float(params.variant.p)
    s = float(params.s)
    t = float(params.t)
    b_s, b_2t = (m.data for m in spectral_powers(b, [s / k, 2.0 * t / k], tol))
    (a_x,) = (m.data for m in spectral_powers(a, [(s - t) / k], tol))
    prod = b_s
    prod = prod @ a_x
    prod = prod @ b_2t
    prod = prod @ a_x
    prod = prod @ b_s
    return SymMatrix(prod)


def p_lhs(
    a: SymMatrix, b: SymMatrix, params: ChainParams, tol: ToleranceModel = DEFAULT_TOL
) -> SymMatrix:
    """Five-factor left-hand side raised to ``p / (4s)``.

    At p == 2 this reproduces the n == 2 chain bit for bit: the factor
    sequence and every exponent coincide.
    """
    chain = _p_chain(a, b, params, tol)
    k = float(params.variant.p)
    return mat_pow(chain, k / (4.0 * float(params.s)), tol)


def inner_chain(
    a: SymMatrix, b: SymMatrix, params: ChainParams, tol: ToleranceModel = DEFAULT_TOL
) -> SymMatrix:
    """The chain product before the outer power, for either variant.

    Raising it to ``1 / exponent_total(params)`` gives the left-hand side.
    """
    if isinstance(params.variant, GrandN):
        return grand_chain(a, b, params, tol)
    return _p_chain(a, b, params, tol)


def chain_lhs(
    a: SymMatrix, b: SymMatrix, params: ChainParams, tol: ToleranceModel = DEFAULT_TOL
) -> SymMatrix:
    """Variant dispatch: grand_lhs for GrandN, p_lhs for PVersion."""
    if isinstance(params.variant, GrandN):
        return grand_lhs(a, b, params, tol)
    return p_lhs(a, b, params, tol)


def scalar_lhs(a_val, b_val, params: ChainParams):
    """Entrywise collapse of the left-hand side for commuting pairs.

    For simultaneously diagonal A, B the whole chain reduces per eigenvalue
    pair (a, b) to ``b**g * a**(g - 1 ... )``; concretely
    ``b**((2s + 2(n-1)t)/D) * a**(n(s-t)/D)`` for the n-variant and
    ``b**((s+t)/(2s)) * a**((s-t)/(2s))`` for the p-variant.  Accepts
    scalars or numpy arrays.
    """
    s = float(params.s)
    t = float(params.t)
    if isinstance(params.variant, GrandN):
        n = params.variant.n
        d = (n + 2.0) * s + (n - 2.0) * t
        return b_val ** ((2.0 * s + 2.0 * (n - 1) * t) / d) * a_val ** (
            n * (s - t) / d
        )
    return b_val ** ((s + t) / (2.0 * s)) * a_val ** ((s - t) / (2.0 * s))
