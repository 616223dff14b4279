"""Seeded samplers for hypothesis-satisfying pairs and counterexample hunts.

Three strategies:

* ``COMMUTING`` -- shared random eigenbasis, eigenvalue pairs accepted
  against the exact scalar collapse of the hypothesis; gives pairs with a
  per-eigenvalue oracle.
* ``SCALED_RANDOM`` -- genuinely non-commuting pairs made hypothesis-valid
  by scaling B up until the chain left-hand side provably dominates it
  (the lhs grows like ``c**(1+delta)`` with ``delta > 0`` while B grows
  like ``c``, so a large enough ``c`` always wins).
* ``REJECTION_RANDOM`` -- raw draws with no guarantee; practical only for
  hunts and oracle cross-checks.

All randomness flows through counter-based Philox streams keyed by
(seed, stream index), so any attempt can be recomputed independently and
results never depend on scheduling.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from . import backend
from .chains import ChainParams, exponent_total, inner_chain, lhs_scale_exponent, scalar_lhs
from .errors import (
    BadParameters,
    BudgetExhausted,
    InvalidTarget,
    NonConvergence,
    NotPositiveDefinite,
    NumericalFailure,
)
from .loewner import loewner_geq
from .matcore import DEFAULT_TOL, SymMatrix, ToleranceModel, eigh, mat_log
from .theorems import Region, check_hypothesis, classify_region

# Safety factor on the sufficient scale; keeps the constructed hypothesis
# margin strictly positive instead of exactly zero.
SCALE_SAFETY = 1e-6

# log-magnitude cap for any eigenvalue a sampled pair may force downstream
# (float64 overflows just above e**709).
_LN_SCALE_CAP = 600.0

_SAMPLING_ERRORS = (BudgetExhausted, NumericalFailure, NotPositiveDefinite, NonConvergence)


class Strategy(Enum):
    COMMUTING = "commuting"
    SCALED_RANDOM = "scaled"
    REJECTION_RANDOM = "rejection"


class Target(Enum):
    """Which concluded order a hunt tries to break."""

    CHAOTIC = "chaotic"
    OPERATOR = "operator"


@dataclass(frozen=True)
class SampleSpec:
    """One fully reproducible sampling task."""

    dim: int
    params: ChainParams
    strategy: Strategy
    seed: int = 0
    budget: int = 1000
    spread: float = 10.0

    def __post_init__(self):
        if not isinstance(self.dim, int) or not 1 <= self.dim <= 16:
            raise BadParameters(f"dim must be an integer in [1, 16], got {self.dim!r}")
        if not isinstance(self.strategy, Strategy):
            raise BadParameters(f"unknown strategy {self.strategy!r}")
        if not isinstance(self.budget, int) or self.budget < 1:
            raise BadParameters(f"budget must be an integer >= 1, got {self.budget!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise BadParameters(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if not (isinstance(self.spread, (int, float)) and math.isfinite(self.spread) and self.spread > 0):
            raise BadParameters(f"spread must be a finite real > 0, got {self.spread!r}")


@dataclass(frozen=True)
class HuntResult:
    """Outcome of a counterexample hunt.

    ``violation_margin`` is the offending conclusion margin when ``found``;
    otherwise the smallest conclusion margin observed across all evaluated
    hypothesis pairs (NaN when no pair satisfied the hypothesis at all).
    """

    found: bool
    pair: tuple[SymMatrix, SymMatrix] | None
    violation_margin: float
    attempts: int


def derive_seed(seed: int, *key: int) -> int:
    """Mix (seed, key) into a fresh 64-bit seed; stable across processes."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, np.uint64)[0])


def stream(seed: int, *key: int) -> np.random.Generator:
    """Counter-based Philox stream for the given (seed, stream index)."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def random_orthogonal(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish orthogonal matrix: QR of a Gaussian draw, signs fixed."""
    g = rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    return q * np.where(np.diagonal(r) < 0.0, -1.0, 1.0)


def random_pd(dim: int, rng: np.random.Generator, spread: float) -> SymMatrix:
    """Random positive definite matrix with log-uniform spectrum.

    Eigenvalues are drawn log-uniformly from [1/spread, spread] and planted
    on a random orthogonal basis; ``spread == 1`` collapses to the identity.
    Deterministic given the stream state.
    """
    half = abs(math.log(spread))
    vals = np.exp(rng.uniform(-half, half, size=dim))
    q = random_orthogonal(dim, rng)
    return SymMatrix((q * vals) @ q.T)


def sample_commuting_pair(spec: SampleSpec) -> tuple[SymMatrix, SymMatrix]:
    """Hypothesis pair on a shared eigenbasis.

    Each eigenvalue pair (a_i, b_i) is redrawn until the scalar collapse of
    the hypothesis accepts it, so the matrix pair satisfies the hypothesis
    exactly up to eigensolver accuracy.
    """
    if spec.strategy is not Strategy.COMMUTING:
        raise BadParameters("sample_commuting_pair needs strategy COMMUTING")
    rng = stream(spec.seed)
    half = abs(math.log(spec.spread))
    a_vals = np.empty(spec.dim)
    b_vals = np.empty(spec.dim)
    for i in range(spec.dim):
        for _ in range(spec.budget):
            cand_a, cand_b = np.exp(rng.uniform(-half, half, size=2))
            if scalar_lhs(cand_a, cand_b, spec.params) >= cand_b:
                a_vals[i] = cand_a
                b_vals[i] = cand_b
                break
        else:
            raise BudgetExhausted(
                f"no accepted eigenvalue pair within {spec.budget} draws"
            )
    q = random_orthogonal(spec.dim, rng)
    return SymMatrix((q * a_vals) @ q.T), SymMatrix((q * b_vals) @ q.T)


def scaled_scale_factor(
    a: SymMatrix, b0: SymMatrix, params: ChainParams, tol: ToleranceModel = DEFAULT_TOL
) -> float:
    """Sufficient B-scale: ``(max_eig(B0) / min_eig(lhs(A, B0)))**(1/delta)``
    times the safety factor.  Scaling B0 by any c at least this large makes
    the hypothesis hold, because the lhs gains an extra factor ``c**delta``.
    """
    lhs_min, _, b0_max = _scale_plan(a, b0, params, tol)[:3]
    delta = float(lhs_scale_exponent(params)) - 1.0
    return math.exp((math.log(b0_max) - math.log(lhs_min)) / delta + math.log1p(SCALE_SAFETY))


def _scale_plan(a, b0, params, tol):
    chain0 = inner_chain(a, b0, params, tol)
    w_chain = eigh(chain0).eigenvalues
    if w_chain[0] <= 0.0:
        raise NumericalFailure(
            "inner chain lost positive definiteness for positive definite inputs"
        )
    l_total = float(exponent_total(params))
    lhs_min = w_chain[0] ** (1.0 / l_total)
    w_b0 = eigh(b0).eigenvalues
    return lhs_min, l_total, w_b0[-1], w_b0[0], w_chain


def sample_scaled_pair(
    spec: SampleSpec, tol: ToleranceModel = DEFAULT_TOL
) -> tuple[SymMatrix, SymMatrix]:
    """Non-commuting hypothesis pair via the sufficient-scale construction.

    Draws random PD (A, B0), computes the sufficient scale c, and returns
    the pair jointly rescaled by a factor g chosen so the chain spectrum is
    centered near 1.  The joint rescale is exact for the hypothesis (the
    lhs is 1-homogeneous in the pair, so the verdict is unchanged) and
    keeps extreme c values from pushing eigenvalues past the positivity
    gate or the float64 range; parameter tuples too extreme even for that
    raise NumericalFailure.
    """
    if spec.strategy is not Strategy.SCALED_RANDOM:
        raise BadParameters("sample_scaled_pair needs strategy SCALED_RANDOM")
    rng = stream(spec.seed)
    a = random_pd(spec.dim, rng, spec.spread)
    b0 = random_pd(spec.dim, rng, spec.spread)
    lhs_min, l_total, b0_max, b0_min, w_chain = _scale_plan(a, b0, spec.params, tol)
    delta = float(lhs_scale_exponent(spec.params)) - 1.0
    ln_c = (math.log(b0_max) - math.log(lhs_min)) / delta + math.log1p(SCALE_SAFETY)
    beta_b = (1.0 + delta) * l_total
    ln_lo, ln_hi = math.log(w_chain[0]), math.log(w_chain[-1])
    center = 0.5 * (ln_lo + ln_hi)
    half = 0.5 * (ln_hi - ln_lo)
    ln_g = -(beta_b * ln_c + center) / l_total
    gate = math.log(10.0 * tol.abs) if tol.abs > 0 else -_LN_SCALE_CAP
    w_a = eigh(a).eigenvalues
    bounds_ok = (
        -half > gate
        and half < _LN_SCALE_CAP
        and ln_g + math.log(w_a[0]) > gate
        and ln_g + math.log(w_a[-1]) < _LN_SCALE_CAP
        and ln_g + ln_c + math.log(b0_min) > gate
        and ln_g + ln_c + math.log(b0_max) < _LN_SCALE_CAP
    )
    if not bounds_ok:
        raise NumericalFailure(
            "scaled construction needs eigenvalue magnitudes outside the "
            "float64-safe window for these parameters"
        )
    g = math.exp(ln_g)
    cb = math.exp(ln_g + ln_c)
    return SymMatrix(g * a.data), SymMatrix(cb * b0.data)


def candidate_pair(
    spec: SampleSpec, tol: ToleranceModel = DEFAULT_TOL
) -> tuple[SymMatrix, SymMatrix]:
    """Strategy dispatch for one candidate draw.

    COMMUTING and SCALED_RANDOM construct hypothesis pairs; REJECTION_RANDOM
    draws a raw PD pair with no guarantee (callers filter).
    """
    if spec.strategy is Strategy.COMMUTING:
        return sample_commuting_pair(spec)
    if spec.strategy is Strategy.SCALED_RANDOM:
        return sample_scaled_pair(spec, tol)
    rng = stream(spec.seed)
    return random_pd(spec.dim, rng, spec.spread), random_pd(spec.dim, rng, spec.spread)


def _conclusion_margin(a, b, target, tol):
    if target is Target.CHAOTIC:
        return loewner_geq(mat_log(b, tol), mat_log(a, tol), tol).margin
    return loewner_geq(b, a, tol).margin


def hunt_counterexample(
    spec: SampleSpec, target: Target, tol: ToleranceModel = DEFAULT_TOL
) -> HuntResult:
    """Search for a hypothesis pair whose targeted conclusion fails.

    Only legal outside proven territory: parameters classifying to no
    region, or the operator-order target when the gap condition is absent.
    Asking to hunt a proven conclusion raises InvalidTarget (any hit there
    could only be a numerical bug; the theorem suites cover that ground).

    Attempts derive independent streams from (seed, index) and may be
    evaluated in parallel (LOEWNER_LAB_THREADS); the first find with the
    lowest attempt index wins, so results are scheduling-independent.
    A found pair is re-verified with fresh computations before returning.
    """
    region = classify_region(spec.params)
    if region.region is not Region.NONE:
        if target is Target.CHAOTIC:
            raise InvalidTarget(
                f"log-order conclusion is proven for region {region.region.value}; "
                "a hunt there can only surface numerical bugs"
            )
        if region.operator_order_condition:
            raise InvalidTarget(
                f"operator-order conclusion is proven for region {region.region.value} "
                "with the gap condition; hunt is not legal"
            )

    threshold = -10.0 * tol.rel

    def attempt(index: int):
        sub = replace(spec, seed=derive_seed(spec.seed, index))
        try:
            a, b = candidate_pair(sub, tol)
            hyp = check_hypothesis(a, b, spec.params, tol)
            if not hyp.holds:
                return None
            return a, b, _conclusion_margin(a, b, target, tol)
        except _SAMPLING_ERRORS:
            return None

    def confirm(index: int, a, b, margin):
        hyp = check_hypothesis(a, b, spec.params, tol)
        again = _conclusion_margin(a, b, target, tol)
        if not hyp.holds or again >= threshold:
            raise NumericalFailure(
                f"hunt hit at attempt {index} did not re-verify "
                f"(margin {margin:.3e} vs {again:.3e})"
            )
        return HuntResult(True, (a, b), again, index + 1)

    workers = backend.thread_count()
    min_margin = math.nan
    if workers <= 1:
        for i in range(spec.budget):
            res = attempt(i)
            if res is None:
                continue
            a, b, margin = res
            if margin < threshold:
                return confirm(i, a, b, margin)
            min_margin = margin if math.isnan(min_margin) else min(min_margin, margin)
        return HuntResult(False, None, min_margin, spec.budget)

    chunk = workers * 4
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for start in range(0, spec.budget, chunk):
            indices = range(start, min(start + chunk, spec.budget))
            for i, res in zip(indices, pool.map(attempt, indices)):
                if res is None:
                    continue
                a, b, margin = res
                if margin < threshold:
                    return confirm(i, a, b, margin)
                min_margin = margin if math.isnan(min_margin) else min(min_margin, margin)
    return HuntResult(False, None, min_margin, spec.budget)
