"""Region classification, implication checking, and numerical proof traces.

The central facts being verified: whenever the chain hypothesis
``lhs(A, B) >= B`` holds and the parameters fall in one of two regions,
the log order ``log B >= log A`` follows, and under the extra gap condition
(t - s at least the factor count) the plain order ``B >= A`` follows too.
Every function here returns verdicts with margins rather than raising on a
failed inequality: the implications are theorems, so a genuine violation is
evidence of a numerical bug or a precondition error and must be triaged,
not thrown away.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .chains import ChainParams, GrandN, PVersion, chain_lhs, grand_chain, grand_lhs
from .errors import BadParameters, PreconditionViolated
from .loewner import OrderVerdict, loewner_geq
from .matcore import DEFAULT_TOL, SymMatrix, ToleranceModel, mat_log, mat_pow, spectral_powers

# Float fallback for region boundaries: |difference| <= this counts as equal
# on the non-strict sides.  Rational parameters skip it entirely.
BOUNDARY_EPS = 1e-12

TRIAGE_BREACH = "numerical-tolerance breach"
TRIAGE_CANDIDATE = "counterexample candidate"


class Region(Enum):
    I = "I"
    II = "II"
    NONE = "none"


@dataclass(frozen=True)
class RegionClass:
    """Which theorem case applies, plus the extra operator-order condition."""

    region: Region
    operator_order_condition: bool


def _geq(x, y, exact: bool) -> bool:
    if exact:
        return x >= y
    return float(x) >= float(y) - BOUNDARY_EPS


def _gt(x, y, exact: bool) -> bool:
    if exact:
        return x > y
    return float(x) > float(y) + BOUNDARY_EPS


def _leq(x, y, exact: bool) -> bool:
    if exact:
        return x <= y
    return float(x) <= float(y) + BOUNDARY_EPS


def _lt(x, y, exact: bool) -> bool:
    if exact:
        return x < y
    return float(x) < float(y) - BOUNDARY_EPS


def classify_region(params: ChainParams, legacy: bool = False) -> RegionClass:
    """Classify parameters into region I, II, or none.

    For the n-variant: region I means ``D > n`` and ``n >= 3s - t`` (with
    ``D = (n+2)s + (n-2)t``), region II means ``D <= n``; the operator-order
    condition is ``t - s >= n``.  For the p-variant the same roles are
    played by ``4s > p >= 3s - t``, ``p >= 4s`` and ``t - s >= p``.

    ``legacy=True`` applies the older literal two-factor conditions instead
    (region I: ``t >= 3s - 2 >= 0``; region II: ``s < 1/2``; operator
    condition ``t >= s + 2``) and is only defined for n == 2 / p == 2.
    Rational parameters are compared exactly; floats get a +/-1e-12 band on
    the boundaries.
    """
    exact = params.is_exact
    s, t = params.s, params.t
    if legacy:
        if isinstance(params.variant, GrandN):
            if params.variant.n != 2:
                raise BadParameters("legacy regions are defined only for n == 2")
        elif params.variant.p != 2:
            raise BadParameters("legacy regions are defined only for p == 2")
        op_cond = _geq(t, s + 2, exact)
        if _geq(t, 3 * s - 2, exact) and _geq(3 * s - 2, 0, exact):
            return RegionClass(Region.I, op_cond)
        if _lt(s, 0.5, exact):
            return RegionClass(Region.II, op_cond)
        return RegionClass(Region.NONE, op_cond)
    if isinstance(params.variant, GrandN):
        n = params.variant.n
        d = params.power_denominator
        op_cond = _geq(t - s, n, exact)
        if _gt(d, n, exact) and _geq(n, 3 * s - t, exact):
            return RegionClass(Region.I, op_cond)
        if _leq(d, n, exact):
            return RegionClass(Region.II, op_cond)
        return RegionClass(Region.NONE, op_cond)
    p = params.variant.p
    op_cond = _geq(t - s, p, exact)
    if _gt(4 * s, p, exact) and _geq(p, 3 * s - t, exact):
        return RegionClass(Region.I, op_cond)
    if _geq(p, 4 * s, exact):
        return RegionClass(Region.II, op_cond)
    return RegionClass(Region.NONE, op_cond)


def check_hypothesis(
    a: SymMatrix, b: SymMatrix, params: ChainParams, tol: ToleranceModel = DEFAULT_TOL
) -> OrderVerdict:
    """Verdict for the chain hypothesis ``lhs(A, B) >= B``."""
    return loewner_geq(chain_lhs(a, b, params, tol), b, tol)


@dataclass(frozen=True)
class OrderReport:
    """Full implication report for one (A, B, params) instance.

    Conclusion direction: B dominates A.  ``chaotic`` is the verdict for
    ``log B >= log A`` and ``operator`` the verdict for ``B >= A``.
    ``implication_ok`` is false only when the hypothesis holds, a region
    applies, and a concluded order fails; ``triage`` then says whether the
    violation is within numerical noise (10x the relative tolerance) or a
    genuine counterexample candidate.
    """

    hypothesis: OrderVerdict
    region: RegionClass
    chaotic: OrderVerdict
    operator: OrderVerdict
    implication_ok: bool
    triage: str | None = None


def verify_theorem(
    a: SymMatrix, b: SymMatrix, params: ChainParams, tol: ToleranceModel = DEFAULT_TOL
) -> OrderReport:
    """Check hypothesis, classify, and test both concluded orders."""
    hypothesis = check_hypothesis(a, b, params, tol)
    region = classify_region(params)
    chaotic = loewner_geq(mat_log(b, tol), mat_log(a, tol), tol)
    operator = loewner_geq(b, a, tol)
    applicable = hypothesis.holds and region.region is not Region.NONE
    violations = []
    if applicable and not chaotic.holds:
        violations.append(chaotic.margin)
    if applicable and region.operator_order_condition and not operator.holds:
        violations.append(operator.margin)
    if not violations:
        return OrderReport(hypothesis, region, chaotic, operator, True)
    worst = min(violations)
    triage = TRIAGE_BREACH if worst >= -10.0 * tol.rel else TRIAGE_CANDIDATE
    return OrderReport(hypothesis, region, chaotic, operator, False, triage)


@dataclass(frozen=True)
class ProofTrace:
    """Ordered intermediate inequalities of a proof, each with its margin."""

    steps: tuple[tuple[str, OrderVerdict], ...]
    all_hold: bool

    def margins(self) -> dict[str, float]:
        return {label: verdict.margin for label, verdict in self.steps}


def furuta_check(
    a: SymMatrix,
    b: SymMatrix,
    p: float,
    r: float,
    q: float,
    tol: ToleranceModel = DEFAULT_TOL,
) -> ProofTrace:
    """Check both order-preserving power inequalities for ``A >= B >= 0``.

    With ``r >= 0``, ``p >= 0``, ``q >= 1`` and ``(1+r) q >= p + r``, both

    * ``(A^(r/2) A^p A^(r/2))^(1/q) >= (A^(r/2) B^p A^(r/2))^(1/q)`` and
    * ``(B^(r/2) A^p B^(r/2))^(1/q) >= (B^(r/2) B^p B^(r/2))^(1/q)``

    are theorems; any failure beyond tolerance lands in the trace, not in an
    exception.  ``a >= b`` itself is the caller's precondition.
    """
    p, r, q = float(p), float(r), float(q)
    if r < 0 or p < 0 or q < 1:
        raise BadParameters(f"need r >= 0, p >= 0, q >= 1; got p={p}, r={r}, q={q}")
    if (1.0 + r) * q < p + r - 1e-12 * max(1.0, p + r):
        raise BadParameters(f"need (1+r)q >= p+r; got (1+{r})*{q} < {p}+{r}")
    a_r2 = mat_pow(a, r / 2.0, tol)
    b_r2 = mat_pow(b, r / 2.0, tol)
    a_p = mat_pow(a, p, tol)
    b_p = mat_pow(b, p, tol)
    inv_q = 1.0 / q
    upper = loewner_geq(
        mat_pow(SymMatrix(a_r2.data @ a_p.data @ a_r2.data), inv_q, tol),
        mat_pow(SymMatrix(a_r2.data @ b_p.data @ a_r2.data), inv_q, tol),
        tol,
    )
    lower = loewner_geq(
        mat_pow(SymMatrix(b_r2.data @ a_p.data @ b_r2.data), inv_q, tol),
        mat_pow(SymMatrix(b_r2.data @ b_p.data @ b_r2.data), inv_q, tol),
        tol,
    )
    steps = (("sandwich_by_larger", upper), ("sandwich_by_smaller", lower))
    return ProofTrace(steps=steps, all_hold=upper.holds and lower.holds)


def proof_trace_grand(
    a: SymMatrix, b: SymMatrix, params: ChainParams, tol: ToleranceModel = DEFAULT_TOL
) -> ProofTrace:
    """Numerically evaluate every intermediate inequality of the implication.

    Only meaningful when the hypothesis holds and a region applies; anything
    else raises ``PreconditionViolated``.  Region I walks the power-lift
    route (the Furuta-type step with the chain as the dominating operator),
    region II the direct outer-power reduction; both funnel into the same
    tail: center-block bound, flipped negative powers, logarithms, and the
    plain order when the gap condition grants it.
    """
    if not isinstance(params.variant, GrandN):
        raise BadParameters("proof_trace_grand needs a GrandN variant")
    region = classify_region(params)
    if region.region is Region.NONE:
        raise PreconditionViolated("parameters classify to no region")
    hypothesis = check_hypothesis(a, b, params, tol)
    if not hypothesis.holds:
        raise PreconditionViolated(
            f"chain hypothesis fails (margin {hypothesis.margin:.3e})"
        )
    n = params.variant.n
    k = float(n)
    s = float(params.s)
    t = float(params.t)
    x = (s - t) / k
    gap = t - s
    l = ((n + 2.0) * s + (n - 2.0) * t) / k
    b_t, b_2t, b_mid, b_x, b_negx = spectral_powers(
        b, [t / k, 2.0 * t / k, (s + t) / k, x, -x], tol
    )
    a_x, a_negx = spectral_powers(a, [x, -x], tol)
    prod = b_t.data
    for _ in range(n - 1):
        prod = prod @ a_x.data
        prod = prod @ b_2t.data
    prod = prod @ a_x.data
    prod = prod @ b_t.data
    chain_t = SymMatrix(prod)
    center = SymMatrix(b_t.data @ a_x.data @ b_t.data)

    steps = []
    if region.region is Region.I:
        lhs_outer = grand_lhs(a, b, params, tol)
        r_f = 2.0 * gap / k
        sandwich = SymMatrix(b_negx.data @ mat_pow(lhs_outer, l, tol).data @ b_negx.data)
        steps.append(
            (
                "furuta_lift",
                loewner_geq(
                    mat_pow(sandwich, (1.0 + r_f) / (l + r_f), tol),
                    mat_pow(b, 1.0 + r_f, tol),
                    tol,
                ),
            )
        )
        m_exp = (k + 2.0 * gap) / (k * l + 2.0 * gap)
        steps.append(
            (
                "shifted_chain_power",
                loewner_geq(
                    mat_pow(chain_t, m_exp, tol),
                    mat_pow(b, (k + 2.0 * gap) / k, tol),
                    tol,
                ),
            )
        )
    else:
        chain = grand_chain(a, b, params, tol)
        steps.append(
            ("inner_chain_bound", loewner_geq(chain, mat_pow(b, l, tol), tol))
        )
        steps.append(
            ("shifted_chain_bound", loewner_geq(chain_t, mat_pow(b, s + t, tol), tol))
        )
    steps.append(("center_block_bound", loewner_geq(center, b_mid, tol)))
    steps.append(("negative_power_order", loewner_geq(a_x, b_x, tol)))
    steps.append(("inverted_power_order", loewner_geq(b_negx, a_negx, tol)))
    steps.append(("log_order", loewner_geq(mat_log(b, tol), mat_log(a, tol), tol)))
    if region.operator_order_condition:
        steps.append(("operator_order", loewner_geq(b, a, tol)))
    steps = tuple(steps)
    return ProofTrace(steps=steps, all_hold=all(v.holds for _, v in steps))
