"""Self-contained property suites behind the ``selfcheck`` CLI command.

Each suite draws its own seeded inputs, checks a family of invariants, and
reports one pass/fail line.  The suites deliberately include exact-equality
cases (chain collapse, reflexivity, equal-pair traces): those live right at
margin zero, so a broken tolerance policy (for example ``rel=0``) fails the
run instead of passing vacuously.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chains import (
    ChainParams,
    GrandN,
    PVersion,
    grand_lhs,
    lhs_scale_exponent,
    scalar_lhs,
)
from .errors import InvalidTarget
from .loewner import loewner_geq, loewner_heinz_check
from .matcore import SymMatrix, ToleranceModel, eigh, mat_log, mat_pow
from .search import (
    SampleSpec,
    Strategy,
    Target,
    candidate_pair,
    derive_seed,
    hunt_counterexample,
    random_pd,
    stream,
)
from .theorems import (
    Region,
    check_hypothesis,
    classify_region,
    furuta_check,
    proof_trace_grand,
    verify_theorem,
)

_QUICK = {
    "matrices": 40,
    "identities": 20,
    "orders": 25,
    "chains": 15,
    "pairs": 10,
    "furuta": 25,
    "traces": 6,
    "scaled": 60,
}
_FULL = {
    "matrices": 400,
    "identities": 150,
    "orders": 150,
    "chains": 80,
    "pairs": 60,
    "furuta": 300,
    "traces": 30,
    "scaled": 500,
}

_SUITE_SPREAD = 3.0


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str


def _rel_err(x: np.ndarray, y: np.ndarray) -> float:
    scale = max(1.0, float(np.linalg.norm(x)), float(np.linalg.norm(y)))
    return float(np.linalg.norm(x - y)) / scale


def draw_params(rng: np.random.Generator, variant) -> ChainParams:
    """Random (s, t) landing in region I or II with a workable scale surplus.

    The surplus filter (delta >= 0.2) keeps the sufficient-scale factor of
    the scaled sampler within the float64-safe window.
    """
    while True:
        if rng.uniform() < 0.4:
            s = rng.uniform(0.1, 0.45)
            gap = rng.uniform(0.3, 1.1)
        else:
            s = rng.uniform(0.15, 1.5)
            cap = variant.n if isinstance(variant, GrandN) else float(variant.p)
            gap = rng.uniform(0.3, cap + 1.0)
        params = ChainParams(s, s + gap, variant)
        if classify_region(params).region is Region.NONE:
            continue
        if float(lhs_scale_exponent(params)) - 1.0 < 0.2:
            continue
        return params


def draw_hypothesis_pair(seed: int, index: int, dim: int, params: ChainParams):
    """Deterministic hypothesis pair, alternating scaled/commuting draws."""
    strategy = Strategy.SCALED_RANDOM if index % 2 == 0 else Strategy.COMMUTING
    spec = SampleSpec(
        dim=dim,
        params=params,
        strategy=strategy,
        seed=derive_seed(seed, index),
        budget=1000,
        spread=_SUITE_SPREAD,
    )
    return candidate_pair(spec)


def _suite_reconstruction(sizes, seed, tol):
    rng = stream(seed, 1)
    worst = 0.0
    for i in range(sizes["matrices"]):
        dim = 1 + i % 8
        m = SymMatrix(rng.uniform(-10.0, 10.0, size=(dim, dim)))
        dec = eigh(m)
        recon = (dec.eigenvectors * dec.eigenvalues) @ dec.eigenvectors.T
        scale = max(1.0, m.frobenius())
        err = float(np.linalg.norm(recon - m.data)) / scale
        ortho = float(
            np.linalg.norm(dec.eigenvectors.T @ dec.eigenvectors - np.eye(dim))
        )
        if not np.all(np.diff(dec.eigenvalues) >= 0):
            return False, f"eigenvalues not ascending at sample {i}"
        worst = max(worst, err, ortho)
        if err > 1e-10 or ortho > 1e-10:
            return False, f"reconstruction/orthonormality {max(err, ortho):.2e} at sample {i}"
    return True, f"{sizes['matrices']} matrices, worst error {worst:.2e}"


def _suite_spectral_identities(sizes, seed, tol):
    rng = stream(seed, 2)
    worst = 0.0
    for i in range(sizes["identities"]):
        dim = 2 + i % 7
        a = random_pd(dim, rng, 10.0)
        r1, r2 = rng.uniform(-3.0, 3.0, size=2)
        add = _rel_err(
            mat_pow(a, r1 + r2).data, (mat_pow(a, r1).data @ mat_pow(a, r2).data)
        )
        r = r1 if abs(r1) > 0.1 else 0.5
        inv = _rel_err(mat_pow(mat_pow(a, r), 1.0 / r).data, a.data)
        logp = _rel_err(mat_log(mat_pow(a, r)).data, r * mat_log(a).data)
        worst = max(worst, add, inv, logp)
        if worst > 1e-8:
            return False, f"identity error {worst:.2e} at sample {i}"
    return True, f"{sizes['identities']} matrices, worst identity error {worst:.2e}"


def _suite_order_predicates(sizes, seed, tol):
    rng = stream(seed, 3)
    for i in range(sizes["orders"]):
        dim = 2 + i % 5
        a = random_pd(dim, rng, 10.0)
        if not loewner_geq(a, a, tol).holds:
            return False, f"reflexivity failed at sample {i}"
        psd_basis = rng.normal(size=(dim, dim))
        bump = SymMatrix(a.data + psd_basis @ psd_basis.T)
        for c in (1e-3, 1.0, 1e3):
            scaled = loewner_geq(
                SymMatrix(c * bump.data), SymMatrix(c * a.data), tol
            )
            if not scaled.holds:
                return False, f"scale invariance failed at c={c}, sample {i}"
        alpha = rng.uniform(0.0, 1.0)
        if not loewner_heinz_check(bump, a, alpha, tol).holds:
            return False, f"power-order check failed at alpha={alpha:.3f}, sample {i}"
        da = np.sort(rng.uniform(0.1, 10.0, size=dim))
        db = np.sort(rng.uniform(0.1, 10.0, size=dim))
        verdict = loewner_geq(SymMatrix(np.diag(da)), SymMatrix(np.diag(db)), tol)
        scalar = bool(np.all(da - db >= -tol.rel * max(1.0, np.linalg.norm(da), np.linalg.norm(db))))
        if verdict.holds != scalar:
            return False, f"diagonal verdict disagrees with scalars at sample {i}"
    return True, f"{sizes['orders']} samples"


def _suite_chain_construction(sizes, seed, tol):
    rng = stream(seed, 4)
    n_list = [2, 3, 4]
    for i in range(sizes["chains"]):
        dim = 2 + i % 5
        params = draw_params(rng, GrandN(n_list[i % len(n_list)]))
        a = random_pd(dim, rng, _SUITE_SPREAD)
        # collapse: lhs(A, A) == A, checked as two-sided order within tol
        lhs_aa = grand_lhs(a, a, params, tol)
        if not (loewner_geq(lhs_aa, a, tol).holds and loewner_geq(a, lhs_aa, tol).holds):
            return False, f"collapse drifted beyond tolerance at sample {i}"
        # scaling law
        b = random_pd(dim, rng, _SUITE_SPREAD)
        lhs_b = grand_lhs(a, b, params, tol)
        expo = float(lhs_scale_exponent(params))
        for c in (0.5, 2.0):
            err = _rel_err(
                grand_lhs(a, SymMatrix(c * b.data), params, tol).data,
                c**expo * lhs_b.data,
            )
            if err > 1e-8:
                return False, f"scaling law error {err:.2e} at sample {i}"
        # two-factor reduction: n=2 and p=2 margins agree
        params2 = ChainParams(params.s, params.t, GrandN(2))
        paramsp = ChainParams(params.s, params.t, PVersion(2))
        m_n = check_hypothesis(a, b, params2, tol).margin
        m_p = check_hypothesis(a, b, paramsp, tol).margin
        if abs(m_n - m_p) > 1e-10:
            return False, f"n=2 vs p=2 margins differ by {abs(m_n - m_p):.2e}"
        # commuting oracle
        q = np.linalg.qr(rng.normal(size=(dim, dim)))[0]
        da = np.exp(rng.uniform(-1.0, 1.0, size=dim))
        db = np.exp(rng.uniform(-1.0, 1.0, size=dim))
        ca = SymMatrix((q * da) @ q.T)
        cb = SymMatrix((q * db) @ q.T)
        lhs_scalar = scalar_lhs(da, db, params)
        matrix_margin = check_hypothesis(ca, cb, params, tol).margin
        scale = max(
            1.0,
            float(np.linalg.norm(lhs_scalar)),
            float(np.linalg.norm(db)),
        )
        scalar_margin = float(np.min(lhs_scalar - db)) / scale
        if abs(matrix_margin - scalar_margin) > 1e-10:
            return False, (
                f"commuting margin mismatch {abs(matrix_margin - scalar_margin):.2e} "
                f"at sample {i}"
            )
    return True, f"{sizes['chains']} chains"


def _suite_implications(sizes, seed, tol):
    variants = [GrandN(2), GrandN(3), PVersion(2), PVersion(3)]
    rng = stream(seed, 5)
    checked = 0
    for v_idx, variant in enumerate(variants):
        for i in range(sizes["pairs"]):
            params = draw_params(rng, variant)
            dim = 2 + (i + v_idx) % 5
            a, b = draw_hypothesis_pair(derive_seed(seed, 5, v_idx), i, dim, params)
            report = verify_theorem(a, b, params, tol)
            if not report.hypothesis.holds:
                return False, f"sampler produced non-hypothesis pair (variant {v_idx}, {i})"
            if not report.implication_ok:
                return False, (
                    f"implication failed (variant {v_idx}, sample {i}, "
                    f"triage {report.triage})"
                )
            checked += 1
    return True, f"{checked} hypothesis pairs, all implications hold"


def _suite_furuta(sizes, seed, tol):
    rng = stream(seed, 6)
    for i in range(sizes["furuta"]):
        dim = 2 + i % 5
        b = random_pd(dim, rng, 5.0)
        g = rng.normal(size=(dim, dim))
        a = SymMatrix(b.data + g @ g.T)
        r = rng.uniform(0.0, 3.0)
        q = rng.uniform(1.0, 3.0)
        p_max = (1.0 + r) * q - r
        p = p_max if i % 7 == 0 else rng.uniform(0.0, p_max)
        trace = furuta_check(a, b, p, r, q, tol)
        if not trace.all_hold:
            return False, f"power inequality failed at sample {i} (p={p:.3f}, r={r:.3f}, q={q:.3f})"
    return True, f"{sizes['furuta']} admissible triples"


def _suite_proof_traces(sizes, seed, tol):
    rng = stream(seed, 7)
    for i in range(sizes["traces"]):
        params = draw_params(rng, GrandN(2 + i % 3))
        dim = 2 + i % 4
        a, b = draw_hypothesis_pair(derive_seed(seed, 7), i, dim, params)
        trace = proof_trace_grand(a, b, params, tol)
        if not trace.all_hold:
            bad = [lbl for lbl, v in trace.steps if not v.holds]
            return False, f"steps {bad} failed at sample {i}"
        # equal-pair trace: every step sits at margin zero
        eq = random_pd(dim, rng, _SUITE_SPREAD)
        trace_eq = proof_trace_grand(eq, eq, ChainParams(1.0, 2.0, GrandN(2)), tol)
        if not trace_eq.all_hold:
            return False, f"equal-pair trace failed at sample {i}"
    return True, f"{sizes['traces']} traced pairs per region draw"


def _suite_scaled_soundness(sizes, seed, tol):
    rng = stream(seed, 8)
    worst = math.inf
    for i in range(sizes["scaled"]):
        variant = GrandN(2 + i % 4) if i % 2 == 0 else PVersion(1 + i % 3)
        params = draw_params(rng, variant)
        spec = SampleSpec(
            dim=2 + i % 5,
            params=params,
            strategy=Strategy.SCALED_RANDOM,
            seed=derive_seed(seed, 8, i),
            spread=_SUITE_SPREAD,
        )
        a, b = candidate_pair(spec, tol)
        margin = check_hypothesis(a, b, params, tol).margin
        worst = min(worst, margin)
        if margin < 0.0:
            return False, f"negative hypothesis margin {margin:.2e} at draw {i}"
    return True, f"{sizes['scaled']} draws, worst margin {worst:.2e}"


def _suite_determinism(sizes, seed, tol):
    params = ChainParams(1.0, 2.0, GrandN(2))
    for strategy in (Strategy.COMMUTING, Strategy.SCALED_RANDOM):
        spec = SampleSpec(dim=4, params=params, strategy=strategy, seed=seed, spread=_SUITE_SPREAD)
        a1, b1 = candidate_pair(spec)
        a2, b2 = candidate_pair(spec)
        if not (np.array_equal(a1.data, a2.data) and np.array_equal(b1.data, b2.data)):
            return False, f"strategy {strategy.value} not bit-reproducible"
    try:
        hunt_counterexample(
            SampleSpec(dim=2, params=params, strategy=Strategy.COMMUTING, seed=seed, budget=1),
            Target.CHAOTIC,
            tol,
        )
        return False, "hunt inside a proven region was not rejected"
    except InvalidTarget:
        pass
    hunt_params = ChainParams(1.0, 1.5, GrandN(2))  # region I, gap < n
    res1 = hunt_counterexample(
        SampleSpec(dim=3, params=hunt_params, strategy=Strategy.SCALED_RANDOM, seed=seed, budget=8),
        Target.OPERATOR,
        tol,
    )
    res2 = hunt_counterexample(
        SampleSpec(dim=3, params=hunt_params, strategy=Strategy.SCALED_RANDOM, seed=seed, budget=8),
        Target.OPERATOR,
        tol,
    )
    if (res1.found, res1.attempts) != (res2.found, res2.attempts):
        return False, "hunt not reproducible under identical spec"
    return True, "samplers and hunts bit-reproducible; proven-region hunts rejected"


_SUITES = (
    ("matcore.reconstruction", _suite_reconstruction),
    ("matcore.spectral_identities", _suite_spectral_identities),
    ("loewner.order_predicates", _suite_order_predicates),
    ("chains.construction", _suite_chain_construction),
    ("theorems.implications", _suite_implications),
    ("theorems.furuta", _suite_furuta),
    ("theorems.proof_traces", _suite_proof_traces),
    ("search.scaled_soundness", _suite_scaled_soundness),
    ("search.determinism", _suite_determinism),
)


def run_selfcheck(full: bool, seed: int, tol: ToleranceModel) -> list[SuiteResult]:
    """Run every suite; a raised exception counts as that suite failing."""
    sizes = _FULL if full else _QUICK
    results = []
    for name, fn in _SUITES:
        try:
            passed, detail = fn(sizes, seed, tol)
        except Exception as exc:  # noqa: BLE001 - suite crash == suite failure
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        results.append(SuiteResult(name, passed, detail))
    return results
