"""Empirical checks of the approximation results over the test corpus.

Every ``verify_*`` function returns a :class:`VerificationResult` whose
sections list ``(scale, value, bound, ratio)`` rows.  A claimed inequality
``value <= C * bound`` is judged consistent when the ratios stay within the
configured spread (10x by default); the existence of such constants cannot be
proved numerically, only checked for stability on the sampled scales.
"""

from __future__ import annotations

import math

import numpy as np

from ..best_approx import best_approx_sequence, jackson_for_degree
from ..differential import apply_D_expansion, as_expansion
from ..errors import ConfigError, ParameterDomainError
from ..ortho_core import CHEBYSHEV, JacobiExpansion, JacobiParams
from ..smoothness import (
    PhiFunction,
    modulus_curve,
    measured_c1,
    measured_c2,
    phi_check_sum3,
    phi_check_sum4,
)
from ..translation_ops import asymmetric_translate, translated_breakpoints
from ..weighted_spaces import (
    Func,
    Regime,
    SpaceParams,
    lambda0_for_theorems,
    norm_discretization,
    translation_bound_params,
    validate_regime,
    weighted_norm,
)
from .config import ExperimentConfig
from .corpus import make_func
from .report import FIT_FLOOR, RateReport, Verdict, VerificationResult, bound_report, combine, fmt

PHI_CHECK_N = 256


# ---------------------------------------------------------------------------
# shared pieces


def _require(cfg: ExperimentConfig, regime: Regime):
    check = validate_regime(cfg.sp, cfg.jp, regime)
    if not check:
        raise ConfigError(f"{regime.value} regime violated: {check.reason}")


def _phi_notes(cfg: ExperimentConfig, lambda0: float | None, sum4: bool) -> dict:
    """Run the summation checks the result needs; unbounded ones are configuration errors."""
    phi = cfg.phi_function
    notes = {}
    if lambda0 is not None:
        c3 = phi_check_sum3(phi, lambda0, PHI_CHECK_N)
        if c3.unbounded:
            raise ConfigError(f"phi={cfg.phi} fails the tail-sum condition for lambda0={lambda0:g}")
        notes[f"phi_C3(lambda0={lambda0:g})"] = c3.constant
    if sum4:
        c4 = phi_check_sum4(phi, PHI_CHECK_N)
        if c4.unbounded:
            raise ConfigError(f"phi={cfg.phi} fails the partial-sum condition")
        notes["phi_C4"] = c4.constant
    return notes


def _check_deltas(cfg: ExperimentConfig):
    if max(cfg.delta_list) > 1:
        raise ConfigError("phi is sampled on (0, 1]; delta_list entries must be <= 1")


def _E(f, cfg: ExperimentConfig) -> list[float]:
    return [r.error for r in best_approx_sequence(f, cfg.n_list, cfg.sp)]


def _omega(f, cfg: ExperimentConfig) -> list[float]:
    curve = modulus_curve(f, cfg.delta_list, cfg.sp, cfg.t_samples)
    lookup = dict(zip(curve.deltas.tolist(), curve.values.tolist()))
    return [lookup[d] for d in cfg.delta_list]


def _inv_n(cfg: ExperimentConfig) -> list[float]:
    return [1.0 / n for n in cfg.n_list]


def _max_ratio(values, bounds) -> float:
    """Smallest ``M`` with ``value <= M * bound`` on the samples; roundoff-level values count as zero."""
    return max((v / b for v, b in zip(values, bounds) if b > 0 and v > FIT_FLOOR), default=0.0)


def _corpus(cfg: ExperimentConfig) -> list[Func]:
    return [make_func(label, cfg.jp) for label in cfg.corpus]


def _result(name: str, cfg: ExperimentConfig, reports: list[RateReport], notes: dict) -> VerificationResult:
    return VerificationResult(name, cfg.resolved(), reports, combine(r.verdict for r in reports), notes)


# ---------------------------------------------------------------------------
# Bernstein-Markov inequalities


def _l2_extremal(num: SpaceParams, den: SpaceParams, n: int, derivative: bool) -> np.ndarray | None:
    """Chebyshev coefficients of the degree ``<= n-1`` polynomial maximizing a ``p = 2`` norm ratio.

    Maximizes ``||P^(d)||_num / ||P||_den`` (``d`` is 1 or 0) through an SVD of
    the weighted Vandermonde matrices.  Returns None when the exponents do not
    define ``p = 2`` spaces.
    """
    try:
        a = norm_discretization(SpaceParams(2.0, num.alpha, num.beta))
        b = norm_discretization(SpaceParams(2.0, den.alpha, den.beta))
    except ParameterDomainError:
        return None
    eye = np.eye(n)
    Va = np.polynomial.chebyshev.chebvander(a.nodes, n - 1)
    if derivative:
        cols = [np.polynomial.chebyshev.chebder(eye[k]) if k else np.zeros(1) for k in range(n)]
        Va = np.column_stack([np.polynomial.chebyshev.chebval(a.nodes, c) for c in cols])
    Vb = np.polynomial.chebyshev.chebvander(b.nodes, n - 1)
    A = np.sqrt(a.weights)[:, None] * Va
    _, R = np.linalg.qr(np.sqrt(b.weights)[:, None] * Vb)
    M = np.linalg.solve(R.T, A.T).T  # A R^-1
    _, _, vt = np.linalg.svd(M)
    return np.linalg.solve(R, vt[0])


def verify_bernstein_markov(sp: SpaceParams, degrees, trials: int, seed: int, rho: float = 0.5,
                            sigma: float = 0.5, max_spread: float = 10.0,
                            config: list[tuple[str, str]] | None = None) -> VerificationResult:
    """Measure the two polynomial inequalities for degrees ``<= n-1``.

    ``||P'||_{p,alpha+1/2,beta+1/2} / (n ||P||)`` and
    ``||P|| / (n^(2 max(rho, sigma)) ||P||_{p,alpha+rho,beta+sigma})`` are maximized
    over ``trials`` polynomials with standard normal Chebyshev coefficients plus
    the polynomial extremal for the same ratio in ``p = 2``.  Random
    polynomials alone rarely come near the supremum of the second ratio (the
    extremal ones concentrate at the endpoints); their spread is kept in the
    section notes.
    """
    if rho < 0 or sigma < 0:
        raise ConfigError("rho and sigma must be >= 0")
    rng = np.random.default_rng(seed)
    sp_d = sp.shifted(0.5, 0.5)
    sp_w = sp.shifted(rho, sigma)
    base, deriv, shift = (norm_discretization(s) for s in (sp, sp_d, sp_w))
    power = 2 * max(rho, sigma)
    degrees = list(degrees)
    d_vals, w_vals, d_rand, w_rand = [], [], [], []

    def ratios(c):
        P = JacobiExpansion(CHEBYSHEV, c)
        dc = np.polynomial.chebyshev.chebder(c) if len(c) > 1 else np.zeros(1)
        b = base.norm(P)
        return deriv.norm(JacobiExpansion(CHEBYSHEV, dc)) / b, b / shift.norm(P)

    for n in degrees:
        rs = [ratios(rng.standard_normal(n)) for _ in range(trials)]
        d_rand.append(max(r[0] for r in rs))
        w_rand.append(max(r[1] for r in rs))
        best_d, best_w = d_rand[-1], w_rand[-1]
        if n > 1:
            c = _l2_extremal(sp_d, sp, n, True)
            if c is not None:
                best_d = max(best_d, ratios(c)[0])
        c = _l2_extremal(sp, sp_w, n, False)
        if c is not None:
            best_w = max(best_w, ratios(c)[1])
        d_vals.append(best_d)
        w_vals.append(best_w)
    w_bounds = [float(n) ** power for n in degrees]
    reports = [
        bound_report("derivative", degrees, d_vals, degrees, max_spread,
                     {"random_only_spread": bound_report("", degrees, d_rand, degrees, 0).notes["ratio_spread"]}),
        bound_report("weight_shift", degrees, w_vals, w_bounds, max_spread,
                     {"random_only_spread": bound_report("", degrees, w_rand, w_bounds, 0).notes["ratio_spread"]}),
    ]
    cfg_lines = config or [("p", fmt(sp.p)), ("alpha", fmt(sp.alpha)), ("beta", fmt(sp.beta)),
                           ("degrees", ",".join(map(str, degrees))), ("trials", str(trials)),
                           ("seed", str(seed)), ("rho", fmt(rho)), ("sigma", fmt(sigma))]
    return VerificationResult("bernstein", cfg_lines, reports, combine(r.verdict for r in reports), {})


def verify_bernstein(cfg: ExperimentConfig) -> VerificationResult:
    return verify_bernstein_markov(cfg.sp, cfg.n_list, cfg.trials, cfg.seed, cfg.rho, cfg.sigma,
                                   cfg.tolerances.stability, cfg.resolved())


# ---------------------------------------------------------------------------
# direct, inverse and equivalence


def verify_direct_theorem(cfg: ExperimentConfig) -> VerificationResult:
    """Fit ``M`` with ``omega(f, delta) <= M phi(delta)``, then test ``E_n <= C M phi(1/n)``."""
    _require(cfg, Regime.THM_DIRECT)
    _check_deltas(cfg)
    phi = cfg.phi_function
    spread = cfg.tolerances.stability
    reports = []
    for f in _corpus(cfg):
        om = _omega(f, cfg)
        phd = phi(np.array(cfg.delta_list)).tolist()
        M = _max_ratio(om, phd)
        reports.append(bound_report(f"omega[{f.label}]", cfg.delta_list, om, phd, math.inf, {"M": M}))
        E = _E(f, cfg)
        bounds = [M * v for v in phi(np.array(_inv_n(cfg))).tolist()]
        reports.append(bound_report(f"E_n[{f.label}]", _inv_n(cfg), E, bounds, spread))
    return _result("direct", cfg, reports, {})


def verify_inverse_theorem(cfg: ExperimentConfig) -> VerificationResult:
    """Fit ``M`` with ``E_n <= M phi(1/n)``, then test ``omega(f, delta) <= C M phi(delta)``."""
    _require(cfg, Regime.THM_INVERSE)
    _check_deltas(cfg)
    notes = _phi_notes(cfg, lambda0_for_theorems(cfg.sp), True)
    phi = cfg.phi_function
    spread = cfg.tolerances.stability
    reports = []
    for f in _corpus(cfg):
        E = _E(f, cfg)
        phn = phi(np.array(_inv_n(cfg))).tolist()
        M = _max_ratio(E, phn)
        reports.append(bound_report(f"E_n[{f.label}]", _inv_n(cfg), E, phn, math.inf, {"M": M}))
        om = _omega(f, cfg)
        bounds = [M * v for v in phi(np.array(cfg.delta_list)).tolist()]
        reports.append(bound_report(f"omega[{f.label}]", cfg.delta_list, om, bounds, spread))
    return _result("inverse", cfg, reports, notes)


def _equivalence_reports(cfg: ExperimentConfig) -> list[RateReport]:
    """Both directions for each corpus function; the verdict compares the fitted exponents."""
    phi = cfg.phi_function
    tol = cfg.tolerances
    reports = []
    for f in _corpus(cfg):
        E = _E(f, cfg)
        om = _omega(f, cfg)
        phn = phi(np.array(_inv_n(cfg))).tolist()
        phd = phi(np.array(cfg.delta_list)).tolist()
        M_E = _max_ratio(E, phn)
        M_w = _max_ratio(om, phd)
        rE = bound_report(f"E_n[{f.label}]", _inv_n(cfg), E, [M_w * v for v in phn], tol.stability)
        rW = bound_report(f"omega[{f.label}]", cfg.delta_list, om, [M_E * v for v in phd], tol.stability)
        sE, sW = rE.fitted_exponent, rW.fitted_exponent
        if not (math.isfinite(sE) and math.isfinite(sW)):
            verdict = Verdict.INCONCLUSIVE
        elif (abs(sE - sW) <= tol.slope and rE.fit_residual < tol.residual
              and rW.fit_residual < tol.residual):
            verdict = Verdict.PASS
        else:
            verdict = Verdict.FAIL
        for rep in (rE, rW):
            rep.verdict = verdict
            rep.notes["slope_difference"] = abs(sE - sW)
        reports += [rE, rW]
    return reports


def verify_equivalence(cfg: ExperimentConfig) -> VerificationResult:
    """Compare the decay exponents of ``E_n`` (against ``1/n``) and ``omega`` (against ``delta``)."""
    _require(cfg, Regime.THM_EQUIV)
    _check_deltas(cfg)
    notes = _phi_notes(cfg, lambda0_for_theorems(cfg.sp), True)
    return _result("equivalence", cfg, _equivalence_reports(cfg), notes)


# ---------------------------------------------------------------------------
# derivative characterizations


def _in_basis(f, jp: JacobiParams) -> JacobiExpansion:
    e = getattr(f, "expansion", None)
    if e is None:
        raise ConfigError(f"{f.label}: derivative experiments need Jacobi-expansion corpus functions")
    return as_expansion(f, jp)


def verify_derivative_theorems(cfg: ExperimentConfig, r: int | None = None) -> VerificationResult:
    """Check the ``D^r`` characterizations of ``E_n`` on expansion-defined functions.

    (a) with ``C`` fitted from ``E_n(D^r f) <= C phi(1/n)``, test
    ``E_n(f) <= C' n^(-2r) phi(1/n)``; (b) with ``M`` fitted from
    ``E_n(f) <= M n^(-2r) phi(1/n)``, test ``omega(D^r f, delta) <= C'' M phi(delta)``.
    For ``r = 0`` this is the equivalence experiment, computed by the same code.
    """
    r = cfg.r if r is None else r
    if r < 0:
        raise ConfigError(f"r must be >= 0, got {r}")
    cfg = cfg.with_(r=r)
    _require(cfg, Regime.THM_E_WD)
    _check_deltas(cfg)
    lam0 = lambda0_for_theorems(cfg.sp)
    if r == 0:
        _require(cfg, Regime.THM_EQUIV)
        notes = _phi_notes(cfg, lam0, True)
        return _result("derivative", cfg, _equivalence_reports(cfg), notes)

    _require(cfg, Regime.LEMMA_E_D)
    notes = _phi_notes(cfg, 0.0, False)
    notes.update(_phi_notes(cfg, lam0, True))
    phi = cfg.phi_function
    spread = cfg.tolerances.stability
    inv_n = _inv_n(cfg)
    phn = phi(np.array(inv_n)).tolist()
    phd = phi(np.array(cfg.delta_list)).tolist()
    scale = [n ** (-2.0 * r) for n in cfg.n_list]
    reports = []
    for f in _corpus(cfg):
        e = _in_basis(f, cfg.jp)
        g = Func.from_expansion(apply_D_expansion(e, r), label=f"D^{r}[{f.label}]")
        fe = Func.from_expansion(e, label=f.label)
        Eg = _E(g, cfg)
        C = _max_ratio(Eg, phn)
        reports.append(bound_report(f"E_n[{g.label}]", inv_n, Eg, phn, spread, {"C": C}))
        Ef = _E(fe, cfg)
        reports.append(bound_report(f"E_n[{f.label}]", inv_n, Ef,
                                    [C * s * v for s, v in zip(scale, phn)], spread))
        M = _max_ratio(Ef, [s * v for s, v in zip(scale, phn)])
        om = _omega(g, cfg)
        reports.append(bound_report(f"omega[{g.label}]", cfg.delta_list, om, [M * v for v in phd],
                                    spread, {"M": M}))
    return _result("derivative", cfg, reports, notes)


# ---------------------------------------------------------------------------
# lemma-level measurements


def jackson_constants(f, jp: JacobiParams, sp: SpaceParams, q: int, n_list) -> dict:
    """Constants in ``E_n(f) <= ||f - Q_n|| <= C n^(-2) ||D f||`` for the symmetric Jackson polynomial.

    ``Q_n`` has degree ``<= n-1``, so it bounds ``E_n`` from above; its error
    saturates at order ``n^-2``, which makes ``n^2 ||f - Q_n|| / ||D f||`` the
    stable measurement of the constant.
    """
    check = validate_regime(sp, jp, Regime.LEMMA_E_D)
    if not check:
        raise ConfigError(f"lemma_E_D regime violated: {check.reason}")
    if q <= jp.nu:
        raise ConfigError(f"the symmetric construction needs q > nu, got q={q}, nu={jp.nu}")
    e = as_expansion(f, jp)
    Df = Func.from_expansion(apply_D_expansion(e, 1), label="Df")
    dnorm = weighted_norm(Df, sp)
    if dnorm == 0:
        raise ConfigError("D f vanishes; the inequality is trivial")
    n_list = list(n_list)
    q_err = [jackson_for_degree(f, n, q, jp, sp).error for n in n_list]
    E = [r.error for r in best_approx_sequence(f, n_list, sp)]
    C = [n * n * v / dnorm for n, v in zip(n_list, q_err)]
    return {"n": n_list, "jackson_error": q_err, "E_n": E, "C": C, "D_norm": dnorm}


def corollary_report(f, jp: JacobiParams, sp: SpaceParams, n_list, max_spread: float = 10.0) -> RateReport:
    """``E_n(f) <= C n^-2 E_n(D f)``: ratios ``n^2 E_n(f) / E_n(D f)``."""
    e = as_expansion(f, jp)
    Df = Func.from_expansion(apply_D_expansion(e, 1), label="Df")
    fe = Func.from_expansion(e, label=getattr(f, "label", "f"))
    n_list = list(n_list)
    Ef = [r.error for r in best_approx_sequence(fe, n_list, sp)]
    ED = [r.error for r in best_approx_sequence(Df, n_list, sp)]
    return bound_report(f"corollary[{fe.label}]", [1.0 / n for n in n_list], Ef,
                        [v / (n * n) for n, v in zip(n_list, ED)], max_spread)


def translation_bound_ratios(f, sp: SpaceParams, ts, epsilon: float = 0.25) -> list[float]:
    """``||T_t f|| / (sum of the four shifted-norm terms)`` for each ``t``.

    Raises :class:`ConfigError` when a shifted exponent pair is not a valid space
    or ``min(alpha, beta)`` is outside the range the bound is stated for.
    """
    gamma_low = 1.0 if sp.is_inf else 1 - 0.5 * sp.inv_p
    gamma = min(sp.alpha, sp.beta)
    if (gamma < gamma_low) if sp.is_inf else (gamma <= gamma_low):
        raise ConfigError(f"min(alpha, beta) = {gamma:g} is below the translation-bound range")
    tb = translation_bound_params(sp, epsilon)
    terms = []
    for name, power, (da, db) in tb.shifted_spaces(sp):
        try:
            terms.append((power, weighted_norm(f, sp.shifted(da, db))))
        except ParameterDomainError as exc:
            raise ConfigError(f"shifted space for term {name} is invalid: {exc}") from exc
    out = []
    disc_cache = {}
    for t in ts:
        bps = getattr(f, "breakpoints", ())
        key = float(t)
        if key not in disc_cache:
            disc_cache[key] = norm_discretization(sp, translated_breakpoints(bps, t) + tuple(bps))
        disc = disc_cache[key]
        lhs = disc.norm_of_values(asymmetric_translate(f, t, disc.nodes))
        rhs = sum(t**pw * nv for pw, nv in terms)
        out.append(lhs / rhs)
    return out


def phi_stability(phi: PhiFunction, lambda0: float, resolution: int = 256) -> dict:
    """The four measured constants at ``resolution`` and ``2 * resolution`` with relative changes."""
    def measure(res):
        return {
            "C1": measured_c1(phi, 2 * res),
            "C2": measured_c2(phi, 2 * res),
            "C3": phi_check_sum3(phi, lambda0, res),
            "C4": phi_check_sum4(phi, res),
        }

    lo, hi = measure(resolution), measure(2 * resolution)
    out = {}
    for k in lo:
        a = getattr(lo[k], "constant", lo[k])
        b = getattr(hi[k], "constant", hi[k])
        flagged = bool(getattr(lo[k], "unbounded", False) or getattr(hi[k], "unbounded", False))
        out[k] = {"value": b, "change": abs(b - a) / abs(a), "unbounded": flagged}
    return out


EXPERIMENTS = {
    "bernstein": verify_bernstein,
    "direct": verify_direct_theorem,
    "inverse": verify_inverse_theorem,
    "equivalence": verify_equivalence,
    "derivative": verify_derivative_theorems,
}
