"""Best weighted polynomial approximation and Jackson-type smoothing operators.

``E_n(f)_{p,alpha,beta}`` is the distance from ``f`` to polynomials of degree
at most ``n - 1``.  Three solvers cover ``p = 2`` (weighted projection),
``p = inf`` (discrete exchange on a dense grid) and the remaining ``p``
(iteratively reweighted least squares).  Polynomials are returned as
Chebyshev-basis :class:`JacobiExpansion` objects.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DegreeViolationError, IterationLimitError, ParameterDomainError
from .ortho_core import (
    CHEBYSHEV,
    JacobiExpansion,
    JacobiParams,
    default_node_count,
    expand_in_jacobi,
    flattened_legendre,
    gauss_jacobi_rule,
    jacobi_norms_sq,
    jacobi_vander,
)
from .translation_ops import (
    DEFAULT_CONFIG,
    TranslationConfig,
    asymmetric_kink_angles,
    asymmetric_translate,
    symmetric_translate,
)
from .weighted_spaces import (
    NORM_NODES,
    Func,
    NormDiscretization,
    SpaceParams,
    norm_discretization,
    sup_grid,
    weighted_norm,
    weighted_rule,
)

TAIL_TOL = 1e-7
EXCHANGE_TOL = 1e-8
IRLS_TOL = 1e-9
IRLS_MAX_ITER = 200
IRLS_FLOOR = 1e-12


class Method(str, Enum):
    PROJECTION_P2 = "projection_p2"
    EXCHANGE_PINF = "exchange_pinf"
    IRLS_GENERAL_P = "irls_general_p"
    JACKSON_ASYM = "jackson_asym"
    JACKSON_SYM = "jackson_sym"


@dataclass(frozen=True, eq=False)
class ApproxResult:
    degree_bound: int
    poly: JacobiExpansion
    error: float
    method: Method
    iterations: int = 0
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.error >= 0:
            raise ValueError(f"approximation error must be >= 0, got {self.error}")
        if len(self.poly) > self.degree_bound + 1:
            raise DegreeViolationError(
                f"{len(self.poly)} coefficients exceed degree bound {self.degree_bound}"
            )


# ---------------------------------------------------------------------------
# solvers


def _node_count(n: int, n_nodes: int | None) -> int:
    return max(n_nodes or NORM_NODES, 2 * n + 32)


def _project_p2(vals, V, w):
    sw = np.sqrt(w)
    coeffs, *_ = np.linalg.lstsq(V * sw[:, None], vals * sw, rcond=None)
    return coeffs


def _exchange(x: np.ndarray, F: np.ndarray, B: np.ndarray, n: int, max_iter: int = 100):
    """Discrete minimax: minimize ``max_i |F_i - (B c)_i|`` by multi-point exchange.

    ``B`` holds the (weighted) basis functions sampled on the increasing grid
    ``x``.  Returns ``(coeffs, max_error, levelled_error, iterations)``.
    """
    targets = -np.cos(np.pi * np.arange(n + 1) / n) if n else np.zeros(1)
    ref = np.searchsorted(x, targets).clip(0, x.size - 1 - n)
    for i in range(1, n + 1):  # keep the reference strictly increasing
        ref[i] = max(ref[i], ref[i - 1] + 1)
    signs = (-1.0) ** np.arange(n + 1)
    scale = max(np.abs(F).max(), 1e-300)
    best = None
    for it in range(1, max_iter + 1):
        A = np.column_stack([B[ref], signs])
        sol = np.linalg.solve(A, F[ref])
        c, h = sol[:-1], sol[-1]
        err = F - B @ c
        emax = float(np.abs(err).max())
        if best is None or emax < best[1]:
            best = (c, emax, abs(h), it)
        if emax <= 1e-14 * scale or emax - abs(h) <= EXCHANGE_TOL * emax:
            return c, emax, abs(h), it
        new = _alternating_extrema(err, n + 1)
        if new is None or np.array_equal(new, ref):
            return best
        ref = new
    raise IterationLimitError("exchange iteration did not level the error", last=best)


def _alternating_extrema(err: np.ndarray, k: int):
    """Indices of ``k`` alternating-sign local extrema of ``err`` including the global max."""
    s = np.sign(err)
    s[s == 0] = 1.0
    starts = np.flatnonzero(np.r_[True, s[1:] != s[:-1]])
    ends = np.r_[starts[1:], err.size]
    idx = np.array([a + int(np.argmax(np.abs(err[a:b]))) for a, b in zip(starts, ends)])
    if idx.size < k:
        return None
    gmax = int(np.argmax(np.abs(err)))
    while idx.size > k:
        if idx[0] != gmax and (idx[-1] == gmax or abs(err[idx[0]]) <= abs(err[idx[-1]])):
            idx = idx[1:]
        else:
            idx = idx[:-1]
    return idx


def _irls(vals, V, w, p: float, c0, max_iter: int = IRLS_MAX_ITER):
    """Minimize ``sum_i w_i |vals_i - (V c)_i|^p`` by reweighted least squares.

    For ``p <= 2`` the plain reweighting step majorizes the objective; for
    ``p > 2`` the step is damped by ``1/(p-1)``, which makes it a Newton step.
    """
    damp = 1.0 if p <= 2 else 1.0 / (p - 1.0)
    c = c0
    for it in range(1, max_iter + 1):
        r = vals - V @ c
        rw = w * np.maximum(np.abs(r), IRLS_FLOOR) ** (p - 2.0)
        c_ls = _project_p2(vals, V, rw)
        c_new = c + damp * (c_ls - c)
        change = np.linalg.norm(c_new - c)
        c = c_new
        if change <= IRLS_TOL * max(1.0, np.linalg.norm(c)):
            return c, it
    raise IterationLimitError(f"IRLS did not converge in {max_iter} iterations",
                              last=c)


def best_approx(f, n: int, sp: SpaceParams, n_nodes: int | None = None,
                max_iter: int = IRLS_MAX_ITER) -> ApproxResult:
    """Best approximation of ``f`` by polynomials of degree ``<= n-1`` in ``L_{p,alpha,beta}``.

    The norm is discretized exactly as :func:`weighted_norm` does it, so the
    returned ``error`` is the minimum of the discretized problem.
    """
    if n < 1:
        raise ParameterDomainError(f"n must be >= 1, got {n}")
    bps = getattr(f, "breakpoints", ())
    if sp.is_inf:
        x = sup_grid(bps)
        w = sp.weight(x)
        F = w * f(x)
        B = jacobi_vander(n, CHEBYSHEV, x) * w[:, None]
        try:
            c, emax, _, iters = _exchange(x, F, B, n)
        except IterationLimitError as exc:
            c, emax, _, iters = exc.last
            raise IterationLimitError(str(exc), last=ApproxResult(
                n - 1, JacobiExpansion(CHEBYSHEV, c), emax, Method.EXCHANGE_PINF, iters)) from exc
        poly = JacobiExpansion(CHEBYSHEV, c)
        err = float(np.abs(F - B @ c).max())
        return ApproxResult(n - 1, poly, err, Method.EXCHANGE_PINF, iters, {"grid_points": x.size})

    m = _node_count(n, n_nodes)
    rule = weighted_rule(sp.alpha * sp.p, sp.beta * sp.p, m, bps)
    disc = NormDiscretization(sp, rule.nodes, rule.weights)
    vals = f(rule.nodes)
    V = jacobi_vander(n, CHEBYSHEV, rule.nodes)
    if sp.p == 2.0:
        c = _project_p2(vals, V, rule.weights)
        method, iters = Method.PROJECTION_P2, 0
    else:
        # start from the least-squares fit in the same weight
        c = _project_p2(vals, V, rule.weights)
        try:
            c, iters = _irls(vals, V, rule.weights, sp.p, c, max_iter)
        except IterationLimitError as exc:
            c = exc.last
            raise IterationLimitError(str(exc), last=ApproxResult(
                n - 1, JacobiExpansion(CHEBYSHEV, c), disc.norm_of_values(vals - V @ c),
                Method.IRLS_GENERAL_P, max_iter)) from exc
        method = Method.IRLS_GENERAL_P
    err = disc.norm_of_values(vals - V @ c)
    return ApproxResult(n - 1, JacobiExpansion(CHEBYSHEV, c), err, method, iters,
                        {"quadrature_nodes": rule.nodes.size, "rule": rule.kind})


def best_approx_sequence(f, ns, sp: SpaceParams, n_nodes: int | None = None) -> list[ApproxResult]:
    """:func:`best_approx` for increasing ``ns``; asserts ``E_n`` is nonincreasing."""
    out = [best_approx(f, n, sp, n_nodes) for n in ns]
    errs = [r.error for r in out]
    for a, b in zip(errs, errs[1:]):
        if b > a + 1e-10 * max(1.0, a):
            raise AssertionError(f"E_n increased from {a!r} to {b!r}")
    return out


# ---------------------------------------------------------------------------
# Jackson kernels and operators


@dataclass(frozen=True)
class JacksonKernelSpec:
    q: int
    m: int

    def __post_init__(self):
        if int(self.q) != self.q or int(self.m) != self.m or self.q < 1 or self.m < 1:
            raise ParameterDomainError(f"need integers q >= 1, m >= 1, got ({self.q}, {self.m})")

    @property
    def degree_bound(self) -> int:
        return (self.q + 2) * (self.m - 1)


def jackson_kernel(spec: JacksonKernelSpec, t):
    """``(sin(m t / 2) / sin(t / 2))^(2q)``, equal to ``m^(2q)`` at ``t = 0``."""
    t = np.asarray(t, dtype=float)
    half = 0.5 * t
    s = np.sin(half)
    small = np.abs(s) < 1e-300
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(small, float(spec.m), np.sin(spec.m * half) / np.where(small, 1.0, s))
    out = ratio ** (2 * spec.q)
    return float(out) if out.ndim == 0 else out


def _operator_kernel(spec: JacksonKernelSpec, u: np.ndarray) -> np.ndarray:
    """The smoothing kernel as a function of ``u = cos t``.

    The operators raise the Fejer-type factor to the power ``2(q+2)``; that is
    the kernel whose cosine degree equals the bound ``(q+2)(m-1)``.
    """
    return jackson_kernel(JacksonKernelSpec(spec.q + 2, spec.m), np.arccos(np.clip(u, -1, 1)))


def m_for_degree(n: int, q: int) -> int:
    """Largest ``m`` with ``(q+2)(m-1) <= n-1``, i.e. ``(n-1)/(q+2) < m <= (n-1)/(q+2) + 1``."""
    if n < 1:
        raise ParameterDomainError(f"n must be >= 1, got {n}")
    return (n - 1) // (q + 2) + 1


def _outer_nodes(spec: JacksonKernelSpec, f, cfg: TranslationConfig) -> int:
    kdeg = spec.degree_bound
    d = getattr(f, "degree", None)
    if d is None:
        # non-polynomial input: resolve the kernel and give the translate room
        return max(cfg.outer_nodes, 4 * spec.q * spec.m, kdeg + 32)
    return max(cfg.outer_nodes, 4 * spec.q * spec.m, (kdeg + d + 2) // 2 + 8)


@dataclass(frozen=True, eq=False)
class _Smoother:
    """``x -> sum_i W_i translate(f, t_i, x)`` with ``sum_i W_i = 1``."""

    f: object
    ts: np.ndarray
    weights: np.ndarray
    translate: object

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        acc = np.zeros(x.shape)
        for t, w in zip(self.ts, self.weights):
            acc = acc + w * self.translate(self.f, t, x)
        return acc


@dataclass(frozen=True, eq=False)
class _SplitAsymSmoother:
    """The asymmetric smoother for ``f`` with breakpoints.

    For each ``x`` the ``t`` range is cut where ``T_t f(x)`` has kinks, and each
    piece is integrated in ``u = cos t`` with endpoint-flattened Gauss-Legendre
    nodes against ``(1 - u^2) K(u) / gamma_m``.
    """

    f: object
    spec: "JacksonKernelSpec"
    n_piece: int
    gamma: float
    cfg: TranslationConfig

    def __call__(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        kinks = asymmetric_kink_angles(self.f.breakpoints, x)
        edges = np.sort(np.column_stack([np.zeros(x.size), kinks, np.full(x.size, np.pi)]), axis=1)
        smap, wmap = flattened_legendre(self.n_piece)
        acc = np.zeros(x.size)
        for j in range(edges.shape[1] - 1):
            u_lo, u_hi = np.cos(edges[:, j + 1]), np.cos(edges[:, j])
            width = u_hi - u_lo
            for sv, wv in zip(smap, wmap):
                u = u_lo + width * sv
                w = width * wv * (1 - u * u) * _operator_kernel(self.spec, u)
                acc += w * asymmetric_translate(self.f, np.arccos(u), x, self.cfg)
        return acc / self.gamma


def _energy(f, basis: JacobiParams, n_nodes: int) -> float:
    rule = gauss_jacobi_rule(n_nodes, basis.nu, basis.mu)
    return float(rule.weights @ np.asarray(f(rule.nodes), dtype=float) ** 2)


def _finish(f, smoother, spec_bound: int, basis: JacobiParams, sp: SpaceParams | None,
            method: Method, info: dict) -> ApproxResult:
    n_terms = spec_bound + 17
    e = expand_in_jacobi(smoother, n_terms, basis)
    h = jacobi_norms_sq(n_terms, basis)
    energies = e.coeffs**2 * h
    # relative to the larger of the output and input energies: an input made of
    # annihilated modes yields Q = 0 up to rounding
    ref = max(energies.sum(), _energy(f, basis, default_node_count(n_terms)))
    tail = float(energies[spec_bound + 1 :].sum() / ref) if ref > 0 else 0.0
    info = dict(info, tail_energy=tail, projection_terms=n_terms)
    if tail >= TAIL_TOL:
        raise DegreeViolationError(
            f"smoothed polynomial has relative tail energy {tail:.3e} beyond degree {spec_bound}"
        )
    poly = e.truncate(spec_bound + 1)
    err = 0.0
    if sp is not None:
        diff = Func(lambda x: f(x) - poly(x), label="f-Q", breakpoints=getattr(f, "breakpoints", ()))
        err = weighted_norm(diff, sp)
    return ApproxResult(spec_bound, poly, err, method, 0, info)


def jackson_operator_asym(f, spec: JacksonKernelSpec, cfg: TranslationConfig = DEFAULT_CONFIG,
                          sp: SpaceParams | None = None) -> ApproxResult:
    """``Q(x) = (1/gamma_m) int_0^pi T_t f(x) K(t) sin^3 t dt`` as a polynomial.

    With ``u = cos t`` the measure ``sin^3 t dt`` becomes ``(1 - u^2) du``, so the
    outer integral is a Gauss-Jacobi ``(1, 1)`` rule, exact whenever ``f`` is a
    polynomial.  When ``f`` has breakpoints the ``t`` range is split per ``x``
    at the kinks of ``t -> T_t f(x)``.  ``error`` is ``||f - Q||`` in ``sp``
    (0 when ``sp`` is None).
    """
    n_out = _outer_nodes(spec, f, cfg)
    rule = gauss_jacobi_rule(n_out, 1.0, 1.0)
    K = _operator_kernel(spec, rule.nodes)
    info = {"q": spec.q, "m": spec.m, "kernel_power": 2 * (spec.q + 2)}
    if getattr(f, "breakpoints", ()):
        n_piece = max(cfg.outer_nodes, 2 * spec.degree_bound + 32)
        sm = _SplitAsymSmoother(f, spec, n_piece, float(rule.weights @ K), cfg)
        info.update(outer_nodes_per_piece=n_piece)
    else:
        W = rule.weights * K
        W = W / W.sum()
        sm = _Smoother(f, np.arccos(rule.nodes), W, lambda g, t, x: asymmetric_translate(g, t, x, cfg))
        info.update(outer_nodes=n_out)
    return _finish(f, sm, spec.degree_bound, CHEBYSHEV, sp, Method.JACKSON_ASYM, info)


def jackson_operator_sym(f, spec: JacksonKernelSpec, jp: JacobiParams, sp: SpaceParams | None = None,
                         cfg: TranslationConfig = DEFAULT_CONFIG) -> ApproxResult:
    """``Q(x) = (1/gamma_m) int_0^pi tau_t f(x) K(t) sin^(2nu+1)(t/2) cos^(2mu+1)(t/2) dt``.

    With ``u = cos t`` the angular measure is proportional to
    ``(1-u)^nu (1+u)^mu du``, handled by a Gauss-Jacobi ``(nu, mu)`` rule.
    The result is expanded in the ``(nu, mu)`` basis and has degree at most
    ``(q+2)(m-1)``.
    """
    if not isinstance(jp, JacobiParams):
        jp = JacobiParams(*jp)
    n_out = _outer_nodes(spec, f, cfg)
    rule = gauss_jacobi_rule(n_out, jp.nu, jp.mu)
    W = rule.weights * _operator_kernel(spec, rule.nodes)
    W = W / W.sum()
    ts = np.arccos(rule.nodes)
    sm = _Smoother(f, ts, W, lambda g, t, x: symmetric_translate(g, t, x, jp, cfg))
    return _finish(f, sm, spec.degree_bound, jp, sp, Method.JACKSON_SYM,
                   {"q": spec.q, "m": spec.m, "outer_nodes": n_out, "kernel_power": 2 * (spec.q + 2),
                    "nu": jp.nu, "mu": jp.mu})


def jackson_for_degree(f, n: int, q: int, jp: JacobiParams, sp: SpaceParams,
                       cfg: TranslationConfig = DEFAULT_CONFIG) -> ApproxResult:
    """Symmetric Jackson polynomial of degree ``<= n-1`` (``m`` from :func:`m_for_degree`)."""
    spec = JacksonKernelSpec(q, m_for_degree(n, q))
    res = jackson_operator_sym(f, spec, jp, sp, cfg)
    if res.poly.degree > n - 1:
        raise DegreeViolationError(f"degree {res.poly.degree} exceeds n-1 = {n - 1}")
    return res


# ---------------------------------------------------------------------------
# dyadic decomposition


def dyadic_blocks(f, N: int, sp: SpaceParams, n_nodes: int | None = None) -> list[JacobiExpansion]:
    """``Q_0 = P_1`` and ``Q_k = P_{2^k} - P_{2^(k-1)}`` from best approximants ``P_n``."""
    if not 0 <= N <= 10:
        raise ParameterDomainError(f"N must lie in [0, 10], got {N}")
    polys = [best_approx(f, 2**k, sp, n_nodes).poly for k in range(N + 1)]
    return [polys[0]] + [b - a for a, b in zip(polys, polys[1:])]
