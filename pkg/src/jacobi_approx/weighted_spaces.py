"""Weighted L_p spaces on (-1, 1), the function wrapper, and parameter regimes."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import ParameterDomainError, SamplingError
from .ortho_core import (
    JacobiExpansion,
    JacobiParams,
    QuadratureRule,
    gauss_jacobi_rule,
    gauss_legendre,
)

INF = math.inf
_EQ_TOL = 1e-12
ENDPOINT_GAP = 1e-6
SUP_GRID_POINTS = 4097
NORM_NODES = 256


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= _EQ_TOL * max(1.0, abs(a), abs(b))


@dataclass(frozen=True)
class SpaceParams:
    """``(p, alpha, beta)`` of the space with norm ``||f (1-x)^alpha (1+x)^beta||_p``.

    ``p`` may be ``math.inf``.  Construction enforces the integrability
    conditions ``alpha, beta > -1/p`` (``>= 0`` when ``p`` is infinite).
    """

    p: float
    alpha: float
    beta: float

    def __post_init__(self):
        p = float(self.p)
        a, b = float(self.alpha), float(self.beta)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)
        if math.isnan(p) or p < 1:
            raise ParameterDomainError(f"p must be >= 1 or inf, got {p}")
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ParameterDomainError("weight exponents must be finite")
        if p == INF:
            if a < -_EQ_TOL or b < -_EQ_TOL:
                raise ParameterDomainError(f"p=inf needs alpha, beta >= 0, got ({a}, {b})")
        elif a <= -1 / p or b <= -1 / p:
            raise ParameterDomainError(f"p={p} needs alpha, beta > {-1 / p:g}, got ({a}, {b})")

    @property
    def is_inf(self) -> bool:
        return self.p == INF

    @property
    def inv_p(self) -> float:
        """``1/p``, with ``0`` for ``p = inf``."""
        return 0.0 if self.is_inf else 1.0 / self.p

    def weight(self, x):
        x = np.asarray(x, dtype=float)
        return (1 - x) ** self.alpha * (1 + x) ** self.beta

    def shifted(self, d_alpha: float, d_beta: float) -> "SpaceParams":
        """Same ``p`` with exponents ``alpha + d_alpha``, ``beta + d_beta`` (validated)."""
        return SpaceParams(self.p, self.alpha + d_alpha, self.beta + d_beta)

    def __str__(self):
        p = "inf" if self.is_inf else f"{self.p:g}"
        return f"L_{{{p},{self.alpha:g},{self.beta:g}}}"


def parse_p(value) -> float:
    if isinstance(value, str) and value.strip().lower() in {"inf", "infinity", "oo"}:
        return INF
    return float(value)


# ---------------------------------------------------------------------------
# functions


@dataclass(frozen=True, eq=False)
class Func:
    """Real function on (-1, 1) given by a vectorized sampler.

    ``breakpoints`` lists interior points where the function is not smooth;
    quadrature rules split there.  ``expansion`` is set when the function is a
    finite Jacobi series, in which case its degree is known exactly.
    """

    sampler: Callable[[np.ndarray], np.ndarray]
    label: str = "f"
    expansion: JacobiExpansion | None = None
    breakpoints: tuple = field(default_factory=tuple)

    def __post_init__(self):
        bps = tuple(sorted({float(b) for b in self.breakpoints if -1 < b < 1}))
        object.__setattr__(self, "breakpoints", bps)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        vals = np.broadcast_to(np.asarray(self.sampler(x), dtype=float), x.shape)
        if not np.all(np.isfinite(vals)):
            raise SamplingError(f"{self.label}: non-finite sample")
        return vals

    @property
    def degree(self) -> int | None:
        return None if self.expansion is None else self.expansion.degree

    @classmethod
    def from_expansion(cls, e: JacobiExpansion, label: str = "series") -> "Func":
        return cls(e, label=label, expansion=e)

    @classmethod
    def constant(cls, c: float, label: str | None = None) -> "Func":
        c = float(c)
        from .ortho_core import CHEBYSHEV

        return cls(
            lambda x: np.full(np.shape(x), c),
            label=label or f"const({c:g})",
            expansion=JacobiExpansion(CHEBYSHEV, [c]),
        )

    def _combine(self, other: "Func", sign: float, label: str) -> "Func":
        f, g = self.sampler, other.sampler
        e = None
        if self.expansion is not None and other.expansion is not None:
            if self.expansion.params == other.expansion.params:
                e = self.expansion + other.expansion * sign
        return Func(
            lambda x: f(x) + sign * g(x),
            label=label,
            expansion=e,
            breakpoints=self.breakpoints + other.breakpoints,
        )

    def __add__(self, other):
        if not isinstance(other, Func):
            other = Func.constant(other)
        return self._combine(other, 1.0, f"({self.label}+{other.label})")

    def __sub__(self, other):
        if not isinstance(other, Func):
            other = Func.constant(other)
        return self._combine(other, -1.0, f"({self.label}-{other.label})")

    def __mul__(self, c):
        c = float(c)
        f = self.sampler
        e = None if self.expansion is None else self.expansion * c
        return Func(lambda x: c * f(x), label=f"{c:g}*{self.label}", expansion=e,
                    breakpoints=self.breakpoints)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0


# ---------------------------------------------------------------------------
# quadrature with breakpoints

_GRADING = 0.15
_FINEST = 1e-13


def _panel_count(n_nodes: int, length: float) -> int:
    return int(math.ceil(0.8 * n_nodes * length)) + 12


def _graded_panels(c: float, h: float) -> list[tuple[float, float]]:
    """Subintervals of [c, c+h] (or [c+h, c] for h < 0) shrinking geometrically to c."""
    levels = max(1, int(math.ceil(math.log(_FINEST / abs(h)) / math.log(_GRADING))))
    cuts = [c + h * _GRADING**j for j in range(levels + 1)] + [c]
    return [(min(u, v), max(u, v)) for u, v in zip(cuts[:-1], cuts[1:])]


def weighted_rule(a: float, b: float, n_nodes: int, breakpoints: Iterable[float] = ()) -> QuadratureRule:
    """Rule for ``int g(x) (1-x)^a (1+x)^b dx`` that resolves kinks of ``g``.

    Without breakpoints this is the ``n_nodes``-point Gauss-Jacobi rule.  With
    breakpoints the interval is cut there; the two end pieces keep the singular
    endpoint weight inside a Gauss-Jacobi rule, and the pieces next to each
    breakpoint are refined geometrically toward it with Gauss-Legendre panels.
    """
    bps = sorted({float(c) for c in breakpoints if -1 + 1e-9 < c < 1 - 1e-9})
    if not bps:
        return gauss_jacobi_rule(n_nodes, a, b)
    edges = [-1.0] + bps + [1.0]
    xs: list[np.ndarray] = []
    ws: list[np.ndarray] = []

    def weight(x):
        return (1 - x) ** a * (1 + x) ** b

    def legendre_panel(lo, hi):
        m = _panel_count(n_nodes, hi - lo)
        y, w = gauss_legendre(m)
        x = 0.5 * (hi - lo) * y + 0.5 * (hi + lo)
        xs.append(x)
        ws.append(0.5 * (hi - lo) * w * weight(x))

    for lo, hi in zip(edges[:-1], edges[1:]):
        mid = 0.5 * (lo + hi)
        for near, far in ((lo, mid), (hi, mid)):
            length = abs(far - near)
            if near in (-1.0, 1.0):
                m = _panel_count(n_nodes, length)
                if near == -1.0:
                    y, w = gauss_jacobi_rule(m, 0.0, b).nodes, gauss_jacobi_rule(m, 0.0, b).weights
                    x = -1 + 0.5 * length * (y + 1)
                    xs.append(x)
                    ws.append(w * (0.5 * length) ** (b + 1) * (1 - x) ** a)
                else:
                    y, w = gauss_jacobi_rule(m, a, 0.0).nodes, gauss_jacobi_rule(m, a, 0.0).weights
                    x = 1 - 0.5 * length * (1 - y)
                    xs.append(x)
                    ws.append(w * (0.5 * length) ** (a + 1) * (1 + x) ** b)
            else:
                for u, v in _graded_panels(near, far - near):
                    legendre_panel(u, v)
    x = np.concatenate(xs)
    w = np.concatenate(ws)
    order = np.argsort(x, kind="stable")
    return QuadratureRule(x[order], w[order], "composite", a, b, 0)


def sup_grid(breakpoints: Iterable[float] = (), n_points: int = SUP_GRID_POINTS) -> np.ndarray:
    """Chebyshev grid for max-norms, plus breakpoints, kept ``1e-6`` inside (-1, 1)."""
    j = np.arange(n_points)
    x = np.cos((2 * j + 1) * np.pi / (2 * n_points))
    extra = [c for c in breakpoints if -1 < c < 1]
    x = np.clip(np.concatenate([x, extra]), -1 + ENDPOINT_GAP, 1 - ENDPOINT_GAP)
    return np.unique(x)


@dataclass(frozen=True, eq=False)
class NormDiscretization:
    """Sampling points and weights realizing ``||.||_{p,alpha,beta}`` for fixed breakpoints."""

    sp: SpaceParams
    nodes: np.ndarray
    weights: np.ndarray  # quadrature weights (p < inf) or pointwise weights (p = inf)

    def norm_of_values(self, vals) -> float:
        vals = np.asarray(vals, dtype=float)
        if not np.all(np.isfinite(vals)):
            raise SamplingError("non-finite sample in norm evaluation")
        if self.sp.is_inf:
            return float(np.max(np.abs(vals) * self.weights)) if vals.size else 0.0
        p = self.sp.p
        if p == 2.0:
            return float(math.sqrt(max(self.weights @ (vals * vals), 0.0)))
        return float((self.weights @ np.abs(vals) ** p) ** (1.0 / p))

    def norm(self, f) -> float:
        return self.norm_of_values(f(self.nodes))


def norm_discretization(sp: SpaceParams, breakpoints: Iterable[float] = (),
                        n_nodes: int = NORM_NODES) -> NormDiscretization:
    if sp.is_inf:
        x = sup_grid(breakpoints)
        return NormDiscretization(sp, x, sp.weight(x))
    rule = weighted_rule(sp.alpha * sp.p, sp.beta * sp.p, n_nodes, breakpoints)
    return NormDiscretization(sp, rule.nodes, rule.weights)


def weighted_norm(f, sp: SpaceParams, n_nodes: int = NORM_NODES,
                  breakpoints: Sequence[float] | None = None) -> float:
    """``||f(x) (1-x)^alpha (1+x)^beta||_p`` by quadrature (or a dense grid for ``p = inf``).

    For finite ``p`` the integral of ``|f|^p`` is taken against the Gauss-Jacobi
    weight with exponents ``(alpha p, beta p)`` and at least ``n_nodes`` nodes;
    breakpoints of ``f`` (or those passed explicitly) split the rule.
    """
    if breakpoints is None:
        breakpoints = getattr(f, "breakpoints", ())
    return norm_discretization(sp, breakpoints, n_nodes).norm(f)


# ---------------------------------------------------------------------------
# derived quantities


def lambda0_for_theorems(sp: SpaceParams) -> float:
    """``max(|alpha - beta|, alpha - 3/2 + 1/(2p), beta - 3/2 + 1/(2p))``."""
    h = 0.5 * sp.inv_p
    return max(abs(sp.alpha - sp.beta), sp.alpha - 1.5 + h, sp.beta - 1.5 + h)


@dataclass(frozen=True)
class TranslationBoundParams:
    """Exponent shifts in the norm bound for the asymmetric translation."""

    gamma: float
    gamma1: float
    gamma2: float
    gamma3: float
    epsilon: float

    def shifted_spaces(self, sp: SpaceParams) -> list[tuple[str, float, tuple[float, float]]]:
        """``(name, power of t, (d_alpha, d_beta))`` for the four terms of the bound."""
        g1, g2, g3 = self.gamma1, self.gamma2, self.gamma3
        return [
            ("base", 0.0, (0.0, 0.0)),
            ("gamma12", 2 * (g1 + g2), (-g1, -g2)),
            ("gamma3", 2 * g3, (-g3, -g3)),
            ("gamma123", 2 * (g1 + g2 + g3), (-g1 - g3, -g2 - g3)),
        ]


def translation_bound_params(sp: SpaceParams, epsilon: float = 0.25) -> TranslationBoundParams:
    if not 0 < epsilon < 0.5:
        raise ParameterDomainError(f"epsilon must lie in (0, 1/2), got {epsilon}")
    a, b = sp.alpha, sp.beta
    gamma = min(a, b)
    g1 = a - b if a > b else 0.0
    g2 = 0.0 if a > b else b - a
    if sp.p == 1.0:
        g3 = gamma - 1 if gamma >= 1 else 0.0
    else:
        edge = 1.5 - 0.5 * sp.inv_p
        g3 = gamma - edge + epsilon if gamma >= edge else 0.0
    return TranslationBoundParams(gamma, g1, g2, g3, epsilon)


# ---------------------------------------------------------------------------
# regimes


class Regime(str, Enum):
    LEMMA_E_D = "lemma_E_D"
    THM_DIRECT = "thm_direct"
    THM_INVERSE = "thm_inverse"
    THM_EQUIV = "thm_equiv"
    THM_E_WD = "thm_E_wD"


@dataclass(frozen=True)
class RegimeCheck:
    ok: bool
    reason: str

    def __bool__(self):
        return self.ok


def _fmt(v: float) -> str:
    return f"{v:.6g}"


class _Checker:
    def __init__(self):
        self.violation: str | None = None

    def need(self, cond: bool, text: str):
        if self.violation is None and not cond:
            self.violation = text


def _band(ck: _Checker, name: str, v: float, sp: SpaceParams, upper: float, p1_low: float,
          mid_low: float, inf_low: float):
    """Three-way ``p = 1 / 1 < p < inf / p = inf`` band used by the Jacobi-operator regimes.

    ``upper`` is the parameter (nu, mu, nu0 or mu0) bounding the exponent.
    """
    h = 0.5 * sp.inv_p
    if sp.p == 1.0:
        ck.need(v > p1_low, f"{name} > {_fmt(p1_low)} (p=1), got {_fmt(v)}")
        ck.need(v <= upper + _EQ_TOL, f"{name} <= {_fmt(upper)} (p=1), got {_fmt(v)}")
    elif sp.is_inf:
        ck.need(v >= inf_low - _EQ_TOL, f"{name} >= {_fmt(inf_low)} (p=inf), got {_fmt(v)}")
        ck.need(v < upper + 0.5, f"{name} < {_fmt(upper + 0.5)} (p=inf), got {_fmt(v)}")
    else:
        ck.need(v > mid_low, f"{name} > {_fmt(mid_low)}, got {_fmt(v)}")
        bound = upper + 0.5 - h
        ck.need(v < bound, f"{name} < {_fmt(bound)}, got {_fmt(v)}")


def validate_regime(sp: SpaceParams, jp: JacobiParams | None, regime) -> RegimeCheck:
    """Check ``(p, alpha, beta, nu, mu)`` against the hypotheses of one result.

    Returns a :class:`RegimeCheck` carrying the first violated inequality.
    """
    regime = Regime(regime)
    ck = _Checker()
    a, b = sp.alpha, sp.beta
    h = 0.5 * sp.inv_p

    if regime is Regime.LEMMA_E_D:
        if jp is None:
            return RegimeCheck(False, "Jacobi parameters required")
        nu, mu = jp.nu, jp.mu
        case = jp.case
        if case == 1:
            ck.need(_close(a, -h) and _close(b, -h),
                    f"alpha = beta = {_fmt(-h)} when nu = mu = -1/2, got ({_fmt(a)}, {_fmt(b)})")
        elif case == 2:
            ck.need(_close(a, b), f"alpha = beta when nu = mu, got ({_fmt(a)}, {_fmt(b)})")
            _band(ck, "alpha", a, sp, nu, -0.5, -h, 0.0)
        elif case == 3:
            ck.need(_close(b, -h), f"beta = {_fmt(-h)} when mu = -1/2, got {_fmt(b)}")
            _band(ck, "alpha", a, sp, nu, -0.5, -h, 0.0)
        else:
            ck.need(nu - mu > a - b, f"nu - mu > alpha - beta, got {_fmt(nu - mu)} <= {_fmt(a - b)}")
            ck.need(a - b >= -_EQ_TOL, f"alpha - beta >= 0, got {_fmt(a - b)}")
            _band(ck, "beta", b, sp, mu, -0.5, -h, 0.0)

    elif regime is Regime.THM_DIRECT:
        _direct(ck, sp)

    elif regime is Regime.THM_INVERSE:
        _inverse(ck, sp)

    elif regime is Regime.THM_EQUIV:
        _inverse(ck, sp)
        _direct(ck, sp)

    else:  # THM_E_WD
        if jp is None:
            return RegimeCheck(False, "Jacobi parameters required")
        nu, mu = jp.nu, jp.mu
        cap = 2.5 - h
        nu0, mu0 = min(nu, cap), min(mu, cap)
        if _close(nu, mu) and nu > 0.5:
            ck.need(_close(a, b), f"alpha = beta when nu = mu, got ({_fmt(a)}, {_fmt(b)})")
            _band(ck, "alpha", a, sp, nu0, 0.5, 1 - h, 1.0)
        elif nu > mu > 0.5:
            ck.need(nu - mu > a - b, f"nu - mu > alpha - beta, got {_fmt(nu - mu)} <= {_fmt(a - b)}")
            ck.need(a - b >= -_EQ_TOL, f"alpha - beta >= 0, got {_fmt(a - b)}")
            _band(ck, "beta", b, sp, mu0, 0.5, 1 - h, 1.0)
        else:
            ck.need(False, f"mu > 1/2 required (nu = mu > 1/2 or nu > mu > 1/2), got nu={_fmt(nu)}, mu={_fmt(mu)}")

    if ck.violation is None:
        return RegimeCheck(True, "ok")
    return RegimeCheck(False, ck.violation)


def _direct(ck: _Checker, sp: SpaceParams):
    if sp.p == 1.0:
        ck.need(sp.alpha <= 2 + _EQ_TOL, f"alpha <= 2 (p=1), got {_fmt(sp.alpha)}")
        ck.need(sp.beta <= 2 + _EQ_TOL, f"beta <= 2 (p=1), got {_fmt(sp.beta)}")
    else:
        top = 3 - sp.inv_p
        ck.need(sp.alpha < top, f"alpha < {_fmt(top)}, got {_fmt(sp.alpha)}")
        ck.need(sp.beta < top, f"beta < {_fmt(top)}, got {_fmt(sp.beta)}")


def _inverse(ck: _Checker, sp: SpaceParams):
    if sp.is_inf:
        ck.need(sp.alpha >= 1 - _EQ_TOL, f"alpha >= 1 (p=inf), got {_fmt(sp.alpha)}")
        ck.need(sp.beta >= 1 - _EQ_TOL, f"beta >= 1 (p=inf), got {_fmt(sp.beta)}")
    else:
        low = 1 - 0.5 * sp.inv_p
        ck.need(sp.alpha > low, f"alpha > {_fmt(low)}, got {_fmt(sp.alpha)}")
        ck.need(sp.beta > low, f"beta > {_fmt(low)}, got {_fmt(sp.beta)}")
