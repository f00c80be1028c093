"""Generalized modulus of smoothness and modulus-of-continuity-type functions.

``omega(f, delta) = sup_{|t| <= delta} ||T_t f - f||_{p,alpha,beta}``.  Since
``T_{-t} = T_t`` the sup is taken over ``0 < t <= delta`` on a grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DegenerateFunctionError, ParameterDomainError
from .translation_ops import DEFAULT_CONFIG, TranslationConfig, asymmetric_translate, translated_breakpoints
from .weighted_spaces import NORM_NODES, SpaceParams, norm_discretization

N_CAP = 100_000
REFINE = 3


# ---------------------------------------------------------------------------
# phi functions


@dataclass(frozen=True, eq=False)
class PhiFunction:
    """A modulus-of-continuity-type function sampled on ``(0, 1]``."""

    eval: Callable[[np.ndarray], np.ndarray]
    label: str = "phi"

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t <= 0) or np.any(t > 1 + 1e-12):
            raise ParameterDomainError("phi is sampled on (0, 1] only")
        vals = np.broadcast_to(np.asarray(self.eval(t), dtype=float), t.shape)
        if np.any(vals < 0) or not np.all(np.isfinite(vals)):
            raise ParameterDomainError(f"{self.label}: phi must be finite and nonnegative")
        return vals

    @classmethod
    def power(cls, lam: float) -> "PhiFunction":
        lam = float(lam)
        if lam < 0:
            raise ParameterDomainError(f"power phi needs lambda >= 0, got {lam}")
        return cls(lambda t: t**lam, label=f"power:{lam:g}")

    @classmethod
    def constant(cls) -> "PhiFunction":
        return cls(lambda t: np.ones_like(t), label="const")

    @classmethod
    def from_label(cls, label: str) -> "PhiFunction":
        """``"power:<lambda>"`` or ``"const"``."""
        kind, _, arg = label.strip().partition(":")
        if kind == "power" and arg:
            return cls.power(float(arg))
        if kind == "const" and not arg:
            return cls.constant()
        raise ParameterDomainError(f"unknown phi label {label!r}")

    @property
    def exponent(self) -> float | None:
        """The power for ``power:`` labels, 0 for ``const``, else None."""
        if self.label == "const":
            return 0.0
        if self.label.startswith("power:"):
            return float(self.label.split(":", 1)[1])
        return None


def _phi_grid(n_grid: int, t_min: float = 2.0**-20) -> np.ndarray:
    return np.geomspace(t_min, 1.0, n_grid)


def measured_c1(phi: PhiFunction, n_grid: int = 512) -> float:
    """Smallest ``C`` with ``phi(t1) <= C phi(t2)`` for grid points ``t1 <= t2``."""
    v = phi(_phi_grid(n_grid))
    if np.any(v == 0):
        raise DegenerateFunctionError(f"{phi.label} vanishes on the sample grid")
    return float(np.max(np.maximum.accumulate(v) / v))


def measured_c2(phi: PhiFunction, n_grid: int = 512) -> float:
    """Smallest ``C`` with ``phi(2t) <= C phi(t)`` for grid points ``t <= 1/2``."""
    t = _phi_grid(n_grid, 2.0**-21) * 0.5
    v = phi(t)
    if np.any(v == 0):
        raise DegenerateFunctionError(f"{phi.label} vanishes on the sample grid")
    return float(np.max(phi(2 * t) / v))


@dataclass(frozen=True)
class PhiCheck:
    """Measured summation constant.

    ``unbounded`` is set when the summand's tail exponent shows the series
    (or the ratio) cannot stay bounded; ``constant`` is then only the value
    reached at the sampled range.
    """

    constant: float
    unbounded: bool
    n_max: int
    tail_exponent: float
    tail_bound: float = 0.0
    final_ratio: float = math.nan


def _tail_exponent(j: np.ndarray, terms: np.ndarray) -> float:
    a, b = terms[-2], terms[-1]
    if a <= 0 or b <= 0:
        return -math.inf
    return float(math.log(b / a) / math.log(j[-1] / j[-2]))


def phi_check_sum3(phi: PhiFunction, lambda0: float, n_max: int, n_cap: int = N_CAP) -> PhiCheck:
    """``max_{n <= n_max} sum_{j=n+1}^{N} j^(2 lambda0 - 1) phi(1/j) / (n^(2 lambda0) phi(1/n))``.

    The series is summed to ``n_cap`` and the remainder is bounded by the
    integral of the power law fitted to the last terms.  Terms decaying no
    faster than ``1/j`` mark the condition as unbounded.
    """
    if lambda0 < 0:
        raise ParameterDomainError(f"lambda0 must be >= 0, got {lambda0}")
    if not 1 <= n_max < n_cap:
        raise ParameterDomainError(f"need 1 <= n_max < n_cap, got {n_max}, {n_cap}")
    j = np.arange(1, n_cap + 1, dtype=float)
    pv = phi(1.0 / j)
    if np.any(pv[:n_max] == 0):
        raise DegenerateFunctionError(f"{phi.label}(1/n) = 0 for some n <= {n_max}")
    terms = j ** (2 * lambda0 - 1) * pv
    # far-tail exponent from a decade below the cap
    e = _tail_exponent(j[[n_cap // 10 - 1, n_cap - 1]], terms[[n_cap // 10 - 1, n_cap - 1]])
    unbounded = e >= -1.0 - 1e-9
    tail = 0.0
    if not unbounded and math.isfinite(e):
        tail = float(terms[-1] * n_cap ** (-e) * (n_cap + 0.5) ** (e + 1) / (-e - 1))
    suffix = np.cumsum(terms[::-1])[::-1]  # suffix[i] = sum_{k >= i} terms[k]
    n = j[:n_max]
    sums = suffix[1 : n_max + 1] + tail
    ratios = sums / (n ** (2 * lambda0) * pv[:n_max])
    return PhiCheck(float(ratios.max()), bool(unbounded), n_max, e, tail, float(ratios[-1]))


def phi_check_sum4(phi: PhiFunction, n_max: int) -> PhiCheck:
    """``max_{n <= n_max} sum_{j=1}^{n} j phi(1/j) / (n^2 phi(1/n))``.

    Bounded exactly when ``j phi(1/j)`` grows faster than ``1/j``; summands
    decaying like ``1/j`` or faster are flagged.
    """
    if n_max < 2:
        raise ParameterDomainError(f"n_max must be >= 2, got {n_max}")
    j = np.arange(1, n_max + 1, dtype=float)
    pv = phi(1.0 / j)
    if np.any(pv == 0):
        raise DegenerateFunctionError(f"{phi.label}(1/n) = 0 for some n <= {n_max}")
    terms = j * pv
    ratios = np.cumsum(terms) / (j * j * pv)
    k = max(1, n_max // 2)
    e = _tail_exponent(j[[k - 1, n_max - 1]], terms[[k - 1, n_max - 1]])
    return PhiCheck(float(ratios.max()), bool(e <= -1.0 + 1e-9), n_max, e, 0.0, float(ratios[-1]))


def phi_constants(phi: PhiFunction, lambda0: float, resolution: int = 256) -> dict[str, PhiCheck | float]:
    """All four measured constants at one resolution (grid size / ``n_max``)."""
    return {
        "C1": measured_c1(phi, 2 * resolution),
        "C2": measured_c2(phi, 2 * resolution),
        "C3": phi_check_sum3(phi, lambda0, resolution),
        "C4": phi_check_sum4(phi, resolution),
    }


# ---------------------------------------------------------------------------
# modulus of smoothness


@dataclass(frozen=True)
class ModulusSettings:
    t_samples: int = 16
    n_nodes: int = NORM_NODES
    translation: TranslationConfig = DEFAULT_CONFIG

    def __post_init__(self):
        if self.t_samples < 8:
            raise ParameterDomainError(f"t_samples must be >= 8, got {self.t_samples}")


@dataclass(frozen=True, eq=False)
class ModulusCurve:
    deltas: np.ndarray
    values: np.ndarray
    space: SpaceParams
    t_grid: np.ndarray = field(default_factory=lambda: np.zeros(0))
    g_values: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        order = np.argsort(self.deltas)
        if np.any(np.diff(np.asarray(self.values)[order]) < 0):
            raise AssertionError("modulus curve is not nondecreasing in delta")


def translation_defect(f, t: float, sp: SpaceParams, settings: ModulusSettings = ModulusSettings()) -> float:
    """``||T_t f - f||_{p,alpha,beta}``."""
    bps = getattr(f, "breakpoints", ())
    disc = norm_discretization(sp, translated_breakpoints(bps, t), settings.n_nodes)
    x = disc.nodes
    return disc.norm_of_values(asymmetric_translate(f, t, x, settings.translation) - f(x))


def _check_delta(delta: float):
    if not 0 < delta <= math.pi:
        raise ParameterDomainError(f"delta must lie in (0, pi], got {delta}")


def _base_grid(delta: float, n: int) -> np.ndarray:
    return delta * np.arange(1, n + 1) / n


def _refine(ts: np.ndarray, k: int) -> np.ndarray:
    """Points splitting each grid cell next to ``ts[k]`` into ``REFINE`` parts."""
    lo = ts[k - 1] if k > 0 else 0.0
    hi = ts[k + 1] if k + 1 < len(ts) else ts[k]
    pts = []
    for a, b in ((lo, ts[k]), (ts[k], hi)):
        if b > a:
            pts.extend(a + (b - a) * i / REFINE for i in range(1, REFINE))
    return np.array([p for p in pts if p > 0])


def modulus(f, delta: float, sp: SpaceParams, t_samples: int = 16,
            settings: ModulusSettings | None = None) -> float:
    """Grid approximation of ``omega(f, delta)_{p,alpha,beta}``.

    ``t_samples`` equispaced points in ``(0, delta]`` (``delta`` included) are
    searched, then the cells next to the best one are refined three-fold.
    """
    _check_delta(delta)
    settings = settings or ModulusSettings(t_samples=t_samples)
    ts = _base_grid(delta, settings.t_samples)
    g = np.array([translation_defect(f, t, sp, settings) for t in ts])
    extra = _refine(ts, int(np.argmax(g)))
    ge = [translation_defect(f, t, sp, settings) for t in extra]
    return float(max(g.max(), max(ge, default=0.0)))


def modulus_curve(f, deltas: Sequence[float], sp: SpaceParams, t_samples: int = 16,
                  settings: ModulusSettings | None = None) -> ModulusCurve:
    """``omega(f, delta)`` for several ``delta`` from one nested set of ``t`` samples.

    Each ``delta`` contributes its own grid and refinement; every value is the
    max of ``||T_t f - f||`` over all sampled ``t <= delta``, so the curve is
    nondecreasing by construction.
    """
    settings = settings or ModulusSettings(t_samples=t_samples)
    deltas = np.asarray(sorted(float(d) for d in deltas))
    for d in deltas:
        _check_delta(d)
    cache: dict[float, float] = {}

    def g(t: float) -> float:
        if t not in cache:
            cache[t] = translation_defect(f, t, sp, settings)
        return cache[t]

    for d in deltas:
        ts = _base_grid(d, settings.t_samples)
        vals = np.array([g(t) for t in ts])
        for t in _refine(ts, int(np.argmax(vals))):
            g(float(t))
    tg = np.array(sorted(cache))
    gv = np.array([cache[t] for t in tg])
    values = np.array([gv[tg <= d * (1 + 1e-14)].max() for d in deltas])
    return ModulusCurve(deltas, values, sp, tg, gv)
