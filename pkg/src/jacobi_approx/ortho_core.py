"""Jacobi polynomials normalized at x = 1, their expansions, and Gauss rules.

Throughout the package ``P_n^{(nu, mu)}`` denotes the Jacobi polynomial that is
orthogonal with weight ``(1 - x)**nu * (1 + x)**mu`` on [-1, 1] and scaled so
that ``P_n(1) = 1``.  With ``nu = mu = -1/2`` this is exactly the Chebyshev
polynomial ``T_n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import gammaln, roots_jacobi

from .errors import BasisMismatchError, ParameterDomainError, SamplingError

_EQ_TOL = 1e-12


@dataclass(frozen=True)
class JacobiParams:
    """Index pair ``(nu, mu)`` of a Jacobi family with ``nu >= mu >= -1/2``."""

    nu: float
    mu: float

    def __post_init__(self):
        nu, mu = float(self.nu), float(self.mu)
        if not (math.isfinite(nu) and math.isfinite(mu)):
            raise ParameterDomainError(f"non-finite Jacobi parameters ({nu}, {mu})")
        if mu < -0.5 - _EQ_TOL or nu < mu - _EQ_TOL:
            raise ParameterDomainError(
                f"Jacobi parameters must satisfy nu >= mu >= -1/2, got nu={nu}, mu={mu}"
            )
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "mu", mu)

    @property
    def case(self) -> int:
        """Which of the four symmetric-translation cases the pair falls in (1..4)."""
        at_half = abs(self.mu + 0.5) <= _EQ_TOL
        equal = abs(self.nu - self.mu) <= _EQ_TOL
        if equal and at_half:
            return 1
        if equal:
            return 2
        if at_half:
            return 3
        return 4

    def __str__(self):
        return f"({self.nu:g},{self.mu:g})"


CHEBYSHEV = JacobiParams(-0.5, -0.5)
LEGENDRE = JacobiParams(0.0, 0.0)


# ---------------------------------------------------------------------------
# recurrence


def _check_ab(a: float, b: float) -> None:
    if not (a > -1 and b > -1):
        raise ParameterDomainError(f"Jacobi exponents must exceed -1, got ({a}, {b})")


def _standard_columns(nmax: int, a: float, b: float, x: np.ndarray):
    """Yield the classical (unnormalized) P_0..P_nmax at ``x``, one degree at a time."""
    p_prev = np.ones_like(x)
    yield p_prev
    if nmax == 0:
        return
    p = (a + 1) + 0.5 * (a + b + 2) * (x - 1)
    yield p
    ab = a + b
    for n in range(2, nmax + 1):
        c = 2 * n + ab
        a1 = 2 * n * (n + ab) * (c - 2)
        a2 = (c - 1) * (a * a - b * b)
        a3 = (c - 2) * (c - 1) * c
        a4 = 2 * (n + a - 1) * (n + b - 1) * c
        p, p_prev = ((a2 + a3 * x) * p - a4 * p_prev) / a1, p
        yield p


@lru_cache(maxsize=256)
def _values_at_one(nmax: int, a: float, b: float) -> np.ndarray:
    one = np.ones(1)
    vals = np.array([col[0] for col in _standard_columns(nmax, a, b, one)])
    vals.setflags(write=False)
    return vals


def jacobi_vander(n_terms: int, params: JacobiParams, x) -> np.ndarray:
    """Matrix with columns ``P_0(x) .. P_{n_terms-1}(x)`` (normalized at 1)."""
    x = np.asarray(x, dtype=float)
    a, b = params.nu, params.mu
    if n_terms < 1:
        return np.zeros(x.shape + (0,))
    scale = _values_at_one(n_terms - 1, a, b)
    out = np.empty(x.shape + (n_terms,))
    for k, col in enumerate(_standard_columns(n_terms - 1, a, b, x)):
        out[..., k] = col / scale[k]
    return out


def jacobi_eval(n: int, params: JacobiParams, x):
    """Evaluate ``P_n^{(nu, mu)}(x)`` with the normalization ``P_n(1) = 1``.

    Uses the classical three-term recurrence and divides by the same recurrence
    run at ``x = 1``, so the value at 1 is reproduced to rounding.
    """
    if n < 0:
        raise ParameterDomainError(f"degree must be non-negative, got {n}")
    if not isinstance(params, JacobiParams):
        params = JacobiParams(*params)
    x_arr = np.asarray(x, dtype=float)
    col = None
    for col in _standard_columns(n, params.nu, params.mu, x_arr):
        pass
    val = col / _values_at_one(n, params.nu, params.mu)[n]
    return float(val) if np.ndim(val) == 0 else val


def jacobi_eigenvalue(n: int, params: JacobiParams) -> float:
    """Magnitude ``n (n + nu + mu + 1)`` of the eigenvalue of D on ``P_n``."""
    return n * (n + params.nu + params.mu + 1.0)


def jacobi_norms_sq(n_terms: int, params: JacobiParams) -> np.ndarray:
    """Closed-form ``int P_k^2 (1-x)^nu (1+x)^mu dx`` for the normalized polynomials."""
    a, b = params.nu, params.mu
    k = np.arange(n_terms, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_h = (
            (a + b + 1) * math.log(2.0)
            - np.log(2 * k + a + b + 1)
            + gammaln(k + a + 1)
            + gammaln(k + b + 1)
            - gammaln(k + a + b + 1)
            - gammaln(k + 1)
        )
    if abs(a + b + 1) < _EQ_TOL and n_terms:
        # a + b = -1 only for the Chebyshev pair; h_0 = pi there
        log_h[0] = math.log(math.pi)
    log_p1 = gammaln(k + a + 1) - gammaln(a + 1) - gammaln(k + 1)
    return np.exp(log_h - 2 * log_p1)


# ---------------------------------------------------------------------------
# quadrature


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and positive weights for ``int g(x) w(x) dx`` over [-1, 1].

    ``kind`` is ``"gauss_jacobi"`` (weight ``(1-x)^a (1+x)^b``),
    ``"gauss_chebyshev"`` (weight ``1/sqrt(1-x^2)``) or ``"composite"``.
    """

    nodes: np.ndarray
    weights: np.ndarray
    kind: str
    a: float = 0.0
    b: float = 0.0
    exactness_degree: int = 0

    def __post_init__(self):
        for name in ("nodes", "weights"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self):
        return len(self.nodes)

    def integrate(self, g: Callable[[np.ndarray], np.ndarray]) -> float:
        vals = np.asarray(g(self.nodes), dtype=float)
        return float(self.weights @ vals)


def gauss_jacobi_rule(n_pts: int, a: float, b: float) -> QuadratureRule:
    """Gauss rule for the weight ``(1-x)^a (1+x)^b``, exact to degree ``2 n_pts - 1``."""
    _check_ab(a, b)
    if n_pts < 1:
        raise ParameterDomainError(f"need at least one node, got {n_pts}")
    x, w = _gauss_jacobi_cached(int(n_pts), float(a), float(b))
    return QuadratureRule(x, w, "gauss_jacobi", a, b, 2 * n_pts - 1)


def _snap_half(v: float) -> float:
    return -0.5 if abs(v + 0.5) <= _EQ_TOL else v


@lru_cache(maxsize=512)
def _gauss_jacobi_cached(n: int, a: float, b: float):
    # scipy's recurrence divides 0 by 0 when an exponent sits a few ulps above -1/2
    # (it masks the exact -1/2 case itself, but still warns)
    with np.errstate(invalid="ignore", divide="ignore"):
        x, w = roots_jacobi(n, _snap_half(a), _snap_half(b))
    order = np.argsort(x)
    x, w = x[order], w[order]
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_chebyshev_rule(n_pts: int) -> QuadratureRule:
    """Gauss rule for ``1/sqrt(1-x^2)``: nodes ``cos((2j-1) pi / 2n)``, weights ``pi/n``."""
    if n_pts < 1:
        raise ParameterDomainError(f"need at least one node, got {n_pts}")
    j = np.arange(n_pts, 0, -1)
    x = np.cos((2 * j - 1) * np.pi / (2 * n_pts))
    w = np.full(n_pts, np.pi / n_pts)
    return QuadratureRule(x, w, "gauss_chebyshev", -0.5, -0.5, 2 * n_pts - 1)


@lru_cache(maxsize=256)
def gauss_legendre(n_pts: int):
    """Plain Gauss-Legendre nodes and weights on [-1, 1] (cached, read-only)."""
    x, w = np.polynomial.legendre.leggauss(n_pts)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def flattened_legendre(m: int):
    """Gauss-Legendre on [0, 1] composed with ``s -> s^2 (3 - 2s)``.

    The map flattens both ends of a piece, so integrands with algebraic
    endpoint behavior such as ``|s|^lambda`` are resolved spectrally.
    """
    g, w = gauss_legendre(m)
    s01 = 0.5 * (g + 1.0)
    return s01 * s01 * (3.0 - 2.0 * s01), 0.5 * w * 6.0 * s01 * (1.0 - s01)


# ---------------------------------------------------------------------------
# expansions


@dataclass(frozen=True, eq=False)
class JacobiExpansion:
    """Finite series ``sum_k coeffs[k] * P_k^{(nu, mu)}(x)``."""

    params: JacobiParams
    coeffs: np.ndarray = field(default_factory=lambda: np.zeros(1))

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float).reshape(-1)
        if c.size == 0:
            c = np.zeros(1)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def __len__(self):
        return self.coeffs.size

    def __call__(self, x):
        x_arr = np.asarray(x, dtype=float)
        n = self.coeffs.size
        scale = _values_at_one(n - 1, self.params.nu, self.params.mu)
        total = np.zeros_like(x_arr)
        for k, col in enumerate(_standard_columns(n - 1, self.params.nu, self.params.mu, x_arr)):
            if self.coeffs[k] != 0.0:
                total = total + (self.coeffs[k] / scale[k]) * col
        return float(total) if total.ndim == 0 else total

    @property
    def degree(self) -> int:
        """Index of the last non-zero coefficient (0 for the zero series)."""
        nz = np.flatnonzero(self.coeffs)
        return int(nz[-1]) if nz.size else 0

    def truncate(self, n_terms: int) -> "JacobiExpansion":
        return JacobiExpansion(self.params, self.coeffs[:n_terms])

    def padded(self, n_terms: int) -> np.ndarray:
        out = np.zeros(n_terms)
        m = min(n_terms, self.coeffs.size)
        out[:m] = self.coeffs[:m]
        return out

    def _check_same(self, other: "JacobiExpansion"):
        if other.params != self.params:
            raise BasisMismatchError(
                f"cannot combine expansions in bases {self.params} and {other.params}"
            )

    def __add__(self, other: "JacobiExpansion") -> "JacobiExpansion":
        self._check_same(other)
        n = max(len(self), len(other))
        return JacobiExpansion(self.params, self.padded(n) + other.padded(n))

    def __sub__(self, other: "JacobiExpansion") -> "JacobiExpansion":
        self._check_same(other)
        n = max(len(self), len(other))
        return JacobiExpansion(self.params, self.padded(n) - other.padded(n))

    def __mul__(self, c: float) -> "JacobiExpansion":
        return JacobiExpansion(self.params, self.coeffs * float(c))

    __rmul__ = __mul__

    def tail_energy(self, bound: int) -> float:
        """Relative weighted energy of the coefficients with index > ``bound``.

        Energy is measured in the basis' own orthogonality weight, so it equals
        the squared L2 distance to the truncation divided by the total.
        """
        h = jacobi_norms_sq(len(self), self.params)
        e = self.coeffs**2 * h
        total = e.sum()
        if total == 0.0:
            return 0.0
        return float(e[bound + 1 :].sum() / total)


def default_node_count(n_terms: int) -> int:
    return max(64, n_terms + 16)


def expand_in_jacobi(f, n_terms: int, params: JacobiParams, n_nodes: int | None = None) -> JacobiExpansion:
    """Project ``f`` onto ``P_0 .. P_{n_terms-1}`` in the ``(nu, mu)`` inner product.

    The projection integrals are evaluated with a Gauss-Jacobi rule of
    ``max(64, n_terms + 16)`` nodes unless ``n_nodes`` is given.
    """
    if n_terms < 1:
        raise ParameterDomainError(f"need at least one term, got {n_terms}")
    n_nodes = n_nodes or default_node_count(n_terms)
    if n_nodes < n_terms + 8:
        raise ParameterDomainError(f"{n_nodes} nodes cannot resolve {n_terms} terms")
    rule = gauss_jacobi_rule(n_nodes, params.nu, params.mu)
    vals = np.asarray(f(rule.nodes), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise SamplingError(f"non-finite samples while expanding {getattr(f, 'label', f)!r}")
    V = jacobi_vander(n_terms, params, rule.nodes)
    wV = V * rule.weights[:, None]
    coeffs = (wV.T @ vals) / np.einsum("ij,ij->j", wV, V)
    return JacobiExpansion(params, coeffs)
