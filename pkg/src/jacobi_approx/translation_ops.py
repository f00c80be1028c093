"""Generalized translations: the asymmetric ``T_t`` and the symmetric ``tau_t``.

Both are evaluated by Gaussian quadrature, vectorized over ``x``.  For the
asymmetric operator the inner variable is written as ``z = cos(phi)`` so the
Chebyshev weight becomes ``dphi``; when ``f`` has breakpoints the ``phi``
interval is cut where the argument ``R`` crosses them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, ParameterDomainError
from .ortho_core import JacobiParams, flattened_legendre, gauss_jacobi_rule

_ARG_SLACK = 1e-12


@dataclass(frozen=True)
class TranslationConfig:
    inner_nodes: int = 96
    outer_nodes: int = 48

    def __post_init__(self):
        if self.inner_nodes < 16 or self.outer_nodes < 16:
            raise ParameterDomainError("translation quadratures need at least 16 nodes")


DEFAULT_CONFIG = TranslationConfig()


def _as_interior(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) >= 1) or not np.all(np.isfinite(x)):
        raise DomainError("translation is defined for |x| < 1 only")
    return x


def _checked_argument(arg: np.ndarray) -> np.ndarray:
    if np.any(np.abs(arg) > 1 + _ARG_SLACK):
        raise DomainError(f"translated argument left [-1, 1] (max |arg| = {np.abs(arg).max()!r})")
    return np.clip(arg, -1.0, 1.0)


def _degree_nodes(f, base: int, extra: int) -> int:
    d = getattr(f, "degree", None)
    if d is None:
        return base
    return max(base, (d + extra) // 2 + 4)


# ---------------------------------------------------------------------------
# asymmetric translation


def _asym_integrand(f, x, y, c, s, cos_phi):
    R = _checked_argument(x * c - cos_phi * (y * s))
    sin2_phi = 1.0 - cos_phi**2
    s2 = s * s
    K = 1.0 - R * R - 2.0 * sin2_phi * s2 + 4.0 * (y * y) * sin2_phi**2 * s2
    return K * f(R)


def asymmetric_translate(f, t, x, cfg: TranslationConfig = DEFAULT_CONFIG):
    """Asymmetric generalized translation ``T_t(f, x)``.

    ``T_t f(x) = 1/(pi (1-x^2)) int_{-1}^{1} K f(R) dz / sqrt(1-z^2)`` with
    ``R = x cos t - z sqrt(1-x^2) sin t`` and
    ``K = 1 - R^2 - 2 (1-z^2) sin^2 t + 4 (1-x^2) (1-z^2)^2 sin^2 t``.
    ``T_{-t} = T_t``, so only ``|t|`` matters.  ``t`` may be a scalar or an
    array broadcastable against ``x`` (one shift per point).
    """
    x = _as_interior(x)
    scalar = x.ndim == 0 and np.ndim(t) == 0
    x, t = np.broadcast_arrays(np.atleast_1d(x), np.abs(np.asarray(t, dtype=float)))
    x, t = x.reshape(-1), t.reshape(-1)
    c, s = np.cos(t), np.sin(t)
    y = np.sqrt((1 - x) * (1 + x))
    n = _degree_nodes(f, cfg.inner_nodes, 5)
    bps = getattr(f, "breakpoints", ())
    xc, yc, cc, sc = x[:, None], y[:, None], c[:, None], s[:, None]

    if not bps:
        phi = (np.arange(n) + 0.5) * (math.pi / n)
        vals = _asym_integrand(f, xc, yc, cc, sc, np.cos(phi)[None, :])
        integral = vals.sum(axis=1) * (math.pi / n)
    else:
        # cut [0, pi] in phi where R(phi) = b; R is monotone in phi
        cuts = [np.zeros_like(x), np.full_like(x, math.pi)]
        with np.errstate(divide="ignore", invalid="ignore"):
            for b in bps:
                zstar = (x * c - b) / (y * s)
                cuts.append(np.where(np.abs(zstar) < 1, np.arccos(np.clip(zstar, -1, 1)), math.pi))
        cuts = np.sort(np.stack(cuts, axis=1), axis=1)
        smap, wmap = flattened_legendre(max(24, n // 2))
        integral = np.zeros_like(x)
        for j in range(cuts.shape[1] - 1):
            lo, hi = cuts[:, j : j + 1], cuts[:, j + 1 : j + 2]
            phi = lo + (hi - lo) * smap[None, :]
            vals = _asym_integrand(f, xc, yc, cc, sc, np.cos(phi))
            integral += (vals * wmap[None, :]).sum(axis=1) * (hi - lo)[:, 0]
    out = integral / (math.pi * y * y)
    return float(out[0]) if scalar else out


def asymmetric_kink_angles(breakpoints, x) -> np.ndarray:
    """Shifts ``t`` in (0, pi) where ``t -> T_t f(x)`` can lose smoothness.

    The argument range ``[cos(theta + t), cos(theta - t)]`` (``x = cos theta``)
    has an end at a breakpoint ``cos(theta_b)`` exactly for these ``t``.
    Returns an array of shape ``(len(x), 3 * len(breakpoints))`` padded with pi.
    """
    th = np.arccos(np.atleast_1d(np.asarray(x, dtype=float)))
    cols = []
    for b in breakpoints:
        tb = math.acos(b)
        for v in (np.abs(th - tb), th + tb, 2 * math.pi - th - tb):
            cols.append(np.where((v > 0) & (v < math.pi), v, math.pi))
    if not cols:
        return np.zeros((th.size, 0))
    return np.stack(cols, axis=1)


# ---------------------------------------------------------------------------
# symmetric translations


def gamma_nu(nu: float) -> float:
    """``int_{-1}^{1} (1 - z^2)^(nu - 1/2) dz`` by Gauss-Jacobi quadrature."""
    if not nu > -0.5:
        raise ParameterDomainError(f"gamma(nu) needs nu > -1/2, got {nu}")
    return float(gauss_jacobi_rule(8, nu - 0.5, nu - 0.5).weights.sum())


def gamma_nu_mu(nu: float, mu: float) -> float:
    """``int_0^1 int_{-1}^1 (1-z^2)^(nu-mu-1) z^(2mu+1) (1-u^2)^(mu-1/2) du dz``.

    The ``z`` integral is taken in ``s = z^2`` where it becomes a Beta-type
    integral handled exactly by a Gauss-Jacobi rule.
    """
    if not (nu > mu > -0.5):
        raise ParameterDomainError(f"gamma(nu, mu) needs nu > mu > -1/2, got ({nu}, {mu})")
    radial = float(gauss_jacobi_rule(8, nu - mu - 1.0, mu).weights.sum()) * 0.5 ** (nu + 1.0)
    return radial * gamma_nu(mu)


@lru_cache(maxsize=128)
def _radial_rule(n: int, nu: float, mu: float):
    """Nodes ``z`` in (0, 1) and weights for ``(1-z^2)^(nu-mu-1) z^(2mu+1) dz``."""
    rule = gauss_jacobi_rule(n, nu - mu - 1.0, mu)
    s = 0.5 * (1.0 + rule.nodes)
    return np.sqrt(s), rule.weights * 0.5 ** (nu + 1.0)


def symmetric_argument(x, t, z, u):
    """``x cos t + z u sqrt(1-x^2) sin t - (1 - u^2)(1 - x) sin^2(t/2)``."""
    x = np.asarray(x, dtype=float)
    return x * math.cos(t) + z * u * np.sqrt((1 - x) * (1 + x)) * math.sin(t) - (1 - u * u) * (1 - x) * math.sin(0.5 * t) ** 2


def symmetric_translate(f, t: float, x, jp: JacobiParams, cfg: TranslationConfig = DEFAULT_CONFIG):
    """Symmetric generalized translation ``tau_t(f, x)`` for ``nu >= mu >= -1/2``.

    Dispatches on the four parameter cases.  Case 1 averages the two
    reflected values; case 4 integrates the radial variable (weight
    ``z^(2mu+1) (1-z^2)^(nu-mu-1)`` on [0, 1]) against the angular one (weight
    ``(1-u^2)^(mu-1/2)`` on [-1, 1]) with the correction term carried by the
    radial variable, which is the form that satisfies the product formula
    ``tau_t P_k(x) = P_k(cos t) P_k(x)``.
    """
    if not isinstance(jp, JacobiParams):
        jp = JacobiParams(*jp)
    x = _as_interior(x)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    t = float(t)
    nu, mu = jp.nu, jp.mu
    case = jp.case
    xc = x[:, None]

    if case == 1:
        y = np.sqrt((1 - x) * (1 + x))
        plus = _checked_argument(x * math.cos(t) + y * math.sin(t))
        minus = _checked_argument(x * math.cos(t) - y * math.sin(t))
        out = 0.5 * (f(plus) + f(minus))
    elif case in (2, 3):
        n = _degree_nodes(f, cfg.inner_nodes, 1)
        rule = gauss_jacobi_rule(n, nu - 0.5, nu - 0.5)
        z = rule.nodes[None, :]
        if case == 2:
            arg = symmetric_argument(xc, t, z, 1.0)
        else:
            arg = symmetric_argument(xc, t, 1.0, z)
        vals = f(_checked_argument(arg))
        out = vals @ rule.weights / gamma_nu(nu)
    else:
        n = _degree_nodes(f, cfg.outer_nodes, 1)
        zr, wr = _radial_rule(n, nu, mu)
        urule = gauss_jacobi_rule(n, mu - 0.5, mu - 0.5)
        # (x, radial, angular)
        Z = zr[None, :, None]
        U = urule.nodes[None, None, :]
        y = np.sqrt((1 - x) * (1 + x))[:, None, None]
        X = x[:, None, None]
        arg = X * math.cos(t) + Z * U * y * math.sin(t) - (1 - Z * Z) * (1 - X) * math.sin(0.5 * t) ** 2
        vals = f(_checked_argument(arg))
        out = np.einsum("ijk,j,k->i", vals, wr, urule.weights) / gamma_nu_mu(nu, mu)
    return float(out[0]) if scalar else out


def translate(f, t: float, x, jp: JacobiParams | None = None, cfg: TranslationConfig = DEFAULT_CONFIG):
    """Asymmetric translation when ``jp`` is None, symmetric otherwise."""
    if jp is None:
        return asymmetric_translate(f, t, x, cfg)
    return symmetric_translate(f, t, x, jp, cfg)


def translated_breakpoints(breakpoints, t: float) -> tuple:
    """Points where ``T_t f - f`` can be non-smooth, given the kinks of ``f``.

    ``T_t`` averages ``f`` over angles ``theta +- t`` (with ``x = cos theta``), so a
    kink at ``b = cos(theta_b)`` reappears at ``cos(theta_b -+ t)``.
    """
    out = set()
    for b in breakpoints:
        th = math.acos(b)
        out.add(b)
        for sgn in (-1.0, 1.0):
            out.add(math.cos(th + sgn * abs(t)))
    return tuple(sorted(out))
