"""The Jacobi differential operator ``D = (1-x^2) d^2/dx^2 + (mu - nu - (nu+mu+2) x) d/dx``.

``D`` is diagonal on ``P_k^{(nu, mu)}`` with eigenvalue ``-k (k + nu + mu + 1)``,
so powers of ``D`` are applied spectrally.  The finite-difference version exists
as an independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BasisMismatchError, DomainError, ParameterDomainError
from .ortho_core import JacobiExpansion, JacobiParams, expand_in_jacobi, jacobi_eigenvalue
from .weighted_spaces import Func


@dataclass(frozen=True)
class DOperator:
    params: JacobiParams
    order: int = 1

    def __post_init__(self):
        if self.order < 1:
            raise ParameterDomainError(f"operator order must be >= 1, got {self.order}")

    def multipliers(self, n_terms: int) -> np.ndarray:
        k = np.arange(n_terms)
        return (-jacobi_eigenvalue(k, self.params)) ** self.order

    def __call__(self, e: JacobiExpansion) -> JacobiExpansion:
        return apply_D_expansion(e, self.order, self.params)


def apply_D_expansion(e: JacobiExpansion, r: int = 1, params: JacobiParams | None = None) -> JacobiExpansion:
    """Map ``c_k -> (-k(k+nu+mu+1))^r c_k``.

    ``params`` names the operator's family; it must match the expansion basis.
    ``r = 0`` returns the expansion unchanged.
    """
    if params is not None and params != e.params:
        raise BasisMismatchError(f"operator {params} applied to expansion in basis {e.params}")
    if r < 0:
        raise ParameterDomainError(f"order must be >= 0, got {r}")
    if r == 0:
        return e
    return JacobiExpansion(e.params, e.coeffs * DOperator(e.params, r).multipliers(len(e)))


def apply_D_pointwise(f, jp: JacobiParams, x, h: float = 1e-4):
    """Central-difference ``(1-x^2) f'' + (mu - nu - (nu+mu+2) x) f'`` at ``x``.

    Second-order accurate in ``h`` for C^4 functions.
    """
    x = np.asarray(x, dtype=float)
    if h <= 0:
        raise ParameterDomainError(f"step must be positive, got {h}")
    if np.any(np.abs(x) + 2 * h >= 1):
        raise DomainError("finite-difference stencil leaves (-1, 1)")
    fm, f0, fp = f(x - h), f(x), f(x + h)
    d1 = (fp - fm) / (2 * h)
    d2 = (fp - 2 * f0 + fm) / (h * h)
    out = (1 - x * x) * d2 + (jp.mu - jp.nu - (jp.nu + jp.mu + 2) * x) * d1
    return float(out) if out.ndim == 0 else out


def as_expansion(f, jp: JacobiParams, n_terms: int = 96) -> JacobiExpansion:
    """The Jacobi series of ``f`` in the ``jp`` basis (exact when ``f`` already is one)."""
    e = getattr(f, "expansion", None)
    if e is not None and e.params == jp:
        return e
    if e is not None:
        n_terms = e.degree + 1
    return expand_in_jacobi(f, n_terms, jp)


def apply_D(f, jp: JacobiParams, r: int = 1, n_terms: int = 96) -> Func:
    """``D^r f`` as a :class:`Func`, computed spectrally.

    Non-polynomial inputs are first projected onto ``n_terms`` Jacobi modes.
    """
    e = as_expansion(f, jp, n_terms)
    label = getattr(f, "label", "f")
    return Func.from_expansion(apply_D_expansion(e, r), label=f"D^{r}[{label}]" if r != 1 else f"D[{label}]")
