"""Named test functions.

Labels are ``kind`` or ``kind:arg[:arg]``; ``describe()`` lists them.  Functions
with a kink carry it as a breakpoint so quadratures split there.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError
from ..ortho_core import CHEBYSHEV, LEGENDRE, JacobiExpansion, JacobiParams, expand_in_jacobi, jacobi_norms_sq
from ..weighted_spaces import Func

TAIL_MODES = 256
SMOOTH_CORPUS = ("exp", "inv2", "x2")

_DESCRIPTIONS = [
    ("const[:c]", "constant function (default 1)"),
    ("x, x2, mono:k", "monomial x^k"),
    ("jacobi:k", "single Jacobi mode P_k in the experiment's (nu, mu) basis"),
    ("abs_x, abs:lam", "|x|^lam with a breakpoint at 0"),
    ("exp", "e^x"),
    ("inv2", "1/(2 - x)"),
    ("tail:r:lam", f"sum_k k^(-2r-lam-1/2) p_k over {TAIL_MODES} orthonormal (nu, mu) modes, k >= 1"),
]


def describe() -> list[tuple[str, str]]:
    return list(_DESCRIPTIONS)


def _monomial(k: int) -> Func:
    e = expand_in_jacobi(lambda x: x**k, k + 1, CHEBYSHEV)
    # clean the projection so only parity-compatible modes remain
    c = np.where(np.abs(e.coeffs) > 1e-14, e.coeffs, 0.0)
    label = {1: "x", 2: "x2"}.get(k, f"mono:{k}")
    return Func(lambda x: np.asarray(x, dtype=float) ** k, label=label, expansion=JacobiExpansion(CHEBYSHEV, c))


def tail_series(r: int, lam: float, jp: JacobiParams, modes: int = TAIL_MODES) -> JacobiExpansion:
    """Coefficients ``k^(-2r-lam-1/2)`` on the orthonormalized basis, ``k = 1..modes-1``."""
    k = np.arange(modes, dtype=float)
    h = jacobi_norms_sq(modes, jp)
    c = np.zeros(modes)
    c[1:] = k[1:] ** (-2.0 * r - lam - 0.5) / np.sqrt(h[1:])
    return JacobiExpansion(jp, c)


def make_func(label: str, jp: JacobiParams | None = None) -> Func:
    """Build the corpus function named ``label``; ``jp`` selects the basis where relevant."""
    kind, _, rest = label.strip().partition(":")
    args = rest.split(":") if rest else []
    try:
        if kind == "const":
            c = float(args[0]) if args else 1.0
            return Func.constant(c, label=label)
        if kind == "x" and not args:
            return _monomial(1)
        if kind == "x2" and not args:
            return _monomial(2)
        if kind == "mono" and len(args) == 1:
            return _monomial(int(args[0]))
        if kind == "jacobi" and len(args) == 1:
            k = int(args[0])
            basis = jp or LEGENDRE
            e = JacobiExpansion(basis, np.eye(k + 1)[k])
            return Func.from_expansion(e, label=label)
        if kind == "abs_x" and not args:
            return Func(np.abs, label=label, breakpoints=(0.0,))
        if kind == "abs" and len(args) == 1:
            lam = float(args[0])
            if lam <= 0:
                raise ConfigError(f"abs:lam needs lam > 0, got {lam}")
            return Func(lambda x: np.abs(x) ** lam, label=label, breakpoints=(0.0,))
        if kind == "exp" and not args:
            return Func(np.exp, label=label)
        if kind == "inv2" and not args:
            return Func(lambda x: 1.0 / (2.0 - x), label=label)
        if kind == "tail" and len(args) == 2:
            e = tail_series(int(args[0]), float(args[1]), jp or JacobiParams(3.0, 3.0))
            return Func.from_expansion(e, label=label)
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad corpus label {label!r}: {exc}") from exc
    raise ConfigError(f"unknown corpus label {label!r}")
