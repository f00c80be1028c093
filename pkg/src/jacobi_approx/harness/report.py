"""Rate reports: slope fits, verdicts and the deterministic text format."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

FIT_FLOOR = 1e-13


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"

    @property
    def exit_code(self) -> int:
        return {Verdict.PASS: 0, Verdict.FAIL: 1, Verdict.INCONCLUSIVE: 2}[self]


def combine(verdicts: Iterable[Verdict]) -> Verdict:
    """Any failure fails; otherwise any inconclusive part makes the whole inconclusive."""
    vs = list(verdicts)
    if Verdict.FAIL in vs:
        return Verdict.FAIL
    if not vs or Verdict.INCONCLUSIVE in vs:
        return Verdict.INCONCLUSIVE
    return Verdict.PASS


def fit_slope(scales: Sequence[float], values: Sequence[float]) -> tuple[float, float, int]:
    """Least-squares slope of ``log(value)`` against ``log(scale)``.

    Only pairs with ``value > 1e-13`` take part.  Returns ``(slope, residual,
    used)`` where ``residual`` is the RMS of the log-residuals; the slope is
    NaN when fewer than two pairs qualify.
    """
    s = np.asarray(scales, dtype=float)
    v = np.asarray(values, dtype=float)
    keep = v > FIT_FLOOR
    if keep.sum() < 2:
        return math.nan, math.nan, int(keep.sum())
    X = np.log(s[keep])
    Y = np.log(v[keep])
    A = np.column_stack([X, np.ones_like(X)])
    coef, *_ = np.linalg.lstsq(A, Y, rcond=None)
    r = Y - A @ coef
    return float(coef[0]), float(math.sqrt(np.mean(r * r))), int(keep.sum())


def stability(ratios: Sequence[float]) -> tuple[float, int]:
    """``max / min`` of the non-degenerate ratios and how many there were."""
    r = np.asarray([x for x in ratios if math.isfinite(x) and x > FIT_FLOOR])
    if r.size < 2:
        return math.nan, int(r.size)
    return float(r.max() / r.min()), int(r.size)


@dataclass
class RateReport:
    """One table of ``(scale, value, bound, ratio)`` rows with its fit and verdict."""

    name: str
    rows: list[tuple[float, float, float, float]]
    fitted_exponent: float
    fit_residual: float
    measured_constant: float
    verdict: Verdict
    notes: dict = field(default_factory=dict)

    @property
    def pairs(self) -> list[tuple[float, float]]:
        return [(r[0], r[1]) for r in self.rows]


def bound_report(name: str, scales, values, bounds, max_spread: float, notes: dict | None = None) -> RateReport:
    """Report for a claim ``value <= C * bound``: pass when ``value/bound`` is stable.

    Values ``<= 1e-13`` count as zero.  All-zero bounds pass only when every
    value is zero too and are inconclusive otherwise; a finite ratio list with
    fewer than two nonzero entries passes trivially.
    """
    scales = [float(s) for s in scales]
    values = [float(v) for v in values]
    bounds = [float(b) for b in bounds]
    # values at or below the fit floor are roundoff around an exact zero
    ratios = [0.0 if v <= FIT_FLOOR else (v / b if b > 0 else math.inf) for v, b in zip(values, bounds)]
    slope, resid, _ = fit_slope(scales, values)
    spread, used = stability(ratios)
    notes = dict(notes or {})
    notes["ratio_spread"] = spread
    finite = [r for r in ratios if math.isfinite(r)]
    constant = max(finite) if finite else math.inf
    if all(b == 0 for b in bounds):
        zero = all(v <= FIT_FLOOR for v in values)
        verdict = Verdict.PASS if zero else Verdict.INCONCLUSIVE
    elif any(math.isinf(r) for r in ratios):
        verdict = Verdict.FAIL
    elif used < 2:
        # at most one nonzero ratio: some constant trivially works
        verdict = Verdict.PASS
    else:
        verdict = Verdict.PASS if spread < max_spread else Verdict.FAIL
    rows = list(zip(scales, values, bounds, ratios))
    return RateReport(name, rows, slope, resid, constant, verdict, notes)


# ---------------------------------------------------------------------------
# text output


def fmt(v) -> str:
    """Floats with 17 significant digits; everything else via ``str``."""
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".17g")
    if isinstance(v, Enum):
        return str(v.value)
    return str(v)


@dataclass
class VerificationResult:
    experiment: str
    config: list[tuple[str, str]]
    reports: list[RateReport]
    verdict: Verdict
    notes: dict = field(default_factory=dict)

    def render(self) -> str:
        lines = [f"# experiment={self.experiment}"]
        lines += [f"# {k}={v}" for k, v in self.config]
        lines += [f"# {k}={fmt(v)}" for k, v in self.notes.items()]
        for rep in self.reports:
            lines.append("")
            lines.append(f"# section={rep.name}")
            lines += [f"# {k}={fmt(v)}" for k, v in rep.notes.items()]
            lines.append("scale,value,bound,ratio")
            lines += [",".join(fmt(x) for x in row) for row in rep.rows]
            lines.append("verdict,fitted_exponent,residual,constant")
            lines.append(",".join(fmt(x) for x in (rep.verdict, rep.fitted_exponent, rep.fit_residual,
                                                    rep.measured_constant)))
        lines.append("")
        lines.append(f"# verdict={self.verdict.value}")
        return "\n".join(lines) + "\n"

    def write(self, path) -> list[Path]:
        """Write the report and one two-column ``.dat`` file per section."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.render())
        written = [path]
        for i, rep in enumerate(self.reports):
            dat = path.with_name(f"{path.stem}.{i:02d}.{_slug(rep.name)}.dat")
            body = [f"# {rep.name}: scale value"]
            body += [f"{fmt(r[0])} {fmt(r[1])}" for r in rep.rows]
            dat.write_text("\n".join(body) + "\n")
            written.append(dat)
        return written


def _slug(name: str) -> str:
    return "".join(c if c.isalnum() or c in "-_." else "_" for c in name)
