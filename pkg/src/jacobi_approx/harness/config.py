"""Flat ``key = value`` experiment configuration."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

from ..errors import ConfigError, ParameterDomainError
from ..ortho_core import JacobiParams
from ..smoothness import PhiFunction
from ..weighted_spaces import SpaceParams, parse_p
from .report import fmt


@dataclass(frozen=True)
class Tolerances:
    stability: float = 10.0  # max/min spread allowed for a "constant"
    slope: float = 0.15  # exponent agreement for the equivalence check
    residual: float = 0.1  # cap on RMS log-residual of each fit

    @classmethod
    def parse(cls, text: str) -> "Tolerances":
        kw = {}
        for item in filter(None, (s.strip() for s in text.split(","))):
            k, sep, v = item.partition("=")
            k = k.strip()
            if not sep or k not in cls.__dataclass_fields__:
                raise ConfigError(f"bad tolerance entry {item!r}")
            kw[k] = float(v)
        return cls(**kw)

    def render(self) -> str:
        return ",".join(f"{k}={fmt(getattr(self, k))}" for k in self.__dataclass_fields__)


def parse_int_list(text: str) -> tuple[int, ...]:
    """``"4,8,16"`` or ``"start:stop:double"``."""
    text = text.strip()
    if text.count(":") == 2:
        a, b, mode = (s.strip() for s in text.split(":"))
        if mode != "double":
            raise ConfigError(f"integer ranges support 'double' only, got {mode!r}")
        start, stop = int(a), int(b)
        if start < 1 or stop < start:
            raise ConfigError(f"bad range {text!r}")
        out = [start]
        while out[-1] * 2 <= stop:
            out.append(out[-1] * 2)
        return tuple(out)
    return tuple(int(s) for s in text.split(",") if s.strip())


def parse_float_list(text: str) -> tuple[float, ...]:
    """``"0.4,0.2"`` or ``"start:stop:halve"`` (``stop`` is included when hit)."""
    text = text.strip()
    if text.count(":") == 2:
        a, b, mode = (s.strip() for s in text.split(":"))
        if mode != "halve":
            raise ConfigError(f"real ranges support 'halve' only, got {mode!r}")
        start, stop = float(a), float(b)
        if not (start > 0 and 0 < stop <= start):
            raise ConfigError(f"bad range {text!r}")
        out = [start]
        while out[-1] / 2 >= stop * (1 - 1e-12):
            out.append(out[-1] / 2)
        return tuple(out)
    return tuple(float(s) for s in text.split(",") if s.strip())


@dataclass(frozen=True)
class ExperimentConfig:
    p: float = 2.0
    alpha: float = 1.5
    beta: float = 1.5
    nu: float = 3.0
    mu: float = 3.0
    r: int = 1
    q: int = 2
    n_list: tuple[int, ...] = (8, 16, 32, 64, 128)
    delta_list: tuple[float, ...] = (0.4, 0.2, 0.1, 0.05, 0.025, 0.0125)
    phi: str = "power:1"
    corpus: tuple[str, ...] = ("abs:1",)
    seed: int = 0
    tolerances: Tolerances = field(default_factory=Tolerances)
    rho: float = 0.5
    sigma: float = 0.5
    trials: int = 8
    t_samples: int = 16
    output: str = ""

    def __post_init__(self):
        if not self.n_list or any(b <= a for a, b in zip(self.n_list, self.n_list[1:])):
            raise ConfigError(f"n_list must be non-empty and strictly increasing, got {self.n_list}")
        if self.n_list[0] < 1:
            raise ConfigError("n_list entries must be >= 1")
        if not self.delta_list or any(b >= a for a, b in zip(self.delta_list, self.delta_list[1:])):
            raise ConfigError(f"delta_list must be non-empty and strictly decreasing, got {self.delta_list}")
        if not all(0 < d <= math.pi for d in self.delta_list):
            raise ConfigError("delta_list entries must lie in (0, pi]")
        if not self.corpus:
            raise ConfigError("corpus must name at least one function")
        if self.r < 0 or self.q < 1 or self.trials < 1 or self.t_samples < 8:
            raise ConfigError("need r >= 0, q >= 1, trials >= 1, t_samples >= 8")
        if self.rho < 0 or self.sigma < 0:
            raise ConfigError("rho and sigma must be >= 0")
        try:
            self.sp
            self.jp
            self.phi_function
        except ParameterDomainError as exc:
            raise ConfigError(str(exc)) from exc

    @property
    def sp(self) -> SpaceParams:
        return SpaceParams(self.p, self.alpha, self.beta)

    @property
    def jp(self) -> JacobiParams:
        return JacobiParams(self.nu, self.mu)

    @property
    def phi_function(self) -> PhiFunction:
        return PhiFunction.from_label(self.phi)

    def with_(self, **kw) -> "ExperimentConfig":
        return replace(self, **kw)

    def resolved(self) -> list[tuple[str, str]]:
        """Every setting as text, in a fixed order, for embedding in reports."""
        out = []
        for name in _KEYS:
            v = getattr(self, name)
            if name == "p":
                text = "inf" if v == math.inf else fmt(v)
            elif name in ("n_list", "delta_list", "corpus"):
                text = ",".join(fmt(x) for x in v)
            elif name == "tolerances":
                text = v.render()
            else:
                text = fmt(v)
            out.append((name, text))
        return out


_KEYS = tuple(ExperimentConfig.__dataclass_fields__)

_PARSERS = {
    "p": parse_p,
    "alpha": float,
    "beta": float,
    "nu": float,
    "mu": float,
    "r": int,
    "q": int,
    "n_list": parse_int_list,
    "delta_list": parse_float_list,
    "phi": str.strip,
    "corpus": lambda s: tuple(x.strip() for x in s.split(",") if x.strip()),
    "seed": int,
    "tolerances": Tolerances.parse,
    "rho": float,
    "sigma": float,
    "trials": int,
    "t_samples": int,
    "output": str.strip,
}


def parse_config(text: str) -> ExperimentConfig:
    """Parse ``key = value`` lines; ``#`` starts a comment; unknown or repeated keys are errors."""
    kw = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw!r}")
        if key not in _PARSERS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in kw:
            raise ConfigError(f"line {lineno}: repeated key {key!r}")
        try:
            kw[key] = _PARSERS[key](value.strip())
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from exc
    return ExperimentConfig(**kw)


def load_config(path) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)
