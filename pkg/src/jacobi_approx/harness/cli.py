"""Command line: ``jacobi-approx <subcommand> ...``.

Exit codes: 0 pass, 1 fail, 2 inconclusive, 64 configuration error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from ..best_approx import JacksonKernelSpec, best_approx, jackson_operator_asym, jackson_operator_sym
from ..errors import (
    ConfigError,
    DegreeViolationError,
    DomainError,
    IterationLimitError,
    ParameterDomainError,
    SamplingError,
)
from ..ortho_core import JacobiParams
from ..smoothness import modulus_curve
from ..translation_ops import translate
from ..weighted_spaces import SpaceParams, parse_p
from .config import load_config, parse_float_list
from .corpus import describe, make_func
from .experiments import EXPERIMENTS
from .report import fmt

EXIT_CONFIG = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    try:
        return list(parse_float_list(text))
    except ValueError as exc:
        raise ConfigError(f"bad number list {text!r}") from exc


def _space_args(p: argparse.ArgumentParser):
    p.add_argument("--p", default="2", help="norm exponent, a number >= 1 or 'inf'")
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=0.0)


def _basis_args(p: argparse.ArgumentParser, default=None):
    p.add_argument("--nu", type=float, default=default)
    p.add_argument("--mu", type=float, default=default)


def _sp(args) -> SpaceParams:
    return SpaceParams(parse_p(args.p), args.alpha, args.beta)


def _jp(args) -> JacobiParams | None:
    if args.nu is None and args.mu is None:
        return None
    if args.nu is None or args.mu is None:
        raise ConfigError("--nu and --mu go together")
    return JacobiParams(args.nu, args.mu)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="jacobi-approx", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bestapprox", help="best approximation error E_n(f)")
    p.add_argument("--f", required=True, help="corpus label (see 'corpus list')")
    p.add_argument("--n", type=int, required=True, help="polynomial degree is at most n-1")
    _space_args(p)
    _basis_args(p)

    p = sub.add_parser("modulus", help="modulus of smoothness curve as CSV")
    p.add_argument("--f", required=True)
    p.add_argument("--deltas", default="0.4:0.0125:halve")
    p.add_argument("--t-samples", type=int, default=16)
    _space_args(p)
    _basis_args(p)

    p = sub.add_parser("translate", help="evaluate a generalized translation")
    p.add_argument("--f", required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--x", default="-0.5,0,0.5", help="comma-separated points in (-1, 1)")
    p.add_argument("--symmetric", action="store_true", help="use tau_t with (--nu, --mu)")
    _basis_args(p)

    p = sub.add_parser("jackson", help="Jackson-kernel polynomial of f")
    p.add_argument("--f", required=True)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--symmetric", action="store_true", help="symmetric construction with (--nu, --mu)")
    _space_args(p)
    _basis_args(p)

    p = sub.add_parser("verify", help="run an experiment from a config file")
    p.add_argument("kind", choices=sorted(EXPERIMENTS))
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None, help="report path (overrides the config's output key)")

    p = sub.add_parser("corpus", help="corpus utilities")
    p.add_argument("action", choices=["list"])
    return parser


def _cmd_bestapprox(args, out) -> int:
    f = make_func(args.f, _jp(args))
    sp = _sp(args)
    code = 0
    try:
        res = best_approx(f, args.n, sp)
        converged = True
    except IterationLimitError as exc:
        res, converged, code = exc.last, False, 1
    print("f,n,p,alpha,beta,method,iterations,converged,error", file=out)
    print(",".join([args.f, str(args.n), fmt(sp.p), fmt(sp.alpha), fmt(sp.beta), res.method.value,
                    str(res.iterations), fmt(converged), fmt(res.error)]), file=out)
    return code


def _cmd_modulus(args, out) -> int:
    f = make_func(args.f, _jp(args))
    curve = modulus_curve(f, _floats(args.deltas), _sp(args), args.t_samples)
    print("delta,omega", file=out)
    for d, w in zip(curve.deltas, curve.values):
        print(f"{fmt(d)},{fmt(w)}", file=out)
    return 0


def _cmd_translate(args, out) -> int:
    jp = _jp(args)
    if args.symmetric and jp is None:
        raise ConfigError("--symmetric needs --nu and --mu")
    f = make_func(args.f, jp)
    x = np.array(_floats(args.x))
    vals = translate(f, args.t, x, jp if args.symmetric else None)
    print("x,value", file=out)
    for xi, v in zip(x, np.atleast_1d(vals)):
        print(f"{fmt(xi)},{fmt(v)}", file=out)
    return 0


def _cmd_jackson(args, out) -> int:
    jp = _jp(args)
    f = make_func(args.f, jp)
    spec = JacksonKernelSpec(args.q, args.m)
    sp = _sp(args)
    if args.symmetric:
        if jp is None:
            raise ConfigError("--symmetric needs --nu and --mu")
        res = jackson_operator_sym(f, spec, jp, sp)
    else:
        res = jackson_operator_asym(f, spec, sp=sp)
    print(f"# degree_bound={res.degree_bound}", file=out)
    print(f"# error={fmt(res.error)}", file=out)
    print(f"# basis=({fmt(res.poly.params.nu)},{fmt(res.poly.params.mu)})", file=out)
    print("k,coefficient", file=out)
    for k, c in enumerate(res.poly.coeffs):
        print(f"{k},{fmt(c)}", file=out)
    return 0


def _cmd_verify(args, out) -> int:
    cfg = load_config(args.config)
    result = EXPERIMENTS[args.kind](cfg)
    target = args.out or cfg.output
    if target:
        for path in result.write(target):
            print(path, file=out)
    else:
        out.write(result.render())
    print(f"verdict={result.verdict.value}", file=sys.stderr)
    return result.verdict.exit_code


def _cmd_corpus(args, out) -> int:
    for label, text in describe():
        print(f"{label}\t{text}", file=out)
    return 0


_COMMANDS = {
    "bestapprox": _cmd_bestapprox,
    "modulus": _cmd_modulus,
    "translate": _cmd_translate,
    "jackson": _cmd_jackson,
    "verify": _cmd_verify,
    "corpus": _cmd_corpus,
}


def run(argv=None, out=None) -> int:
    """Parse ``argv`` and run the subcommand; returns the exit code."""
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args, out)
    except (ConfigError, ParameterDomainError, DomainError) as exc:
        print(f"jacobi-approx: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SamplingError, DegreeViolationError) as exc:
        print(f"jacobi-approx: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
