"""Experiment harness: corpus, configuration, reports and the command line."""

from .config import ExperimentConfig, Tolerances, load_config, parse_config
from .corpus import describe, make_func
from .experiments import (
    EXPERIMENTS,
    corollary_report,
    jackson_constants,
    phi_stability,
    translation_bound_ratios,
    verify_bernstein,
    verify_bernstein_markov,
    verify_derivative_theorems,
    verify_direct_theorem,
    verify_equivalence,
    verify_inverse_theorem,
)
from .report import RateReport, Verdict, VerificationResult, bound_report, fit_slope

__all__ = [
    "EXPERIMENTS",
    "ExperimentConfig",
    "RateReport",
    "Tolerances",
    "Verdict",
    "VerificationResult",
    "bound_report",
    "corollary_report",
    "describe",
    "fit_slope",
    "jackson_constants",
    "load_config",
    "make_func",
    "parse_config",
    "phi_stability",
    "translation_bound_ratios",
    "verify_bernstein",
    "verify_bernstein_markov",
    "verify_derivative_theorems",
    "verify_direct_theorem",
    "verify_equivalence",
    "verify_inverse_theorem",
]
