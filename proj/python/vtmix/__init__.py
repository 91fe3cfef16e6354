"""Gaussian-mixture estimation toolkit.

Hard-assignment (Viterbi-style) training, its two adjusted variants,
soft-assignment refitting, direct likelihood maximization, and a seeded
replication harness.  The heavy lifting lives in the compiled `_core`
extension; this package just re-exports it.
"""

from ._core import (
    MixtureParams,
    adjustment_delta,
    decision_boundaries,
    estimate,
    log_likelihood,
    mixture_pdf,
    mle,
    pairwise_boundary,
    run_cli,
    run_experiment,
    simulate,
    step,
    weight_correction,
)

__all__ = [
    "MixtureParams",
    "adjustment_delta",
    "decision_boundaries",
    "estimate",
    "log_likelihood",
    "mixture_pdf",
    "mle",
    "pairwise_boundary",
    "run_cli",
    "run_experiment",
    "simulate",
    "step",
    "weight_correction",
]

__version__ = "0.1.0"
