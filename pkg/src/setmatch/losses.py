"""Surrogate and margin losses, pairwise risks, Monte Carlo risk estimates.

The pairwise loss of a score function on a (positive, negative) ranking
pair is ``phi(f(z_pos) - f(z_neg))`` for a convex decreasing ``phi``; the
empirical risk averages it over every positive-negative combination of
the sample.  Two surrogates are provided: the logistic loss
``log(1 + exp(-t))`` and the clipped-linear margin loss which is 1 at or
below zero separation and 0 at or above the margin.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import EmptyInputError
from .kernels import RkhsScoreFunction, evaluate_batch

LOGISTIC = "logistic"
MARGIN = "margin"


@dataclass(frozen=True)
class SurrogateSpec:
    """Choice of surrogate: logistic, or margin with width rho."""

    kind: str = LOGISTIC
    rho: float = 1.0

    def __post_init__(self):
        if self.kind not in (LOGISTIC, MARGIN):
            raise ValueError(f"unknown surrogate kind {self.kind!r}")
        if self.kind == MARGIN and not self.rho > 0:
            raise ValueError("margin width rho must be positive")


@dataclass(frozen=True)
class RiskEstimate:
    """A risk value together with how it was estimated."""

    value: float
    kind: str
    sample_sizes: Tuple[int, int]
    std_error: Optional[float] = None


def logistic_phi(t):
    """Overflow-safe log(1 + exp(-t)); behaves like -t for very negative t."""
    return np.logaddexp(0.0, np.negative(t))


def margin_phi(t, rho: float):
    """Clipped-linear margin loss: 1 below 0, linear on [0, rho], 0 above rho."""
    if not rho > 0:
        raise ValueError("margin width rho must be positive")
    return np.clip(1.0 - np.asarray(t, dtype=float) / rho, 0.0, 1.0)


def surrogate_values(t, spec: SurrogateSpec):
    if spec.kind == LOGISTIC:
        return logistic_phi(t)
    return margin_phi(t, spec.rho)


def lipschitz_constant(spec: SurrogateSpec) -> float:
    """Lipschitz constant of the surrogate: 1 for logistic, 1/rho for margin."""
    if spec.kind == LOGISTIC:
        return 1.0
    return 1.0 / spec.rho


def pair_loss(f: RkhsScoreFunction, z_pos, z_neg, spec: SurrogateSpec) -> float:
    """Surrogate loss on a single ranking pair."""
    scores = evaluate_batch(f, [z_pos, z_neg])
    return float(surrogate_values(scores[0] - scores[1], spec))


def _grid_mean(pos_scores: np.ndarray, neg_scores: np.ndarray, spec: SurrogateSpec):
    """Mean surrogate loss over the full positive x negative score grid."""
    diffs = pos_scores[:, None] - neg_scores[None, :]
    values = surrogate_values(diffs, spec)
    return float(values.mean()), values


def empirical_risk(f: RkhsScoreFunction, s, spec: SurrogateSpec) -> RiskEstimate:
    """Average surrogate loss over all positive-negative pairings of ``s``."""
    if len(s.positives) < 1 or len(s.negatives) < 1:
        raise EmptyInputError("empirical risk needs at least one positive and one negative")
    pos_scores = evaluate_batch(f, s.positives)
    neg_scores = evaluate_batch(f, s.negatives)
    value, _ = _grid_mean(pos_scores, neg_scores, spec)
    kind = "empirical_margin" if spec.kind == MARGIN else "empirical_surrogate"
    return RiskEstimate(value, kind, (len(s.positives), len(s.negatives)))


def empirical_margin_risk(f: RkhsScoreFunction, s, rho: float) -> RiskEstimate:
    """Empirical risk under the margin surrogate with width rho."""
    return empirical_risk(f, s, SurrogateSpec(MARGIN, rho))


def _grid_std_error(values: np.ndarray) -> float:
    """Standard error of a two-sample grid mean via its Hoeffding projections.

    The grid cells share rows and columns, so the variance of the mean is
    dominated by the variance of the per-positive and per-negative
    averages; cell-level independence would understate it.
    """
    n_pos, n_neg = values.shape
    row_means = values.mean(axis=1)
    col_means = values.mean(axis=0)
    var = 0.0
    if n_pos > 1:
        var += float(np.var(row_means, ddof=1)) / n_pos
    if n_neg > 1:
        var += float(np.var(col_means, ddof=1)) / n_neg
    return float(np.sqrt(var))


def mc_expected_risk(
    f: RkhsScoreFunction, gen, n_pos: int, n_neg: int, spec: SurrogateSpec, rng
) -> RiskEstimate:
    """Monte Carlo estimate of the expected risk from fresh pairs.

    Draws ``n_pos`` fresh positives and ``n_neg`` fresh negatives from the
    generator and averages the surrogate loss over their full grid; the
    estimate is unbiased for the expected matching loss.
    """
    if n_pos < 1 or n_neg < 1:
        raise ValueError("need at least one fresh positive and one fresh negative")
    rng = np.random.default_rng(rng)
    pos = gen.positives(n_pos, rng)
    neg = gen.negatives(n_neg, rng)
    pos_scores = evaluate_batch(f, pos)
    neg_scores = evaluate_batch(f, neg)
    value, values = _grid_mean(pos_scores, neg_scores, spec)
    return RiskEstimate(value, "mc_expected_surrogate", (n_pos, n_neg), _grid_std_error(values))


def mc_ranking_error(f: RkhsScoreFunction, gen, n_pos: int, n_neg: int, rng) -> RiskEstimate:
    """Fraction of fresh pairings ranked incorrectly (zero difference counts)."""
    if n_pos < 1 or n_neg < 1:
        raise ValueError("need at least one fresh positive and one fresh negative")
    rng = np.random.default_rng(rng)
    pos = gen.positives(n_pos, rng)
    neg = gen.negatives(n_neg, rng)
    pos_scores = evaluate_batch(f, pos)
    neg_scores = evaluate_batch(f, neg)
    errors = (pos_scores[:, None] - neg_scores[None, :] <= 0.0).astype(float)
    return RiskEstimate(
        float(errors.mean()), "mc_expected_ranking_error", (n_pos, n_neg), _grid_std_error(errors)
    )
