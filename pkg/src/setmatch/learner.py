"""Empirical risk minimization over the RKHS ball.

Training runs projected gradient descent on the coefficients of a kernel
expansion anchored at the training pairs themselves: each step evaluates
the surrogate loss over the full positive x negative score grid, takes the
exact coefficient gradient, and radially projects back into the ball of
radius r.  Coefficients start at zero, so the zero-function baselines
(logistic risk log 2, ranking error 1) are exact at step 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
from scipy.special import expit

from .kernels import (
    GramMatrix,
    PairKernel,
    RkhsScoreFunction,
    gram,
    rkhs_norm,
)
from .losses import (
    LOGISTIC,
    RiskEstimate,
    SurrogateSpec,
    empirical_margin_risk,
    empirical_risk,
    mc_expected_risk,
    mc_ranking_error,
    surrogate_values,
)
from .sampling import MatchingDataset


@dataclass(frozen=True)
class TrainConfig:
    """Projected gradient descent settings."""

    r: float = 1.0
    steps: int = 200
    step_size: float = 0.05
    surrogate: SurrogateSpec = field(default_factory=SurrogateSpec)
    seed: int = 0

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError("RKHS radius r must be positive")
        if not self.step_size > 0:
            raise ValueError("step size must be positive")
        if self.steps < 0:
            raise ValueError("steps must be >= 0")


@dataclass(frozen=True)
class TrainTrace:
    """Empirical risk before training and after every step."""

    risks: np.ndarray
    final_norm: float
    anchor_count: int


def surrogate_slope(t, spec: SurrogateSpec):
    """Derivative (or subgradient) of the surrogate at score difference t.

    Logistic: -1/(1 + e^t).  Margin: -1/rho strictly inside (0, rho) and 0
    elsewhere, taking the flat side's value at both kinks.
    """
    t = np.asarray(t, dtype=float)
    if spec.kind == LOGISTIC:
        return -expit(-t)
    slope = np.zeros_like(t)
    slope[(t > 0.0) & (t < spec.rho)] = -1.0 / spec.rho
    return slope


def _grid_risk(pos_scores, neg_scores, spec: SurrogateSpec) -> float:
    return float(surrogate_values(pos_scores[:, None] - neg_scores[None, :], spec).mean())


def coefficient_gradient(
    coefficients: np.ndarray, g: np.ndarray, m_pos: int, spec: SurrogateSpec
) -> np.ndarray:
    """Exact gradient of the empirical risk in the anchor coefficients.

    With scores s = G c, the risk is the grid mean of phi(s_i - s_j) over
    positives i and negatives j, so the gradient is the phi'-weighted
    combination of Gram columns (1/(m+ m-)) sum_ij phi'(t_ij) (G e_i - G e_j).
    """
    scores = g @ coefficients
    pos, neg = scores[:m_pos], scores[m_pos:]
    m_neg = neg.size
    w = surrogate_slope(pos[:, None] - neg[None, :], spec)
    grad = g[:, :m_pos] @ w.sum(axis=1) - g[:, m_pos:] @ w.sum(axis=0)
    return grad / (m_pos * m_neg)


def train(
    s: MatchingDataset, pk: PairKernel, cfg: TrainConfig
) -> Tuple[RkhsScoreFunction, TrainTrace]:
    """Fit a score function in the radius-r ball by projected gradient descent.

    Anchors are the m+ + m- training pairs in dataset order (positives
    first).  The trace records the empirical risk at initialization and
    after every step, so it has steps + 1 entries.
    """
    if s.m_neg < 1:
        raise ValueError("training needs at least one negative pair")
    anchors = s.pairs
    g = gram(anchors, pk)
    m_pos = s.m_pos
    c = np.zeros(len(anchors))

    def risk_of(coef):
        scores = g.entries @ coef
        return _grid_risk(scores[:m_pos], scores[m_pos:], cfg.surrogate)

    risks = [risk_of(c)]
    for _ in range(cfg.steps):
        grad = coefficient_gradient(c, g.entries, m_pos, cfg.surrogate)
        if not np.all(np.isfinite(grad)):
            raise FloatingPointError(
                f"non-finite gradient at step {len(risks) - 1}; "
                f"|c|_max={np.abs(c).max():.3g}, surrogate={cfg.surrogate.kind}"
            )
        c = c - cfg.step_size * grad
        q = float(c @ g.entries @ c)
        norm = np.sqrt(max(q, 0.0))
        if norm > cfg.r:
            c = c * (cfg.r / norm)
        risks.append(risk_of(c))

    f = RkhsScoreFunction(c, anchors, pk)
    trace = TrainTrace(np.asarray(risks), rkhs_norm(f, g), len(anchors))
    return f, trace


@dataclass(frozen=True)
class ModelReport:
    """Risks and norm of a fitted score function on held-out data."""

    empirical_risk: RiskEstimate
    empirical_margin_risk: RiskEstimate
    mc_surrogate_risk: RiskEstimate
    mc_ranking_error: RiskEstimate
    norm: float

    def as_dict(self) -> dict:
        return {
            "empirical_risk": self.empirical_risk.value,
            "empirical_margin_risk": self.empirical_margin_risk.value,
            "mc_surrogate_risk": self.mc_surrogate_risk.value,
            "mc_surrogate_risk_se": self.mc_surrogate_risk.std_error,
            "mc_ranking_error": self.mc_ranking_error.value,
            "mc_ranking_error_se": self.mc_ranking_error.std_error,
            "rkhs_norm": self.norm,
        }


def evaluate_model(
    f: RkhsScoreFunction,
    s_test: MatchingDataset,
    gen,
    rho: float,
    n_mc: int,
    rng,
    spec: SurrogateSpec = SurrogateSpec(LOGISTIC),
    g: GramMatrix | None = None,
) -> ModelReport:
    """Empirical and Monte Carlo risks of ``f``; deterministic given the rng seed.

    ``n_mc`` fresh positives and ``n_mc`` fresh negatives are drawn for each
    Monte Carlo estimate.  Pass the anchors' Gram matrix ``g`` to reuse it,
    otherwise it is recomputed for the norm.
    """
    rng = np.random.default_rng(rng)
    if g is None:
        g = gram(list(f.anchors), f.kernel)
    return ModelReport(
        empirical_risk=empirical_risk(f, s_test, spec),
        empirical_margin_risk=empirical_margin_risk(f, s_test, rho),
        mc_surrogate_risk=mc_expected_risk(f, gen, n_mc, n_mc, spec, rng),
        mc_ranking_error=mc_ranking_error(f, gen, n_mc, n_mc, rng),
        norm=rkhs_norm(f, g),
    )
