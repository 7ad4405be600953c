"""Rademacher complexity estimators and generalization-bound calculators.

For the RKHS ball of radius r the inner supremum of the empirical
Rademacher complexity is closed-form,

    sup_{||f|| <= r} (1/m) sum_i sigma_i f(Z_i) = (r/m) sqrt(sigma^T G sigma),

because sum_i sigma_i f(Z_i) = <f, sum_i sigma_i K(Z_i, .)> is maximized by
aligning f with the sign-weighted combination of kernel sections.  Only the
outer expectation over sign vectors needs Monte Carlo.

The bound calculators are pure formula evaluators; each returns its value
together with a component breakdown and the inputs that produced it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import EmptyInputError
from .kernels import PairKernel, pair_kernel_matrix
from .sampling import MatchingDataset
from .sets import SetPair

DEFAULT_N_SIGMA = 2000

_ALPHA_GRID = np.round(np.arange(1, 100) * 0.01, 2)


@dataclass(frozen=True)
class RademacherEstimate:
    """Monte Carlo estimate of an empirical Rademacher complexity."""

    value: float
    n_sigma: int
    std_error: float
    which: str = "joint"


@dataclass(frozen=True)
class BoundReport:
    """A bound value, its additive components, and the inputs behind it."""

    bound_value: float
    components: dict
    inputs: dict
    source: str

    def __post_init__(self):
        total = sum(self.components.values())
        if abs(total - self.bound_value) > 1e-12:
            raise ValueError(
                f"components sum to {total!r} but bound_value is {self.bound_value!r}"
            )


def rademacher_from_gram(g: np.ndarray, r: float, n_sigma: int, rng) -> RademacherEstimate:
    """Average the closed-form supremum (r/m) sqrt(sigma^T G sigma) over sign draws."""
    if n_sigma < 1:
        raise ValueError("n_sigma must be >= 1")
    g = np.asarray(g, dtype=float)
    m = g.shape[0]
    rng = np.random.default_rng(rng)
    sigma = rng.integers(0, 2, size=(n_sigma, m)) * 2.0 - 1.0
    quad = np.einsum("ij,ij->i", sigma @ g, sigma)
    vals = (r / m) * np.sqrt(np.maximum(quad, 0.0))
    se = float(vals.std(ddof=1) / math.sqrt(n_sigma)) if n_sigma > 1 else 0.0
    return RademacherEstimate(float(vals.mean()), n_sigma, se)


def empirical_rademacher_rkhs(
    anchors: Sequence[SetPair], pk: PairKernel, r: float, n_sigma: int, rng
) -> RademacherEstimate:
    """Empirical Rademacher complexity of the radius-r ball on the anchors."""
    if len(anchors) == 0:
        raise EmptyInputError("need at least one anchor pair")
    g = pair_kernel_matrix(list(anchors), list(anchors), pk)
    return rademacher_from_gram(g, r, n_sigma, rng)


def marginal_rademacher(
    s: MatchingDataset, which: str, pk: PairKernel, r: float, n_sigma: int, rng
) -> RademacherEstimate:
    """Complexity restricted to one side of the ranking pairs.

    ``which`` selects the sample: "positives" for the first elements of the
    ranking pairs, "negatives" for the second.
    """
    if which == "positives":
        side, label = s.positives, "marginal_1"
    elif which == "negatives":
        side, label = s.negatives, "marginal_2"
    else:
        raise ValueError(f"which must be 'positives' or 'negatives', got {which!r}")
    if len(side) == 0:
        raise EmptyInputError(f"dataset has no {which}")
    est = empirical_rademacher_rkhs(side, pk, r, n_sigma, rng)
    return RademacherEstimate(est.value, est.n_sigma, est.std_error, label)


def _check_delta(delta: float) -> None:
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must be in (0, 1), got {delta}")


def _confidence_term(m: int, delta: float, variant: str) -> float:
    if m < 1:
        raise ValueError("m must be >= 1")
    if variant == "expected":
        return math.sqrt(math.log(1.0 / delta) / (2.0 * m))
    if variant == "empirical":
        return 3.0 * math.sqrt(math.log(2.0 / delta) / (2.0 * m))
    raise ValueError(f"variant must be 'expected' or 'empirical', got {variant!r}")


def lemma1_bound(
    empirical_mean: float, complexity: float, m: int, delta: float, variant: str = "expected"
) -> float:
    """Uniform bound for [0,1]-valued function families.

    expected variant:  mean + 2 complexity + sqrt(log(1/delta) / 2m)
    empirical variant: mean + 2 complexity + 3 sqrt(log(2/delta) / 2m)
    """
    _check_delta(delta)
    return empirical_mean + 2.0 * complexity + _confidence_term(m, delta, variant)


def margin_bound(
    margin_risk: float,
    rad1: float,
    rad2: float,
    rho: float,
    m: int,
    delta: float,
    variant: str = "expected",
) -> BoundReport:
    """Margin bound on the expected ranking error.

    bound = empirical margin risk + (2/rho)(rad1 + rad2) + confidence term,
    where rad1 and rad2 are the complexities of the two marginal samples
    and the confidence term depends on the variant as in ``lemma1_bound``.
    """
    if not rho > 0:
        raise ValueError("margin rho must be positive")
    _check_delta(delta)
    components = {
        "empirical_margin_risk": margin_risk,
        "complexity_term": (2.0 / rho) * (rad1 + rad2),
        "confidence_term": _confidence_term(m, delta, variant),
    }
    inputs = {"rho": rho, "delta": delta, "m": m, "rad1": rad1, "rad2": rad2}
    source = "thm1_expected" if variant == "expected" else "thm1_empirical"
    return BoundReport(sum(components.values()), components, inputs, source)


def _check_tail_params(m: int, alpha: float, L: float, kappa: float, r: float) -> None:
    if m < 1:
        raise ValueError("m must be >= 1")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    if not (L > 0 and kappa > 0 and r > 0):
        raise ValueError("L, kappa, and r must all be positive")


def rkhs_tail_probability(
    epsilon: float, m: int, alpha: float, L: float, kappa: float, r: float
) -> float:
    """Probability bound on a generalization gap of at least epsilon.

        2 exp(-alpha^2 (1-alpha)^2 m epsilon^2 / (2 L^2 kappa^2 r^2))

    The exponent is negative: a bounded-differences concentration bound
    must decay in epsilon, and values >= 1 are vacuous.  Strictly
    decreasing in epsilon and m; for fixed epsilon and m the bound is
    largest at alpha = 1/2.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    _check_tail_params(m, alpha, L, kappa, r)
    exponent = (alpha * (1.0 - alpha)) ** 2 * m * epsilon**2 / (2.0 * (L * kappa * r) ** 2)
    return 2.0 * math.exp(-exponent)


def rkhs_deviation_bound(
    m: int, alpha: float, delta: float, L: float, kappa: float, r: float
) -> BoundReport:
    """Gap size epsilon(delta) that the tail bound assigns probability delta.

        epsilon = (L kappa r / (alpha (1 - alpha))) sqrt(2 log(2/delta) / m)

    Inverse of ``rkhs_tail_probability`` in epsilon, symmetric in
    alpha <-> 1 - alpha, and halves exactly when m is quadrupled.
    """
    _check_delta(delta)
    _check_tail_params(m, alpha, L, kappa, r)
    epsilon = (L * kappa * r / (alpha * (1.0 - alpha))) * math.sqrt(
        2.0 * math.log(2.0 / delta) / m
    )
    inputs = {"L": L, "kappa": kappa, "r": r, "delta": delta, "m": m, "alpha": alpha}
    return BoundReport(epsilon, {"deviation_term": epsilon}, inputs, "remark2_deviation")


class OptimalAlpha(NamedTuple):
    analytic: float
    grid: float


def optimal_alpha(m: int, L: float, kappa: float, r: float, delta: float) -> OptimalAlpha:
    """Positive ratio minimizing the deviation bound at fixed total sample size.

    The bound scales as 1/(alpha(1-alpha)), minimized at alpha = 1/2; the
    grid field cross-checks by scanning alpha in {0.01, ..., 0.99}.
    """
    values = [
        rkhs_deviation_bound(m, float(a), delta, L, kappa, r).bound_value for a in _ALPHA_GRID
    ]
    return OptimalAlpha(0.5, float(_ALPHA_GRID[int(np.argmin(values))]))


class OptimalNegativeRatio(NamedTuple):
    negative_fraction: float
    grid_alpha: float
    recommended_m_neg: int


def optimal_negative_ratio(
    m_pos: int, L: float, kappa: float, r: float, delta: float
) -> OptimalNegativeRatio:
    """Negative fraction minimizing the deviation bound at fixed positive count.

    With m+ fixed and m = m+/alpha the bound scales as 1/(sqrt(alpha)(1-alpha)),
    whose stationary point is alpha = 1/3: the optimal negative fraction is
    2/3, i.e. two negatives per positive.  The grid field cross-checks by
    scanning alpha in {0.01, ..., 0.99}.
    """
    if m_pos < 1:
        raise ValueError("m_pos must be >= 1")
    scale = L * kappa * r * math.sqrt(2.0 * math.log(2.0 / delta) / m_pos)
    values = [scale / (math.sqrt(a) * (1.0 - a)) for a in _ALPHA_GRID]
    grid_alpha = float(_ALPHA_GRID[int(np.argmin(values))])
    return OptimalNegativeRatio(2.0 / 3.0, grid_alpha, 2 * m_pos)
