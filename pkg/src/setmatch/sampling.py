"""Synthetic matched-pair generator and the negative-sampling protocol.

Positives come from a finite mixture: the generator seed pins a palette of
cluster centers, each positive pair picks one center and scatters both of
its sets around it.  Negatives recombine the first element of one positive
with the second element of a different one, which realizes the product of
the two marginal distributions - the recombination protocol - without ever
reproducing an observed positive pairing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .errors import CannotRecombineError, EmptyInputError
from .sets import ItemSet, SetPair


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters of the synthetic ground-truth distribution."""

    d: int = 2
    n_clusters: int = 4
    cluster_std: float = 3.0
    within_pair_std: float = 0.3
    set_size_range: Tuple[int, int] = (2, 5)
    seed: int = 0

    def __post_init__(self):
        lo, hi = self.set_size_range
        if self.d < 1:
            raise ValueError("dimension d must be >= 1")
        if self.n_clusters < 2:
            raise ValueError("need at least 2 clusters")
        if not (self.cluster_std > 0 and self.within_pair_std > 0):
            raise ValueError("cluster_std and within_pair_std must be positive")
        if lo < 1 or hi < lo:
            raise ValueError(f"invalid set size range {self.set_size_range}")


@dataclass(frozen=True)
class MatchingDataset:
    """Positive pairs and recombined negative pairs."""

    positives: tuple
    negatives: tuple

    def __post_init__(self):
        object.__setattr__(self, "positives", tuple(self.positives))
        object.__setattr__(self, "negatives", tuple(self.negatives))
        if len(self.positives) < 1:
            raise EmptyInputError("a dataset needs at least one positive pair")

    @property
    def m_pos(self) -> int:
        return len(self.positives)

    @property
    def m_neg(self) -> int:
        return len(self.negatives)

    @property
    def m(self) -> int:
        return self.m_pos + self.m_neg

    @property
    def alpha(self) -> float:
        """Positive ratio m+/m."""
        return self.m_pos / self.m

    @property
    def pairs(self) -> tuple:
        """All pairs, positives first then negatives."""
        return self.positives + self.negatives

    @property
    def dim(self) -> int:
        return self.positives[0].dim


class PairGenerator:
    """Draws fresh positive and negative pairs from the spec's distributions.

    The cluster-center palette is derived from ``spec.seed`` alone, so two
    generators built from the same spec sample the same distribution no
    matter which RNG streams the draws.
    """

    def __init__(self, spec: GeneratorSpec):
        self.spec = spec
        centers_rng = np.random.default_rng(
            np.random.SeedSequence(entropy=spec.seed, spawn_key=(0,))
        )
        self.centers = spec.cluster_std * centers_rng.standard_normal((spec.n_clusters, spec.d))

    def default_rng(self) -> np.random.Generator:
        """Item-draw stream used when the caller does not supply one."""
        return np.random.default_rng(np.random.SeedSequence(entropy=self.spec.seed, spawn_key=(1,)))

    def _item_set(self, center: np.ndarray, rng) -> ItemSet:
        lo, hi = self.spec.set_size_range
        n = int(rng.integers(lo, hi + 1))
        return ItemSet(center + self.spec.within_pair_std * rng.standard_normal((n, self.spec.d)))

    def positives(self, n: int, rng) -> list:
        """Fresh matched pairs: both sets scatter around one shared center."""
        rng = np.random.default_rng(rng)
        out = []
        for _ in range(n):
            center = self.centers[int(rng.integers(self.spec.n_clusters))]
            out.append(SetPair(self._item_set(center, rng), self._item_set(center, rng)))
        return out

    def negatives(self, n: int, rng) -> list:
        """Fresh unmatched pairs from the product of the two marginals."""
        rng = np.random.default_rng(rng)
        firsts = self.positives(n, rng)
        seconds = self.positives(n, rng)
        return [SetPair(a.first, b.second) for a, b in zip(firsts, seconds)]


def generate_positives(spec: GeneratorSpec, m_pos: int, rng=None) -> list:
    """Draw ``m_pos`` positive pairs; deterministic for a fixed spec seed."""
    if m_pos < 1:
        raise ValueError("m_pos must be >= 1")
    gen = PairGenerator(spec)
    if rng is None:
        rng = gen.default_rng()
    return gen.positives(m_pos, rng)


def negative_sampling(positives: Sequence[SetPair], m_neg: int, rng) -> list:
    """Recombine observed positives into ``m_neg`` negatives.

    Each negative is (X_i, Y_j) with i != j drawn uniformly, sampled with
    replacement across negatives; pairings identical to an observed
    positive (i == j) are excluded by construction.
    """
    n = len(positives)
    if n < 2:
        raise CannotRecombineError("need at least 2 positives to recombine negatives")
    if m_neg < 1:
        raise ValueError("m_neg must be >= 1")
    rng = np.random.default_rng(rng)
    out = []
    for _ in range(m_neg):
        i = int(rng.integers(n))
        j = int(rng.integers(n - 1))
        if j >= i:
            j += 1
        out.append(SetPair(positives[i].first, positives[j].second))
    return out


def assemble(positives: Sequence[SetPair], negatives: Sequence[SetPair]) -> MatchingDataset:
    """Bundle positives and negatives into a dataset."""
    return MatchingDataset(tuple(positives), tuple(negatives))


def assemble_with_ratio(spec: GeneratorSpec, m: int, alpha: float, rng=None) -> MatchingDataset:
    """Generate a size-m dataset with positive ratio alpha.

    m+ = round(alpha * m) with round-half-to-even; both sides must end up
    non-empty or the ratio is rejected as degenerate.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    m_pos = int(round(alpha * m))
    m_neg = m - m_pos
    if m_pos < 1 or m_neg < 1:
        raise ValueError(f"degenerate split for m={m}, alpha={alpha}: m+={m_pos}, m-={m_neg}")
    gen = PairGenerator(spec)
    if rng is None:
        rng = gen.default_rng()
    rng = np.random.default_rng(rng)
    positives = gen.positives(m_pos, rng)
    negatives = negative_sampling(positives, m_neg, rng)
    return assemble(positives, negatives)
