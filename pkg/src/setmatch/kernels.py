"""Kernels on items, sets, and set pairs; Gram matrices; RKHS score functions.

The set kernel is the mean embedding
``k_set(A, B) = (1/(|A||B|)) sum_ij k(a_i, b_j)``, which is invariant to
item order in both arguments by construction.  The pair kernel is the
symmetrized product

    K((X, Y), (X', Y')) = k_set(X, X') k_set(Y, Y') + k_set(X, Y') k_set(Y, X'),

a sum over the two-element exchange group of positive-semidefinite product
kernels, so it is PSD, symmetric between its arguments, and every function
in its RKHS scores (X, Y) and (Y, X) identically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np
from scipy.spatial.distance import cdist, pdist

from .errors import DimensionMismatchError, EmptyInputError, UnboundedKernelError
from .sets import ItemSet, SetPair, as_feature_vector

# Cap on base-kernel matrix entries materialized at once (~32 MB float64).
_MAX_BLOCK_ENTRIES = 4_194_304


@dataclass(frozen=True)
class BaseKernelSpec:
    """Base kernel on items: rbf exp(-gamma ||x-x'||^2) or linear <x, x'>."""

    kind: str = "rbf"
    gamma: float = 1.0

    def __post_init__(self):
        if self.kind not in ("rbf", "linear"):
            raise ValueError(f"unknown base kernel kind {self.kind!r}")
        if self.kind == "rbf" and not self.gamma > 0:
            raise ValueError("rbf bandwidth gamma must be positive")


@dataclass(frozen=True)
class PairKernel:
    """Symmetrized product-of-mean-embeddings kernel on set pairs."""

    base: BaseKernelSpec = field(default_factory=BaseKernelSpec)


def base_kernel(x, y, spec: BaseKernelSpec) -> float:
    """Base kernel between two item vectors."""
    x = as_feature_vector(x)
    y = as_feature_vector(y)
    if x.size != y.size:
        raise DimensionMismatchError(f"item dimensions differ: {x.size} vs {y.size}")
    if spec.kind == "rbf":
        d = x - y
        return float(math.exp(-spec.gamma * float(d @ d)))
    return float(x @ y)


def base_kernel_matrix(x: np.ndarray, y: np.ndarray, spec: BaseKernelSpec) -> np.ndarray:
    """All-pairs base kernel between the rows of two item matrices."""
    if x.shape[1] != y.shape[1]:
        raise DimensionMismatchError(f"item dimensions differ: {x.shape[1]} vs {y.shape[1]}")
    if spec.kind == "rbf":
        return np.exp(-spec.gamma * cdist(x, y, "sqeuclidean"))
    return x @ y.T


def _stack(sets: Sequence[ItemSet]):
    if len(sets) == 0:
        raise EmptyInputError("need at least one item set")
    items = np.concatenate([s.items for s in sets], axis=0)
    sizes = np.array([s.size for s in sets])
    offsets = np.zeros(len(sets), dtype=np.intp)
    np.cumsum(sizes[:-1], out=offsets[1:])
    return items, sizes, offsets


def set_kernel_matrix(
    sets_a: Sequence[ItemSet], sets_b: Sequence[ItemSet], spec: BaseKernelSpec
) -> np.ndarray:
    """Mean-embedding set kernel between every set in ``a`` and every set in ``b``.

    One stacked base-kernel matrix per chunk, then block means via
    ``np.add.reduceat`` (fixed summation order, so results are
    reproducible bit-for-bit for a fixed input).
    """
    items_a, sizes_a, offs_a = _stack(sets_a)
    items_b, sizes_b, offs_b = _stack(sets_b)

    chunk = max(1, _MAX_BLOCK_ENTRIES // max(1, items_a.shape[0] * int(sizes_b.max())))
    out = np.empty((len(sets_a), len(sets_b)))
    ends_b = np.cumsum(sizes_b)
    for start in range(0, len(sets_b), chunk):
        stop = min(start + chunk, len(sets_b))
        lo = offs_b[start]
        hi = ends_b[stop - 1]
        k = base_kernel_matrix(items_a, items_b[lo:hi], spec)
        sums = np.add.reduceat(k, offs_a, axis=0)
        sums = np.add.reduceat(sums, offs_b[start:stop] - lo, axis=1)
        out[:, start:stop] = sums / np.outer(sizes_a, sizes_b[start:stop])
    return out


def set_kernel(a: ItemSet, b: ItemSet, spec: BaseKernelSpec) -> float:
    """Mean of the base kernel over all cross-set item pairs."""
    return float(set_kernel_matrix([a], [b], spec)[0, 0])


def pair_kernel_matrix(
    pairs_a: Sequence[SetPair], pairs_b: Sequence[SetPair], pk: PairKernel
) -> np.ndarray:
    """Pair kernel between every pair in ``a`` and every pair in ``b``."""
    firsts_a = [z.first for z in pairs_a]
    seconds_a = [z.second for z in pairs_a]
    firsts_b = [z.first for z in pairs_b]
    seconds_b = [z.second for z in pairs_b]
    xx = set_kernel_matrix(firsts_a, firsts_b, pk.base)
    yy = set_kernel_matrix(seconds_a, seconds_b, pk.base)
    xy = set_kernel_matrix(firsts_a, seconds_b, pk.base)
    yx = set_kernel_matrix(seconds_a, firsts_b, pk.base)
    return xx * yy + xy * yx


def pair_kernel(z: SetPair, zp: SetPair, pk: PairKernel) -> float:
    """Symmetrized product kernel between two set pairs."""
    return float(pair_kernel_matrix([z], [zp], pk)[0, 0])


@dataclass(frozen=True)
class GramMatrix:
    """Pair-kernel Gram matrix over a fixed sequence of anchor pairs."""

    entries: np.ndarray
    anchors: tuple

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=float)
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "anchors", tuple(self.anchors))
        m = len(self.anchors)
        if entries.shape != (m, m):
            raise ValueError(f"Gram entries shape {entries.shape} does not match {m} anchors")

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.entries)[0])

    def psd_slack(self) -> float:
        """min eigenvalue + 1e-8 * trace; nonnegative iff PSD within tolerance."""
        return self.min_eigenvalue() + 1e-8 * float(np.trace(self.entries))


def gram(anchors: Sequence[SetPair], pk: PairKernel) -> GramMatrix:
    """Gram matrix G_ij = K(Z_i, Z_j) over the anchor pairs."""
    if len(anchors) == 0:
        raise EmptyInputError("need at least one anchor pair")
    return GramMatrix(pair_kernel_matrix(anchors, anchors, pk), tuple(anchors))


def kappa(pk: PairKernel, sample: Optional[Sequence[SetPair]] = None) -> float:
    """sup over inputs of sqrt(K(z, z)).

    For the rbf base this is the analytic sqrt(2): each mean-embedded set
    has k_set(A, A) <= 1 with equality when all items coincide, and
    Cauchy-Schwarz caps the cross term, so K(z, z) <= 2 with the sup
    attained at X = Y = one repeated point.  The linear base is unbounded,
    so the sup is taken over a provided sample instead.
    """
    if pk.base.kind == "rbf":
        return math.sqrt(2.0)
    if sample is None or len(sample) == 0:
        raise UnboundedKernelError("linear base kernel is unbounded; provide a sample")
    return empirical_kappa(pk, sample)


def empirical_kappa(pk: PairKernel, sample: Sequence[SetPair]) -> float:
    """Diagnostic: max over the sample of sqrt(K(z, z))."""
    if len(sample) == 0:
        raise EmptyInputError("empirical kappa needs a non-empty sample")
    diag = [pair_kernel(z, z, pk) for z in sample]
    return float(np.sqrt(np.max(diag)))


@dataclass(frozen=True)
class RkhsScoreFunction:
    """Kernel expansion f(.) = sum_i c_i K(Z_i, .) over anchor pairs."""

    coefficients: np.ndarray
    anchors: tuple
    kernel: PairKernel

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=float)
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)
        object.__setattr__(self, "anchors", tuple(self.anchors))
        if c.ndim != 1 or c.size != len(self.anchors):
            raise ValueError(f"{c.size} coefficients for {len(self.anchors)} anchors")

    @classmethod
    def zero(cls, anchors: Sequence[SetPair], kernel: PairKernel) -> "RkhsScoreFunction":
        return cls(np.zeros(len(anchors)), tuple(anchors), kernel)

    def __call__(self, z: SetPair) -> float:
        return evaluate(self, z)


def evaluate(f: RkhsScoreFunction, z: SetPair) -> float:
    """Matching score f(z) = sum_i c_i K(anchor_i, z)."""
    return float(evaluate_batch(f, [z])[0])


def evaluate_batch(f: RkhsScoreFunction, pairs: Sequence[SetPair]) -> np.ndarray:
    """Scores of ``f`` on a sequence of set pairs."""
    if len(pairs) == 0:
        return np.zeros(0)
    if np.count_nonzero(f.coefficients) == 0:
        return np.zeros(len(pairs))
    k = pair_kernel_matrix(list(f.anchors), pairs, f.kernel)
    return f.coefficients @ k


def rkhs_norm(f: RkhsScoreFunction, g: GramMatrix) -> float:
    """||f||_K = sqrt(c^T G c) for the Gram matrix of f's anchors."""
    _require_matching_anchors(f, g)
    q = float(f.coefficients @ g.entries @ f.coefficients)
    return math.sqrt(max(q, 0.0))


def project_to_ball(f: RkhsScoreFunction, g: GramMatrix, r: float) -> RkhsScoreFunction:
    """Radial projection onto the RKHS ball of radius ``r``."""
    if not r > 0:
        raise ValueError("ball radius r must be positive")
    norm = rkhs_norm(f, g)
    if norm <= r:
        return f
    return replace(f, coefficients=f.coefficients * (r / norm))


def sup_norm_bound(kappa_value: float, r: float) -> float:
    """Upper bound kappa * r on sup |f(z)| for any f with ||f||_K <= r.

    Follows from the reproducing property: |f(z)| = |<f, K(z, .)>| <=
    ||f||_K sqrt(K(z, z)) <= r * kappa.
    """
    return kappa_value * r


def median_heuristic_gamma(items: np.ndarray) -> float:
    """Scale-free default rbf bandwidth from the training items.

    gamma = 1 / (2 d median ||x_i - x_j||^2); falls back to 1.0 when all
    items coincide.
    """
    items = np.asarray(items, dtype=float)
    if items.ndim != 2 or items.shape[0] < 2:
        return 1.0
    med = float(np.median(pdist(items, "sqeuclidean")))
    if med <= 0.0:
        return 1.0
    return 1.0 / (2.0 * items.shape[1] * med)


def _require_matching_anchors(f: RkhsScoreFunction, g: GramMatrix) -> None:
    if len(f.anchors) != len(g.anchors):
        raise ValueError("score function and Gram matrix have different anchor counts")
    for a, b in zip(f.anchors, g.anchors):
        if a is not b and a != b:
            raise ValueError("score function and Gram matrix anchors differ")
