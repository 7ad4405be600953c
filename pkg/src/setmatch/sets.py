"""Items, sets, set pairs, and structural property checkers.

An :class:`ItemSet` is an unordered collection of d-dimensional feature
vectors; a :class:`SetPair` is an ordered pair of such sets, the atomic
input to a matching score function.  Storage order inside a set is an
implementation detail: every exported operation is order-free, and the
checkers in this module verify that numerically for arbitrary functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import EmptyInputError, DimensionMismatchError, InvalidPermutationError

# Tolerance for identities that hold exactly in real arithmetic and only
# accumulate float64 reordering noise at desk scale (sets <= 100 items).
INVARIANCE_TOL = 1e-9


def as_feature_vector(x) -> np.ndarray:
    """Validate and return a single finite 1-d float vector."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1 or arr.size < 1:
        raise DimensionMismatchError(f"feature vector must be 1-d and non-empty, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("feature vector contains NaN or Inf")
    return arr


class ItemSet:
    """Unordered collection of d-dimensional feature vectors.

    Items are stored as a read-only (n, d) float64 array.  Minimum size
    is 1: the mean-embedding machinery downstream is undefined for empty
    sets, so emptiness is rejected at construction.
    """

    __slots__ = ("items",)

    def __init__(self, items):
        arr = np.array(items, dtype=float)
        if arr.ndim != 2:
            raise DimensionMismatchError(f"expected an (n, d) array of items, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise EmptyInputError("an item set needs at least one item of dimension >= 1")
        if not np.all(np.isfinite(arr)):
            raise ValueError("item set contains NaN or Inf entries")
        arr.setflags(write=False)
        self.items = arr

    @property
    def size(self) -> int:
        return self.items.shape[0]

    @property
    def dim(self) -> int:
        return self.items.shape[1]

    def __eq__(self, other) -> bool:
        return isinstance(other, ItemSet) and np.array_equal(self.items, other.items)

    def __hash__(self):
        return hash(self.items.tobytes())

    def __repr__(self) -> str:
        return f"ItemSet(size={self.size}, dim={self.dim})"


@dataclass(frozen=True)
class SetPair:
    """Ordered pair of item sets, the input to a score function."""

    first: ItemSet
    second: ItemSet

    def __post_init__(self):
        if self.first.dim != self.second.dim:
            raise DimensionMismatchError(
                f"pair members disagree on dimension: {self.first.dim} vs {self.second.dim}"
            )

    @property
    def dim(self) -> int:
        return self.first.dim

    def swapped(self) -> "SetPair":
        return SetPair(self.second, self.first)


class Permutation:
    """Bijection on {0..n-1} stored as an index sequence."""

    __slots__ = ("mapping",)

    def __init__(self, mapping: Sequence[int]):
        idx = np.asarray(mapping, dtype=int)
        if idx.ndim != 1 or idx.size < 1:
            raise InvalidPermutationError("permutation must be a non-empty index sequence")
        if not np.array_equal(np.sort(idx), np.arange(idx.size)):
            raise InvalidPermutationError("index sequence is not a bijection on {0..n-1}")
        idx.setflags(write=False)
        self.mapping = idx

    @property
    def size(self) -> int:
        return self.mapping.size

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(np.arange(n))

    @classmethod
    def random(cls, n: int, rng) -> "Permutation":
        return cls(np.random.default_rng(rng).permutation(n))

    def inverse(self) -> "Permutation":
        inv = np.empty(self.size, dtype=int)
        inv[self.mapping] = np.arange(self.size)
        return Permutation(inv)


class CheckResult(NamedTuple):
    """Outcome of a numerical property check."""

    passed: bool
    deviation: float


ScoreFunction = Callable[[SetPair], float]


def apply_permutation(s: ItemSet, p: Permutation) -> ItemSet:
    """Reorder the items of ``s`` by the permutation ``p``."""
    if p.size != s.size:
        raise InvalidPermutationError(f"permutation size {p.size} != set size {s.size}")
    return ItemSet(s.items[p.mapping])


def check_permutation_invariance(
    f: ScoreFunction, z: SetPair, trials: int, rng
) -> CheckResult:
    """Check f(pi_x X, pi_y Y) == f(X, Y) over random permutation pairs.

    Returns whether every sampled permutation pair kept the score within
    INVARIANCE_TOL, together with the maximum absolute deviation seen.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(rng)
    base = f(z)
    max_dev = 0.0
    for _ in range(trials):
        px = Permutation(rng.permutation(z.first.size))
        py = Permutation(rng.permutation(z.second.size))
        permuted = SetPair(apply_permutation(z.first, px), apply_permutation(z.second, py))
        max_dev = max(max_dev, abs(f(permuted) - base))
    return CheckResult(max_dev <= INVARIANCE_TOL, max_dev)


def check_symmetry(f: ScoreFunction, z: SetPair) -> CheckResult:
    """Check f(X, Y) == f(Y, X)."""
    dev = abs(f(z) - f(z.swapped()))
    return CheckResult(dev <= INVARIANCE_TOL, dev)


def check_equivariance(
    g: Callable[[ItemSet, ItemSet], ItemSet], x: ItemSet, y: ItemSet, p: Permutation
) -> CheckResult:
    """Check g(p X, Y) == p g(X, Y) elementwise for a set-valued map."""
    if p.size != x.size:
        raise InvalidPermutationError(f"permutation size {p.size} != set size {x.size}")
    lhs = g(apply_permutation(x, p), y)
    rhs = apply_permutation(g(x, y), p)
    if lhs.items.shape != rhs.items.shape:
        return CheckResult(False, float("inf"))
    dev = float(np.max(np.abs(lhs.items - rhs.items)))
    return CheckResult(dev <= INVARIANCE_TOL, dev)


def select_best_candidate(
    f: ScoreFunction, x: ItemSet, candidates: Sequence[ItemSet]
) -> int:
    """Index of the candidate second set with the highest score.

    Ties break to the lowest index, so selection is deterministic.
    """
    if len(candidates) == 0:
        raise EmptyInputError("candidate list is empty")
    scores = np.array([f(SetPair(x, y)) for y in candidates])
    return int(np.argmax(scores))
