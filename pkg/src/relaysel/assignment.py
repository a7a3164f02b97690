"""Maximum-weight assignment and the k-cardinality padding reduction.

A k-cardinality instance (best matching with ``k`` edges in an ``n x m``
bipartite graph) becomes a square standard assignment problem of size
``n + m - k`` by adding ``m - k`` dummy rows and ``n - k`` dummy columns.
Dummy-to-original cells carry a weight larger than any original matching
can reach, dummy-to-dummy cells are 0.  Every optimal square assignment
then uses exactly ``(n - k) + (m - k)`` padding edges, which leaves
exactly ``k`` original edges, and those form an optimal k-matching.

The square problem is solved by :func:`hungarian`, backed by a compiled
kernel when available (set ``RELAYSEL_PURE=1`` to force the numpy path).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from . import _fallback

try:
    if os.environ.get("RELAYSEL_PURE"):
        raise ImportError("pure-Python backend requested")
    from . import _kernels as _backend

    BACKEND = "compiled"
except ImportError:
    _backend = _fallback
    BACKEND = "python"

PADDED = -1


@dataclass(frozen=True)
class KCardInstance:
    weights: np.ndarray
    k: int

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 2:
            raise ValueError(f"weights must be 2-D, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        object.__setattr__(self, "weights", np.maximum(w, 0.0))
        if not 0 <= self.k <= min(self.n, self.m):
            raise ValueError(f"k={self.k} outside [0, min(n, m)] = [0, {min(self.n, self.m)}]")

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def m(self) -> int:
        return self.weights.shape[1]


@dataclass(frozen=True)
class PaddedInstance:
    weights: np.ndarray
    n: int
    m: int
    k: int
    a_value: float

    @property
    def size(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class KCardSolution:
    edges: tuple[tuple[int, int], ...]
    total_weight: float
    perm: np.ndarray  # raw padded assignment, row -> column


def hungarian(weights) -> np.ndarray:
    """Maximum-weight perfect matching of a square matrix.

    Returns ``perm`` with row ``i`` assigned to column ``perm[i]``.  Among
    equal-weight optima the result is deterministic.
    """
    w = np.ascontiguousarray(weights, dtype=float)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {w.shape}")
    if not np.all(np.isfinite(w)):
        raise ValueError("matrix entries must be finite")
    return _backend.hungarian_max(w)


def pad(instance: KCardInstance) -> PaddedInstance:
    n, m, k = instance.n, instance.m, instance.k
    w = instance.weights
    max_w = float(w.max()) if w.size else 0.0
    # exceeds any matching total: at most min(n, m) edges of weight <= max_w
    a_value = (max_w + 1.0) * (n + m)
    size = n + m - k
    padded = np.zeros((size, size))
    padded[:n, :m] = w
    padded[:n, m:] = a_value
    padded[n:, :m] = a_value
    return PaddedInstance(weights=padded, n=n, m=m, k=k, a_value=a_value)


def extract(perm, n: int, m: int) -> np.ndarray:
    """Per original row: matched column, or :data:`PADDED` for rows sent to a dummy column."""
    perm = np.asarray(perm)
    head = perm[:n]
    return np.where(head < m, head, PADDED)


def count_pad_edges(perm, n: int, m: int) -> int:
    """Edges of a padded assignment that join an original vertex to a dummy one."""
    perm = np.asarray(perm)
    return int(np.sum(perm[:n] >= m) + np.sum(perm[n:] < m))


def solve_kcard(instance: KCardInstance) -> KCardSolution:
    """Best matching with exactly ``k`` edges (equivalently at most ``k``, weights being >= 0)."""
    padded = pad(instance)
    perm = hungarian(padded.weights)
    rows = extract(perm, instance.n, instance.m)
    edges = tuple((i, int(j)) for i, j in enumerate(rows) if j != PADDED)
    total = math.fsum(instance.weights[i, j] for i, j in edges)
    return KCardSolution(edges=edges, total_weight=total, perm=perm)
