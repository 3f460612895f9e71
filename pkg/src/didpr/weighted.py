"""Dynamic weighted sampling over a growing index set.

A Fenwick (binary indexed) tree holds nonnegative float weights for indices
0..capacity-1.  Updates and cumulative-weight draws are O(log capacity), so
preferential-attachment generation stays near-linear in the number of edges.
"""
from __future__ import annotations

__all__ = ["CumulativeWeightTree"]


class CumulativeWeightTree:
    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("capacity must be positive")
        self._n = capacity
        size = 1
        while size < capacity:
            size <<= 1
        self._size = size
        self._tree = [0.0] * (size + 1)
        self._total = 0.0

    def __len__(self) -> int:
        return self._n

    @property
    def total(self) -> float:
        return self._total

    def add(self, index: int, delta: float) -> None:
        """Add delta to the weight at index."""
        if not 0 <= index < self._n:
            raise IndexError(f"index {index} out of range")
        self._total += delta
        i = index + 1
        tree = self._tree
        while i <= self._size:
            tree[i] += delta
            i += i & (-i)

    def weight(self, index: int) -> float:
        """Current weight at index (reconstructed from prefix sums)."""
        return self.prefix_sum(index + 1) - self.prefix_sum(index)

    def prefix_sum(self, count: int) -> float:
        """Sum of weights at indices 0..count-1."""
        if count <= 0:
            return 0.0
        i = min(count, self._n)
        total = 0.0
        tree = self._tree
        while i > 0:
            total += tree[i]
            i -= i & (-i)
        return total

    def sample(self, point: float) -> int:
        """Index whose cumulative-weight interval contains point.

        point must lie in [0, total); the return value is the smallest index
        with prefix sum exceeding point.  Draw point as u * total with
        u ~ Uniform[0, 1) to sample proportionally to the weights.
        """
        if not 0.0 <= point < self._total:
            raise ValueError(f"point {point} outside [0, {self._total})")
        idx = 0
        mask = self._size
        tree = self._tree
        while mask:
            nxt = idx + mask
            if nxt <= self._size and tree[nxt] <= point:
                point -= tree[nxt]
                idx = nxt
            mask >>= 1
        if idx >= self._n:  # guard against float drift at the upper edge
            idx = self._n - 1
        return idx
