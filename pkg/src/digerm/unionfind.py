"""Disjoint-set forest over arbitrary hashable keys."""

from __future__ import annotations

from typing import Hashable, Iterable


class UnionFind:
    """Union-find with path halving and union by size.

    Keys are registered lazily by :meth:`find`; :meth:`add` only fixes the
    iteration order used by :meth:`groups`.
    """

    def __init__(self, keys: Iterable[Hashable] = ()):
        self._parent: dict = {}
        self._size: dict = {}
        for k in keys:
            self.add(k)

    def add(self, key) -> None:
        if key not in self._parent:
            self._parent[key] = key
            self._size[key] = 1

    def find(self, key):
        self.add(key)
        parent = self._parent
        while parent[key] != key:
            parent[key] = parent[parent[key]]
            key = parent[key]
        return key

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        # keep the earlier-registered root so representatives are stable
        if self._size[ra] < self._size[rb]:
            ra, rb = rb, ra
        self._parent[rb] = ra
        self._size[ra] += self._size[rb]
        return True

    def connected(self, a, b) -> bool:
        return self.find(a) == self.find(b)

    def groups(self) -> list[list]:
        """Components as lists, ordered by first appearance of a member."""
        out: dict = {}
        for k in self._parent:
            out.setdefault(self.find(k), []).append(k)
        return list(out.values())

    def __len__(self) -> int:
        return sum(1 for k in self._parent if self._parent[k] == k)
