"""Branching and merging spaces as CW-complex data.

For a cellular complex, the branching space at a state ``a`` has one
``k``-cell for each globular cell of dimension ``k + 1`` leaving ``a``, and
the cells are glued in attachment order along the recorded branch incidence.
The merging space is the branching space of the time-reversed complex.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .globular import GlobularComplex, require_valid
from .unionfind import UnionFind


class UnknownStateError(KeyError):
    def __str__(self) -> str:
        return self.args[0]


@dataclass(frozen=True)
class CWComplexData:
    """Graded cells and integer boundary matrices.

    ``boundary[k]`` has one row per ``(k-1)``-cell and one column per
    ``k``-cell, both in the order of ``cells``.
    """

    cells: dict[int, tuple[str, ...]]
    boundary: dict[int, tuple[tuple[int, ...], ...]]
    state_tag: str

    def ranks(self) -> tuple[int, ...]:
        top = max((k for k, v in self.cells.items() if v), default=-1)
        return tuple(len(self.cells.get(k, ())) for k in range(top + 1))

    def is_empty(self) -> bool:
        return not any(self.cells.values())

    def column(self, k: int, j: int) -> dict[str, int]:
        rows = self.cells[k - 1]
        return {rows[i]: row[j] for i, row in enumerate(self.boundary[k]) if row[j]}

    def to_json(self) -> dict:
        return {
            "state": self.state_tag,
            "cells": {str(k): list(v) for k, v in sorted(self.cells.items())},
            "boundary": {str(k): [list(r) for r in m] for k, m in sorted(self.boundary.items())},
        }

    def to_dot(self, name: str | None = None) -> str:
        """The 1-skeleton as an undirected DOT graph."""
        title = name or f"branching_{self.state_tag}"
        lines = [f'graph "{_esc(title)}" {{']
        for c in self.cells.get(0, ()):
            lines.append(f'  "{_esc(c)}";')
        for j, e in enumerate(self.cells.get(1, ())):
            ends = list(self.column(1, j))
            if len(ends) >= 2:
                a, b = ends[0], ends[1]
            elif len(ends) == 1:
                a = b = ends[0]
            else:
                continue
            lines.append(f'  "{_esc(a)}" -- "{_esc(b)}" [label="{_esc(e)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _esc(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def _germ_space(X: GlobularComplex, state: str, side: str, check: bool = True) -> CWComplexData:
    if check:
        require_valid(X)
    if state not in X.states:
        raise UnknownStateError(f"unknown state {state!r}")
    end = "src" if side == "branch" else "tgt"
    by_degree: dict[int, list] = {}
    for c in X.cells:
        if getattr(c, end) == state:
            by_degree.setdefault(c.dim - 1, []).append(c)
    top = max(by_degree, default=-1)
    cells = {k: tuple(c.id for c in by_degree.get(k, ())) for k in range(top + 1)}
    boundary = {}
    for k in range(1, top + 1):
        row_of = {cid: i for i, cid in enumerate(cells[k - 1])}
        mat = [[0] * len(cells[k]) for _ in cells[k - 1]]
        for j, c in enumerate(by_degree.get(k, ())):
            for coef, x in getattr(c, side):
                if x in row_of:
                    mat[row_of[x]][j] += coef
        boundary[k] = tuple(tuple(r) for r in mat)
    return CWComplexData(cells=cells, boundary=boundary, state_tag=state)


def branching_space(X: GlobularComplex, state: str) -> CWComplexData:
    return _germ_space(X, state, "branch")


def merging_space(X: GlobularComplex, state: str) -> CWComplexData:
    # Equal to branching_space(op(X), state); reading the merge side
    # directly avoids revalidating the reversed complex.
    return _germ_space(X, state, "merge")


@dataclass(frozen=True)
class ComponentMap:
    """Path components of a CW complex and the augmentation to its state."""

    component: dict[str, int]
    count: int
    state_tag: str
    members: tuple[tuple[str, ...], ...] = field(default=())

    def augmentation(self, comp: int) -> str:
        if not 0 <= comp < self.count:
            raise IndexError(comp)
        return self.state_tag


def pi0(C: CWComplexData) -> ComponentMap:
    """Components of the 1-skeleton; a 1-cell joins every 0-cell in its
    boundary."""
    uf = UnionFind(C.cells.get(0, ()))
    for j in range(len(C.cells.get(1, ()))):
        ends = list(C.column(1, j))
        for other in ends[1:]:
            uf.union(ends[0], other)
    groups = uf.groups()
    component = {c: i for i, g in enumerate(groups) for c in g}
    return ComponentMap(component=component, count=len(groups), state_tag=C.state_tag,
                        members=tuple(tuple(g) for g in groups))


def pi0_full(C: CWComplexData) -> int:
    """Component count using every cell, not just the 1-skeleton.

    Each cell is merged with the cells on its boundary; a CW complex has the
    same components as its 1-skeleton, so this must agree with ``pi0``.
    """
    uf = UnionFind(c for k in sorted(C.cells) for c in C.cells[k])
    for k in range(1, len(C.ranks())):
        for j, c in enumerate(C.cells[k]):
            for x in C.column(k, j):
                uf.union(c, x)
    return len({uf.find(c) for c in C.cells.get(0, ())})
