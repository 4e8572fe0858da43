"""Integer homology of chain complexes and branching/merging homology.

Branching homology of a cellular complex ``X`` is assembled per state:

* ``H0-`` is free on the final states (those with an empty branching space).
* ``H1-`` is ``ker(eps)/im(d)`` where ``eps`` sends a point of the branching
  space to its state and ``d`` sends a path to the difference of its
  endpoints.  Modulo ``im(d)`` the points collapse to path components, so
  ``ker(eps)/im(d)`` is, state by state, the kernel of ``Z^c -> Z`` with
  ``c`` the number of components; its rank is ``max(0, c - 1)``.
* ``H(n+1)-`` for ``n >= 1`` is the direct sum over states of ``H_n`` of the
  branching spaces.

Merging homology is the same construction on the merging spaces.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .branching import CWComplexData, _germ_space, pi0
from .globular import GlobularComplex, op, require_valid
from .snf import matmul, snf


class ChainComplexError(ValueError):
    pass


@dataclass(frozen=True)
class HomologyGroup:
    """``Z^free_rank`` plus cyclic torsion ``Z/t1 + Z/t2 + ...`` with ``t1 | t2 | ...``."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        for t in self.torsion:
            if t < 2:
                raise ValueError(f"torsion coefficient {t} < 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion {self.torsion} is not a divisibility chain")

    @property
    def is_zero(self) -> bool:
        return not self.free_rank and not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"rank": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, data: Mapping) -> "HomologyGroup":
        return cls(int(data["rank"]), tuple(int(t) for t in data["torsion"]))


ZERO = HomologyGroup()


def direct_sum(groups: Iterable[HomologyGroup]) -> HomologyGroup:
    groups = list(groups)
    rank = sum(g.free_rank for g in groups)
    tors = [t for g in groups for t in g.torsion]
    if len(tors) > 1:
        # invariant factors of diag(tors)
        d = snf([[t if i == j else 0 for j in range(len(tors))] for i, t in enumerate(tors)])
        tors = [t for t in d.invariant_factors if t > 1]
    return HomologyGroup(rank, tuple(tors))


@dataclass(frozen=True)
class ChainComplex:
    """``ranks[k]`` generators in degree ``k``; ``boundaries[k]`` is the
    ``ranks[k-1] x ranks[k]`` matrix of the differential out of degree ``k``."""

    ranks: tuple[int, ...]
    boundaries: dict[int, tuple[tuple[int, ...], ...]]

    def matrix(self, k: int) -> list[list[int]]:
        """Dense differential out of degree ``k`` (``1 <= k < len(ranks)``)."""
        m = self.boundaries.get(k)
        if m is None:
            return [[0] * self.ranks[k] for _ in range(self.ranks[k - 1])]
        return [list(r) for r in m]

    def check(self) -> list[str]:
        problems = []
        for k in range(1, len(self.ranks)):
            m = self.boundaries.get(k)
            if m is None:
                continue
            if len(m) != self.ranks[k - 1] or any(len(r) != self.ranks[k] for r in m):
                problems.append(f"boundary {k} has the wrong shape")
        if problems:
            return problems
        for k in range(2, len(self.ranks)):
            if self.ranks[k] and self.ranks[k - 1] and self.ranks[k - 2]:
                prod = matmul(self.matrix(k - 1), self.matrix(k))
                for i, row in enumerate(prod):
                    for j, v in enumerate(row):
                        if v:
                            problems.append(f"d{k - 1} d{k} has entry {v} at ({i}, {j})")
        return problems

    @classmethod
    def from_cw(cls, C: CWComplexData) -> "ChainComplex":
        return cls(ranks=C.ranks(), boundaries=dict(C.boundary))


def homology(C: ChainComplex) -> dict[int, HomologyGroup]:
    """``H_k = ker d_k / im d_(k+1)`` for every degree of ``C``."""
    problems = C.check()
    if problems:
        raise ChainComplexError("; ".join(problems[:5]))
    top = len(C.ranks)
    rank = [0] * (top + 1)
    factors: list[list[int]] = [[] for _ in range(top + 1)]
    for k in range(1, top):
        if C.ranks[k] and C.ranks[k - 1]:
            d = snf(C.matrix(k), shape=(C.ranks[k - 1], C.ranks[k]))
            rank[k] = d.rank
            factors[k] = d.invariant_factors
    out = {}
    for k in range(top):
        free = C.ranks[k] - rank[k] - rank[k + 1]
        out[k] = HomologyGroup(free, tuple(t for t in factors[k + 1] if t > 1))
    return out


def _germ_homology(X: GlobularComplex, side: str) -> dict[int, HomologyGroup]:
    require_valid(X)
    top = max(1, X.max_dim)
    final = 0
    excess = 0
    higher: dict[int, list[HomologyGroup]] = {n: [] for n in range(2, top + 1)}
    for state in X.states:
        G = _germ_space(X, state, side)
        if G.is_empty():
            final += 1
            continue
        excess += pi0(G).count - 1
        if len(G.ranks()) > 1:
            for k, grp in homology(ChainComplex.from_cw(G)).items():
                if k >= 1 and not grp.is_zero:
                    higher[k + 1].append(grp)
    out = {0: HomologyGroup(final), 1: HomologyGroup(excess)}
    for n in range(2, top + 1):
        out[n] = direct_sum(higher[n])
    return out


def branching_homology(X: GlobularComplex) -> dict[int, HomologyGroup]:
    return _germ_homology(X, "branch")


def merging_homology(X: GlobularComplex) -> dict[int, HomologyGroup]:
    """Branching homology of the time-reversed complex."""
    return _germ_homology(X, "merge")


def merging_homology_via_op(X: GlobularComplex) -> dict[int, HomologyGroup]:
    return branching_homology(op(X))


def homology_json(X: GlobularComplex) -> dict:
    return {
        "branching": {str(n): g.to_json() for n, g in branching_homology(X).items()},
        "merging": {str(n): g.to_json() for n, g in merging_homology(X).items()},
    }
