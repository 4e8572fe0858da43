"""Finite cellular multipointed d-spaces as combinatorial globular complexes.

A globular cell of dimension ``n + 1`` is attached along ``Glob(S^{n-1})``;
it runs from a source state to a target state.  The continuous attaching
map is replaced by three pieces of integer data:

* ``branch``: the signed incidence of the cell's germ at its source, i.e. the
  cellular boundary of the ``n``-cell it contributes to the branching space
  at ``src``.  Summands are cells of dimension ``n`` with the same source.
* ``merge``: the same at the target, for the merging space.
* ``flow`` (optional): the attaching map at chain level, as a signed sum of
  composable chains of cells running from ``src`` to ``tgt``.  Keeping only
  the first (last) factor of every chain must reproduce ``branch``
  (``merge``) in the top incidence degree.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence

from .precubical import FormatError, PrecubicalSet, validate

Chain = tuple  # of cell ids; nested tuples allowed, see flatten_chain
Term = tuple[int, str]
FlowTerm = tuple[int, Chain]


class InvalidComplexError(ValueError):
    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


def normalize(terms: Iterable[tuple[int, object]]) -> tuple:
    """Combine like terms, drop zeros, keep first-occurrence order."""
    acc: dict = {}
    for coef, key in terms:
        acc[key] = acc.get(key, 0) + coef
    return tuple((c, k) for k, c in acc.items() if c != 0)


def flatten_chain(chain) -> tuple[str, ...]:
    if isinstance(chain, str):
        return (chain,)
    return tuple(x for part in chain for x in flatten_chain(part))


def first_factor(chain) -> str:
    while not isinstance(chain, str):
        chain = chain[0]
    return chain


def last_factor(chain) -> str:
    while not isinstance(chain, str):
        chain = chain[-1]
    return chain


def _reverse_chain(chain):
    if isinstance(chain, str):
        return chain
    return tuple(_reverse_chain(x) for x in reversed(chain))


@dataclass(frozen=True)
class GlobularCell:
    id: str
    dim: int
    src: str
    tgt: str
    branch: tuple[Term, ...] = ()
    merge: tuple[Term, ...] = ()
    flow: Optional[tuple[FlowTerm, ...]] = None

    def to_json(self) -> dict:
        out = {
            "id": self.id, "dim": self.dim, "src": self.src, "tgt": self.tgt,
            "branch": [[c, x] for c, x in self.branch],
            "merge": [[c, x] for c, x in self.merge],
        }
        if self.flow is not None:
            out["flow"] = [[c, list(flatten_chain(ch))] for c, ch in self.flow]
        return out


@dataclass(frozen=True)
class GlobularComplex:
    states: tuple[str, ...]
    cells: tuple[GlobularCell, ...]
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {c.id: c for c in self.cells})

    def __getitem__(self, cid: str) -> GlobularCell:
        return self._index[cid]

    def __contains__(self, cid: str) -> bool:
        return cid in self._index

    @property
    def max_dim(self) -> int:
        return max((c.dim for c in self.cells), default=0)

    def census(self) -> tuple[int, ...]:
        """``(#states, #dim-1 cells, #dim-2 cells, ...)``."""
        counts = [0] * (self.max_dim + 1)
        counts[0] = len(self.states)
        for c in self.cells:
            counts[c.dim] += 1
        return tuple(counts)

    def outgoing(self, state: str) -> list[GlobularCell]:
        return [c for c in self.cells if c.src == state]

    def incoming(self, state: str) -> list[GlobularCell]:
        return [c for c in self.cells if c.tgt == state]

    def has_flow(self) -> bool:
        return all(c.flow is not None for c in self.cells)

    def to_json(self) -> dict:
        return {
            "format": "globular",
            "states": list(self.states),
            "cells": [c.to_json() for c in self.cells],
        }

    @classmethod
    def from_json(cls, data: dict) -> "GlobularComplex":
        if not isinstance(data, dict):
            raise FormatError("globular complex must be a JSON object")
        extra = set(data) - {"format", "states", "cells"}
        if extra:
            raise FormatError(f"unknown keys: {sorted(extra)}")
        if data.get("format", "globular") != "globular":
            raise FormatError(f"format is {data.get('format')!r}, expected 'globular'")
        states = data.get("states")
        if not isinstance(states, list) or not all(isinstance(s, str) for s in states):
            raise FormatError("'states' must be a list of strings")
        raw_cells = data.get("cells", [])
        if not isinstance(raw_cells, list):
            raise FormatError("'cells' must be a list")
        cells = []
        flow_dims: dict[int, set[bool]] = defaultdict(set)
        for raw in raw_cells:
            if not isinstance(raw, dict):
                raise FormatError("each cell must be an object")
            extra = set(raw) - {"id", "dim", "src", "tgt", "branch", "merge", "flow"}
            missing = {"id", "dim", "src", "tgt"} - set(raw)
            if extra or missing:
                raise FormatError(f"cell {raw.get('id')!r}: unknown keys {sorted(extra)}, "
                                  f"missing keys {sorted(missing)}")
            cid = raw["id"]
            if not isinstance(cid, str) or not isinstance(raw["dim"], int) or isinstance(raw["dim"], bool):
                raise FormatError(f"cell {cid!r}: id must be a string and dim an integer")
            flow = None
            if "flow" in raw:
                flow = tuple(_parse_flow(cid, raw["flow"]))
            flow_dims[raw["dim"]].add(flow is not None)
            cells.append(GlobularCell(
                id=cid, dim=raw["dim"], src=raw["src"], tgt=raw["tgt"],
                branch=tuple(_parse_terms(cid, "branch", raw.get("branch", []))),
                merge=tuple(_parse_terms(cid, "merge", raw.get("merge", []))),
                flow=flow,
            ))
        for d, seen in flow_dims.items():
            if len(seen) > 1:
                raise FormatError(f"'flow' given for some but not all cells of dimension {d}")
        return cls(states=tuple(states), cells=tuple(cells))


def _parse_terms(cid, key, raw) -> Iterable[Term]:
    if not isinstance(raw, list):
        raise FormatError(f"cell {cid!r}: {key!r} must be a list")
    for t in raw:
        if (not isinstance(t, list) or len(t) != 2 or not isinstance(t[0], int)
                or not isinstance(t[1], str)):
            raise FormatError(f"cell {cid!r}: bad {key} term {t!r}, expected [coef, id]")
        yield (t[0], t[1])


def _parse_flow(cid, raw) -> Iterable[FlowTerm]:
    if not isinstance(raw, list):
        raise FormatError(f"cell {cid!r}: 'flow' must be a list")
    for t in raw:
        if (not isinstance(t, list) or len(t) != 2 or not isinstance(t[0], int)
                or not isinstance(t[1], list) or not t[1]
                or not all(isinstance(x, str) for x in t[1])):
            raise FormatError(f"cell {cid!r}: bad flow term {t!r}, expected [coef, [ids...]]")
        yield (t[0], tuple(t[1]))


# ---------------------------------------------------------------------------
# constructions


def _shuffle_sign(order: Sequence[int]) -> int:
    inversions = sum(1 for a, b in itertools.combinations(order, 2) if a > b)
    return -1 if inversions % 2 else 1


def realize(K: PrecubicalSet) -> GlobularComplex:
    """Globular complex of a valid precubical set, one cell per cube of
    dimension >= 1.

    Incidences use ``branch(c) = sum_i (-1)^(i-1) d0_i c`` and
    ``merge(c) = sum_i (-1)^(n-i) d1_i c``.  The flow boundary lists the
    boundary execution paths of the cube that pass through exactly one
    intermediate corner: one chain ``(front face on B1, back face on B2)``
    per ordered split of the axes into nonempty ``B1``, ``B2``, with sign
    ``(-1)^(n-1)`` times the sign of the shuffle ``B1 + B2``.
    """
    report = validate(K)
    if not report.ok:
        raise InvalidComplexError(
            "invalid precubical set: " + "; ".join(report.lines()[:5]), report)
    cells = []
    for n in sorted(K.cubes):
        if n == 0:
            continue
        for c in K.cubes[n]:
            front, back = K.faces[c]
            branch = normalize(((-1) ** (i - 1), f) for i, f in enumerate(front, 1)) if n > 1 else ()
            merge = normalize(((-1) ** (n - i), f) for i, f in enumerate(back, 1)) if n > 1 else ()
            flow = []
            axes = range(1, n + 1)
            for size in range(n - 1, 0, -1):
                for b1 in itertools.combinations(axes, size):
                    b2 = tuple(a for a in axes if a not in b1)
                    sign = (-1) ** (n - 1) * _shuffle_sign(b1 + b2)
                    flow.append((sign, (K.face_at(c, b1, 0), K.face_at(c, b2, 1))))
            cells.append(GlobularCell(
                id=c, dim=n, src=K.iterated_face(c, 0), tgt=K.iterated_face(c, 1),
                branch=branch, merge=merge, flow=normalize(flow),
            ))
    return GlobularComplex(states=tuple(K.cubes.get(0, ())), cells=tuple(cells))


def globe(n: int) -> GlobularComplex:
    """``Glob(D^n)`` with the hemispherical cell structure on ``D^n``.

    States are ``"0"`` and ``"1"``.  Cells ``e{k}+`` and ``e{k}-`` of
    dimension ``k`` (``1 <= k <= n``) are the two hemispheres of the
    ``(k-1)``-sphere in the branching space; ``t`` is the top cell.  In
    branching degree ``j = k - 1`` the antipodal convention
    ``d e+ = e+ + (-1)^j e-`` and ``d e- = e- + (-1)^j e+`` is used, and ``t``
    is bounded by the fundamental cycle ``e+ - (-1)^j e-`` of the boundary
    sphere.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    cells = []

    def cell(cid, dim, terms):
        terms = normalize(terms)
        cells.append(GlobularCell(
            id=cid, dim=dim, src="0", tgt="1", branch=terms, merge=terms,
            flow=tuple((c, (x,)) for c, x in terms)))

    for k in range(1, n + 1):
        j = k - 1
        if k == 1:
            cell("e1+", 1, ())
            cell("e1-", 1, ())
        else:
            s = (-1) ** j
            cell(f"e{k}+", k, [(1, f"e{k - 1}+"), (s, f"e{k - 1}-")])
            cell(f"e{k}-", k, [(1, f"e{k - 1}-"), (s, f"e{k - 1}+")])
    if n == 0:
        cell("t", 1, ())
    else:
        cell("t", n + 1, [(1, f"e{n}+"), ((-1) ** n, f"e{n}-")])
    return GlobularComplex(states=("0", "1"), cells=tuple(cells))


def op(X: GlobularComplex) -> GlobularComplex:
    """Time reversal: swap source/target and branch/merge, reverse chains."""
    cells = tuple(
        replace(c, src=c.tgt, tgt=c.src, branch=c.merge, merge=c.branch,
                flow=None if c.flow is None
                else tuple((k, _reverse_chain(ch)) for k, ch in c.flow))
        for c in X.cells
    )
    return GlobularComplex(states=X.states, cells=cells)


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Issue:
    kind: str
    cell: str
    message: str

    def __str__(self) -> str:
        return f"[{self.kind}] {self.message}"


@dataclass
class ComplexReport:
    issues: list[Issue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    def add(self, kind: str, cell: str, message: str) -> None:
        self.issues.append(Issue(kind, cell, message))

    def lines(self) -> list[str]:
        return [str(i) for i in self.issues]

    def to_json(self) -> dict:
        return {"valid": self.ok,
                "issues": [{"kind": i.kind, "cell": i.cell, "message": i.message}
                           for i in self.issues]}


def _composite(X: GlobularComplex, side: str, cell: GlobularCell) -> dict:
    """Coefficients of the boundary of the boundary on one side."""
    out: dict[str, int] = defaultdict(int)
    for coef, x in getattr(cell, side):
        for c2, y in getattr(X[x], side):
            out[y] += coef * c2
    return {k: v for k, v in out.items() if v}


def project_flow(X: GlobularComplex, cell: GlobularCell, which: str) -> tuple[Term, ...]:
    """First- (``which="first"``) or last-factor projection of the flow
    boundary, keeping only factors of dimension ``cell.dim - 1``."""
    pick = first_factor if which == "first" else last_factor
    terms = []
    for coef, chain in cell.flow or ():
        f = pick(chain)
        if f in X and X[f].dim == cell.dim - 1:
            terms.append((coef, f))
    return normalize(terms)


def validate_complex(X: GlobularComplex) -> ComplexReport:
    rep = ComplexReport()
    states = set()
    for s in X.states:
        if s in states:
            rep.add("duplicate", s, f"state {s!r} listed twice")
        states.add(s)
    seen: dict[str, GlobularCell] = {}
    flow_by_dim: dict[int, set[bool]] = defaultdict(set)
    structural_ok: set[str] = set()
    for c in X.cells:
        ok = True
        if c.id in seen:
            rep.add("duplicate", c.id, f"cell {c.id!r} listed twice")
            continue
        if c.id in states:
            rep.add("duplicate", c.id, f"cell id {c.id!r} collides with a state")
        if c.dim < 1:
            rep.add("grading", c.id, f"cell {c.id!r} has dimension {c.dim} < 1")
            ok = False
        for end in ("src", "tgt"):
            if getattr(c, end) not in states:
                rep.add("state", c.id, f"cell {c.id!r}: {end} {getattr(c, end)!r} is not a state")
                ok = False
        flow_by_dim[c.dim].add(c.flow is not None)
        if c.dim == 1 and (c.branch or c.merge or c.flow):
            rep.add("grading", c.id, f"cell {c.id!r} of dimension 1 has nonempty boundary")
            ok = False
        for side, end in (("branch", "src"), ("merge", "tgt")):
            for coef, x in getattr(c, side):
                if x not in seen:
                    what = "unknown" if x not in X else "later"
                    rep.add("order", c.id,
                            f"cell {c.id!r}: {side} refers to {what} cell {x!r}")
                    ok = False
                    continue
                y = seen[x]
                if y.dim != c.dim - 1:
                    rep.add("grading", c.id,
                            f"cell {c.id!r}: {side} term {x!r} has dimension {y.dim}, expected {c.dim - 1}")
                    ok = False
                if getattr(y, end) != getattr(c, end):
                    rep.add(end, c.id,
                            f"cell {c.id!r}: {side} term {x!r} has {end} {getattr(y, end)!r}, "
                            f"expected {getattr(c, end)!r}")
                    ok = False
        for coef, chain in c.flow or ():
            flat = flatten_chain(chain)
            if not flat:
                rep.add("flow", c.id, f"cell {c.id!r}: empty flow chain")
                ok = False
                continue
            bad = [x for x in flat if x not in seen]
            if bad:
                rep.add("order", c.id, f"cell {c.id!r}: flow chain refers to unknown or later cell {bad[0]!r}")
                ok = False
                continue
            parts = [seen[x] for x in flat]
            if any(p.dim >= c.dim for p in parts):
                rep.add("flow", c.id, f"cell {c.id!r}: flow chain {list(flat)} has a factor of dimension >= {c.dim}")
                ok = False
            if parts[0].src != c.src or parts[-1].tgt != c.tgt:
                rep.add("flow", c.id, f"cell {c.id!r}: flow chain {list(flat)} does not run from "
                                      f"{c.src!r} to {c.tgt!r}")
                ok = False
            for p, q in zip(parts, parts[1:]):
                if p.tgt != q.src:
                    rep.add("flow", c.id, f"cell {c.id!r}: flow chain {list(flat)} does not compose at "
                                          f"{p.id!r} -> {q.id!r}")
                    ok = False
        seen[c.id] = c
        if ok:
            structural_ok.add(c.id)

    for d, flags in flow_by_dim.items():
        if len(flags) > 1:
            rep.add("flow", "", f"flow given for some but not all cells of dimension {d}")

    for c in X.cells:
        if c.id not in structural_ok:
            continue
        for side, label in (("branch", "d-d-"), ("merge", "d+d+")):
            if all(x in structural_ok for _, x in getattr(c, side)):
                bad = _composite(X, side, c)
                for y, v in bad.items():
                    rep.add("boundary", c.id, f"cell {c.id!r}: {label} has coefficient {v} on {y!r}")
        if c.flow is not None and c.dim > 1:
            for which, side in (("first", "branch"), ("last", "merge")):
                proj = dict((k, v) for v, k in project_flow(X, c, which))
                want = dict((k, v) for v, k in getattr(c, side))
                if proj != want:
                    rep.add("flow", c.id,
                            f"cell {c.id!r}: {which}-factor projection of flow {sorted(proj.items())} "
                            f"!= {side} {sorted(want.items())}")
    return rep


def require_valid(X: GlobularComplex) -> None:
    cached = getattr(X, "_valid", None)
    if cached:
        return
    report = validate_complex(X)
    if not report.ok:
        raise InvalidComplexError(
            "invalid globular complex: " + "; ".join(report.lines()[:5]), report)
    object.__setattr__(X, "_valid", True)
