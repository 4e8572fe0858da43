"""Elementary globular subdivisions and the invariance harness.

Three generators are provided:

* ``edge``: insert ``k`` new states on a 1-cell.
* ``lens``: insert one state inside a 2-cell whose flow boundary is a pair
  of parallel chains, splitting it into two 2-cells through a new path.
* ``grid``: refine every cube of a precubical set into a grid of subcubes.

Every generator fixes the old states, so old-state branching spaces can be
compared directly before and after.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

from .branching import branching_space, merging_space, pi0
from .globular import (GlobularCell, GlobularComplex, InvalidComplexError, flatten_chain,
                       normalize, project_flow, realize, require_valid)
from .homology import HomologyGroup, branching_homology, merging_homology
from .precubical import PrecubicalSet, validate
from .unionfind import UnionFind


class SubdivisionError(ValueError):
    pass


@dataclass(frozen=True)
class StateInjection:
    """Old state -> new state (always the identity here) and the fresh states."""

    mapping: dict[str, str]
    fresh: tuple[str, ...] = ()

    def __call__(self, state: str) -> str:
        return self.mapping[state]


def _fresh(base: str, taken: set[str]) -> str:
    name, i = base, 1
    while name in taken:
        i += 1
        name = f"{base}~{i}"
    taken.add(name)
    return name


def _names(X: GlobularComplex) -> set[str]:
    return set(X.states) | {c.id for c in X.cells}


def _lookup(X: GlobularComplex, cid: str, dim: int, what: str) -> GlobularCell:
    if cid not in X:
        raise SubdivisionError(f"{what}: unknown cell {cid!r}")
    cell = X[cid]
    if cell.dim != dim:
        raise SubdivisionError(f"{what}: cell {cid!r} has dimension {cell.dim}, expected {dim}")
    return cell


def subdivide_edge(X: GlobularComplex, e: str, k: int) -> tuple[GlobularComplex, StateInjection]:
    """Replace the 1-cell ``e`` by a path of ``k + 1`` edges through ``k`` new states."""
    require_valid(X)
    edge = _lookup(X, e, 1, "edge subdivision")
    if not isinstance(k, int) or k < 1:
        raise SubdivisionError(f"edge subdivision: k must be a positive integer, got {k!r}")
    taken = _names(X)
    fresh_states = [_fresh(f"{e}.p{i}", taken) for i in range(1, k + 1)]
    pieces = [_fresh(f"{e}.{i}", taken) for i in range(1, k + 2)]
    stops = [edge.src] + fresh_states + [edge.tgt]
    new_edges = [GlobularCell(id=pieces[i], dim=1, src=stops[i], tgt=stops[i + 1],
                              flow=() if edge.flow is not None else None)
                 for i in range(k + 1)]
    first, last = pieces[0], pieces[-1]

    def chain(ch):
        return tuple(x for y in flatten_chain(ch) for x in (pieces if y == e else (y,)))

    cells = []
    for c in X.cells:
        if c.id == e:
            cells.extend(new_edges)
            continue
        cells.append(GlobularCell(
            id=c.id, dim=c.dim, src=c.src, tgt=c.tgt,
            branch=tuple((q, first if x == e else x) for q, x in c.branch),
            merge=tuple((q, last if x == e else x) for q, x in c.merge),
            flow=None if c.flow is None else normalize((q, chain(ch)) for q, ch in c.flow),
        ))
    Y = GlobularComplex(states=X.states + tuple(fresh_states), cells=tuple(cells))
    return Y, StateInjection({s: s for s in X.states}, tuple(fresh_states))


def subdivide_lens(X: GlobularComplex, c: str) -> tuple[GlobularComplex, StateInjection]:
    """Insert one state inside the 2-cell ``c``.

    ``c`` must have flow boundary ``+k1 - k2``.  It is replaced by two
    2-cells with flow boundaries ``+k1 - (a, b)`` and ``+(a, b) - k2``, where
    ``a`` and ``b`` are new edges through the new state.  Higher cells that
    mention ``c`` get both halves with the same coefficient.
    """
    require_valid(X)
    cell = _lookup(X, c, 2, "lens subdivision")
    if cell.flow is None:
        raise SubdivisionError(f"lens subdivision: cell {c!r} has no flow boundary")
    plus = [ch for q, ch in cell.flow if q == 1]
    minus = [ch for q, ch in cell.flow if q == -1]
    if len(cell.flow) != 2 or len(plus) != 1 or len(minus) != 1:
        raise SubdivisionError(
            f"lens subdivision: flow boundary of {c!r} is not of the form +k1 - k2")
    k1, k2 = plus[0], minus[0]
    taken = _names(X)
    z = _fresh(f"{c}.z", taken)
    a = GlobularCell(id=_fresh(f"{c}.a", taken), dim=1, src=cell.src, tgt=z, flow=())
    b = GlobularCell(id=_fresh(f"{c}.b", taken), dim=1, src=z, tgt=cell.tgt, flow=())
    lo_id, hi_id = _fresh(f"{c}.1", taken), _fresh(f"{c}.2", taken)
    middle = (a.id, b.id)
    halves = []
    for cid, flow in ((lo_id, ((1, k1), (-1, middle))), (hi_id, ((1, middle), (-1, k2)))):
        draft = GlobularCell(id=cid, dim=2, src=cell.src, tgt=cell.tgt, flow=normalize(flow))
        halves.append(draft)
    probe = GlobularComplex(states=X.states + (z,), cells=X.cells + (a, b) + tuple(halves))
    halves = [GlobularCell(id=h.id, dim=2, src=h.src, tgt=h.tgt,
                           branch=project_flow(probe, h, "first"),
                           merge=project_flow(probe, h, "last"), flow=h.flow)
              for h in halves]

    def split(terms):
        return normalize((q, y) for q, x in terms for y in ((lo_id, hi_id) if x == c else (x,)))

    def split_chain(ch):
        flat = flatten_chain(ch)
        options = [(lo_id, hi_id) if x == c else (x,) for x in flat]
        return list(itertools.product(*options))

    cells = []
    for d in X.cells:
        if d.id == c:
            cells.extend([a, b] + halves)
            continue
        if any(x == c for _, x in d.branch + d.merge) or d.flow:
            d = GlobularCell(
                id=d.id, dim=d.dim, src=d.src, tgt=d.tgt,
                branch=split(d.branch), merge=split(d.merge),
                flow=None if d.flow is None
                else normalize((q, ch2) for q, ch in d.flow for ch2 in split_chain(ch)),
            )
        cells.append(d)
    Y = GlobularComplex(states=X.states + (z,), cells=tuple(cells))
    return Y, StateInjection({s: s for s in X.states}, (z,))


# ---------------------------------------------------------------------------
# grid refinement of precubical sets


def edge_classes(K: PrecubicalSet) -> UnionFind:
    """Edges that must share a subdivision count: parallel edges of a cube."""
    uf = UnionFind(K.cubes.get(1, ()))
    for n in sorted(K.cubes):
        if n < 2:
            continue
        for c in K.cubes[n]:
            for axis in range(1, n + 1):
                parallel = [K.face_at(c, (axis,), 0)]
                others = [a for a in range(1, n + 1) if a != axis]
                for corner in itertools.product((0, 1), repeat=n - 1):
                    parallel.append(_edge_at(K, c, axis, dict(zip(others, corner))))
                for p in parallel[1:]:
                    uf.union(parallel[0], p)
    return uf


def _edge_at(K: PrecubicalSet, c: str, axis: int, fixed: dict[int, int]) -> str:
    for a in range(K.dim(c), 0, -1):
        if a != axis:
            c = K.face(c, fixed[a], a)
    return c


def _edge_factors(K: PrecubicalSet, factors: Union[int, Sequence[int]]) -> dict[str, int]:
    edges = K.cubes.get(1, ())
    if isinstance(factors, int):
        if factors < 1:
            raise SubdivisionError(f"grid factor must be >= 1, got {factors}")
        return {e: factors for e in edges}
    factors = list(factors)
    if not factors or any(not isinstance(m, int) or m < 1 for m in factors):
        raise SubdivisionError(f"grid factors must be positive integers, got {factors}")
    uf = edge_classes(K)
    chosen: dict = {}
    # a class of parallel edges takes its count from the axis it occupies in
    # the first cube containing it, scanning higher dimensions first;
    # edges in no higher cube count as axis 1
    for n in sorted(K.cubes, reverse=True):
        if n < 2:
            continue
        for c in K.cubes[n]:
            for axis in range(1, n + 1):
                root = uf.find(K.face_at(c, (axis,), 0))
                if root in chosen:
                    continue
                if axis > len(factors):
                    raise SubdivisionError(
                        f"grid factors {factors} give no factor for axis {axis} of cube {c!r}")
                chosen[root] = (factors[axis - 1],)
    return {e: chosen.get(uf.find(e), (factors[0],))[0] for e in edges}


def subdivide_precubical(K: PrecubicalSet, factors: Union[int, Sequence[int]]) -> PrecubicalSet:
    """Grid refinement: each ``n``-cube becomes a grid of ``m_1 * ... * m_n`` cubes.

    ``factors[i]`` is the number of pieces along axis ``i + 1``; a single
    integer subdivides every axis equally.  Edges parallel in some cube must
    share a count, so each class of parallel edges is assigned from the
    first highest-dimensional cube containing it.

    A subcube is described by its home cube and, per axis, either a free
    interval index or a fixed interior grid coordinate.  A subcube on the
    boundary of its home cube is renamed after the face it lies in, so
    shared faces are refined once.
    """
    report = validate(K)
    if not report.ok:
        raise InvalidComplexError("invalid precubical set: " + "; ".join(report.lines()[:5]), report)
    per_edge = _edge_factors(K, factors)
    counts: dict[str, tuple[int, ...]] = {}
    for n in sorted(K.cubes):
        for c in K.cubes[n]:
            if n == 0:
                counts[c] = ()
            else:
                counts[c] = tuple(per_edge[K.face_at(c, (a,), 0)] for a in range(1, n + 1))

    def canonical(c: str, spec: tuple) -> tuple[str, tuple]:
        # spec entries: ("f", index) free, ("x", value) fixed
        while True:
            m = counts[c]
            hit = next((a for a in range(len(spec), 0, -1) if spec[a - 1][0] == "x"
                        and spec[a - 1][1] in (0, m[a - 1])), None)
            if hit is None:
                return c, spec
            alpha = 0 if spec[hit - 1][1] == 0 else 1
            c = K.face(c, alpha, hit)
            spec = spec[:hit - 1] + spec[hit:]

    def name(c: str, spec: tuple) -> str:
        if all(kind == "f" and v == 0 for kind, v in spec) and all(m == 1 for m in counts[c]):
            return c
        if not spec:
            return c
        return c + "[" + ",".join(f"{v}" if kind == "f" else f"@{v}" for kind, v in spec) + "]"

    cubes: dict[int, list[str]] = {}
    faces: dict[str, tuple] = {}
    for n in sorted(K.cubes):
        for c in K.cubes[n]:
            m = counts[c]
            choices = [[("f", i) for i in range(mi)] + [("x", v) for v in range(1, mi)] for mi in m]
            for spec in itertools.product(*choices):
                spec = tuple(spec)
                free = [a for a, (kind, _) in enumerate(spec, 1) if kind == "f"]
                cid = name(c, spec)
                cubes.setdefault(len(free), []).append(cid)
                if not free:
                    continue
                front, back = [], []
                for a in free:
                    idx = spec[a - 1][1]
                    for value, out in ((idx, front), (idx + 1, back)):
                        s2 = spec[:a - 1] + (("x", value),) + spec[a:]
                        out.append(name(*canonical(c, s2)))
                faces[cid] = (tuple(front), tuple(back))
    top = max(K.cubes, default=0)
    return PrecubicalSet(cubes={n: tuple(cubes.get(n, ())) for n in range(top + 1)}, faces=faces)


# ---------------------------------------------------------------------------
# op sequences and invariance


@dataclass(frozen=True)
class SubdivisionOp:
    kind: str
    cell: str | None = None
    k: int = 1
    factors: Union[int, tuple[int, ...], None] = None

    def to_json(self) -> dict:
        if self.kind == "edge":
            return {"kind": "edge", "cell": self.cell, "k": self.k}
        if self.kind == "lens":
            return {"kind": "lens", "cell": self.cell}
        f = self.factors
        return {"kind": "grid", "factors": f if isinstance(f, int) else list(f)}

    @classmethod
    def from_json(cls, data: dict) -> "SubdivisionOp":
        if not isinstance(data, dict) or "kind" not in data:
            raise SubdivisionError(f"bad op {data!r}")
        kind = data["kind"]
        allowed = {"edge": {"kind", "cell", "k"}, "lens": {"kind", "cell"},
                   "grid": {"kind", "factors"}}
        if kind not in allowed:
            raise SubdivisionError(f"unknown op kind {kind!r}")
        if set(data) - allowed[kind]:
            raise SubdivisionError(f"unknown keys in {kind} op: {sorted(set(data) - allowed[kind])}")
        if kind == "grid":
            f = data.get("factors")
            return cls("grid", factors=f if isinstance(f, int) else tuple(f or ()))
        if not isinstance(data.get("cell"), str):
            raise SubdivisionError(f"{kind} op needs a string 'cell'")
        return cls(kind, cell=data["cell"], k=data.get("k", 1))


def parse_ops(data) -> list[SubdivisionOp]:
    if not isinstance(data, list):
        raise SubdivisionError("op sequence must be a JSON list")
    return [SubdivisionOp.from_json(d) for d in data]


Complex = Union[PrecubicalSet, GlobularComplex]
Step = Union[SubdivisionOp, Callable[[GlobularComplex], GlobularComplex]]


def apply_op(X: Complex, step: Step) -> Complex:
    if callable(step) and not isinstance(step, SubdivisionOp):
        return step(X if isinstance(X, GlobularComplex) else realize(X))
    if step.kind == "grid":
        if not isinstance(X, PrecubicalSet):
            raise SubdivisionError("grid applies to precubical inputs only")
        return subdivide_precubical(X, step.factors)
    G = X if isinstance(X, GlobularComplex) else realize(X)
    if step.kind == "edge":
        return subdivide_edge(G, step.cell, step.k)[0]
    return subdivide_lens(G, step.cell)[0]


def apply_ops(X: Complex, ops: Sequence[Step]) -> Complex:
    for i, step in enumerate(ops):
        try:
            X = apply_op(X, step)
        except SubdivisionError as exc:
            raise SubdivisionError(f"step {i} ({_describe(step)}): {exc}") from None
    return X


def _describe(step: Step) -> str:
    if isinstance(step, SubdivisionOp):
        return step.kind + (f" {step.cell}" if step.cell else "")
    return getattr(step, "__name__", "custom op")


def _as_globular(X: Complex) -> GlobularComplex:
    return realize(X) if isinstance(X, PrecubicalSet) else X


@dataclass
class InvarianceReport:
    before: dict[str, dict[int, HomologyGroup]] = field(default_factory=dict)
    after: dict[str, dict[int, HomologyGroup]] = field(default_factory=dict)
    pi0_before: dict[str, dict[str, int]] = field(default_factory=dict)
    pi0_after: dict[str, dict[str, int]] = field(default_factory=dict)
    discrepancies: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.discrepancies

    def to_json(self) -> dict:
        def groups(d):
            return {side: {str(n): g.to_json() for n, g in hs.items()} for side, hs in d.items()}
        return {
            "result": "PASS" if self.passed else "FAIL",
            "before": groups(self.before),
            "after": groups(self.after),
            "pi0_before": self.pi0_before,
            "pi0_after": self.pi0_after,
            "discrepancies": list(self.discrepancies),
        }


def _pi0_counts(X: GlobularComplex, states) -> dict[str, dict[str, int]]:
    return {
        "branching": {s: pi0(branching_space(X, s)).count for s in states},
        "merging": {s: pi0(merging_space(X, s)).count for s in states},
    }


def check_invariance(X: Complex, ops: Sequence[Step]) -> InvarianceReport:
    """Apply ``ops`` in order and compare homology and old-state components.

    Raises :class:`SubdivisionError` naming the step if an op does not
    apply.  A result that fails validation is reported as a discrepancy.
    """
    before = _as_globular(X)
    require_valid(before)
    report = InvarianceReport()
    report.before = {"branching": branching_homology(before), "merging": merging_homology(before)}
    report.pi0_before = _pi0_counts(before, before.states)
    after = _as_globular(apply_ops(X, ops))
    try:
        require_valid(after)
    except InvalidComplexError as exc:
        report.discrepancies.append(f"subdivided complex is invalid: {exc}")
        return report
    report.after = {"branching": branching_homology(after), "merging": merging_homology(after)}
    missing = [s for s in before.states if s not in after.states]
    if missing:
        report.discrepancies.append(f"original states missing after subdivision: {missing}")
    report.pi0_after = _pi0_counts(after, [s for s in before.states if s in after.states])
    for side in ("branching", "merging"):
        b, a = report.before[side], report.after[side]
        for n in sorted(set(b) | set(a)):
            gb, ga = b.get(n, HomologyGroup()), a.get(n, HomologyGroup())
            if gb != ga:
                report.discrepancies.append(f"{side} H_{n}: {gb} before, {ga} after")
        for s, count in report.pi0_before[side].items():
            if s in report.pi0_after[side] and report.pi0_after[side][s] != count:
                report.discrepancies.append(
                    f"{side} space at {s!r}: {count} components before, "
                    f"{report.pi0_after[side][s]} after")
    return report
