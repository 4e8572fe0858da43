"""Flow-side oracle for branching spaces.

``cat`` turns a globular complex carrying flow boundaries into a cellular
flow: a globular cell of dimension ``n + 1`` becomes a ``Glob(D^n)``-cell,
attached along chains of composable flow cells.  The branching space of a
flow at ``a`` is the quotient of the outgoing path spaces by ``u*v = u``; on
cellular flows this identification retracts every composite onto its first
factor, so its cellular chains can be read off the attachment chains
without ever consulting the stored branch incidence.  ``oracle_check``
compares the two routes entrywise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .branching import _germ_space
from .globular import GlobularComplex, first_factor, require_valid
from .homology import ChainComplex


class UnsupportedInputError(ValueError):
    pass


@dataclass(frozen=True)
class FlowCell:
    id: str
    dim: int  # globular dimension minus one
    src: str
    tgt: str
    attachment: tuple = ()  # (coef, chain) pairs


@dataclass(frozen=True)
class FlowPresentation:
    states: tuple[str, ...]
    cells: tuple[FlowCell, ...]
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {c.id: c for c in self.cells})

    def __getitem__(self, cid: str) -> FlowCell:
        return self._index[cid]

    def __contains__(self, cid: str) -> bool:
        return cid in self._index


def cat(X: GlobularComplex, check: bool = True) -> FlowPresentation:
    if check:
        require_valid(X)
    cells = []
    for c in X.cells:
        if c.dim >= 2 and c.flow is None:
            raise UnsupportedInputError(f"cell {c.id!r} has no flow boundary; cat needs one on "
                                        "every cell of dimension >= 2")
        cells.append(FlowCell(id=c.id, dim=c.dim - 1, src=c.src, tgt=c.tgt,
                              attachment=tuple(c.flow or ())))
    return FlowPresentation(states=X.states, cells=tuple(cells))


def flow_branching_cells(F: FlowPresentation, state: str) -> dict[int, tuple[str, ...]]:
    out: dict[int, list[str]] = {}
    for c in F.cells:
        if c.src == state:
            out.setdefault(c.dim, []).append(c.id)
    top = max(out, default=-1)
    return {k: tuple(out.get(k, ())) for k in range(top + 1)}


def flow_branching_chain(F: FlowPresentation, state: str) -> ChainComplex:
    """Cellular chains of the flow's branching space at ``state``.

    Each attachment chain is collapsed to its first factor; a factor of flow
    dimension below ``k - 1`` lies in a lower skeleton and contributes
    nothing in degree ``k - 1``.
    """
    cells = flow_branching_cells(F, state)
    ranks = tuple(len(cells[k]) for k in sorted(cells))
    boundaries = {}
    for k in range(1, len(ranks)):
        row = {cid: i for i, cid in enumerate(cells[k - 1])}
        mat = [[0] * ranks[k] for _ in range(ranks[k - 1])]
        for j, cid in enumerate(cells[k]):
            for coef, chain in F[cid].attachment:
                head = first_factor(chain)
                if head in row:
                    mat[row[head]][j] += coef
        boundaries[k] = tuple(tuple(r) for r in mat)
    return ChainComplex(ranks=ranks, boundaries=boundaries)


@dataclass(frozen=True)
class Mismatch:
    state: str
    degree: int
    row: str
    col: str
    germ: int
    flow: int

    def __str__(self) -> str:
        return (f"state {self.state!r}, degree {self.degree}: entry ({self.row!r}, {self.col!r}) "
                f"is {self.germ} on the germ side, {self.flow} on the flow side")


@dataclass
class OracleReport:
    mismatches: list[Mismatch] = field(default_factory=list)
    census: list[str] = field(default_factory=list)
    states_checked: int = 0

    @property
    def passed(self) -> bool:
        return not self.mismatches and not self.census

    def lines(self) -> list[str]:
        return self.census + [str(m) for m in self.mismatches]

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "states_checked": self.states_checked,
            "census": list(self.census),
            "mismatches": [
                {"state": m.state, "degree": m.degree, "row": m.row, "col": m.col,
                 "germ": m.germ, "flow": m.flow} for m in self.mismatches],
        }


def oracle_check(X: GlobularComplex) -> OracleReport:
    """Compare the germ-side and flow-side branching chains at every state.

    Only structural soundness of ``X`` is assumed, so a complex whose
    stored incidence disagrees with its flow boundary is reported rather
    than rejected.
    """
    F = cat(X, check=False)
    report = OracleReport()
    for state in X.states:
        G = _germ_space(X, state, "branch", check=False)
        cells = flow_branching_cells(F, state)
        C = flow_branching_chain(F, state)
        report.states_checked += 1
        germ_cells = {k: v for k, v in G.cells.items() if v}
        flow_cells = {k: v for k, v in cells.items() if v}
        if germ_cells != flow_cells:
            report.census.append(f"state {state!r}: germ cells {germ_cells} != flow cells {flow_cells}")
            continue
        for k in range(1, len(C.ranks)):
            rows, cols = cells[k - 1], cells[k]
            gm = G.boundary.get(k, ())
            fm = C.boundaries.get(k, ())
            for i, r in enumerate(rows):
                for j, c in enumerate(cols):
                    g = gm[i][j] if gm else 0
                    f = fm[i][j] if fm else 0
                    if g != f:
                        report.mismatches.append(Mismatch(state, k, r, c, g, f))
    return report
