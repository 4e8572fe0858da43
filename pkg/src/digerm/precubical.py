"""Precubical sets: graded cubes with front (``d0``) and back (``d1``) faces.

Face indices are 1-based.  For an ``n``-cube ``c`` the identity checked by
:func:`validate` is ``d^a_i d^b_j c == d^b_{j-1} d^a_i c`` for ``i < j``,
where the operator written on the left is applied second.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from math import comb
from typing import Iterator

from .unionfind import UnionFind


class FormatError(ValueError):
    """Raised when a serialized complex does not match the wire format."""


class CatalogError(KeyError):
    """Unknown catalog entry."""

    def __str__(self) -> str:
        return self.args[0]


@dataclass(frozen=True)
class PrecubicalSet:
    """Cubes by dimension plus face lists.

    ``cubes[n]`` is the ordered tuple of ``n``-cube ids; ``faces[c]`` is the
    pair ``(front, back)`` of length-``n`` tuples for every cube of dimension
    ``n >= 1``.
    """

    cubes: dict[int, tuple[str, ...]]
    faces: dict[str, tuple[tuple[str, ...], tuple[str, ...]]] = field(default_factory=dict)

    def __post_init__(self):
        dims = {}
        for n, ids in self.cubes.items():
            for c in ids:
                if c in dims:
                    raise FormatError(f"duplicate cube id {c!r}")
                dims[c] = n
        object.__setattr__(self, "_dims", dims)

    @property
    def max_dim(self) -> int:
        return max((n for n, ids in self.cubes.items() if ids), default=-1)

    def dim(self, c: str) -> int:
        return self._dims[c]

    def __contains__(self, c: str) -> bool:
        return c in self._dims

    def ids(self) -> Iterator[str]:
        for n in sorted(self.cubes):
            yield from self.cubes[n]

    def census(self) -> tuple[int, ...]:
        top = self.max_dim
        return tuple(len(self.cubes.get(n, ())) for n in range(top + 1))

    def face(self, c: str, alpha: int, i: int) -> str:
        return self.faces[c][alpha][i - 1]

    def iterated_face(self, c: str, alpha: int) -> str:
        """The vertex ``d^alpha_1 ... d^alpha_1 c``."""
        while self.dim(c) > 0:
            c = self.faces[c][alpha][0]
        return c

    def face_at(self, c: str, free: tuple[int, ...], value: int) -> str:
        """Face of ``c`` keeping the 1-based axes in ``free`` and fixing all
        other axes to ``value``."""
        n = self.dim(c)
        for axis in range(n, 0, -1):
            if axis not in free:
                c = self.faces[c][value][axis - 1]
        return c

    def to_json(self) -> dict:
        return {
            "format": "precubical",
            "cubes": {str(n): list(ids) for n, ids in sorted(self.cubes.items())},
            "faces": {c: {"d0": list(f[0]), "d1": list(f[1])} for c, f in self.faces.items()},
        }

    @classmethod
    def from_json(cls, data: dict) -> "PrecubicalSet":
        if not isinstance(data, dict):
            raise FormatError("precubical set must be a JSON object")
        extra = set(data) - {"format", "cubes", "faces"}
        if extra:
            raise FormatError(f"unknown keys: {sorted(extra)}")
        if data.get("format", "precubical") != "precubical":
            raise FormatError(f"format is {data.get('format')!r}, expected 'precubical'")
        raw_cubes = data.get("cubes")
        if not isinstance(raw_cubes, dict):
            raise FormatError("'cubes' must be an object keyed by dimension")
        cubes: dict[int, tuple[str, ...]] = {}
        for key, ids in raw_cubes.items():
            try:
                n = int(key)
            except ValueError:
                raise FormatError(f"dimension key {key!r} is not an integer") from None
            if n < 0 or str(n) != key:
                raise FormatError(f"bad dimension key {key!r}")
            if not isinstance(ids, list) or not all(isinstance(c, str) for c in ids):
                raise FormatError(f"cubes[{key!r}] must be a list of strings")
            cubes[n] = tuple(ids)
        raw_faces = data.get("faces", {})
        if not isinstance(raw_faces, dict):
            raise FormatError("'faces' must be an object")
        faces = {}
        for c, f in raw_faces.items():
            if not isinstance(f, dict) or set(f) != {"d0", "d1"}:
                raise FormatError(f"faces of {c!r} must have exactly keys d0, d1")
            for key in ("d0", "d1"):
                if not isinstance(f[key], list) or not all(isinstance(x, str) for x in f[key]):
                    raise FormatError(f"faces[{c!r}].{key} must be a list of strings")
            faces[c] = (tuple(f["d0"]), tuple(f["d1"]))
        return cls(cubes=cubes, faces=faces)


@dataclass(frozen=True)
class Violation:
    """A failed precubical identity ``d^alpha_i d^beta_j c != d^beta_{j-1} d^alpha_i c``."""

    cube: str
    alpha: int
    i: int
    beta: int
    j: int

    def as_tuple(self) -> tuple:
        return (self.cube, self.alpha, self.i, self.beta, self.j)

    def __str__(self) -> str:
        return (f"identity d{self.alpha}_{self.i} d{self.beta}_{self.j} {self.cube} "
                f"= d{self.beta}_{self.j - 1} d{self.alpha}_{self.i} {self.cube} fails")


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    structural: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.structural

    def __bool__(self) -> bool:
        # truthy iff there is something to report
        return not self.ok

    def lines(self) -> list[str]:
        return list(self.structural) + [str(v) for v in self.violations]

    def to_json(self) -> dict:
        return {
            "valid": self.ok,
            "structural": list(self.structural),
            "violations": [list(v.as_tuple()) for v in self.violations],
        }


def validate(K: PrecubicalSet) -> ValidationReport:
    report = ValidationReport()
    structurally_ok: set[str] = set()
    for n in sorted(K.cubes):
        for c in K.cubes[n]:
            if n == 0:
                if c in K.faces and any(K.faces[c]):
                    report.structural.append(f"vertex {c!r} has faces")
                    continue
                structurally_ok.add(c)
                continue
            if c not in K.faces:
                report.structural.append(f"cube {c!r} of dimension {n} has no faces")
                continue
            good = True
            for alpha in (0, 1):
                fl = K.faces[c][alpha]
                if len(fl) != n:
                    report.structural.append(
                        f"cube {c!r}: d{alpha} has {len(fl)} entries, expected {n}")
                    good = False
                    continue
                for i, f in enumerate(fl, 1):
                    if f not in K:
                        report.structural.append(f"cube {c!r}: d{alpha}_{i} = {f!r} does not exist")
                        good = False
                    elif K.dim(f) != n - 1:
                        report.structural.append(
                            f"cube {c!r}: d{alpha}_{i} = {f!r} has dimension {K.dim(f)}, expected {n - 1}")
                        good = False
            if good:
                structurally_ok.add(c)
    for c in K.faces:
        if c not in K:
            report.structural.append(f"faces given for unknown cube {c!r}")

    for n in sorted(K.cubes):
        if n < 2:
            continue
        for c in K.cubes[n]:
            if c not in structurally_ok:
                continue
            for alpha, beta in itertools.product((0, 1), repeat=2):
                for j in range(2, n + 1):
                    for i in range(1, j):
                        lhs_mid = K.face(c, beta, j)
                        rhs_mid = K.face(c, alpha, i)
                        if lhs_mid not in structurally_ok or rhs_mid not in structurally_ok:
                            continue
                        if K.face(lhs_mid, alpha, i) != K.face(rhs_mid, beta, j - 1):
                            report.violations.append(Violation(c, alpha, i, beta, j))
    return report


def gen_cube(n: int) -> PrecubicalSet:
    """The full combinatorial ``n``-cube.

    Cube ids are words over ``0``, ``1``, ``*`` of length ``n`` (``*`` marks a
    free axis); the single point of the 0-cube is called ``"v"``.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return PrecubicalSet(cubes={0: ("v",)})
    words = ["".join(w) for w in itertools.product("01*", repeat=n)]
    cubes: dict[int, list[str]] = {k: [] for k in range(n + 1)}
    faces = {}
    for w in words:
        free = [p for p, ch in enumerate(w) if ch == "*"]
        cubes[len(free)].append(w)
        if free:
            faces[w] = tuple(
                tuple(w[:p] + a + w[p + 1:] for p in free) for a in "01")
    return PrecubicalSet(cubes={k: tuple(v) for k, v in cubes.items()}, faces=faces)


def cube_count(n: int, k: int) -> int:
    return comb(n, k) * 2 ** (n - k)


def _edge(src: str, tgt: str) -> tuple[tuple[str], tuple[str]]:
    return ((src,), (tgt,))


def _filled_square() -> PrecubicalSet:
    return gen_cube(2)


def _hollow_square() -> PrecubicalSet:
    sq = gen_cube(2)
    return PrecubicalSet(
        cubes={0: sq.cubes[0], 1: sq.cubes[1], 2: ()},
        faces={c: f for c, f in sq.faces.items() if c != "**"},
    )


def _torus() -> PrecubicalSet:
    return PrecubicalSet(
        cubes={0: ("v",), 1: ("a", "b"), 2: ("s",)},
        faces={"a": _edge("v", "v"), "b": _edge("v", "v"), "s": (("b", "a"), ("b", "a"))},
    )


def _wedge_two_edges() -> PrecubicalSet:
    return PrecubicalSet(
        cubes={0: ("o", "x", "y"), 1: ("ox", "oy")},
        faces={"ox": _edge("o", "x"), "oy": _edge("o", "y")},
    )


def _directed_circle() -> PrecubicalSet:
    return PrecubicalSet(cubes={0: ("v",), 1: ("e",)}, faces={"e": _edge("v", "v")})


def _two_step_path() -> PrecubicalSet:
    return PrecubicalSet(
        cubes={0: ("v0", "v1", "v2"), 1: ("e1", "e2")},
        faces={"e1": _edge("v0", "v1"), "e2": _edge("v1", "v2")},
    )


CATALOG = {
    "hollow_square": _hollow_square,
    "filled_square": _filled_square,
    "torus": _torus,
    "wedge_two_edges": _wedge_two_edges,
    "directed_circle": _directed_circle,
    "two_step_path": _two_step_path,
}


def gen_example(name: str) -> PrecubicalSet:
    try:
        return CATALOG[name]()
    except KeyError:
        raise CatalogError(
            f"unknown example {name!r}; valid names: {', '.join(CATALOG)}") from None


# ---------------------------------------------------------------------------
# random generation


def _truncated_cube(rng: random.Random, n: int, prefix: str) -> PrecubicalSet:
    """``gen_cube(n)`` with a random upward-closed set of cubes removed."""
    full = gen_cube(n)
    rate = rng.choice((0.0, 0.1, 0.25))
    removed: set[str] = set()
    for k in range(1, n + 1):
        for c in full.cubes[k]:
            if c in removed:
                continue
            if any(f in removed for f in full.faces[c][0] + full.faces[c][1]):
                removed.add(c)
            elif rng.random() < rate:
                removed.add(c)
    rename = {c: f"{prefix}{c}" for c in full.ids()}
    cubes = {k: tuple(rename[c] for c in ids if c not in removed) for k, ids in full.cubes.items()}
    faces = {
        rename[c]: tuple(tuple(rename[x] for x in fl) for fl in f)
        for c, f in full.faces.items() if c not in removed
    }
    return PrecubicalSet(cubes=cubes, faces=faces)


def quotient(K: PrecubicalSet, pairs: list[tuple[str, str]]) -> PrecubicalSet:
    """Identify each pair of same-dimensional cubes, closing under faces.

    The smallest congruence containing ``pairs`` is built with a union-find;
    faces of identified cubes are identified recursively, so the quotient
    satisfies the precubical identities whenever ``K`` does.
    """
    uf = UnionFind(K.ids())
    todo = list(pairs)
    while todo:
        p, q = todo.pop()
        if K.dim(p) != K.dim(q):
            raise ValueError(f"cannot identify {p!r} and {q!r} of different dimensions")
        if not uf.union(p, q):
            continue
        if K.dim(p) > 0:
            for alpha in (0, 1):
                todo.extend(zip(K.faces[p][alpha], K.faces[q][alpha]))
    # the representative of each class is its first member in file order
    rep = {}
    for c in K.ids():
        rep.setdefault(uf.find(c), c)
    cubes = {n: tuple(c for c in ids if rep[uf.find(c)] == c) for n, ids in K.cubes.items()}
    faces = {
        c: tuple(tuple(rep[uf.find(x)] for x in fl) for fl in K.faces[c])
        for n, ids in cubes.items() if n > 0 for c in ids
    }
    return PrecubicalSet(cubes=cubes, faces=faces)


def random_precubical(rng: random.Random, max_dim: int = 3, max_cubes: int = 200,
                      max_blocks: int = 6) -> PrecubicalSet:
    """Random valid precubical set: truncated cubes glued along random cubes."""
    blocks: list[PrecubicalSet] = []
    total = 0
    for b in range(rng.randint(1, max_blocks)):
        n = rng.randint(0, max_dim)
        block = _truncated_cube(rng, n, f"b{b}.")
        size = sum(block.census())
        if total + size > max_cubes:
            break
        blocks.append(block)
        total += size
    cubes: dict[int, list[str]] = {}
    faces: dict = {}
    for block in blocks:
        for n, ids in block.cubes.items():
            cubes.setdefault(n, []).extend(ids)
        faces.update(block.faces)
    K = PrecubicalSet(cubes={n: tuple(v) for n, v in sorted(cubes.items())}, faces=faces)
    pairs = []
    for _ in range(rng.randint(0, 2 * len(blocks) + 1)):
        # gluing vertices is the common case; higher cubes collapse a lot
        n = 0 if rng.random() < 0.7 else rng.randint(1, max_dim)
        ids = K.cubes.get(n, ())
        if len(ids) >= 2:
            pairs.append(tuple(rng.sample(ids, 2)))
    return quotient(K, pairs)
