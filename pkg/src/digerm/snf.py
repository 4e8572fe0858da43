"""Smith normal form over the integers with unimodular transforms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

Matrix = list[list[int]]


@dataclass(frozen=True)
class SNFResult:
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular and ``D`` diagonal.

    The nonzero diagonal entries of ``D`` are positive and each divides the
    next.
    """

    D: tuple[tuple[int, ...], ...]
    U: tuple[tuple[int, ...], ...]
    V: tuple[tuple[int, ...], ...]

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]

    @property
    def invariant_factors(self) -> list[int]:
        return [d for d in self.diagonal if d]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B) -> Matrix:
    """Exact product of integer matrices given as lists of rows."""
    if not A:
        return []
    ncols = len(B[0]) if B else 0
    if not A[0] or not ncols:
        return [[0] * ncols for _ in A]
    # object arrays keep Python's arbitrary-precision ints
    prod = np.array(A, dtype=object).dot(np.array(B, dtype=object))
    return [[int(x) for x in row] for row in prod.tolist()]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, x, y)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _reduce(pivots: list, k: int) -> None:
    # row k against later pivots, then earlier rows against row k
    col, h = pivots[k]
    for c2, h2 in pivots[k + 1:]:
        q = h[c2] // h2[c2]
        if q:
            h = h - q * h2
    pivots[k] = (col, h)
    p = h[col]
    for l in range(k):
        c2, h2 = pivots[l]
        q = h2[col] // p
        if q:
            pivots[l] = (c2, h2 - q * h)


def hnf(A: Matrix, ncols: int) -> tuple[Matrix, Matrix]:
    """Reduced row Hermite form ``H = U @ A`` with unimodular ``U``.

    Rows are inserted one at a time into a fully reduced echelon form of the
    rows seen so far, which keeps intermediate entries bounded by minors of
    ``A``.  Nonzero rows of ``H`` come first; the trailing rows of ``U`` are
    a basis of the left kernel.
    """
    m, n = len(A), ncols
    # each working row is [row of H | row of U] as an object array
    aug = np.zeros((m, n + m), dtype=object)
    if n:
        aug[:, :n] = np.array(A, dtype=object).reshape(m, n)
    aug[:, n:] = np.identity(m, dtype=int).astype(object)
    pivots: list = []  # (column, augmented row), sorted by column
    kernel = []
    for i in range(m):
        v = aug[i]
        k = 0
        while True:
            nz = np.flatnonzero(v[:n])
            if not len(nz):
                kernel.append(v)
                break
            lead = int(nz[0])
            while k < len(pivots) and pivots[k][0] < lead:
                k += 1
            if k < len(pivots) and pivots[k][0] == lead:
                col, h = pivots[k]
                a, b = h[col], v[col]
                if b % a == 0:
                    # plain elimination; avoids scaling the incoming row
                    v = v - (b // a) * h
                else:
                    g, x, y = xgcd(a, b)
                    pivots[k] = (col, x * h + y * v)
                    v = (-b // g) * h + (a // g) * v
                    _reduce(pivots, k)
                k += 1
                continue
            if v[lead] < 0:
                v = -v
            pivots.insert(k, (lead, v))
            _reduce(pivots, k)
            break
    rows = [p[1] for p in pivots] + kernel
    H = [[int(x) for x in r[:n]] for r in rows]
    U = [[int(x) for x in r[n:]] for r in rows]
    return H, U


def _transpose(M: Matrix, ncols: int) -> Matrix:
    return [list(c) for c in zip(*M)] if M else [[] for _ in range(ncols)]


def _is_diagonal(A: Matrix) -> bool:
    return all(not x for i, row in enumerate(A) for j, x in enumerate(row) if i != j)


def snf(A, shape: tuple[int, int] | None = None) -> SNFResult:
    """Smith normal form of an integer matrix given as a list of rows.

    Row and column Hermite forms alternate until the matrix is diagonal;
    a final pass replaces diagonal pairs ``(a, b)`` by ``(gcd, lcm)`` with
    2x2 unimodular moves.  ``shape`` is only needed when ``A`` has no rows.
    """
    A = [list(map(int, r)) for r in A]
    if shape is None:
        m, n = len(A), (len(A[0]) if A else 0)
    else:
        m, n = shape
    U = V = None
    if m and n:
        while True:
            A, U1 = hnf(A, n)
            U = U1 if U is None else matmul(U1, U)
            if _is_diagonal(A):
                break
            At, V1 = hnf(_transpose(A, n), m)
            A = _transpose(At, m)
            V1 = _transpose(V1, n)
            V = V1 if V is None else matmul(V, V1)
            if _is_diagonal(A):
                break
    U = U if U is not None else identity(m)
    V = V if V is not None else identity(n)
    if m and n:
        r = sum(1 for i in range(min(m, n)) if A[i][i])
        for i in range(r):
            for j in range(i + 1, r):
                a, b = A[i][i], A[j][j]
                if b % a == 0:
                    continue
                g, x, y = xgcd(a, b)
                # [[x, y], [-b/g, a/g]] diag(a, b) [[1, -y*b/g], [1, x*a/g]] = diag(g, ab/g)
                ri, rj = U[i], U[j]
                U[i] = [x * s + y * t for s, t in zip(ri, rj)]
                U[j] = [(-b // g) * s + (a // g) * t for s, t in zip(ri, rj)]
                c1, c2 = -y * b // g, x * a // g
                for row in V:
                    vi, vj = row[i], row[j]
                    row[i], row[j] = vi + vj, c1 * vi + c2 * vj
                A[i][i], A[j][j] = g, a * b // g
    freeze = lambda M: tuple(tuple(r) for r in M)
    if not (m and n):
        A = [[0] * n for _ in range(m)]
    return SNFResult(D=freeze(A), U=freeze(U), V=freeze(V))


def det(M) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    M = [list(r) for r in M]
    n = len(M)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def check_snf(A, res: SNFResult, shape: tuple[int, int] | None = None) -> list[str]:
    """Postcondition check; returns a list of failures (empty when sound)."""
    problems = []
    m, n = shape if shape is not None else (len(A), len(A[0]) if A else 0)
    D = [list(r) for r in res.D]
    if m and n:
        if matmul(matmul([list(r) for r in res.U], [list(r) for r in A]), [list(r) for r in res.V]) != D:
            problems.append("U A V != D")
    for i in range(m):
        for j in range(n):
            if i != j and D[i][j]:
                problems.append(f"D[{i}][{j}] = {D[i][j]} off the diagonal")
    diag = [D[i][i] for i in range(min(m, n))]
    nz = [d for d in diag if d]
    if any(d < 0 for d in nz):
        problems.append("negative diagonal entry")
    if diag[:len(nz)] != nz:
        problems.append("zero diagonal entry before a nonzero one")
    for a, b in zip(nz, nz[1:]):
        if b % a:
            problems.append(f"{a} does not divide {b}")
    for name, M in (("U", res.U), ("V", res.V)):
        if not is_unimodular(M):
            problems.append(f"{name} is not unimodular")
    return problems


def is_unimodular(M) -> bool:
    n = len(M)
    if n <= 12:
        return abs(det(M)) == 1
    return snf(M).invariant_factors == [1] * n
