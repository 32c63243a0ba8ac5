"""Exact integer matrix algebra.

Everything here works over Python ints, so there is no overflow.  The
Smith decomposition ``U @ A @ V == S`` is the workhorse used for abelian
group presentations, cokernels and integer linear systems.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence


class DimensionError(ValueError):
    pass


class Unsolvable(ValueError):
    """Raised by :func:`solve_linear` when ``A x = b`` has no integer solution.

    ``row`` indexes the transformed right-hand side ``U b``; ``value`` is that
    entry and ``divisor`` the Smith diagonal entry it fails to be a multiple of
    (0 beyond the rank).
    """

    def __init__(self, row: int, value: int, divisor: int):
        self.row = row
        self.value = value
        self.divisor = divisor
        super().__init__(f"row {row} of U*b is {value}, not divisible by d={divisor}")


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionError("negative dimension")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise DimensionError("column count needed for a matrix with no rows")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise DimensionError("ragged rows")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    @property
    def T(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows,
                         tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise DimensionError(f"cannot multiply {self.rows}x{self.cols} "
                                     f"by {other.rows}x{other.cols}")
            a, b = self.to_rows(), other.to_rows()
            bt = list(zip(*b)) if b else [()] * other.cols
            out = [sum(x * y for x, y in zip(r, c)) for r in a for c in bt]
            if not b:
                out = [0] * (self.rows * other.cols)
            return IntMatrix(self.rows, other.cols, tuple(out))
        vec = list(other)
        if len(vec) != self.cols:
            raise DimensionError("vector length does not match column count")
        return tuple(sum(x * y for x, y in zip(self.row(i), vec)) for i in range(self.rows))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise DimensionError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        m = self.to_rows()
        sign, prev = 1, 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols,
                "entries": [str(x) for x in self.entries]}

    @classmethod
    def from_json(cls, data: dict | str) -> IntMatrix:
        if isinstance(data, str):
            data = json.loads(data)
        return cls(int(data["rows"]), int(data["cols"]),
                   tuple(int(x) for x in data["entries"]))


@dataclass(frozen=True)
class SmithDecomposition:
    U: IntMatrix
    S: IntMatrix
    V: IntMatrix
    rank: int
    V_inv: IntMatrix
    source: IntMatrix

    @property
    def diagonal(self) -> tuple:
        return tuple(self.S[i, i] for i in range(self.rank))


def smith_normal_form(A: IntMatrix) -> SmithDecomposition:
    """Smith normal form with unimodular transforms, ``U @ A @ V == S``.

    Pivots are chosen by minimum absolute value among the remaining entries.
    The inverse of ``V`` is tracked alongside so that canonical generators of
    a cokernel can be lifted back without a second inversion.
    """
    m, n = A.rows, A.cols
    S = A.to_rows()
    U = IntMatrix.identity(m).to_rows()
    V = IntMatrix.identity(n).to_rows()
    Vi = IntMatrix.identity(n).to_rows()

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in S:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        if q:
            S[dst] = [a + q * b for a, b in zip(S[dst], S[src])]
            U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        # col_dst += q * col_src; the inverse gets row_src -= q * row_dst
        if q:
            for r in S:
                r[dst] += q * r[src]
            for r in V:
                r[dst] += q * r[src]
            Vi[src] = [a - q * b for a, b in zip(Vi[src], Vi[dst])]

    rank = 0
    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                row = S[i]
                for j in range(t, n):
                    v = row[j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                break
            _, i, j = best
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            p = S[t][t]
            clean = True
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(i, t, -(S[i][t] // p))
                    if S[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(j, t, -(S[t][j] // p))
                    if S[t][j]:
                        clean = False
            if not clean:
                continue
            offender = next((i for i in range(t + 1, m)
                             if any(S[i][j] % p for j in range(t + 1, n))), None)
            if offender is None:
                break
            add_row(t, offender, 1)
        if best is None:
            break
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
        rank += 1

    return SmithDecomposition(
        U=IntMatrix.from_rows(U, m), S=IntMatrix.from_rows(S, n),
        V=IntMatrix.from_rows(V, n), rank=rank,
        V_inv=IntMatrix.from_rows(Vi, n), source=A)


def is_smith_form(S: IntMatrix) -> bool:
    diag = []
    for i in range(S.rows):
        for j in range(S.cols):
            if i != j and S[i, j]:
                return False
    for i in range(min(S.rows, S.cols)):
        diag.append(S[i, i])
    if any(d < 0 for d in diag):
        return False
    nz = [d for d in diag if d]
    if diag[:len(nz)] != nz:
        return False
    return all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))


def solve_linear(A: IntMatrix, b: Sequence[int]) -> tuple[tuple, list[tuple]]:
    """Solve ``A x = b`` over the integers.

    Returns ``(x, kernel)`` where ``kernel`` is a basis of the integer
    solutions of ``A x = 0``.  Raises :class:`Unsolvable` carrying the
    offending row of ``U b`` when no integer solution exists.
    """
    b = [int(v) for v in b]
    if len(b) != A.rows:
        raise DimensionError(f"rhs has length {len(b)}, matrix has {A.rows} rows")
    snf = smith_normal_form(A)
    c = snf.U @ b
    y = [0] * A.cols
    for i, ci in enumerate(c):
        d = snf.S[i, i] if i < snf.rank else 0
        if d == 0:
            if ci != 0:
                raise Unsolvable(i, ci, 0)
        elif ci % d:
            raise Unsolvable(i, ci, d)
        else:
            y[i] = ci // d
    x = snf.V @ y
    kernel = [snf.V.col(j) for j in range(snf.rank, A.cols)]
    return x, kernel


def cokernel_structure(A: IntMatrix) -> tuple[tuple, int]:
    """Invariant factors (all > 1) and free rank of ``Z^cols / rowspace(A)``."""
    snf = smith_normal_form(A)
    factors = tuple(d for d in snf.diagonal if d > 1)
    return factors, A.cols - snf.rank


def hermite_rows(rows: Iterable[Sequence[int]], ncols: int) -> tuple:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    The result is canonical for the lattice: nonzero rows only, positive
    pivots, entries above each pivot reduced into ``[0, pivot)``.
    """
    work = [list(r) for r in rows if any(r)]
    basis = []
    col = 0
    while work and col < ncols:
        nz = [r for r in work if r[col]]
        if not nz:
            col += 1
            continue
        rest = [r for r in work if not r[col]]
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            nxt = [piv]
            for r in nz[1:]:
                q = r[col] // piv[col]
                r = [a - q * b for a, b in zip(r, piv)]
                if r[col]:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            nz = nxt
        piv = nz[0]
        if piv[col] < 0:
            piv = [-a for a in piv]
        basis.append((col, piv))
        work = rest
        col += 1
    # reduce entries above pivots
    for k in range(len(basis)):
        ck, rk = basis[k]
        for h in range(k):
            ch, rh = basis[h]
            q = rh[ck] // rk[ck]
            if q:
                basis[h] = (ch, [a - q * b for a, b in zip(rh, rk)])
    return tuple(tuple(r) for _, r in basis)


def left_kernel(A: IntMatrix) -> list[tuple]:
    """Basis of ``{y : y A = 0}`` over the integers."""
    snf = smith_normal_form(A)
    return [snf.U.row(i) for i in range(snf.rank, A.rows)]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def minors_gcd(A: IntMatrix, k: int) -> int:
    """gcd of all k-by-k minors.  Exponential; used as an independent oracle."""
    from itertools import combinations
    g = 0
    for rs in combinations(range(A.rows), k):
        for cs in combinations(range(A.cols), k):
            sub = IntMatrix.from_rows([[A[i, j] for j in cs] for i in rs], k)
            g = gcd(g, sub.det())
    return g
