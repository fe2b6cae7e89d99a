"""Exact dense linear algebra over the rationals.

Matrices store ``gmpy2.mpq`` entries row-major.  Everything here is pure
and immutable from the caller's point of view; the only optimization is
that row operations skip zero entries so products with permutation-like
matrices stay cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from gmpy2 import mpq

QONE = mpq(1)
QZERO = mpq(0)


def _q(x) -> mpq:
    return x if isinstance(x, type(QONE)) else mpq(x)


class RationalMatrix:
    """Dense matrix of exact rationals."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: list[list[mpq]]):
        self.rows = rows
        self.cols = cols
        self.data = data

    # -- constructors ----------------------------------------------------

    @staticmethod
    def zeros(rows: int, cols: int) -> "RationalMatrix":
        return RationalMatrix(rows, cols, [[QZERO] * cols for _ in range(rows)])

    @staticmethod
    def identity(n: int) -> "RationalMatrix":
        m = RationalMatrix.zeros(n, n)
        for i in range(n):
            m.data[i][i] = QONE
        return m

    @staticmethod
    def from_rows(rows: Sequence[Sequence]) -> "RationalMatrix":
        data = [[_q(x) for x in r] for r in rows]
        ncols = len(data[0]) if data else 0
        for r in data:
            if len(r) != ncols:
                raise ValueError("ragged rows")
        return RationalMatrix(len(data), ncols, data)

    @staticmethod
    def column(vec: Sequence) -> "RationalMatrix":
        return RationalMatrix(len(vec), 1, [[_q(x)] for x in vec])

    # -- basics -----------------------------------------------------------

    def copy(self) -> "RationalMatrix":
        return RationalMatrix(self.rows, self.cols, [row[:] for row in self.data])

    def __getitem__(self, ij: tuple[int, int]) -> mpq:
        return self.data[ij[0]][ij[1]]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(r) for r in self.data)))

    def __repr__(self) -> str:
        return f"RationalMatrix({self.rows}x{self.cols})"

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.data for x in row)

    def row(self, i: int) -> list[mpq]:
        return self.data[i][:]

    def col(self, j: int) -> list[mpq]:
        return [self.data[i][j] for i in range(self.rows)]

    def trace(self) -> mpq:
        if self.rows != self.cols:
            raise ValueError("trace of non-square matrix")
        t = QZERO
        for i in range(self.rows):
            t += self.data[i][i]
        return t

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(
            self.cols, self.rows, [list(col) for col in zip(*self.data)]
        ) if self.rows and self.cols else RationalMatrix.zeros(self.cols, self.rows)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return RationalMatrix(
            self.rows,
            self.cols,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)],
        )

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return RationalMatrix(
            self.rows,
            self.cols,
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)],
        )

    def scale(self, c) -> "RationalMatrix":
        c = _q(c)
        return RationalMatrix(
            self.rows, self.cols, [[c * x for x in row] for row in self.data]
        )

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        out = [[QZERO] * other.cols for _ in range(self.rows)]
        odata = other.data
        for i, arow in enumerate(self.data):
            orow = out[i]
            for k, a in enumerate(arow):
                if a:
                    brow = odata[k]
                    for j, b in enumerate(brow):
                        if b:
                            orow[j] += a * b
        return RationalMatrix(self.rows, other.cols, out)

    def apply(self, vec: Sequence) -> list[mpq]:
        """Matrix times column vector."""
        if self.cols != len(vec):
            raise ValueError("shape mismatch")
        out = []
        for row in self.data:
            s = QZERO
            for a, x in zip(row, vec):
                if a and x:
                    s += a * x
            out.append(s)
        return out

    def apply_row(self, vec: Sequence) -> list[mpq]:
        """Row vector times matrix."""
        if self.rows != len(vec):
            raise ValueError("shape mismatch")
        out = [QZERO] * self.cols
        for x, row in zip(vec, self.data):
            if x:
                for j, a in enumerate(row):
                    if a:
                        out[j] += x * a
        return out

    # -- stacking -------------------------------------------------------------

    @staticmethod
    def vstack(mats: Sequence["RationalMatrix"]) -> "RationalMatrix":
        mats = list(mats)
        if not mats:
            raise ValueError("empty stack")
        cols = mats[0].cols
        data = []
        for m in mats:
            if m.cols != cols:
                raise ValueError("column mismatch")
            data.extend(row[:] for row in m.data)
        return RationalMatrix(len(data), cols, data)

    @staticmethod
    def hstack(mats: Sequence["RationalMatrix"]) -> "RationalMatrix":
        mats = list(mats)
        if not mats:
            raise ValueError("empty stack")
        rows = mats[0].rows
        data = [[] for _ in range(rows)]
        for m in mats:
            if m.rows != rows:
                raise ValueError("row mismatch")
            for i in range(rows):
                data[i].extend(m.data[i])
        return RationalMatrix(rows, sum(m.cols for m in mats), data)

    @staticmethod
    def block_diag(mats: Sequence["RationalMatrix"]) -> "RationalMatrix":
        rows = sum(m.rows for m in mats)
        cols = sum(m.cols for m in mats)
        out = RationalMatrix.zeros(rows, cols)
        i0 = j0 = 0
        for m in mats:
            for i in range(m.rows):
                out.data[i0 + i][j0 : j0 + m.cols] = m.data[i][:]
            i0 += m.rows
            j0 += m.cols
        return out


# -- elimination ---------------------------------------------------------------


def rref(m: RationalMatrix) -> tuple[RationalMatrix, list[int]]:
    """Reduced row-echelon form and pivot column indices."""
    data = [row[:] for row in m.data]
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        pivot_row = None
        for i in range(r, m.rows):
            if data[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        data[r], data[pivot_row] = data[pivot_row], data[r]
        pv = data[r][c]
        if pv != 1:
            inv = 1 / pv
            data[r] = [x * inv if x else x for x in data[r]]
        prow = data[r]
        for i in range(m.rows):
            if i != r and data[i][c]:
                f = data[i][c]
                row = data[i]
                for j in range(c, m.cols):
                    if prow[j]:
                        row[j] -= f * prow[j]
        pivots.append(c)
        r += 1
        if r == m.rows:
            break
    return RationalMatrix(m.rows, m.cols, data), pivots


class RowReducer:
    """Incremental row-space builder; keeps rows in echelon form."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: list[list[mpq]] = []
        self.pivots: list[int] = []

    def reduce(self, row: Sequence) -> list[mpq]:
        """Return the residue of ``row`` after reduction against the basis."""
        row = [_q(x) for x in row]
        for prow, p in zip(self.rows, self.pivots):
            if row[p]:
                f = row[p]
                for j in range(p, self.ncols):
                    if prow[j]:
                        row[j] -= f * prow[j]
        return row

    def add(self, row: Sequence) -> bool:
        """Add a row; returns True if it enlarged the span."""
        row = self.reduce(row)
        p = next((j for j, x in enumerate(row) if x), None)
        if p is None:
            return False
        pv = row[p]
        if pv != 1:
            inv = 1 / pv
            row = [x * inv if x else x for x in row]
        for prow in self.rows:
            if prow[p]:
                f = prow[p]
                for j in range(p, self.ncols):
                    if row[j]:
                        prow[j] -= f * row[j]
        idx = 0
        while idx < len(self.pivots) and self.pivots[idx] < p:
            idx += 1
        self.rows.insert(idx, row)
        self.pivots.insert(idx, p)
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)

    def basis_matrix(self) -> RationalMatrix:
        return RationalMatrix(len(self.rows), self.ncols, [r[:] for r in self.rows])

    def contains(self, row: Sequence) -> bool:
        return all(x == 0 for x in self.reduce(row))


@dataclass(frozen=True)
class Subspace:
    """Subspace of Q^n, canonically represented by an RREF row basis."""

    ambient_dim: int
    basis: RationalMatrix

    def __post_init__(self):
        if self.basis.cols != self.ambient_dim:
            raise ValueError("basis/ambient mismatch")

    @property
    def dim(self) -> int:
        return self.basis.rows

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def contains_vector(self, vec: Sequence) -> bool:
        red = RowReducer(self.ambient_dim)
        for row in self.basis.data:
            red.rows.append(row[:])
        red.pivots = [next(j for j, x in enumerate(row) if x) for row in self.basis.data]
        return red.contains(vec)


def row_space(m: RationalMatrix) -> Subspace:
    r, pivots = rref(m)
    basis = RationalMatrix(len(pivots), m.cols, [r.data[i][:] for i in range(len(pivots))])
    return Subspace(m.cols, basis)


def span_of_vectors(vectors: Iterable[Sequence], ambient_dim: int) -> Subspace:
    red = RowReducer(ambient_dim)
    for v in vectors:
        red.add(v)
    r, pivots = rref(red.basis_matrix())
    basis = RationalMatrix(len(pivots), ambient_dim, [r.data[i][:] for i in range(len(pivots))])
    return Subspace(ambient_dim, basis)


def kernel(m: RationalMatrix) -> Subspace:
    """Nullspace {x : Mx = 0} as a row-basis subspace of Q^cols."""
    r, pivots = rref(m)
    free = [j for j in range(m.cols) if j not in pivots]
    rows = []
    for f in free:
        vec = [QZERO] * m.cols
        vec[f] = QONE
        for i, p in enumerate(pivots):
            vec[p] = -r.data[i][f]
        rows.append(vec)
    if rows:
        return row_space(RationalMatrix(len(rows), m.cols, rows))
    return Subspace(m.cols, RationalMatrix.zeros(0, m.cols))


def image(m: RationalMatrix) -> Subspace:
    """Column space of M, as a subspace of Q^rows."""
    return row_space(m.transpose())


def intersect(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    if a.dim == 0 or b.dim == 0:
        return Subspace(a.ambient_dim, RationalMatrix.zeros(0, a.ambient_dim))
    # x = u A = v B; solve [A^T | -B^T] null vectors, read off u A.
    stacked = RationalMatrix.hstack([a.basis.transpose(), b.basis.transpose().scale(-1)])
    ker = kernel(stacked)
    vecs = []
    for row in ker.basis.data:
        u = row[: a.dim]
        vecs.append(a.basis.apply_row(u))
    return span_of_vectors(vecs, a.ambient_dim)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    return span_of_vectors(list(a.basis.data) + list(b.basis.data), a.ambient_dim)


def invariant_subspace(gens: Sequence[RationalMatrix]) -> Subspace:
    """Common fixed space of square matrices: the solutions of g x = x."""
    gens = list(gens)
    if not gens:
        raise ValueError("the ambient dimension is unknown for an empty generator list")
    d = gens[0].rows
    for g in gens:
        if g.rows != d or g.cols != d:
            raise ValueError("generator size mismatch")
    blocks = [g - RationalMatrix.identity(d) for g in gens]
    return kernel(RationalMatrix.vstack(blocks))


def fixed_space(gens: Sequence[RationalMatrix], dim: int) -> Subspace:
    if not gens:
        return Subspace(dim, RationalMatrix.identity(dim))
    return invariant_subspace(gens)


def solve(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix | None:
    """One solution X of A X = B, or None if inconsistent."""
    aug = RationalMatrix.hstack([a, b])
    r, pivots = rref(aug)
    pivots_in_b = [p for p in pivots if p >= a.cols]
    if pivots_in_b:
        return None
    x = RationalMatrix.zeros(a.cols, b.cols)
    for i, p in enumerate(pivots):
        x.data[p] = r.data[i][a.cols :]
    return x


def coordinates_in_rows(basis: RationalMatrix, vec: Sequence) -> list[mpq] | None:
    """Coordinates of ``vec`` in the given row basis, or None if outside."""
    sol = solve(basis.transpose(), RationalMatrix.column(vec))
    if sol is None:
        return None
    return [sol.data[i][0] for i in range(basis.rows)]


def parse_rational(s: str) -> mpq:
    return mpq(s)


def format_rational(x) -> str:
    return str(_q(x))
