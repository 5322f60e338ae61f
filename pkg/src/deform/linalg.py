"""Exact rational linear algebra over Q.

Scalars are `fractions.Fraction` (arbitrary-precision, always reduced).
Matrices are stored sparsely as {(row, col): Fraction}; Gaussian elimination
switches to dense row lists below 32x32, sparse dict rows above.  Pivoting is
first-nonzero: over Q there is no rounding, so no magnitude heuristics.

Vectors are sparse dicts {index: Fraction} with zero entries omitted.
"""

from __future__ import annotations

import os
from fractions import Fraction

from .errors import ResourceLimit, ShapeError

Q0 = Fraction(0)
Q1 = Fraction(1)
HALF = Fraction(1, 2)

_DENSE_LIMIT = 32  # per-side bound below which elimination densifies


def _entry_cap() -> int:
    return int(os.environ.get("DEFORM_MATRIX_LIMIT", "8000000"))


# -- sparse vectors ----------------------------------------------------------

def vec(*pairs) -> dict:
    return {i: Fraction(c) for i, c in pairs if c}


def vec_add(u: dict, v: dict) -> dict:
    out = dict(u)
    for i, c in v.items():
        s = out.get(i, Q0) + c
        if s:
            out[i] = s
        else:
            out.pop(i, None)
    return out


def vec_sub(u: dict, v: dict) -> dict:
    return vec_add(u, vec_scale(v, -1))


def vec_scale(u: dict, c) -> dict:
    c = Fraction(c) if not isinstance(c, Fraction) else c
    if not c:
        return {}
    return {i: a * c for i, a in u.items()}


def vec_is_zero(u: dict) -> bool:
    return all(not c for c in u.values())


def vec_eq(u: dict, v: dict) -> bool:
    return vec_is_zero(vec_sub(u, v))


def vec_to_list(u: dict, n: int) -> list:
    out = [Q0] * n
    for i, c in u.items():
        out[i] = c
    return out


def list_to_vec(xs) -> dict:
    return {i: Fraction(c) for i, c in enumerate(xs) if c}


class Matrix:
    """Immutable-by-convention sparse rational matrix."""

    __slots__ = ("nrows", "ncols", "entries")

    def __init__(self, nrows: int, ncols: int, entries: dict | None = None):
        if nrows < 0 or ncols < 0:
            raise ShapeError(f"negative matrix shape {nrows}x{ncols}")
        if nrows * ncols > _entry_cap():
            raise ResourceLimit(
                f"matrix {nrows}x{ncols} exceeds DEFORM_MATRIX_LIMIT")
        self.nrows = nrows
        self.ncols = ncols
        self.entries = {}
        if entries:
            for (i, j), c in entries.items():
                if not (0 <= i < nrows and 0 <= j < ncols):
                    raise ShapeError(f"entry ({i},{j}) outside {nrows}x{ncols}")
                c = Fraction(c) if not isinstance(c, Fraction) else c
                if c:
                    self.entries[(i, j)] = c

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(nrows: int, ncols: int) -> "Matrix":
        return Matrix(nrows, ncols)

    @staticmethod
    def identity(n: int) -> "Matrix":
        return Matrix(n, n, {(i, i): Q1 for i in range(n)})

    @staticmethod
    def from_rows(rows) -> "Matrix":
        rows = [list(r) for r in rows]
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        ent = {}
        for i, r in enumerate(rows):
            if len(r) != ncols:
                raise ShapeError("ragged rows")
            for j, c in enumerate(r):
                c = Fraction(c)
                if c:
                    ent[(i, j)] = c
        return Matrix(nrows, ncols, ent)

    def rows(self) -> list:
        out = [[Q0] * self.ncols for _ in range(self.nrows)]
        for (i, j), c in self.entries.items():
            out[i][j] = c
        return out

    # -- arithmetic -----------------------------------------------------------

    def _same_shape(self, other: "Matrix"):
        if self.nrows != other.nrows or self.ncols != other.ncols:
            raise ShapeError(
                f"shape mismatch {self.nrows}x{self.ncols} vs "
                f"{other.nrows}x{other.ncols}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        ent = dict(self.entries)
        for k, c in other.entries.items():
            s = ent.get(k, Q0) + c
            if s:
                ent[k] = s
            else:
                ent.pop(k, None)
        return Matrix(self.nrows, self.ncols, ent)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + other.scale(-1)

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def scale(self, c) -> "Matrix":
        c = Fraction(c)
        if not c:
            return Matrix(self.nrows, self.ncols)
        return Matrix(self.nrows, self.ncols,
                      {k: a * c for k, a in self.entries.items()})

    def __mul__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return self.scale(other)
        if self.ncols != other.nrows:
            raise ShapeError(
                f"cannot multiply {self.nrows}x{self.ncols} by "
                f"{other.nrows}x{other.ncols}")
        by_row = {}
        for (i, j), c in other.entries.items():
            by_row.setdefault(i, []).append((j, c))
        acc = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                key = (i, j)
                s = acc.get(key, Q0) + a * b
                if s:
                    acc[key] = s
                else:
                    acc.pop(key, None)
        return Matrix(self.nrows, other.ncols, acc)

    def __rmul__(self, c) -> "Matrix":
        return self.scale(c)

    def transpose(self) -> "Matrix":
        return Matrix(self.ncols, self.nrows,
                      {(j, i): c for (i, j), c in self.entries.items()})

    def apply(self, v: dict) -> dict:
        """Apply to a sparse column vector."""
        out = {}
        by_col = {}
        for (i, j), c in self.entries.items():
            by_col.setdefault(j, []).append((i, c))
        for j, a in v.items():
            if not a:
                continue
            if j >= self.ncols:
                raise ShapeError(f"vector index {j} outside {self.ncols} cols")
            for i, c in by_col.get(j, ()):
                s = out.get(i, Q0) + c * a
                if s:
                    out[i] = s
                else:
                    out.pop(i, None)
        return out

    def col(self, j: int) -> dict:
        return {i: c for (i, jj), c in self.entries.items() if jj == j}

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other) -> bool:
        return (isinstance(other, Matrix) and self.nrows == other.nrows
                and self.ncols == other.ncols and self.entries == other.entries)

    def __hash__(self):
        return hash((self.nrows, self.ncols,
                     frozenset(self.entries.items())))

    def __repr__(self):
        if self.nrows * self.ncols <= 64:
            return "Matrix(%s)" % self.rows()
        return f"Matrix({self.nrows}x{self.ncols}, {len(self.entries)} nonzero)"

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.nrows != other.nrows:
            raise ShapeError("hstack row mismatch")
        ent = dict(self.entries)
        for (i, j), c in other.entries.items():
            ent[(i, j + self.ncols)] = c
        return Matrix(self.nrows, self.ncols + other.ncols, ent)

    # -- elimination -----------------------------------------------------------

    def _sparse_rows(self) -> list:
        rows = [dict() for _ in range(self.nrows)]
        for (i, j), c in self.entries.items():
            rows[i][j] = c
        return rows

    def rref(self) -> tuple["Matrix", list]:
        """Reduced row echelon form; returns (R, pivot_columns)."""
        if max(self.nrows, self.ncols, 1) < _DENSE_LIMIT:
            rows, pivots = _dense_rref(self.rows(), self.ncols)
            ent = {}
            for i, r in enumerate(rows):
                for j, c in enumerate(r):
                    if c:
                        ent[(i, j)] = c
            return Matrix(self.nrows, self.ncols, ent), pivots
        rows, pivots = _sparse_rref(self._sparse_rows(), self.ncols)
        ent = {}
        for i, r in enumerate(rows):
            for j, c in r.items():
                ent[(i, j)] = c
        return Matrix(self.nrows, self.ncols, ent), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> list:
        """Basis of ker(self) as sparse vectors."""
        red, pivots = self.rref()
        pivot_set = set(pivots)
        rows = red._sparse_rows()
        basis = []
        for free in range(self.ncols):
            if free in pivot_set:
                continue
            v = {free: Q1}
            for r, p in zip(rows, pivots):
                c = r.get(free, Q0)
                if c:
                    v[p] = -c / r[p]
            basis.append(v)
        return basis

    def solve(self, b: dict) -> dict | None:
        """One solution x of self @ x = b, or None if inconsistent."""
        sol = self.solve_full(b)
        return None if sol is None else sol[0]

    def solve_full(self, b: dict):
        """(particular solution, nullspace basis) of self @ x = b, or None."""
        bm = Matrix(self.nrows, 1, {(i, 0): c for i, c in b.items() if c})
        aug = self.hstack(bm)
        red, pivots = aug.rref()
        if pivots and pivots[-1] == self.ncols:
            return None
        rows = red._sparse_rows()
        particular = {}
        for r, p in zip(rows, pivots):
            c = r.get(self.ncols, Q0)
            if c:
                particular[p] = c / r[p]
        return particular, self.nullspace()

    def preimage(self, b: dict) -> dict | None:
        return self.solve(b)

    def column_span_contains(self, b: dict) -> bool:
        return self.solve(b) is not None


def _dense_rref(rows, ncols):
    nrows = len(rows)
    pivots = []
    pr = 0
    for pc in range(ncols):
        pivot = None
        for r in range(pr, nrows):
            if rows[r][pc]:
                pivot = r
                break
        if pivot is None:
            continue
        rows[pr], rows[pivot] = rows[pivot], rows[pr]
        pv = rows[pr][pc]
        if pv != Q1:
            rows[pr] = [c / pv for c in rows[pr]]
        for r in range(nrows):
            if r != pr and rows[r][pc]:
                f = rows[r][pc]
                src = rows[pr]
                rows[r] = [a - f * b for a, b in zip(rows[r], src)]
        pivots.append(pc)
        pr += 1
        if pr == nrows:
            break
    return rows, pivots


def _sparse_rref(rows, ncols):
    pivots = []
    pr = 0
    nrows = len(rows)
    for pc in range(ncols):
        pivot = None
        for r in range(pr, nrows):
            if rows[r].get(pc):
                pivot = r
                break
        if pivot is None:
            continue
        rows[pr], rows[pivot] = rows[pivot], rows[pr]
        pv = rows[pr][pc]
        if pv != Q1:
            rows[pr] = {j: c / pv for j, c in rows[pr].items()}
        src = rows[pr]
        for r in range(nrows):
            if r != pr:
                f = rows[r].get(pc)
                if f:
                    row = rows[r]
                    for j, c in src.items():
                        s = row.get(j, Q0) - f * c
                        if s:
                            row[j] = s
                        else:
                            row.pop(j, None)
        pivots.append(pc)
        pr += 1
        if pr == nrows:
            break
    return rows, pivots


def span_matrix(vectors, dim: int) -> Matrix:
    """Matrix whose columns are the given sparse vectors of length dim."""
    ent = {}
    for j, v in enumerate(vectors):
        for i, c in v.items():
            if c:
                ent[(i, j)] = c
    return Matrix(dim, len(vectors), ent)


def span_basis(vectors, dim: int) -> list:
    """Subset-independent echelon basis of the span of the given vectors."""
    m = span_matrix(vectors, dim).transpose()
    red, pivots = m.rref()
    rows = red._sparse_rows()
    return [r for r in rows[:len(pivots)]]


def extend_basis(inner: list, vectors: list, dim: int) -> list:
    """Vectors from `vectors` extending the span of `inner` to span everything.

    Returns the chosen complement vectors (a subset of `vectors`).
    """
    chosen = []
    current = list(inner)
    rank = span_matrix(current, dim).transpose().rank()
    for v in vectors:
        cand = current + [v]
        r = span_matrix(cand, dim).transpose().rank()
        if r > rank:
            chosen.append(v)
            current = cand
            rank = r
    return chosen


class Subquotient:
    """Exact presentation of ker/im inside Q^dim.

    Built from spanning sets of a subspace Z (cycles) and a subspace B <= Z
    (boundaries).  Provides representative vectors for a basis of Z/B and
    coordinates of arbitrary cycles in that basis.
    """

    def __init__(self, cycles: list, boundaries: list, dim: int):
        self.dim = dim
        self.boundary_basis = span_basis(boundaries, dim)
        self.cycle_basis = span_basis(cycles, dim)
        self.representatives = extend_basis(
            self.boundary_basis, self.cycle_basis, dim)
        self._solve_mat = span_matrix(
            self.boundary_basis + self.representatives, dim)

    @property
    def dimension(self) -> int:
        return len(self.representatives)

    def coordinates(self, z: dict) -> list | None:
        """Coordinates of [z] in the representative basis; None if z is not
        in the cycle subspace."""
        if span_matrix(self.cycle_basis + [z], self.dim).transpose().rank() \
                > len(self.cycle_basis):
            return None
        sol = self._solve_mat.solve(z)
        if sol is None:
            return None
        nb = len(self.boundary_basis)
        return [sol.get(nb + i, Q0) for i in range(len(self.representatives))]

    def is_trivial(self, z: dict) -> bool:
        """True iff z lies in the boundary subspace."""
        coords = self.coordinates(z)
        if coords is None:
            raise ShapeError("element is not in the cycle subspace")
        return all(not c for c in coords)
