"""Exact linear algebra over a FiniteField.

Vectors are plain lists of field elements (ints); matrices are row-major
lists of such lists wrapped in :class:`Matrix`.  Column vectors are the
default for "matrix acts on vector", so left module actions compose as
``L(a)·L(b) = L(ab)``.

Everything here is deterministic: elimination always picks the first
usable pivot, so echelonized bases of the same input agree bit for bit
across runs.
"""

from __future__ import annotations

from .field import FiniteField


# ---------------------------------------------------------------------------
# vectors


def vec_zero(n: int) -> list[int]:
    return [0] * n


def vec_is_zero(v) -> bool:
    return all(c == 0 for c in v)


def vec_add(F: FiniteField, u, v):
    add = F.add
    return [add(a, b) for a, b in zip(u, v)]


def vec_sub(F: FiniteField, u, v):
    sub = F.sub
    return [sub(a, b) for a, b in zip(u, v)]


def vec_neg(F: FiniteField, u):
    neg = F.neg
    return [neg(a) for a in u]


def vec_scale(F: FiniteField, c: int, u):
    if c == 0:
        return [0] * len(u)
    if c == 1:
        return list(u)
    mul = F.mul
    return [mul(c, a) for a in u]


def vec_addmul(F: FiniteField, u, c: int, v):
    """u + c*v, a fused elimination step."""
    if c == 0:
        return list(u)
    add, mul = F.add, F.mul
    return [add(a, mul(c, b)) for a, b in zip(u, v)]


def vec_dot(F: FiniteField, u, v) -> int:
    add, mul = F.add, F.mul
    s = 0
    for a, b in zip(u, v):
        if a and b:
            s = add(s, mul(a, b))
    return s


# ---------------------------------------------------------------------------
# matrices


class Matrix:
    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: FiniteField, rows: list[list[int]], ncols: int | None = None):
        self.field = field
        self.rows = rows
        self.nrows = len(rows)
        if ncols is None:
            if not rows:
                raise ValueError("empty matrix needs explicit ncols")
            ncols = len(rows[0])
        self.ncols = ncols
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")

    @classmethod
    def zeros(cls, field, nrows, ncols):
        return cls(field, [[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, field, n):
        rows = [[0] * n for _ in range(n)]
        for i in range(n):
            rows[i][i] = 1
        return cls(field, rows, n)

    @classmethod
    def from_columns(cls, field, cols, nrows=None):
        if not cols:
            return cls(field, [[] for _ in range(nrows or 0)], 0)
        nrows = len(cols[0])
        return cls(field, [[col[i] for col in cols] for i in range(nrows)], len(cols))

    def copy(self):
        return Matrix(self.field, [list(r) for r in self.rows], self.ncols)

    def column(self, j):
        return [r[j] for r in self.rows]

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def mul_vec(self, v):
        """Matrix times column vector."""
        F = self.field
        add, mul = F.add, F.mul
        out = []
        for row in self.rows:
            s = 0
            for a, b in zip(row, v):
                if a and b:
                    s = add(s, mul(a, b))
            out.append(s)
        return out

    def vec_mul(self, v):
        """Row vector times matrix."""
        F = self.field
        add, mul = F.add, F.mul
        out = [0] * self.ncols
        for c, row in zip(v, self.rows):
            if c:
                for j, a in enumerate(row):
                    if a:
                        out[j] = add(out[j], mul(c, a))
        return out

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        F = self.field
        add, mul = F.add, F.mul
        orows = other.rows
        out = []
        for row in self.rows:
            acc = [0] * other.ncols
            for c, orow in zip(row, orows):
                if c:
                    for j, a in enumerate(orow):
                        if a:
                            acc[j] = add(acc[j], mul(c, a))
            out.append(acc)
        return Matrix(F, out, other.ncols)

    def __add__(self, other):
        if self.nrows != other.nrows or self.ncols != other.ncols:
            raise ValueError("shape mismatch")
        F = self.field
        return Matrix(F, [vec_add(F, a, b) for a, b in zip(self.rows, other.rows)],
                      self.ncols)

    def __sub__(self, other):
        if self.nrows != other.nrows or self.ncols != other.ncols:
            raise ValueError("shape mismatch")
        F = self.field
        return Matrix(F, [vec_sub(F, a, b) for a, b in zip(self.rows, other.rows)],
                      self.ncols)

    def __neg__(self):
        return Matrix(self.field, [vec_neg(self.field, r) for r in self.rows], self.ncols)

    def scale(self, c):
        return Matrix(self.field, [vec_scale(self.field, c, r) for r in self.rows],
                      self.ncols)

    def transpose(self):
        return Matrix(self.field, [[self.rows[i][j] for i in range(self.nrows)]
                                   for j in range(self.ncols)], self.nrows)

    def pow_int(self, n: int):
        if self.nrows != self.ncols:
            raise ValueError("power of a nonsquare matrix")
        if n < 0:
            raise ValueError("negative power")
        result = Matrix.identity(self.field, self.nrows)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def is_zero(self):
        return all(vec_is_zero(r) for r in self.rows)

    def is_identity(self):
        if self.nrows != self.ncols:
            return False
        return all(c == (1 if i == j else 0)
                   for i, row in enumerate(self.rows) for j, c in enumerate(row))

    def trace(self):
        F = self.field
        s = 0
        for i in range(min(self.nrows, self.ncols)):
            s = F.add(s, self.rows[i][i])
        return s

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.field == other.field
                and self.nrows == other.nrows and self.ncols == other.ncols
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.nrows, self.ncols, tuple(map(tuple, self.rows))))

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols} over {self.field!r})"

    def tolist(self):
        return [list(r) for r in self.rows]


# ---------------------------------------------------------------------------
# elimination


class EchelonBasis:
    """Row space in online echelon form.

    Rows are normalized to pivot 1 and inserted one at a time; each new row
    is reduced left to right against the stored pivots, which keeps the
    basis deterministic no matter how the input is chunked.  An optional
    augmentation of ``aug`` trailing columns rides along in row operations
    but is never eligible as a pivot.
    """

    def __init__(self, field: FiniteField, ncols: int, aug: int = 0):
        self.field = field
        self.ncols = ncols
        self.aug = aug
        self.rows: dict[int, list[int]] = {}

    def reduce(self, v: list[int]) -> list[int]:
        F = self.field
        rows = self.rows
        v = list(v)
        width = self.ncols
        for c in range(width):
            coeff = v[c]
            if coeff and c in rows:
                row = rows[c]
                neg = F.neg(coeff)
                mul, add = F.mul, F.add
                for j in range(c, len(v)):
                    rj = row[j]
                    if rj:
                        v[j] = add(v[j], mul(neg, rj))
        return v

    def insert(self, v: list[int]):
        """Reduce v and store it if independent; returns the pivot or None."""
        v = self.reduce(v)
        for c in range(self.ncols):
            if v[c]:
                inv = self.field.inv(v[c])
                if inv != 1:
                    v = vec_scale(self.field, inv, v)
                self.rows[c] = v
                return c
        return None

    def contains(self, v) -> bool:
        r = self.reduce(v)
        return all(c == 0 for c in r[: self.ncols])

    def pivots(self) -> list[int]:
        return sorted(self.rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def back_reduce(self):
        """Clear every pivot column in every other row (full RREF)."""
        F = self.field
        pivots = self.pivots()
        for i, p in enumerate(pivots):
            row = self.rows[p]
            for p2 in pivots[i + 1:]:
                coeff = row[p2]
                if coeff:
                    other = self.rows[p2]
                    neg = F.neg(coeff)
                    mul, add = F.mul, F.add
                    for j in range(p2, len(row)):
                        oj = other[j]
                        if oj:
                            row[j] = add(row[j], mul(neg, oj))

    def sorted_rows(self) -> list[list[int]]:
        return [self.rows[p] for p in self.pivots()]


def rref(field, rows, ncols=None):
    """(reduced rows sorted by pivot, pivot columns) of the given row list."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    eb = EchelonBasis(field, ncols)
    for r in rows:
        eb.insert(r)
    eb.back_reduce()
    return eb.sorted_rows(), eb.pivots()


def rank(field, rows, ncols=None) -> int:
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    eb = EchelonBasis(field, ncols)
    for r in rows:
        eb.insert(r)
    return eb.dim


def kernel(mat: Matrix) -> list[list[int]]:
    """Basis of the right kernel {x : mat·x = 0}, echelonized and sorted."""
    F = mat.field
    reduced, pivots = rref(F, mat.rows, mat.ncols)
    pivot_set = set(pivots)
    free = [j for j in range(mat.ncols) if j not in pivot_set]
    basis = []
    for j in free:
        v = [0] * mat.ncols
        v[j] = 1
        for row, p in zip(reduced, pivots):
            if row[j]:
                v[p] = F.neg(row[j])
        basis.append(v)
    return basis


def solve(mat: Matrix, b: list[int]):
    """One solution x of mat·x = b, or None if inconsistent."""
    F = mat.field
    n = mat.ncols
    eb = EchelonBasis(F, n, aug=1)
    for row, bi in zip(mat.rows, b):
        r = list(row) + [bi]
        r = eb.reduce(r)
        placed = False
        for c in range(n):
            if r[c]:
                inv = F.inv(r[c])
                if inv != 1:
                    r = vec_scale(F, inv, r)
                eb.rows[c] = r
                placed = True
                break
        if not placed and r[n] != 0:
            return None
    eb.back_reduce()
    x = [0] * n
    for p, row in eb.rows.items():
        x[p] = row[n]
    return x


def inverse(mat: Matrix):
    """Inverse matrix, or None if singular."""
    if mat.nrows != mat.ncols:
        return None
    F = mat.field
    n = mat.ncols
    eb = EchelonBasis(F, n, aug=n)
    for i, row in enumerate(mat.rows):
        r = list(row) + [0] * n
        r[n + i] = 1
        eb.insert(r)
    if eb.dim != n:
        return None
    eb.back_reduce()
    rows = eb.sorted_rows()
    return Matrix(F, [r[n:] for r in rows], n)


def is_invertible(mat: Matrix) -> bool:
    return mat.nrows == mat.ncols and rank(mat.field, mat.rows, mat.ncols) == mat.nrows


# ---------------------------------------------------------------------------
# spans and quotients


class SpanSolver:
    """Span of a fixed vector list with coordinate recovery.

    ``coords(v)`` returns coefficients over the *original* vector list
    (zeros for vectors that were dependent on earlier ones), or None when
    v lies outside the span.
    """

    def __init__(self, field: FiniteField, vectors: list[list[int]], ncols: int | None = None):
        if ncols is None:
            if not vectors:
                raise ValueError("need ncols for an empty span")
            ncols = len(vectors[0])
        self.field = field
        self.ncols = ncols
        self.nvecs = len(vectors)
        self._eb = EchelonBasis(field, ncols, aug=self.nvecs)
        self.independent: list[int] = []
        for i, v in enumerate(vectors):
            row = list(v) + [0] * self.nvecs
            row[ncols + i] = 1
            if self._eb.insert(row) is not None:
                self.independent.append(i)
        self._eb.back_reduce()
        self.pivots = self._eb.pivots()

    @property
    def dim(self) -> int:
        return self._eb.dim

    def contains(self, v) -> bool:
        r = self._eb.reduce(list(v) + [0] * self.nvecs)
        return all(c == 0 for c in r[: self.ncols])

    def coords(self, v):
        r = self._eb.reduce(list(v) + [0] * self.nvecs)
        if any(c != 0 for c in r[: self.ncols]):
            return None
        F = self.field
        return [F.neg(c) for c in r[self.ncols:]]

    def basis_rows(self) -> list[list[int]]:
        """Echelonized (RREF) basis of the span."""
        return [row[: self.ncols] for row in self._eb.sorted_rows()]

    def echelon_coords(self, v):
        """Coordinates of v over basis_rows(), or None when v is outside.

        Because the basis is fully reduced, the coordinate on the row with
        pivot p is just v[p].
        """
        if not self.contains(v):
            return None
        return [v[p] for p in self.pivots]


class QuotientMap:
    """Quotient of an ambient coordinate space by a span of relations.

    The quotient basis is the set of non-pivot ambient coordinates of the
    echelonized relation space, so projections and lifts are reproducible.
    ``lift`` is a section of ``project``.
    """

    def __init__(self, field: FiniteField, ambient_dim: int, relations):
        self.field = field
        self.ambient_dim = ambient_dim
        self._eb = EchelonBasis(field, ambient_dim)
        for r in relations:
            self._eb.insert(r)
        self._eb.back_reduce()
        pivot_set = set(self._eb.rows)
        self.pivots = sorted(pivot_set)
        self.coords_index = [j for j in range(ambient_dim) if j not in pivot_set]
        self.dim = len(self.coords_index)

    def project(self, v) -> list[int]:
        r = self._eb.reduce(v)
        return [r[j] for j in self.coords_index]

    def lift(self, q) -> list[int]:
        v = [0] * self.ambient_dim
        for j, c in zip(self.coords_index, q):
            v[j] = c
        return v

    def contains_relation(self, v) -> bool:
        return vec_is_zero(self.project(v))

    def projection_matrix(self) -> Matrix:
        cols = [self.project(_std(self.ambient_dim, i)) for i in range(self.ambient_dim)]
        return Matrix.from_columns(self.field, cols, self.dim)

    def lift_matrix(self) -> Matrix:
        cols = [self.lift(_std(self.dim, i)) for i in range(self.dim)]
        return Matrix.from_columns(self.field, cols, self.ambient_dim)


def _std(n: int, i: int) -> list[int]:
    v = [0] * n
    v[i] = 1
    return v


def standard_vector(n: int, i: int) -> list[int]:
    return _std(n, i)
