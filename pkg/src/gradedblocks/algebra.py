"""Finite-dimensional associative algebras in a fixed basis.

An algebra is a multiplication table ``table[i][j]`` (coordinates of the
product of basis elements i and j), a unit vector, and optionally a set of
generator indices.  Generators matter for speed only: commutation and
intertwining constraints are solved against generators, which is
equivalent to solving against the whole basis because both sides of those
constraints are multiplicative.

Associativity is asserted at construction: exhaustively when the triple
loop is affordable, otherwise on generators plus a seeded random sample
(the mode is recorded on the instance).
"""

from __future__ import annotations

import itertools

from . import polys
from .field import FiniteField
from .linalg import (EchelonBasis, Matrix, SpanSolver, kernel, solve,
                     standard_vector, vec_add, vec_is_zero, vec_scale,
                     vec_sub)
from .utils import ResourceLimit, rng_for

_ASSOC_FULL_BUDGET = 2 * 10 ** 7
_ENUM_LIMIT = 1 << 20


class StructureConstantAlgebra:
    def __init__(self, field: FiniteField, table, unit, labels=None,
                 generators=None, assoc_check="auto", name=""):
        self.field = field
        self.table = table
        self.dim = len(table)
        self.unit = list(unit)
        self.labels = labels or [f"b{i}" for i in range(self.dim)]
        self.generators = generators
        self.name = name
        self._support = None
        self._center = None
        self._left_mats: dict[int, Matrix] = {}
        self.assoc_check_mode = None
        for row in table:
            if len(row) != self.dim:
                raise ValueError("table is not square")
            for v in row:
                if len(v) != self.dim:
                    raise ValueError("structure constant vector of wrong length")
        self._check_unit()
        if assoc_check != "skip":
            self._check_associative(assoc_check)

    # -- construction checks ----------------------------------------------

    def _check_unit(self):
        for i in range(self.dim):
            e = standard_vector(self.dim, i)
            if self.mul(self.unit, e) != e or self.mul(e, self.unit) != e:
                raise ValueError(f"unit axiom fails at basis element {i}")

    def support(self, i, j):
        if self._support is None:
            self._support = {}
        key = (i, j)
        s = self._support.get(key)
        if s is None:
            s = [(k, c) for k, c in enumerate(self.table[i][j]) if c]
            self._support[key] = s
        return s

    def _assoc_triple_holds(self, i, j, k) -> bool:
        F = self.field
        d = self.dim
        lhs = [0] * d
        for m, c in self.support(i, j):
            row = self.table[m][k]
            add, mul = F.add, F.mul
            for t in range(d):
                rt = row[t]
                if rt:
                    lhs[t] = add(lhs[t], mul(c, rt))
        rhs = [0] * d
        for m, c in self.support(j, k):
            row = self.table[i][m]
            add, mul = F.add, F.mul
            for t in range(d):
                rt = row[t]
                if rt:
                    rhs[t] = add(rhs[t], mul(c, rt))
        return lhs == rhs

    def _check_associative(self, mode):
        d = self.dim
        if mode == "auto":
            nnz = sum(len(self.support(i, j)) for i in range(d) for j in range(d))
            est = 2 * d * nnz * d
            mode = "full" if est <= _ASSOC_FULL_BUDGET else "sampled"
        if mode == "full":
            for i in range(d):
                for j in range(d):
                    for k in range(d):
                        if not self._assoc_triple_holds(i, j, k):
                            raise ValueError(f"associativity fails at ({i},{j},{k})")
        else:
            gens = sorted(set(self.effective_generators()))
            for i in gens:
                for j in gens:
                    for k in gens:
                        if not self._assoc_triple_holds(i, j, k):
                            raise ValueError(f"associativity fails at ({i},{j},{k})")
            rng = rng_for(0, f"assoc-sample:{self.name}:{d}")
            for _ in range(2000):
                i, j, k = (rng.randrange(d) for _ in range(3))
                if not self._assoc_triple_holds(i, j, k):
                    raise ValueError(f"associativity fails at ({i},{j},{k})")
        self.assoc_check_mode = mode

    # -- arithmetic ---------------------------------------------------------

    def effective_generators(self) -> list[int]:
        if self.generators is None:
            return list(range(self.dim))
        return list(self.generators)

    def mul(self, u, v):
        F = self.field
        d = self.dim
        out = [0] * d
        add, mul = F.add, F.mul
        for i, ci in enumerate(u):
            if ci:
                for j, cj in enumerate(v):
                    if cj:
                        c = mul(ci, cj)
                        row = self.table[i][j]
                        for k, rk in enumerate(row):
                            if rk:
                                out[k] = add(out[k], mul(c, rk))
        return out

    def product(self, *elems):
        acc = list(self.unit)
        for e in elems:
            acc = self.mul(acc, e)
        return acc

    def power(self, v, n: int):
        acc = list(self.unit)
        base = list(v)
        while n:
            if n & 1:
                acc = self.mul(acc, base)
            n >>= 1
            if n:
                base = self.mul(base, base)
        return acc

    def left_mult_matrix(self, v) -> Matrix:
        cols = [self.mul(v, standard_vector(self.dim, j)) for j in range(self.dim)]
        return Matrix.from_columns(self.field, cols, self.dim)

    def right_mult_matrix(self, v) -> Matrix:
        cols = [self.mul(standard_vector(self.dim, j), v) for j in range(self.dim)]
        return Matrix.from_columns(self.field, cols, self.dim)

    def basis_left_matrix(self, i: int) -> Matrix:
        m = self._left_mats.get(i)
        if m is None:
            m = Matrix.from_columns(self.field, [self.table[i][j] for j in range(self.dim)],
                                    self.dim)
            self._left_mats[i] = m
        return m

    def is_idempotent(self, v) -> bool:
        return self.mul(v, v) == list(v)

    def is_central(self, v) -> bool:
        for g in self.effective_generators():
            e = standard_vector(self.dim, g)
            if self.mul(v, e) != self.mul(e, v):
                return False
        return True

    def element_is_invertible(self, v) -> bool:
        from .linalg import is_invertible
        return is_invertible(self.left_mult_matrix(v))

    def element_inverse(self, v):
        x = solve(self.left_mult_matrix(v), self.unit)
        if x is None:
            return None
        # left inverse equals right inverse in a finite-dimensional algebra
        if self.mul(v, x) != self.unit or self.mul(x, v) != self.unit:
            return None
        return x

    # -- structure -----------------------------------------------------------

    def center(self) -> list[list[int]]:
        if self._center is not None:
            return self._center
        F = self.field
        d = self.dim
        rows = []
        for g in self.effective_generators():
            L = self.basis_left_matrix(g)
            R_cols = [self.table[j][g] for j in range(d)]
            R = Matrix.from_columns(F, R_cols, d)
            diff = L - R
            rows.extend(diff.rows)
        self._center = kernel(Matrix(F, rows, d)) if rows else \
            [standard_vector(d, i) for i in range(d)]
        return self._center

    def opposite(self) -> "StructureConstantAlgebra":
        table = [[self.table[j][i] for j in range(self.dim)] for i in range(self.dim)]
        return StructureConstantAlgebra(self.field, table, self.unit,
                                        labels=self.labels, assoc_check="skip",
                                        name=self.name + "^op")

    def __repr__(self):
        tag = self.name or "algebra"
        return f"<{tag}: dim {self.dim} over {self.field!r}>"


def subalgebra(parent: StructureConstantAlgebra, vectors, unit_vec=None,
               labels=None, name="") -> tuple[StructureConstantAlgebra, SpanSolver]:
    """Algebra structure on a multiplicatively closed span inside parent.

    Raises ValueError when the span is not closed or contains no unit.
    """
    F = parent.field
    solver = SpanSolver(F, vectors, parent.dim)
    basis = [vectors[i] for i in solver.independent]
    d = len(basis)
    table = []
    for u in basis:
        row = []
        for v in basis:
            c = solver.coords(parent.mul(u, v))
            if c is None:
                raise ValueError("span is not multiplicatively closed")
            row.append(_restrict_coords(c, solver.independent))
        table.append(row)
    if unit_vec is None:
        unit_vec = _find_unit(parent, basis)
        if unit_vec is None:
            raise ValueError("subalgebra has no unit element")
    cu = solver.coords(unit_vec)
    if cu is None:
        raise ValueError("unit lies outside the span")
    unit = _restrict_coords(cu, solver.independent)
    sub = StructureConstantAlgebra(F, table, unit, labels=labels, name=name)
    return sub, solver


def _restrict_coords(coords, independent):
    return [coords[i] for i in independent]


def _find_unit(parent, basis):
    # solve u*b_i = b_i and b_i*u = b_i for u in the span
    F = parent.field
    n = parent.dim
    d = len(basis)
    rows = []
    rhs = []
    for b in basis:
        R = Matrix.from_columns(F, [parent.mul(x, b) for x in basis], n)
        L = Matrix.from_columns(F, [parent.mul(b, x) for x in basis], n)
        rows.extend(R.rows + L.rows)
        rhs.extend(b + b)
    sol = solve(Matrix(F, rows, d), rhs)
    if sol is None:
        return None
    out = [0] * n
    for c, b in zip(sol, basis):
        if c:
            out = vec_add(F, out, vec_scale(F, c, b))
    return out


class AlgebraHom:
    """Linear map between algebras checked to be unital and multiplicative."""

    def __init__(self, source, target, matrix: Matrix, name=""):
        self.source = source
        self.target = target
        self.matrix = matrix
        self.name = name
        if matrix.nrows != target.dim or matrix.ncols != source.dim:
            raise ValueError("hom matrix has wrong shape")

    def apply(self, v):
        return self.matrix.mul_vec(v)

    def verify(self) -> bool:
        src, tgt, M = self.source, self.target, self.matrix
        if M.mul_vec(src.unit) != tgt.unit:
            return False
        cols = [M.mul_vec(standard_vector(src.dim, i)) for i in range(src.dim)]
        for i in range(src.dim):
            for j in range(src.dim):
                lhs = M.mul_vec(src.table[i][j])
                rhs = tgt.mul(cols[i], cols[j])
                if lhs != rhs:
                    return False
        return True

    def is_surjective(self) -> bool:
        from .linalg import rank
        return rank(self.target.field, self.matrix.transpose().rows) == self.target.dim


# ---------------------------------------------------------------------------
# centers and block idempotents


def minimal_polynomial(alg: StructureConstantAlgebra, v, unit=None) -> list[int]:
    """Monic minimal polynomial of v, relative to the given unit (corner
    algebras pass their own idempotent unit)."""
    F = alg.field
    unit = list(alg.unit) if unit is None else list(unit)
    powers = [unit]
    while True:
        ss = SpanSolver(F, powers, alg.dim)
        nxt = alg.mul(powers[-1], v)
        c = ss.coords(nxt)
        if c is not None:
            return [F.neg(x) for x in c] + [1]
        powers.append(nxt)
        if len(powers) > alg.dim + 1:
            raise ArithmeticError("minimal polynomial search did not terminate")


def enumerate_idempotents(field, mul_coords, dim, limit=_ENUM_LIMIT,
                          skip_zero=True):
    """All idempotents of a (small) algebra given by a coordinate product map."""
    if field.q ** dim > limit:
        raise ResourceLimit(
            f"idempotent enumeration needs {field.q}^{dim} evaluations")
    out = []
    for t in itertools.product(range(field.q), repeat=dim):
        v = list(t)
        if skip_zero and vec_is_zero(v):
            continue
        if mul_coords(v, v) == v:
            out.append(v)
    return out


def central_primitive_idempotents(alg: StructureConstantAlgebra,
                                  limit=_ENUM_LIMIT) -> list[list[int]]:
    """Block idempotents: primitive idempotents of the center.

    Small centers are enumerated exhaustively; larger ones are split by
    scanning roots of minimal polynomials of central elements, which is
    complete whenever those polynomials factor linearly (raises otherwise).
    The result is independently re-verified and canonically sorted.
    """
    F = alg.field
    zbasis = alg.center()
    dz = len(zbasis)
    solver = SpanSolver(F, zbasis, alg.dim)

    pairprod = [[None] * dz for _ in range(dz)]
    for i in range(dz):
        for j in range(dz):
            c = solver.coords(alg.mul(zbasis[i], zbasis[j]))
            if c is None:
                raise ArithmeticError("center is not closed under product")
            pairprod[i][j] = c

    def mul_z(u, v):
        out = [0] * dz
        add, mul = F.add, F.mul
        for i, ci in enumerate(u):
            if ci:
                for j, cj in enumerate(v):
                    if cj:
                        c = mul(ci, cj)
                        row = pairprod[i][j]
                        for k, rk in enumerate(row):
                            if rk:
                                out[k] = add(out[k], mul(c, rk))
        return out

    def to_ambient(zc):
        out = [0] * alg.dim
        for c, b in zip(zc, zbasis):
            if c:
                out = vec_add(F, out, vec_scale(F, c, b))
        return out

    unit_z = solver.coords(alg.unit)
    if unit_z is None:
        raise ArithmeticError("unit is not central")

    if F.q ** dz <= limit:
        idems = enumerate_idempotents(F, mul_z, dz, limit)
        primitives = []
        for e in idems:
            primitive = True
            for f in idems:
                if f != e and mul_z(f, e) == f:
                    primitive = False
                    break
            if primitive:
                primitives.append(e)
    else:
        primitives = _split_by_minpoly(alg, zbasis, solver, mul_z, unit_z)

    blocks = sorted(to_ambient(e) for e in primitives)
    _verify_block_idempotents(alg, blocks)
    return blocks


def _split_by_minpoly(alg, zbasis, solver, mul_z, unit_z):
    F = alg.field
    dz = len(zbasis)

    def minpoly_rel(v, unit):
        powers = [list(unit)]
        while True:
            ss = SpanSolver(F, powers, dz)
            nxt = mul_z(powers[-1], v)
            c = ss.coords(nxt)
            if c is not None:
                return polys.trim([F.neg(x) for x in c] + [1])
            powers.append(nxt)

    def poly_at(coeffs, v, unit):
        acc = [0] * dz
        for c in reversed(coeffs):
            acc = mul_z(acc, v)
            if c:
                acc = vec_add(F, acc, vec_scale(F, c, unit))
        return acc

    corners = [list(unit_z)]
    for zi in range(dz):
        z = standard_vector(dz, zi)
        new_corners = []
        for e in corners:
            w = mul_z(z, e)
            mp = minpoly_rel(w, e)
            lead, roots, rem = polys.linear_root_factorization(F, mp)
            if rem != [1]:
                raise ValueError(
                    "a central minimal polynomial does not split over the field")
            if len(roots) <= 1:
                new_corners.append(e)
                continue
            for r, m in roots:
                mu_r = [1]
                for _ in range(m):
                    mu_r = polys.mul(F, mu_r, [F.neg(r), 1])
                h_r, _ = polys.divmod_poly(F, mp, mu_r)
                g, s, _t = polys.ext_gcd(F, h_r, mu_r)
                if g != [1]:
                    raise ArithmeticError("CRT factors are not coprime")
                e_r = poly_at(polys.mod(F, polys.mul(F, s, h_r), mp), w, e)
                new_corners.append(e_r)
        corners = new_corners
    return corners


def _verify_block_idempotents(alg, blocks):
    F = alg.field
    total = [0] * alg.dim
    for i, e in enumerate(blocks):
        if vec_is_zero(e):
            raise AssertionError("zero block idempotent")
        if alg.mul(e, e) != e:
            raise AssertionError(f"block {i} is not idempotent")
        if not alg.is_central(e):
            raise AssertionError(f"block {i} is not central")
        total = vec_add(F, total, e)
        for j, f in enumerate(blocks):
            if i != j and not vec_is_zero(alg.mul(e, f)):
                raise AssertionError(f"blocks {i} and {j} are not orthogonal")
    if total != alg.unit:
        raise AssertionError("block idempotents do not sum to 1")


def is_local_algebra(alg: StructureConstantAlgebra, limit=_ENUM_LIMIT):
    """(is_local, witness): witness is a nontrivial idempotent when not local.

    A finite-dimensional algebra is local exactly when it has no nontrivial
    idempotent, which an exhaustive scan decides outright.
    """
    if alg.dim == 1:
        return True, None
    if alg.field.q ** alg.dim > limit:
        raise ResourceLimit(
            f"locality scan needs {alg.field.q}^{alg.dim} evaluations")
    for t in itertools.product(range(alg.field.q), repeat=alg.dim):
        v = list(t)
        if vec_is_zero(v) or v == alg.unit:
            continue
        if alg.mul(v, v) == v:
            return False, v
    return True, None
