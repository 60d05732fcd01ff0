"""Tensor and Hom over the middle identity component.

A module over the diagonal algebra of a pair (A, A') carries a right
action of the identity component B' of A' through the classes 1 (x) b',
and a module over the diagonal algebra of (A', A'') carries a left one
through b' (x) 1.  Tensoring over B' composes the two into a module over
the diagonal algebra of (A, A''); Hom over B' does the same
contravariantly in the first argument.

The graded versions take graded bimodules, tensor the identity component
of the first with the whole of the second, and return a graded bimodule.
They are aligned with the module versions on the nose: the identity
component of a graded tensor (or Hom) of induced bimodules has the same
quotient basis and the same action tables as the module-level functor,
which the tests assert as exact matrix equality.

All middle actions go through fixed degree-one classes, so the results
do not depend on the choice of slot units; the unit arguments exist only
to let callers confirm that.
"""

from __future__ import annotations

from .graded import (DeltaAlgebra, GradedBimodule, GradedSetting,
                     _assert_valid, _QuotientSpace, _scale_into,
                     identity_component)
from .linalg import (EchelonBasis, Matrix, QuotientMap, SpanSolver, kernel,
                     standard_vector)
from .modules import AlgebraModule


def _middle_units_second_slot(DA: DeltaAlgebra, units=None, unit_invs=None):
    """Slot units of the second algebra, indexed by first-grading degrees."""
    S = DA.setting
    Ap = S.Aprime
    if units is None:
        units, unit_invs = Ap.units, Ap.unit_invs
    per = [units[S.to_prime[g]] for g in range(S.Gbar.order)]
    per_inv = [unit_invs[S.to_prime[g]] for g in range(S.Gbar.order)]
    return per, per_inv


def _middle_units_first_slot(DA: DeltaAlgebra, units=None, unit_invs=None):
    """Slot units of the first algebra, indexed by second-grading degrees."""
    S = DA.setting
    Amid = S.A
    if units is None:
        units, unit_invs = Amid.units, Amid.unit_invs
    n2 = S.Aprime.Gbar.order
    per = [units[S.to_std[g]] for g in range(n2)]
    per_inv = [unit_invs[S.to_std[g]] for g in range(n2)]
    return per, per_inv


def _right_middle_action(DA_left: DeltaAlgebra, M: AlgebraModule) -> list[Matrix]:
    """b'_k acting on the right of M through the class 1 (x) b'_k."""
    S = DA_left.setting
    return [M.action_of(DA_left.delta_class_of_pair(
        S.A.algebra.unit, standard_vector(S.Aprime.dim, k)))
        for k in range(S.Aprime.dimB)]


def _left_middle_action(DA_right: DeltaAlgebra, M: AlgebraModule) -> list[Matrix]:
    """b'_k acting on the left of M through the class b'_k (x) 1."""
    S = DA_right.setting
    return [M.action_of(DA_right.delta_class_of_pair(
        standard_vector(S.A.dim, k), S.Aprime.algebra.unit))
        for k in range(S.A.dimB)]


def delta_tensor(DA_left: DeltaAlgebra, M: AlgebraModule, Mp: AlgebraModule,
                 DA_middle: DeltaAlgebra | None = None,
                 DA_out: DeltaAlgebra | None = None,
                 units=None, unit_invs=None) -> AlgebraModule:
    """M (x)_{B'} M' as a module over the outer diagonal algebra.

    ``M`` lives over the diagonal algebra of (A, A'), ``Mp`` over that of
    (A', A''), and the result over that of (A, A'').  When one algebra
    plays every role the optional arguments may be omitted.  The quotient
    is by the middle balancing relations; every action is checked to
    descend before the module is assembled.
    """
    if DA_middle is None:
        DA_middle = DA_left
    if DA_out is None:
        DA_out = DA_left
    S1 = DA_left.setting
    F = DA_left.field
    n, np_ = M.dim, Mp.dim
    if M.algebra is not DA_left.algebra:
        raise ValueError("first module is not over the first diagonal "
                         "algebra")
    if Mp.algebra is not DA_middle.algebra:
        raise ValueError("second module is not over the middle diagonal "
                         "algebra")

    right_b = _right_middle_action(DA_left, M)
    left_b = _left_middle_action(DA_middle, Mp)
    width = n * np_
    rels = EchelonBasis(F, width)
    for k in range(S1.Aprime.dimB):
        rb, lb = right_b[k], left_b[k]
        for m in range(n):
            rcol = rb.column(m)
            for mp in range(np_):
                vec = [0] * width
                for s, c in enumerate(rcol):
                    if c:
                        vec[s * np_ + mp] = F.add(vec[s * np_ + mp], c)
                for t, c in enumerate(lb.column(mp)):
                    if c:
                        vec[m * np_ + t] = F.sub(vec[m * np_ + t], c)
                if any(vec):
                    rels.insert(vec)
    qmap = QuotientMap(F, width, rels.sorted_rows())

    u_mid, u_mid_inv = _middle_units_second_slot(DA_left, units, unit_invs)
    A = S1.A
    Aq = DA_out.setting.Aprime

    def ambient_op(delta_index: int) -> Matrix:
        sparse = DA_out.delta_lift(standard_vector(DA_out.dim, delta_index))
        out = Matrix.zeros(F, width, width)
        for p, c in sparse.items():
            i, j = divmod(p, DA_out.apdim)
            g = A.degree_of_index(i)
            mpart = M.action_of(DA_left.delta_class_of_pair(
                standard_vector(A.dim, i), u_mid_inv[g]))
            ppart = Mp.action_of(DA_middle.delta_class_of_pair(
                u_mid[g], standard_vector(Aq.dim, j)))
            rows = [[0] * width for _ in range(width)]
            for r1 in range(n):
                mrow = mpart.rows[r1]
                for r2 in range(np_):
                    prow = ppart.rows[r2]
                    orow = rows[r1 * np_ + r2]
                    for c1 in range(n):
                        a = mrow[c1]
                        if not a:
                            continue
                        base = c1 * np_
                        for c2 in range(np_):
                            b = prow[c2]
                            if b:
                                orow[base + c2] = F.add(orow[base + c2],
                                                        F.mul(a, b))
            out = out + Matrix(F, rows, width).scale(c)
        return out

    action = []
    for d in range(DA_out.dim):
        op = ambient_op(d)
        for row in rels.sorted_rows():
            if any(qmap.project(op.mul_vec(row))):
                raise ArithmeticError("tensor action does not respect the "
                                      "middle balancing relations")
        cols = [qmap.project(op.mul_vec(qmap.lift(standard_vector(qmap.dim, k))))
                for k in range(qmap.dim)]
        action.append(Matrix.from_columns(F, cols, qmap.dim))
    out = AlgebraModule(DA_out.algebra, qmap.dim, action, check="auto",
                        name=f"tensor[{M.name or n}(x){Mp.name or np_}]")
    out.quotient = qmap
    return out


def delta_hom(DA_M: DeltaAlgebra, M: AlgebraModule, Mp: AlgebraModule,
              DA_Mp: DeltaAlgebra | None = None,
              DA_out: DeltaAlgebra | None = None,
              units=None, unit_invs=None) -> AlgebraModule:
    """Hom_{B'}(M, M') as a module over the outer diagonal algebra.

    Here ``M`` lives over the diagonal algebra of (A', A), ``Mp`` over
    that of (A', A''), both carrying the left action of B' through
    b' (x) 1, and the result over that of (A, A'').  The basis is the
    echelonized solution space of the linearity constraints, vectorized
    row-major, so two calls with equal inputs produce equal tables.
    """
    if DA_Mp is None:
        DA_Mp = DA_M
    if DA_out is None:
        DA_out = DA_M
    F = DA_M.field
    n, np_ = M.dim, Mp.dim
    S_M = DA_M.setting
    if M.algebra is not DA_M.algebra:
        raise ValueError("source module is not over its diagonal algebra")
    if Mp.algebra is not DA_Mp.algebra:
        raise ValueError("target module is not over its diagonal algebra")

    left_b_M = _left_middle_action(DA_M, M)
    left_b_Mp = _left_middle_action(DA_Mp, Mp)
    width = np_ * n
    constraint_rows = []
    for k in range(S_M.A.dimB):
        BM, BMp = left_b_M[k], left_b_Mp[k]
        for r in range(np_):
            for c in range(n):
                row = [0] * width
                for s in range(np_):
                    v = BMp.rows[r][s]
                    if v:
                        row[s * n + c] = F.add(row[s * n + c], v)
                for s in range(n):
                    v = BM.rows[s][c]
                    if v:
                        row[r * n + s] = F.sub(row[r * n + s], v)
                if any(row):
                    constraint_rows.append(row)
    if constraint_rows:
        basis_vecs = [list(v) for v in kernel(Matrix(F, constraint_rows, width))]
    else:
        basis_vecs = [standard_vector(width, i) for i in range(width)]
    solver = SpanSolver(F, basis_vecs, width)
    hom_dim = len(basis_vecs)

    u_mid, u_mid_inv = _middle_units_first_slot(DA_M, units, unit_invs)
    A_out = DA_out.setting.A
    Aq = DA_out.setting.Aprime

    def as_matrix(vec) -> Matrix:
        return Matrix(F, [[vec[r * n + c] for c in range(n)]
                          for r in range(np_)], n)

    def as_vector(mat: Matrix) -> list[int]:
        out = []
        for r in range(np_):
            out.extend(mat.rows[r])
        return out

    action = []
    for d in range(DA_out.dim):
        sparse = DA_out.delta_lift(standard_vector(DA_out.dim, d))
        cols = []
        for bidx in range(hom_dim):
            fmat = as_matrix(basis_vecs[bidx])
            acc = Matrix.zeros(F, np_, n)
            for p, c in sparse.items():
                i, j = divmod(p, DA_out.apdim)
                g = A_out.degree_of_index(i)
                pre = M.action_of(DA_M.delta_class_of_pair(
                    u_mid_inv[g], standard_vector(A_out.dim, i)))
                post = Mp.action_of(DA_Mp.delta_class_of_pair(
                    u_mid[g], standard_vector(Aq.dim, j)))
                acc = acc + (post * fmat * pre).scale(c)
            coords = solver.coords(as_vector(acc))
            if coords is None:
                raise ArithmeticError("hom action left the linear-map "
                                      "solution space")
            cols.append(coords)
        action.append(Matrix.from_columns(F, cols, hom_dim))
    out = AlgebraModule(DA_out.algebra, hom_dim, action, check="auto",
                        name=f"hom[{M.name or n}->{Mp.name or np_}]")
    out.basis_vectors = basis_vecs
    out.vector_shape = (np_, n)
    return out


# ---------------------------------------------------------------------------
# graded versions


def graded_tensor_over_middle(DA1: DeltaAlgebra, X: GradedBimodule,
                              Y: GradedBimodule,
                              out_setting: GradedSetting | None = None
                              ) -> GradedBimodule:
    """Identity component of X tensored with the whole of Y over B'.

    X is a graded bimodule for (A, A'), Y one for (A', A''); the result
    is a graded bimodule for (A, A'').  The degree-one block of the
    result is built with the same key ordering and relation rows as
    ``delta_tensor`` of the identity components, so the two agree as
    matrices, not just up to isomorphism.
    """
    S1 = DA1.setting
    if out_setting is None:
        out_setting = S1
    F = DA1.field
    A = S1.A
    Ap = S1.Aprime
    X1 = identity_component(DA1, X)
    n1 = X1.dim

    right_b = _right_middle_action(DA1, X1)
    keys_by_degree: dict[int, list] = {}
    for dy in sorted(Y.components):
        keys = keys_by_degree.setdefault(dy, [])
        for m in range(n1):
            for y in Y.component_indices(dy):
                keys.append((m, y))
    pos = {}
    for dy, keys in keys_by_degree.items():
        for loc, key in enumerate(keys):
            pos[key] = loc
    relations = {d: EchelonBasis(F, len(keys_by_degree[d]))
                 for d in keys_by_degree}
    for k in range(Ap.dimB):
        rb = right_b[k]
        lb = Y.left[k]
        for m in range(n1):
            rcol = rb.column(m)
            for y in range(Y.dim):
                d = Y.degree_of_index[y]
                vec = [0] * len(keys_by_degree[d])
                for s, c in enumerate(rcol):
                    if c:
                        vec[pos[(s, y)]] = F.add(vec[pos[(s, y)]], c)
                for t, c in enumerate(lb.column(y)):
                    if c:
                        vec[pos[(m, t)]] = F.sub(vec[pos[(m, t)]], c)
                if any(vec):
                    relations[d].insert(vec)
    space = _QuotientSpace(F, keys_by_degree,
                           {d: eb.sorted_rows() for d, eb in relations.items()})

    u_mid, u_mid_inv = _middle_units_second_slot(DA1)

    def left_map(i):
        g = A.degree_of_index(i)
        mat = X1.action_of(DA1.delta_class_of_pair(
            standard_vector(A.dim, i), u_mid_inv[g]))
        lu = Y.left_action_of(u_mid[g])

        def go(sparse):
            out: dict = {}
            for (m, y), c in sparse.items():
                mcol = mat.column(m)
                ycol = lu.column(y)
                for s, cm in enumerate(mcol):
                    if not cm:
                        continue
                    ccm = F.mul(c, cm)
                    for t, cy in enumerate(ycol):
                        if cy:
                            _scale_into(F, out, (s, t), F.mul(ccm, cy))
            return {k2: v for k2, v in out.items() if v}
        return go

    def right_map(j):
        ry = Y.right[j]

        def go(sparse):
            out: dict = {}
            for (m, y), c in sparse.items():
                for t, cy in enumerate(ry.column(y)):
                    if cy:
                        _scale_into(F, out, (m, t), F.mul(c, cy))
            return {k2: v for k2, v in out.items() if v}
        return go

    left = []
    for i in range(A.dim):
        go = left_map(i)
        space.check_preserves_relations(go, "left tensor action")
        left.append(space.operator(go))
    right = []
    for j in range(out_setting.Aprime.dim):
        go = right_map(j)
        space.check_preserves_relations(go, "right tensor action")
        right.append(space.operator(go))
    # internal blocks are labeled by second-grading degrees; the result
    # bimodule is graded by the first grading group
    labels = [S1.to_std[d] for d in space.degree_of_index]
    out = GradedBimodule(out_setting, labels, left, right,
                         name=f"gtensor[{X.name}|{Y.name}]")
    out.space = space
    return _assert_valid(out, "graded_tensor_over_middle")


def graded_hom_over_middle(DA1: DeltaAlgebra, X: GradedBimodule,
                           Y: GradedBimodule,
                           out_setting: GradedSetting | None = None
                           ) -> GradedBimodule:
    """B'-linear maps from the identity component of X into Y, graded by
    the target component.

    X is a graded bimodule for (A', A), Y one for (A', A''); the result
    is one for (A, A'').  In each target degree the basis is the
    echelonized solution space of the same constraint layout that
    ``delta_hom`` uses, making the identity components comparable as
    exact matrices.
    """
    S1 = DA1.setting
    if out_setting is None:
        out_setting = S1
    F = DA1.field
    Amid = S1.A
    Gmid = S1.Gbar
    X1 = identity_component(DA1, X)
    n = X1.dim
    left_b_X = _left_middle_action(DA1, X1)

    blocks = list(range(Gmid.order))
    basis_entries = []
    degree_of_index = []
    block_solvers = {}
    for d in blocks:
        yidx = Y.component_indices(d)
        nd = len(yidx)
        width = nd * n
        rows = []
        for k in range(Amid.dimB):
            BX = left_b_X[k]
            BY = Y.left[k]
            for r_local, r in enumerate(yidx):
                for c in range(n):
                    row = [0] * width
                    for s_local, s in enumerate(yidx):
                        v = BY.rows[r][s]
                        if v:
                            row[s_local * n + c] = F.add(
                                row[s_local * n + c], v)
                    for s in range(n):
                        v = BX.rows[s][c]
                        if v:
                            row[r_local * n + s] = F.sub(
                                row[r_local * n + s], v)
                    if any(row):
                        rows.append(row)
        if rows:
            vecs = [list(v) for v in kernel(Matrix(F, rows, width))]
        elif width:
            vecs = [standard_vector(width, i) for i in range(width)]
        else:
            vecs = []
        block_solvers[d] = (yidx, SpanSolver(F, vecs, width), vecs)
        for v in vecs:
            basis_entries.append((d, v))
            degree_of_index.append(d)
    dim = len(basis_entries)

    def entry_matrix(d, vec) -> Matrix:
        yidx = block_solvers[d][0]
        rows = [[0] * n for _ in range(Y.dim)]
        for r_local, r in enumerate(yidx):
            for c in range(n):
                rows[r][c] = vec[r_local * n + c]
        return Matrix(F, rows, n)

    def coords_of(mat: Matrix, d) -> list[int]:
        yidx = set(block_solvers[d][0])
        flat = []
        for r in range(Y.dim):
            keep = r in yidx
            for c in range(n):
                v = mat.rows[r][c]
                if v and not keep:
                    raise ArithmeticError("hom action leaked outside the "
                                          "target block")
            if keep:
                flat.extend(mat.rows[r])
        coords = block_solvers[d][1].coords(flat)
        if coords is None:
            raise ArithmeticError("hom action left the solution space")
        out = [0] * dim
        offset = 0
        for dd in blocks:
            if dd == d:
                for k, c in enumerate(coords):
                    out[offset + k] = c
                break
            offset += len(block_solvers[dd][2])
        return out

    A_out = out_setting.A
    left = []
    for i in range(A_out.dim):
        mid_g = S1.to_std[A_out.degree_of_index(i)]
        pre = X1.action_of(DA1.delta_class_of_pair(
            Amid.unit_invs[mid_g], standard_vector(S1.Aprime.dim, i)))
        lu = Y.left_action_of(Amid.units[mid_g])
        cols = []
        for (d, vec) in basis_entries:
            target = Gmid.mul(mid_g, d)
            acc = lu * entry_matrix(d, vec) * pre
            cols.append(coords_of(acc, target))
        left.append(Matrix.from_columns(F, cols, dim))
    right = []
    for j in range(out_setting.Aprime.dim):
        dj_mid = Y.setting.to_std[Y.setting.Aprime.degree_of_index(j)]
        ry = Y.right[j]
        cols = []
        for (d, vec) in basis_entries:
            target = Gmid.mul(d, dj_mid)
            acc = ry * entry_matrix(d, vec)
            cols.append(coords_of(acc, target))
        right.append(Matrix.from_columns(F, cols, dim))
    # internal blocks are labeled by middle-grading degrees; the result
    # bimodule is graded by the first grading group of the out setting
    labels = [S1.to_prime[d] for d in degree_of_index]
    out = GradedBimodule(out_setting, labels, left, right,
                         name=f"ghom[{X.name}->{Y.name}]")
    return _assert_valid(out, "graded_hom_over_middle")
