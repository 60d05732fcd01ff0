"""Independent brute-force recomputations used to validate the fast paths.

Nothing here is needed to build the objects; these routines redo selected
constructions the slow, definitional way so tests can compare results
computed along two genuinely different routes.
"""

from __future__ import annotations

import itertools

from .graded import (DeltaAlgebra, GradedBimodule, _assert_valid,
                     _QuotientSpace)
from .linalg import (EchelonBasis, Matrix, is_invertible, kernel,
                     standard_vector)
from .modules import AlgebraModule
from .utils import rng_for

_EXHAUSTIVE_LIMIT = 4096


def brute_tensor_bimodule(DA: DeltaAlgebra, M: AlgebraModule) -> GradedBimodule:
    """The induced bimodule built as an honest balanced quotient.

    Ambient basis: (t, m) over the full graded pair quotient times M,
    with every balancing relation (t.d) (x) m - t (x) (d.m) imposed for
    every quotient-basis t and diagonal-basis d.  No freeness is used, so
    this is a definitional cross-check for the fast unit-indexed
    construction.
    """
    setting = DA.setting
    F = DA.field
    tdim = DA.t_dim

    keys_by_degree: dict[int, list] = {}
    for t in range(tdim):
        d = DA.t_degree_of_index[t]
        keys_by_degree.setdefault(d, [])
    for d in sorted(keys_by_degree):
        for t in range(tdim):
            if DA.t_degree_of_index[t] == d:
                for m in range(M.dim):
                    keys_by_degree[d].append((t, m))
    pos = {}
    for d, keys in keys_by_degree.items():
        for loc, key in enumerate(keys):
            pos[key] = loc

    # right multiplication by each diagonal basis class, on t-coordinates
    right_delta = []
    for k in range(DA.dim):
        dk = DA.delta_lift(standard_vector(DA.dim, k))
        cols = []
        for t in range(tdim):
            ts = DA.t_lift(standard_vector(tdim, t))
            cols.append(DA.t_project(DA.pair_mul(ts, dk)))
        right_delta.append(Matrix.from_columns(F, cols, tdim))

    relations = {d: EchelonBasis(F, len(keys_by_degree[d]))
                 for d in keys_by_degree}
    for k in range(DA.dim):
        rd = right_delta[k]
        act = M.action[k]
        for t in range(tdim):
            d = DA.t_degree_of_index[t]
            tcol = rd.column(t)
            for m in range(M.dim):
                vec = [0] * len(keys_by_degree[d])
                for s, c in enumerate(tcol):
                    if c:
                        vec[pos[(s, m)]] = F.add(vec[pos[(s, m)]], c)
                for mm, c in enumerate(act.column(m)):
                    if c:
                        vec[pos[(t, mm)]] = F.sub(vec[pos[(t, mm)]], c)
                if any(vec):
                    relations[d].insert(vec)
    space = _QuotientSpace(F, keys_by_degree,
                           {d: eb.sorted_rows() for d, eb in relations.items()})

    A, Ap = setting.A, setting.Aprime

    def side_map(mult_sparse):
        cols = []
        for t in range(tdim):
            ts = DA.t_lift(standard_vector(tdim, t))
            cols.append(DA.t_project(mult_sparse(ts)))
        mat = Matrix.from_columns(F, cols, tdim)

        def go(sparse):
            out: dict = {}
            for (t, m), c in sparse.items():
                for s, ct in enumerate(mat.column(t)):
                    if ct:
                        key = (s, m)
                        v = F.add(out.get(key, 0), F.mul(c, ct))
                        out[key] = v
            return {k2: v for k2, v in out.items() if v}
        return go

    left = []
    for i in range(A.dim):
        pi = DA.sparse_outer(standard_vector(A.dim, i), Ap.algebra.unit)
        go = side_map(lambda ts, pi=pi: DA.pair_mul(pi, ts))
        space.check_preserves_relations(go, "brute left action")
        left.append(space.operator(go))
    right = []
    for j in range(Ap.dim):
        # the second slot is an opposite algebra: its right action is left
        # multiplication by the pair 1 (x) a'
        pj = DA.sparse_outer(A.algebra.unit, standard_vector(Ap.dim, j))
        go = side_map(lambda ts, pj=pj: DA.pair_mul(pj, ts))
        space.check_preserves_relations(go, "brute right action")
        right.append(space.operator(go))
    out = GradedBimodule(setting, space.degree_of_index, left, right,
                         name=f"brute[{M.name or M.dim}]")
    out.space = space
    return _assert_valid(out, "brute_tensor_bimodule")


def graded_bimodule_hom_space(M1: GradedBimodule, M2: GradedBimodule) -> list[Matrix]:
    """Degree-preserving maps intertwining both actions, echelonized."""
    S = M1.setting
    F = S.field
    n1, n2 = M1.dim, M2.dim
    slots = [(r, c) for r in range(n2) for c in range(n1)
             if M2.degree_of_index[r] == M1.degree_of_index[c]]
    slot_pos = {rc: k for k, rc in enumerate(slots)}
    width = len(slots)
    if width == 0:
        return []
    rows = []
    mats = [(M1.left[i], M2.left[i]) for i in range(S.A.dim)]
    mats += [(M1.right[j], M2.right[j]) for j in range(S.Aprime.dim)]
    for m1, m2 in mats:
        for r in range(n2):
            for c in range(n1):
                row = [0] * width
                for s in range(n2):
                    v = m2.rows[r][s]
                    if v and (s, c) in slot_pos:
                        row[slot_pos[(s, c)]] = F.add(row[slot_pos[(s, c)]], v)
                for s in range(n1):
                    v = m1.rows[s][c]
                    if v and (r, s) in slot_pos:
                        row[slot_pos[(r, s)]] = F.sub(row[slot_pos[(r, s)]], v)
                if any(row):
                    rows.append(row)
    if rows:
        sols = kernel(Matrix(F, rows, width))
    else:
        sols = [standard_vector(width, k) for k in range(width)]
    out = []
    for sol in sols:
        mat = Matrix.zeros(F, n2, n1)
        for k, (r, c) in enumerate(slots):
            if sol[k]:
                mat.rows[r][c] = sol[k]
        out.append(mat)
    return out


def graded_bimodule_iso(M1: GradedBimodule, M2: GradedBimodule,
                        seed: int = 0, budget: int = 200):
    """("iso", F) / ("not_isomorphic", None) / ("undecided", None)."""
    if M1.dim != M2.dim:
        return "not_isomorphic", None
    F = M1.setting.field
    if M1.dim == 0:
        return "iso", Matrix(F, [], 0)
    H = graded_bimodule_hom_space(M1, M2)
    if not H:
        return "not_isomorphic", None
    for h in H:
        if is_invertible(h):
            return "iso", h
    total = H[0]
    for h in H[1:]:
        total = total + h
    if is_invertible(total):
        return "iso", total
    if F.q ** len(H) <= _EXHAUSTIVE_LIMIT:
        for t in itertools.product(range(F.q), repeat=len(H)):
            if not any(t):
                continue
            cand = Matrix.zeros(F, M2.dim, M1.dim)
            for c, h in zip(t, H):
                if c:
                    cand = cand + h.scale(c)
            if is_invertible(cand):
                return "iso", cand
        return "not_isomorphic", None
    rng = rng_for(seed, f"graded-bimodule-iso:{M1.name}|{M2.name}")
    for _ in range(budget):
        t = [rng.randrange(F.q) for _ in H]
        if not any(t):
            continue
        cand = Matrix.zeros(F, M2.dim, M1.dim)
        for c, h in zip(t, H):
            if c:
                cand = cand + h.scale(c)
        if is_invertible(cand):
            return "iso", cand
    return "undecided", None
