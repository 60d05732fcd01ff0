"""Modules over structure-constant algebras.

A module is one action matrix per algebra basis element, acting on column
vectors.  Right modules use the same convention (matrices applied from the
left), so their defining identity is act(b)·act(a) = act(ab).

Hom spaces are solved against algebra generators.  Permutation modules
carry their permutation tuples so End/Hom can be read off from diagonal
orbits instead of a kernel computation; summands of such modules carry an
ambient witness (inclusion/projection into the permutation module) and
inherit the fast path.  decompose_module certifies every leaf: either its
endomorphism algebra is one-dimensional, or an exhaustive idempotent scan
of that algebra found nothing nontrivial.
"""

from __future__ import annotations

import itertools

from .algebra import (StructureConstantAlgebra, central_primitive_idempotents,
                      subalgebra)
from .field import FiniteField
from .linalg import (EchelonBasis, Matrix, SpanSolver, inverse, is_invertible,
                     kernel, rank, standard_vector, vec_is_zero)
from .utils import ResourceLimit, rng_for

_CHECK_FULL_BUDGET = 2 * 10 ** 7
_EXHAUSTIVE_HOM_LIMIT = 1 << 16
_IDEMPOTENT_SCAN_LIMIT = 1 << 20


class AlgebraModule:
    def __init__(self, algebra: StructureConstantAlgebra, dim: int,
                 action: list[Matrix], side: str = "left", check: str = "auto",
                 name: str = "", perm_tuples=None, ambient_witness=None):
        if side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        self.algebra = algebra
        self.dim = dim
        self.action = action
        self.side = side
        self.name = name
        self.perm_tuples = perm_tuples
        self.ambient_witness = ambient_witness
        self.check_mode = None
        if len(action) != algebra.dim:
            raise ValueError("need one action matrix per algebra basis element")
        for a in action:
            if a.nrows != dim or a.ncols != dim:
                raise ValueError("action matrix of wrong shape")
        if check != "skip":
            self._verify(check)

    # -- axioms ----------------------------------------------------------

    def action_of(self, avec) -> Matrix:
        F = self.algebra.field
        out = Matrix.zeros(F, self.dim, self.dim)
        for i, c in enumerate(avec):
            if c:
                out = out + self.action[i].scale(c)
        return out

    def act(self, avec, m):
        F = self.algebra.field
        out = [0] * self.dim
        for i, c in enumerate(avec):
            if c:
                col = self.action[i].mul_vec(m)
                add, mul = F.add, F.mul
                for k, x in enumerate(col):
                    if x:
                        out[k] = add(out[k], mul(c, x))
        return out

    def _pair_holds(self, i, j) -> bool:
        alg = self.algebra
        prod = self.action_of(alg.table[i][j])
        if self.side == "left":
            return self.action[i] * self.action[j] == prod
        return self.action[j] * self.action[i] == prod

    def _verify(self, mode):
        alg = self.algebra
        if not self.action_of(alg.unit).is_identity():
            raise ValueError("unit does not act as identity")
        d = alg.dim
        if mode == "auto":
            est = d * d * self.dim ** 3
            mode = "full" if est <= _CHECK_FULL_BUDGET else "sampled"
        if mode == "full":
            pairs = itertools.product(range(d), range(d))
        else:
            gens = alg.effective_generators()
            rng = rng_for(0, f"module-check:{self.name}:{self.dim}")
            pairs = [(i, j) for i in gens for j in gens]
            pairs += [(rng.randrange(d), rng.randrange(d)) for _ in range(200)]
        for i, j in pairs:
            if not self._pair_holds(i, j):
                raise ValueError(f"action is not multiplicative at ({i},{j})")
        self.check_mode = mode

    def __repr__(self):
        tag = self.name or "module"
        return f"<{tag}: {self.side} dim {self.dim} over {self.algebra!r}>"


def hom_space(M: AlgebraModule, N: AlgebraModule) -> list[Matrix]:
    """Basis of module homomorphisms M -> N (matrices N.dim x M.dim)."""
    if M.algebra is not N.algebra and M.algebra.table is not N.algebra.table:
        if M.algebra.dim != N.algebra.dim:
            raise ValueError("modules over different algebras")
    if M.side != N.side:
        raise ValueError("modules of different sidedness")
    if M.perm_tuples is not None and N.perm_tuples is not None:
        return _hom_orbitals(M, N)
    wM, wN = M.ambient_witness, N.ambient_witness
    if (wM is not None and wN is not None
            and wM[0].perm_tuples is not None and wN[0].perm_tuples is not None):
        return _hom_via_ambient(M, N)
    return _hom_generic(M, N)


def _hom_generic(M, N):
    F = M.algebra.field
    dM, dN = M.dim, N.dim
    unknowns = dN * dM
    eb = EchelonBasis(F, unknowns)
    for g in M.algebra.effective_generators():
        A = M.action[g]
        B = N.action[g]
        for i in range(dN):
            Bi = B.rows[i]
            for j in range(dM):
                row = [0] * unknowns
                for c in range(dM):
                    coeff = A.rows[c][j]
                    if coeff:
                        row[i * dM + c] = F.add(row[i * dM + c], coeff)
                for r in range(dN):
                    coeff = Bi[r]
                    if coeff:
                        row[r * dM + j] = F.sub(row[r * dM + j], coeff)
                eb.insert(row)
    eb.back_reduce()
    pivot_set = set(eb.rows)
    basis = []
    for j in range(unknowns):
        if j in pivot_set:
            continue
        v = [0] * unknowns
        v[j] = 1
        for p, row in eb.rows.items():
            if row[j]:
                v[p] = F.neg(row[j])
        basis.append(Matrix(F, [v[i * dM:(i + 1) * dM] for i in range(dN)], dM))
    return basis


def _hom_orbitals(M, N):
    """Hom between permutation modules: indicators of diagonal orbits."""
    F = M.algebra.field
    gens = M.algebra.effective_generators()
    pairs = {(i, j) for i in range(N.dim) for j in range(M.dim)}
    orbits = []
    seen = set()
    for start in sorted(pairs):
        if start in seen:
            continue
        orbit = {start}
        frontier = [start]
        while frontier:
            (i, j) = frontier.pop()
            for g in gens:
                nxt = (N.perm_tuples[g][i], M.perm_tuples[g][j])
                if nxt not in orbit:
                    orbit.add(nxt)
                    frontier.append(nxt)
        seen |= orbit
        orbits.append(sorted(orbit))
    basis = []
    for orbit in orbits:
        rows = [[0] * M.dim for _ in range(N.dim)]
        for (i, j) in orbit:
            rows[i][j] = 1
        basis.append(Matrix(F, rows, M.dim))
    return basis


def _hom_via_ambient(M, N):
    ambM, inclM, projM = M.ambient_witness
    ambN, inclN, projN = N.ambient_witness
    big = hom_space(ambM, ambN)
    F = M.algebra.field
    flat = [_flatten(projN * H * inclM) for H in big]
    ss = SpanSolver(F, flat, N.dim * M.dim)
    return [Matrix(F, [r[i * M.dim:(i + 1) * M.dim] for i in range(N.dim)], M.dim)
            for r in ss.basis_rows()]


def _flatten(mat: Matrix) -> list[int]:
    out = []
    for r in mat.rows:
        out.extend(r)
    return out


def _unflatten(F, flat, nrows, ncols) -> Matrix:
    return Matrix(F, [flat[i * ncols:(i + 1) * ncols] for i in range(nrows)], ncols)


def endomorphism_algebra(M: AlgebraModule, opposite: bool = False, H=None):
    """(algebra, hom_basis, flat_solver); opposite=True reverses composition."""
    if H is None:
        H = hom_space(M, M)
    F = M.algebra.field
    flat = [_flatten(h) for h in H]
    ss = SpanSolver(F, flat, M.dim * M.dim)
    d = len(H)
    table = []
    for i in range(d):
        row = []
        for j in range(d):
            prod = (H[j] * H[i]) if opposite else (H[i] * H[j])
            c = ss.coords(_flatten(prod))
            if c is None:
                raise ArithmeticError("hom space is not closed under composition")
            row.append(c)
        table.append(row)
    unit = ss.coords(_flatten(Matrix.identity(F, M.dim)))
    if unit is None:
        raise ArithmeticError("identity is missing from the endomorphism space")
    alg = StructureConstantAlgebra(F, table, unit, name=f"End({M.name})")
    return alg, H, ss


def module_iso(M: AlgebraModule, N: AlgebraModule, seed: int = 0,
               budget: int = 200):
    """("iso", F) / ("not_isomorphic", None) / ("undecided", None)."""
    if M.dim != N.dim:
        return "not_isomorphic", None
    if M.dim == 0:
        return "iso", Matrix(M.algebra.field, [], 0)
    H = hom_space(M, N)
    if not H:
        return "not_isomorphic", None
    F = M.algebra.field
    for h in H:
        if is_invertible(h):
            return "iso", h
    ones = H[0]
    for h in H[1:]:
        ones = ones + h
    if is_invertible(ones):
        return "iso", ones
    if F.q ** len(H) <= _EXHAUSTIVE_HOM_LIMIT:
        for t in itertools.product(range(F.q), repeat=len(H)):
            if not any(t):
                continue
            cand = _combo(F, H, t)
            if is_invertible(cand):
                return "iso", cand
        return "not_isomorphic", None
    rng = rng_for(seed, f"module-iso:{M.name}|{N.name}:{M.dim}")
    for _ in range(budget):
        t = [rng.randrange(F.q) for _ in H]
        if not any(t):
            continue
        cand = _combo(F, H, t)
        if is_invertible(cand):
            return "iso", cand
    return "undecided", None


def _combo(F, mats, coeffs):
    out = Matrix.zeros(F, mats[0].nrows, mats[0].ncols)
    for c, m in zip(coeffs, mats):
        if c:
            out = out + m.scale(c)
    return out


# ---------------------------------------------------------------------------
# direct sum decomposition


class Summand:
    def __init__(self, module, inclusion: Matrix, projection: Matrix, certificate: str):
        self.module = module
        self.inclusion = inclusion      # summand coords -> root coords
        self.projection = projection    # root coords -> summand coords
        self.certificate = certificate


def _submodule_from_basis(M: AlgebraModule, basis_cols, name=""):
    """Module structure on an action-stable span; returns (module, incl, solver)."""
    F = M.algebra.field
    ss = SpanSolver(F, basis_cols, M.dim)
    basis = ss.basis_rows()
    d = len(basis)
    action = []
    for A in M.action:
        cols = []
        for b in basis:
            c = ss.echelon_coords(A.mul_vec(b))
            if c is None:
                raise ArithmeticError("span is not action stable")
            cols.append(c)
        action.append(Matrix.from_columns(F, cols, d))
    incl = Matrix.from_columns(F, basis, M.dim)
    sub = AlgebraModule(M.algebra, d, action, side=M.side, check="skip", name=name)
    return sub, incl, ss


def _split_by_inclusions(M: AlgebraModule, groups, names):
    """Split M along a list of column groups that jointly form a basis."""
    F = M.algebra.field
    parts = []
    all_cols = []
    for cols, name in zip(groups, names):
        sub, incl, _ = _submodule_from_basis(M, cols, name=name)
        parts.append((sub, incl))
        all_cols.extend(incl.columns())
    combined = Matrix.from_columns(F, all_cols, M.dim)
    inv = inverse(combined)
    if inv is None:
        raise ArithmeticError("candidate summands do not span")
    out = []
    offset = 0
    for sub, incl in parts:
        proj = Matrix(F, inv.rows[offset: offset + sub.dim], M.dim)
        offset += sub.dim
        out.append((sub, incl, proj))
    return out


def decompose_module(M: AlgebraModule, seed: int = 0, budget: int = 192,
                     scan_limit: int = _IDEMPOTENT_SCAN_LIMIT):
    """Full direct sum decomposition with certified indecomposable summands.

    Returns (summands, report).  Each summand carries inclusion/projection
    witnesses into M; the report records, per leaf, why it is known to be
    indecomposable, and the reassembly identities are asserted before
    returning.
    """
    F = M.algebra.field
    idM = Matrix.identity(F, M.dim)
    finished: list[Summand] = []
    log: list[str] = []
    work = [(M, idM, idM, "r")]
    while work:
        X, incl, proj, path = work.pop()
        if X.dim == 0:
            continue
        H = hom_space(X, X)
        if len(H) == 1:
            finished.append(Summand(X, incl, proj, "end_dim_one"))
            log.append(f"{path}: dim {X.dim}, End is one-dimensional")
            continue
        split = _try_split(X, H, seed, budget, scan_limit, path, log)
        if split is None:
            finished.append(Summand(X, incl, proj, "exhaustive_idempotent_scan"))
            log.append(f"{path}: dim {X.dim}, no nontrivial idempotent in End "
                       f"(scanned {F.q}^{len(H)})")
            continue
        for k, (sub, sincl, sproj) in enumerate(split):
            sub.ambient_witness = _compose_witness(M, X, incl, proj, sincl, sproj)
            work.append((sub, incl * sincl, sproj * proj, f"{path}.{k}"))
    finished.sort(key=lambda s: (-s.module.dim, s.inclusion.tolist()))
    _verify_reassembly(F, M, finished)
    report = {
        "summand_dims": [s.module.dim for s in finished],
        "certificates": [s.certificate for s in finished],
        "log": log,
    }
    return finished, report


def _compose_witness(root, X, incl, proj, sincl, sproj):
    base = X.ambient_witness
    if base is not None:
        amb, binc, bproj = base
        return amb, binc * sincl, sproj * bproj
    if root.perm_tuples is not None:
        return root, incl * sincl, sproj * proj
    return None


def _try_split(X, H, seed, budget, scan_limit, path, log):
    F = X.algebra.field
    E, basis, ss = endomorphism_algebra(X, H=H)

    blocks = central_primitive_idempotents(E, limit=min(scan_limit, 1 << 20))
    if len(blocks) > 1:
        groups = []
        for bidx, b in enumerate(blocks):
            mat = _combo(F, basis, b)
            groups.append(_image_columns(mat))
        log.append(f"{path}: split along {len(blocks)} central idempotents of End")
        return _split_by_inclusions(X, groups, [f"{X.name}|c{k}" for k in range(len(blocks))])

    # Fitting splits from singular non-nilpotent endomorphisms
    cands = list(basis)
    for i in range(len(basis)):
        for j in range(i + 1, min(len(basis), i + 7)):
            cands.append(basis[i] + basis[j])
    rng = rng_for(seed, f"decompose:{path}:{X.dim}")
    for _ in range(budget):
        t = [rng.randrange(F.q) for _ in basis]
        if any(t):
            cands.append(_combo(F, basis, t))
    n = 1
    while n < X.dim:
        n <<= 1
    for x in cands:
        if is_invertible(x):
            continue
        xN = x.pow_int(n)
        if xN.is_zero():
            continue
        ker_basis = kernel(xN)
        im_basis = _image_columns(xN)
        if not ker_basis or not im_basis:
            continue
        if len(ker_basis) + len(im_basis) != X.dim:
            raise ArithmeticError("Fitting split dimensions do not add up")
        log.append(f"{path}: Fitting split {len(ker_basis)}+{len(im_basis)}")
        return _split_by_inclusions(X, [ker_basis, im_basis],
                                    [f"{X.name}|ker", f"{X.name}|im"])

    # certified finish: exhaustive idempotent scan of End
    dE = len(basis)
    if F.q ** dE > scan_limit:
        raise ResourceLimit(
            f"no split found and End too large to scan ({F.q}^{dE})")
    unit = ss.coords(_flatten(Matrix.identity(F, X.dim)))
    for t in itertools.product(range(F.q), repeat=dE):
        v = list(t)
        if vec_is_zero(v) or v == unit:
            continue
        if E.mul(v, v) == v:
            mat = _combo(F, basis, v)
            one_minus = Matrix.identity(F, X.dim) - mat
            log.append(f"{path}: split along scanned idempotent")
            return _split_by_inclusions(
                X, [_image_columns(mat), _image_columns(one_minus)],
                [f"{X.name}|e", f"{X.name}|1-e"])
    return None


def _image_columns(mat: Matrix) -> list[list[int]]:
    ss = SpanSolver(mat.field, mat.columns(), mat.nrows)
    return ss.basis_rows()


def _verify_reassembly(F, M, summands):
    total = Matrix.zeros(F, M.dim, M.dim)
    for s in summands:
        total = total + s.inclusion * s.projection
    if not total.is_identity():
        raise AssertionError("inclusion/projection witnesses do not reassemble")
    for i, si in enumerate(summands):
        for j, sj in enumerate(summands):
            prod = si.projection * sj.inclusion
            if i == j:
                if not prod.is_identity():
                    raise AssertionError(f"projection {i} does not retract")
            elif not prod.is_zero():
                raise AssertionError(f"summands {i},{j} are not independent")


# ---------------------------------------------------------------------------
# semisimple helpers


def isotypic_representatives(summands, seed: int = 0):
    """Group decomposition summands by isomorphism; returns (rep, multiplicity)."""
    classes = []
    for s in summands:
        placed = False
        for entry in classes:
            rep = entry[0]
            if rep.module.dim == s.module.dim:
                status, _ = module_iso(rep.module, s.module, seed=seed)
                if status == "iso":
                    entry.append(s)
                    placed = True
                    break
                if status == "undecided":
                    raise ArithmeticError("isomorphism test was inconclusive")
        if not placed:
            classes.append([s])
    return [(entry[0], len(entry)) for entry in classes]
