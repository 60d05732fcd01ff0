"""Graded Morita equivalences between crossed products over shared
coefficients.

A graded bimodule M over a pair of crossed products (A, A'), compatible
with a common coefficient algebra C, induces a graded Morita equivalence
exactly when both evaluation tensors are regular: the dual of M paired
against M over A must give the regular bimodule of A', and M paired
against the dual over A' must give the regular bimodule of A.  This
module constructs the dual, decides that test, and packages the outcome
as a certificate that can be re-checked from its stored data alone.

On top of the certificate sit the transfers that reuse it:

* truncation of the grading group to a subgroup, by rebuilding the
  crossed products over the preimage group;
* transport of the graded centralizer of the identity component through
  the equivalence, with the endomorphism-level comparison squares;
* extension of an ungraded equivalence at the identity level to
  coefficients in the centralizer of the kernel group;
* replacement of the acting group by a different group inducing the
  same automorphisms of the kernel (and the induced replacement of the
  second acting group);
* comparison of the unit-stabilizer subgroups of the two blocks, with a
  certificate over the common stabilizer.
"""

from __future__ import annotations

from .algebra import AlgebraHom, StructureConstantAlgebra
from .bifunctors import graded_tensor_over_middle
from .blocks import (BlockExtension, GradedActedAlgebra, block_extension,
                     centralizer_graded, compute_Gbar_b, is_invariant)
from .graded import (DeltaAlgebra, GradedBimodule, GradedSetting,
                     _assert_valid, _scale_into, identity_component,
                     induce_via_tensor, regular_self_bimodule,
                     subgroup_setting, verify_graded_bimodule_over_C)
from .groups import (PermGroup, compose, conjugation_action,
                     conjugation_image, inverse_perm)
from .linalg import (EchelonBasis, Matrix, QuotientMap, SpanSolver, inverse,
                     is_invertible, standard_vector, vec_addmul)
from .modules import AlgebraModule, hom_space, module_iso
from .oracles import graded_bimodule_iso
from .utils import rng_for


# ---------------------------------------------------------------------------
# derived settings


def _reindexed_coefficients(S: GradedSetting) -> GradedActedAlgebra:
    """The coefficient algebra regraded by the second grading group."""
    Gp = S.Aprime.Gbar
    if S.C.Gbar is Gp:
        return S.C
    degrees = [S.to_prime[d] for d in S.C.degree_of_index]
    action = [S.C.action[S.to_std[g]] for g in range(Gp.order)]
    out = GradedActedAlgebra(S.C.algebra, Gp, degrees, action, name=S.C.name)
    out.verify()
    return out


def swapped_setting(S: GradedSetting) -> GradedSetting:
    """The mirrored setting with the two crossed products exchanged.

    Graded (A', A)-bimodules (duals in particular) live over this
    setting.  The coefficients are regraded by the second grading group
    when the two groups differ, and the mirror of a mirror is the
    original setting as an object, so double duals compare on the nose.
    """
    cached = getattr(S, "_mirror", None)
    if cached is not None:
        return cached
    if S.Aprime is S.A and S.zeta == S.zetaprime:
        S._mirror = S
        return S
    out = GradedSetting(S.Aprime, S.A, _reindexed_coefficients(S),
                        S.zetaprime, S.zeta,
                        name=(S.name + "-mirror") if S.name else "mirror")
    out._mirror = S
    S._mirror = out
    return out


def self_pair_setting(S: GradedSetting, side: str) -> GradedSetting:
    """The setting pairing one of the two crossed products with itself.

    The evaluation tensors of a bimodule over S are bimodules over these
    settings.  When the two sides of S already coincide this is S.
    """
    if S.Aprime is S.A:
        return S
    if side == "first":
        cached = getattr(S, "_self_first", None)
        if cached is None:
            cached = GradedSetting(S.A, S.A, S.C, S.zeta, S.zeta,
                                   name="first-self")
            S._self_first = cached
        return cached
    if side != "second":
        raise ValueError("side must be 'first' or 'second'")
    cached = getattr(S, "_self_second", None)
    if cached is None:
        cached = GradedSetting(S.Aprime, S.Aprime, _reindexed_coefficients(S),
                               S.zetaprime, S.zetaprime, name="second-self")
        S._self_second = cached
    return cached


def _regular_bimodule(setting: GradedSetting) -> GradedBimodule:
    A = setting.A
    left = [A.algebra.left_mult_matrix(standard_vector(A.dim, i))
            for i in range(A.dim)]
    right = [A.algebra.right_mult_matrix(standard_vector(A.dim, j))
             for j in range(A.dim)]
    degs = [A.degree_of_index(i) for i in range(A.dim)]
    out = GradedBimodule(setting, degs, left, right, name="regular")
    return _assert_valid(out, "regular bimodule")


def direct_sum_bimodules(M1: GradedBimodule,
                         M2: GradedBimodule) -> GradedBimodule:
    """Block-diagonal sum of two graded bimodules over the same setting."""
    if M1.setting is not M2.setting:
        raise ValueError("direct sum needs a common setting")
    F = M1.setting.field
    n1, n2 = M1.dim, M2.dim

    def stack(X, Y):
        out = Matrix.zeros(F, n1 + n2, n1 + n2)
        for r in range(n1):
            out.rows[r][:n1] = list(X.rows[r])
        for r in range(n2):
            out.rows[n1 + r][n1:] = list(Y.rows[r])
        return out

    left = [stack(M1.left[i], M2.left[i]) for i in range(len(M1.left))]
    right = [stack(M1.right[j], M2.right[j]) for j in range(len(M1.right))]
    out = GradedBimodule(M1.setting, M1.degree_of_index + M2.degree_of_index,
                         left, right,
                         name=f"{M1.name or 'M'}(+){M2.name or 'N'}")
    return _assert_valid(out, "direct sum")


def _bimodule_parts(M: GradedBimodule, vec) -> dict[int, list[int]]:
    parts: dict[int, list[int]] = {}
    for i, c in enumerate(vec):
        if c:
            parts.setdefault(M.degree_of_index[i], [0] * M.dim)[i] = c
    return parts


# ---------------------------------------------------------------------------
# the dual bimodule


def dual_bimodule(M: GradedBimodule,
                  dual_setting: GradedSetting | None = None) -> GradedBimodule:
    """Homomorphisms from M into the first crossed product, as a graded
    (A', A)-bimodule over the mirrored setting.

    A homomorphism of degree y sends the degree-x component of M into
    the degree-xy component of A.  The second algebra acts on the left
    by (a'.f)(m) = f(m a'), the first on the right by (f.a)(m) = f(m) a.
    The total dimension must equal the dimension of M (the crossed
    product is symmetric), and the result is verified as a graded
    bimodule over the coefficients before being returned.
    """
    S = M.setting
    A, Ap = S.A, S.Aprime
    F = S.field
    Gbar, Gp = S.Gbar, Ap.Gbar
    if dual_setting is None:
        dual_setting = swapped_setting(S)
    if dual_setting.A is not Ap or dual_setting.Aprime is not A:
        raise ValueError("dual setting does not mirror the bimodule setting")

    as_left = AlgebraModule(A.algebra, M.dim, M.left, check="auto",
                            name="dual-source")
    regular = AlgebraModule(
        A.algebra, A.dim,
        [A.algebra.left_mult_matrix(standard_vector(A.dim, i))
         for i in range(A.dim)],
        check="auto", name="dual-target")
    homs = hom_space(as_left, regular)

    pieces: dict[int, list[Matrix]] = {y: [] for y in range(Gbar.order)}
    for h in homs:
        split: dict[int, Matrix] = {}
        for r in range(A.dim):
            dr = A.degree_of_index(r)
            row = h.rows[r]
            for c in range(M.dim):
                if not row[c]:
                    continue
                y = Gbar.mul(Gbar.inv(M.degree_of_index[c]), dr)
                tgt = split.setdefault(y, Matrix.zeros(F, A.dim, M.dim))
                tgt.rows[r][c] = row[c]
        for y, mat in split.items():
            pieces[y].append(mat)

    chosen: list[tuple[int, Matrix]] = []
    for y in range(Gbar.order):
        eb = EchelonBasis(F, A.dim * M.dim)
        for mat in pieces[y]:
            if eb.insert([x for row in mat.rows for x in row]) is None:
                continue
            for i in range(A.dim):
                if mat * as_left.action[i] != regular.action[i] * mat:
                    raise ArithmeticError("graded piece of a module "
                                          "homomorphism fails linearity")
            chosen.append((y, mat))
    if len(chosen) != M.dim:
        raise ArithmeticError("dual dimension differs from the bimodule "
                              "dimension")

    labeled = sorted(((S.to_prime[y], y, mat) for y, mat in chosen),
                     key=lambda t: t[0])
    labels = [lab for lab, _, _ in labeled]
    mats = [mat for _, _, mat in labeled]
    dim = len(mats)
    offsets: dict[int, int] = {}
    solvers: dict[int, SpanSolver] = {}
    for lab in sorted(set(labels)):
        idx = [t for t, l in enumerate(labels) if l == lab]
        offsets[lab] = idx[0]
        solvers[lab] = SpanSolver(
            F, [[x for row in mats[t].rows for x in row] for t in idx],
            A.dim * M.dim)

    def coords_of(mat, lab):
        sol = solvers.get(lab)
        if sol is None:
            raise ArithmeticError("dual image lands in an empty degree")
        local = sol.coords([x for row in mat.rows for x in row])
        if local is None:
            raise ArithmeticError("dual image is not spanned by the basis "
                                  "maps")
        out = [0] * dim
        for k, c in enumerate(local):
            out[offsets[lab] + k] = c
        return out

    left = []
    for j in range(Ap.dim):
        dj = Ap.degree_of_index(j)
        rmat = M.right[j]
        cols = []
        for t in range(dim):
            img = mats[t] * rmat
            if img.is_zero():
                cols.append([0] * dim)
            else:
                cols.append(coords_of(img, Gp.mul(dj, labels[t])))
        left.append(Matrix.from_columns(F, cols, dim))
    right = []
    for i in range(A.dim):
        rmul = A.algebra.right_mult_matrix(standard_vector(A.dim, i))
        di = S.to_prime[A.degree_of_index(i)]
        cols = []
        for t in range(dim):
            img = rmul * mats[t]
            if img.is_zero():
                cols.append([0] * dim)
            else:
                cols.append(coords_of(img, Gp.mul(labels[t], di)))
        right.append(Matrix.from_columns(F, cols, dim))

    out = GradedBimodule(dual_setting, labels, left, right,
                         name=f"dual[{M.name or M.dim}]")
    out.maps = mats
    out.primal = M
    return _assert_valid(out, "dual_bimodule")


# ---------------------------------------------------------------------------
# evaluation tensors and the certificate


def _embed_tensor_pair(T: GradedBimodule, X: GradedBimodule,
                       Y: GradedBimodule, xvec, yvec) -> list[int]:
    """Class of x (x) y in a tensor built by graded_tensor_over_middle.

    The tensor's ambient keys pair the identity component of X with all
    of Y, so x is first moved into the identity component by the inverse
    of a middle unit, which is absorbed into y on the other side of the
    balanced tensor.
    """
    S1 = X.setting
    mid = S1.Aprime
    F = S1.field
    e1 = S1.Gbar.identity_index
    idx1 = X.component_indices(e1)
    pos1 = {g: l for l, g in enumerate(idx1)}
    sparse: dict = {}
    for dbar, part in _bimodule_parts(X, xvec).items():
        mu = S1.to_prime[dbar]
        x1 = X.right_action_of(mid.unit_invs[mu]).mul_vec(part)
        y2 = Y.left_action_of(mid.units[mu]).mul_vec(yvec)
        for gi, cx in enumerate(x1):
            if not cx:
                continue
            loc = pos1.get(gi)
            if loc is None:
                raise ArithmeticError("unit shift left the identity "
                                      "component")
            for yi, cy in enumerate(y2):
                if cy:
                    _scale_into(F, sparse, (loc, yi), F.mul(cx, cy))
    return T.space.project(sparse)


def evaluation_tensors(DA: DeltaAlgebra, M: GradedBimodule,
                       Mstar: GradedBimodule | None = None):
    """Both evaluation tensors of a graded bimodule.

    Returns (dual, dual (x)_A M over the second self-setting,
    M (x)_{A'} dual over the first self-setting, mirrored diagonal
    algebra).
    """
    S = DA.setting
    Sstar = swapped_setting(S)
    DAstar = DA if Sstar is S else DeltaAlgebra(Sstar)
    if Mstar is None:
        Mstar = dual_bimodule(M, Sstar)
    T_second = graded_tensor_over_middle(DAstar, Mstar, M,
                                         self_pair_setting(S, "second"))
    T_first = graded_tensor_over_middle(DA, M, Mstar,
                                        self_pair_setting(S, "first"))
    return Mstar, T_second, T_first, DAstar


def _component_dims(M: GradedBimodule) -> dict[int, int]:
    return {d: len(idx) for d, idx in M.components.items() if idx}


class MoritaCertificate:
    """Outcome of the graded Morita test over shared coefficients.

    ``status`` is "verified", "failed" or "inconclusive"; ``reason``
    names the first violated condition on failure.  A verified
    certificate stores the bimodule, its dual, both evaluation tensors,
    the isomorphisms phi (second tensor onto the regular bimodule of A')
    and psi (first tensor onto the regular bimodule of A), and the dual
    pairs: the ambient lift of the phi-preimage of the unit, a sum of
    identity-component dual basis vectors paired with bimodule basis
    vectors.
    """

    def __init__(self, setting: GradedSetting, bimodule: GradedBimodule,
                 name: str = ""):
        self.setting = setting
        self.bimodule = bimodule
        self.name = name
        self.status = "unverified"
        self.reason = ""
        self.dual = None
        self.tensor_second = None
        self.tensor_first = None
        self.phi = None
        self.psi = None
        self.dual_pairs = None

    @property
    def verified(self) -> bool:
        return self.status == "verified"

    def __repr__(self):
        tag = self.name or "certificate"
        return f"<MoritaCertificate {tag}: {self.status}>"


def _dual_pairs_from(cert: MoritaCertificate) -> dict:
    S = cert.setting
    T = cert.tensor_second
    e_mid = S.Gbar.identity_index
    w = inverse(cert.phi).mul_vec(S.Aprime.algebra.unit)
    off = T.space.offsets[e_mid]
    qdim = T.space.qmaps[e_mid].dim
    for i, c in enumerate(w):
        if c and not off <= i < off + qdim:
            raise ArithmeticError("unit preimage is not concentrated in "
                                  "the identity block")
    return T.space.lift(e_mid, w[off:off + qdim])


def _embedded_pairs_vector(cert: MoritaCertificate, pairs: dict) -> list[int]:
    F = cert.setting.field
    T = cert.tensor_second
    X, Y = cert.dual, cert.bimodule
    e1 = X.setting.Gbar.identity_index
    idx1 = X.component_indices(e1)
    acc = [0] * T.dim
    for (loc, y), coef in pairs.items():
        xv = standard_vector(X.dim, idx1[loc])
        yv = standard_vector(Y.dim, y)
        acc = vec_addmul(F, acc, coef,
                         _embed_tensor_pair(T, X, Y, xv, yv))
    return acc


def verify_morita_over_C(DA: DeltaAlgebra, M: GradedBimodule, seed: int = 0,
                         name: str = "") -> MoritaCertificate:
    """Decide whether a graded bimodule over C induces a graded Morita
    equivalence between its two crossed products.

    The bimodule conditions are checked first and the first violated one
    fails the certificate.  Then both evaluation tensors are built and
    compared with the regular bimodules: a dimension mismatch or a
    definite non-isomorphism fails the certificate, while an undecided
    isomorphism search leaves it inconclusive, never failed.  A verified
    certificate ends with the dual pairs, re-checked to pair to the
    unit.
    """
    S = DA.setting
    if M.setting is not S:
        raise ValueError("bimodule does not live over the setting of the "
                         "diagonal algebra")
    cert = MoritaCertificate(S, M, name=name or M.name)
    for key, ok in verify_graded_bimodule_over_C(M).items():
        if not ok:
            cert.status = "failed"
            cert.reason = f"bimodule condition {key} fails"
            return cert

    Mstar, T_second, T_first, _ = evaluation_tensors(DA, M)
    cert.dual = Mstar
    cert.tensor_second = T_second
    cert.tensor_first = T_first
    reg_second = _regular_bimodule(self_pair_setting(S, "second"))
    reg_first = _regular_bimodule(self_pair_setting(S, "first"))

    if _component_dims(T_second) != _component_dims(reg_second):
        cert.status = "failed"
        cert.reason = ("evaluation tensor onto the second crossed product "
                       "has the wrong dimension")
        return cert
    if _component_dims(T_first) != _component_dims(reg_first):
        cert.status = "failed"
        cert.reason = ("evaluation tensor onto the first crossed product "
                       "has the wrong dimension")
        return cert

    verdict, phi = graded_bimodule_iso(T_second, reg_second, seed=seed)
    if verdict == "undecided":
        cert.status = "inconclusive"
        cert.reason = ("isomorphism search for the second evaluation "
                       "tensor was undecided")
        return cert
    if verdict != "iso":
        cert.status = "failed"
        cert.reason = ("evaluation tensor onto the second crossed product "
                       "is not isomorphic to the regular bimodule")
        return cert
    verdict, psi = graded_bimodule_iso(T_first, reg_first, seed=seed)
    if verdict == "undecided":
        cert.status = "inconclusive"
        cert.reason = ("isomorphism search for the first evaluation "
                       "tensor was undecided")
        return cert
    if verdict != "iso":
        cert.status = "failed"
        cert.reason = ("evaluation tensor onto the first crossed product "
                       "is not isomorphic to the regular bimodule")
        return cert

    cert.phi = phi
    cert.psi = psi
    cert.dual_pairs = _dual_pairs_from(cert)
    paired = phi.mul_vec(_embedded_pairs_vector(cert, cert.dual_pairs))
    if list(paired) != list(S.Aprime.algebra.unit):
        raise ArithmeticError("dual pairs do not pair to the unit")
    cert.status = "verified"
    return cert


def _intertwines_regular(src: GradedBimodule, tgt: GradedBimodule,
                         P: Matrix | None) -> bool:
    if P is None or src.dim != tgt.dim:
        return False
    if P.nrows != tgt.dim or P.ncols != src.dim or not is_invertible(P):
        return False
    for i in range(len(src.left)):
        if P * src.left[i] != tgt.left[i] * P:
            return False
    for j in range(len(src.right)):
        if P * src.right[j] != tgt.right[j] * P:
            return False
    for c in range(src.dim):
        d = src.degree_of_index[c]
        for r in range(tgt.dim):
            if P.rows[r][c] and tgt.degree_of_index[r] != d:
                return False
    return True


def _same_bimodule(X: GradedBimodule, Y: GradedBimodule) -> bool:
    return (X.degree_of_index == Y.degree_of_index
            and len(X.left) == len(Y.left)
            and len(X.right) == len(Y.right)
            and all(a == b for a, b in zip(X.left, Y.left))
            and all(a == b for a, b in zip(X.right, Y.right)))


def check_morita_certificate(cert: MoritaCertificate) -> dict:
    """Independently re-check a verified certificate from its stored data.

    No isomorphism search is repeated.  The stored bimodule and dual are
    re-verified against the bimodule conditions, the evaluation tensors
    are rebuilt from them and compared with the stored tensors entry by
    entry, the stored maps are checked to be graded bimodule
    isomorphisms onto freshly built regular bimodules, and the stored
    dual pairs are re-embedded and re-paired to the unit.
    """
    out = {"status_verified": cert.status == "verified"}
    if not out["status_verified"]:
        return out
    S = cert.setting
    out["bimodule_conditions"] = all(
        verify_graded_bimodule_over_C(cert.bimodule).values())
    out["dual_conditions"] = all(
        verify_graded_bimodule_over_C(cert.dual).values())
    DA = DeltaAlgebra(S)
    _, T_second, T_first, _ = evaluation_tensors(DA, cert.bimodule,
                                                 Mstar=cert.dual)
    out["tensors_reproducible"] = (
        _same_bimodule(T_second, cert.tensor_second)
        and _same_bimodule(T_first, cert.tensor_first))
    reg_second = _regular_bimodule(self_pair_setting(S, "second"))
    reg_first = _regular_bimodule(self_pair_setting(S, "first"))
    out["phi_isomorphism"] = _intertwines_regular(cert.tensor_second,
                                                  reg_second, cert.phi)
    out["psi_isomorphism"] = _intertwines_regular(cert.tensor_first,
                                                  reg_first, cert.psi)
    paired = cert.phi.mul_vec(
        _embedded_pairs_vector(cert, cert.dual_pairs))
    out["dual_pairs_pair_to_unit"] = (
        list(paired) == list(S.Aprime.algebra.unit))
    return out


# ---------------------------------------------------------------------------
# the identity level: ungraded bimodules between the identity components


def pair_envelope(B: StructureConstantAlgebra,
                  Bp: StructureConstantAlgebra) -> StructureConstantAlgebra:
    """B (x) B' with the second factor composing contravariantly, so its
    left modules are exactly (B, B')-bimodules."""
    F = B.field
    nb, nq = B.dim, Bp.dim

    def outer(u, v):
        vec = [0] * (nb * nq)
        for s, c1 in enumerate(u):
            if not c1:
                continue
            base = s * nq
            for t, c2 in enumerate(v):
                if c2:
                    vec[base + t] = F.mul(c1, c2)
        return vec

    table = []
    for i in range(nb):
        for j in range(nq):
            row = []
            for k in range(nb):
                for l in range(nq):
                    row.append(outer(B.table[i][k], Bp.table[l][j]))
            table.append(row)
    return StructureConstantAlgebra(F, table, outer(B.unit, Bp.unit),
                                    assoc_check="auto",
                                    name="pair-envelope")


def pair_module(env: StructureConstantAlgebra, nb: int, nq: int,
                left: list[Matrix], right: list[Matrix], dim: int,
                name: str = "") -> AlgebraModule:
    """A (B, B')-bimodule as a left module over the pair envelope."""
    action = []
    for i in range(nb):
        for j in range(nq):
            action.append(left[i] * right[j])
    return AlgebraModule(env, dim, action, check="auto", name=name)


def _tensor_qmap(F, right_on_x: list[Matrix], left_on_y: list[Matrix],
                 nx: int, ny: int):
    """Quotient by middle balancing: (x.d) (x) y - x (x) (d.y)."""
    width = nx * ny
    rels = []
    for d in range(len(right_on_x)):
        R, L = right_on_x[d], left_on_y[d]
        for x in range(nx):
            rcol = R.column(x)
            for y in range(ny):
                row = [0] * width
                for s, c in enumerate(rcol):
                    if c:
                        row[s * ny + y] = c
                lcol = L.column(y)
                for t, c in enumerate(lcol):
                    if c:
                        row[x * ny + t] = F.sub(row[x * ny + t], c)
                if any(row):
                    rels.append(row)
    return QuotientMap(F, width, rels), rels


def _slot_operator(F, mat: Matrix, nx: int, ny: int, slot: int) -> Matrix:
    big = Matrix.zeros(F, nx * ny, nx * ny)
    if slot == 0:
        for s in range(nx):
            for t in range(nx):
                c = mat.rows[s][t]
                if c:
                    for y in range(ny):
                        big.rows[s * ny + y][t * ny + y] = c
    else:
        for s in range(ny):
            for t in range(ny):
                c = mat.rows[s][t]
                if c:
                    for x in range(nx):
                        big.rows[x * ny + s][x * ny + t] = c
    return big


def _descend(qmap: QuotientMap, big: Matrix, rels, context: str) -> Matrix:
    for r in rels:
        if not qmap.contains_relation(big.mul_vec(r)):
            raise ArithmeticError(f"{context} does not descend to the "
                                  "tensor quotient")
    return qmap.projection_matrix() * big * qmap.lift_matrix()


def _plain_dual_actions(B, Bp, left, right):
    """Actions on the homomorphisms from the bimodule into B.

    Returns (left action of B', right action of B, basis maps): for a
    map f the element b' acts by (b'.f)(m) = f(m b') and b by
    (f.b)(m) = f(m) b.
    """
    F = B.field
    n = left[0].nrows if left else 0
    src = AlgebraModule(B, n, left, check="auto", name="level-B source")
    reg = AlgebraModule(B, B.dim,
                        [B.left_mult_matrix(standard_vector(B.dim, i))
                         for i in range(B.dim)],
                        check="auto", name="level-B regular")
    maps = hom_space(src, reg)
    solver = SpanSolver(F, [[x for row in h.rows for x in row] for h in maps],
                        B.dim * n)

    def coords(mat):
        out = solver.coords([x for row in mat.rows for x in row])
        if out is None:
            raise ArithmeticError("dual action leaves the homomorphism "
                                  "space")
        return out

    dual_left = []
    for l in range(Bp.dim):
        cols = [coords(h * right[l]) for h in maps]
        dual_left.append(Matrix.from_columns(F, cols, len(maps)))
    dual_right = []
    for k in range(B.dim):
        rm = B.right_mult_matrix(standard_vector(B.dim, k))
        cols = [coords(rm * h) for h in maps]
        dual_right.append(Matrix.from_columns(F, cols, len(maps)))
    return dual_left, dual_right, maps


def _regular_pair_module(env, B):
    return pair_module(
        env, B.dim, B.dim,
        [B.left_mult_matrix(standard_vector(B.dim, i))
         for i in range(B.dim)],
        [B.right_mult_matrix(standard_vector(B.dim, j))
         for j in range(B.dim)],
        B.dim, name="regular")


def ungraded_morita_verdict(B, Bp, left, right, seed: int = 0) -> str:
    """Morita test for a plain (B, B')-bimodule given by action matrices.

    Both evaluation tensors are compared with the regular bimodules as
    modules over the pair envelopes.  Returns "iso", "not_isomorphic" or
    "undecided".
    """
    F = B.field
    n = left[0].nrows if left else 0
    dual_left, dual_right, maps = _plain_dual_actions(B, Bp, left, right)
    nd = len(maps)

    q2, rels2 = _tensor_qmap(F, dual_right, [U for U in left], nd, n)
    l2 = [_descend(q2, _slot_operator(F, m, nd, n, 0), rels2,
                   "second-side left action") for m in dual_left]
    r2 = [_descend(q2, _slot_operator(F, m, nd, n, 1), rels2,
                   "second-side right action") for m in right]
    env_p = pair_envelope(Bp, Bp)
    t2 = pair_module(env_p, Bp.dim, Bp.dim, l2, r2, q2.dim,
                     name="dual-evaluation")
    v2, _ = module_iso(t2, _regular_pair_module(env_p, Bp), seed=seed)
    if v2 == "not_isomorphic":
        return "not_isomorphic"

    q1, rels1 = _tensor_qmap(F, right, dual_left, n, nd)
    l1 = [_descend(q1, _slot_operator(F, m, n, nd, 0), rels1,
                   "first-side left action") for m in left]
    r1 = [_descend(q1, _slot_operator(F, m, n, nd, 1), rels1,
                   "first-side right action") for m in dual_right]
    env_b = pair_envelope(B, B)
    t1 = pair_module(env_b, B.dim, B.dim, l1, r1, q1.dim,
                     name="evaluation")
    v1, _ = module_iso(t1, _regular_pair_module(env_b, B), seed=seed)
    if v1 == "not_isomorphic":
        return "not_isomorphic"
    if "undecided" in (v1, v2):
        return "undecided"
    return "iso"


def pair_actions_of_delta_module(DA: DeltaAlgebra, M: AlgebraModule):
    """Left/right identity-component actions of a diagonal-algebra module."""
    S = DA.setting
    A, Ap = S.A, S.Aprime
    left = [M.action_of(DA.delta_class_of_pair(
        standard_vector(A.dim, k), Ap.algebra.unit))
        for k in range(A.dimB)]
    right = [M.action_of(DA.delta_class_of_pair(
        A.algebra.unit, Ap.embed_B(standard_vector(Ap.dimB, l))))
        for l in range(Ap.dimB)]
    return left, right


def regular_delta_module(DA: DeltaAlgebra) -> AlgebraModule:
    """The identity component of A as a diagonal-algebra module (requires
    the two crossed products equal)."""
    return identity_component(DA, regular_self_bimodule(DA))


def extend_morita(DA: DeltaAlgebra, M: AlgebraModule, seed: int = 0,
                  name: str = "") -> MoritaCertificate:
    """Certify the graded equivalence induced by a diagonal-algebra module.

    The module is first checked to be a Morita bimodule between the two
    identity components; only then is the graded bimodule induced and
    the full graded test run.
    """
    S = DA.setting
    left, right = pair_actions_of_delta_module(DA, M)
    verdict = ungraded_morita_verdict(S.A.B, S.Aprime.B, left, right,
                                      seed=seed)
    if verdict == "not_isomorphic":
        raise ValueError("not a Morita bimodule at level B")
    if verdict == "undecided":
        raise ArithmeticError("the Morita test at the identity level was "
                              "undecided")
    induced = induce_via_tensor(DA, M)
    cert = verify_morita_over_C(DA, induced, seed=seed,
                                name=name or f"extended[{M.name or M.dim}]")
    cert.source_module = M
    return cert


# ---------------------------------------------------------------------------
# truncation to a subgroup of grading degrees


def truncated_block_extension(E: BlockExtension, degrees):
    """Rebuild the crossed product over the preimage of a degree subgroup.

    Returns (extension, index map into the original basis).  The new
    basis is checked to coincide with the matching slots of the original
    basis as ambient group-algebra vectors, so the index map identifies
    the two multiplication tables on the nose.
    """
    keep = sorted(set(degrees))
    e = E.Gbar.identity_index
    kset = set(keep)
    if e not in kset:
        raise ValueError("degree subset must contain the identity")
    for a in keep:
        if E.Gbar.inv(a) not in kset:
            raise ValueError("degree subset is not closed under inverses")
        for b in keep:
            if E.Gbar.mul(a, b) not in kset:
                raise ValueError("degree subset is not closed under "
                                 "products")
    elems = [g for g in E.G.elements if E.Gbar.coset_index[g] in kset]
    H = PermGroup(E.G.degree, elems)
    EH = block_extension(E.field, H, E.N, E.b)
    if EH.dimB != E.dimB:
        raise ArithmeticError("identity component changed under "
                              "truncation")
    deg_to_old = [E.Gbar.coset_index[EH.Gbar.section(d)]
                  for d in range(EH.Gbar.order)]
    if sorted(deg_to_old) != keep:
        raise ArithmeticError("truncated grading degrees do not match")
    index_map = [deg_to_old[i // EH.dimB] * E.dimB + i % E.dimB
                 for i in range(EH.dim)]
    for iH, iG in enumerate(index_map):
        amb = [0] * len(E.G.elements)
        for hpos, c in enumerate(EH.basis_ambient[iH]):
            if c:
                amb[E.G.index[H.elements[hpos]]] = c
        if amb != list(E.basis_ambient[iG]):
            raise ArithmeticError("truncated basis does not align with "
                                  "the original")
    return EH, index_map


def _submatrix_checked(mat: Matrix, idx, context: str) -> Matrix:
    kset = set(idx)
    for c in idx:
        for r in range(mat.nrows):
            if mat.rows[r][c] and r not in kset:
                raise ArithmeticError(f"{context} leaks outside the kept "
                                      "degrees")
    return Matrix(mat.field, [[mat.rows[r][c] for c in idx] for r in idx],
                  len(idx))


def truncate_setting(S: GradedSetting, degrees) -> GradedSetting:
    """Restrict a graded setting to a subgroup of grading degrees.

    Both crossed products are rebuilt over the preimage groups, the
    coefficient algebra keeps only its components in the subgroup, and
    the structure maps are restricted accordingly.  The result records
    the index maps back into the original bases.
    """
    EH, amap = truncated_block_extension(S.A, degrees)
    if S.Aprime is S.A:
        EHp, apmap = EH, amap
    else:
        EHp, apmap = truncated_block_extension(
            S.Aprime, [S.to_prime[d] for d in degrees])
    keep = sorted(set(degrees))
    kset = set(keep)
    old_to_new = {S.A.Gbar.coset_index[EH.Gbar.section(d)]: d
                  for d in range(EH.Gbar.order)}
    cidx = [i for i, d in enumerate(S.C.degree_of_index) if d in kset]
    cpos = {i: t for t, i in enumerate(cidx)}

    def restrict_cvec(vec, context):
        out = [0] * len(cidx)
        for s, c in enumerate(vec):
            if not c:
                continue
            t = cpos.get(s)
            if t is None:
                raise ArithmeticError(f"{context} leaves the kept "
                                      "coefficient degrees")
            out[t] = c
        return out

    table = [[restrict_cvec(S.C.algebra.table[i][j], "coefficient product")
              for j in cidx] for i in cidx]
    calg = StructureConstantAlgebra(
        S.field, table, restrict_cvec(S.C.algebra.unit, "coefficient unit"),
        assoc_check="skip", name=S.C.name or "coefficients")
    action = []
    for d in range(EH.Gbar.order):
        gold = S.A.Gbar.coset_index[EH.Gbar.section(d)]
        cols = [restrict_cvec(S.C.action[gold].column(i),
                              "coefficient action") for i in cidx]
        action.append(Matrix.from_columns(S.field, cols, len(cidx)))
    CH = GradedActedAlgebra(calg, EH.Gbar,
                            [old_to_new[S.C.degree_of_index[i]]
                             for i in cidx],
                            action, name=S.C.name)
    CH.verify()

    def restrict_structure(cols, imap, context):
        rset = set(imap)
        out = []
        for j in cidx:
            col = cols.column(j)
            for r, c in enumerate(col):
                if c and r not in rset:
                    raise ArithmeticError(f"{context} leaves the kept "
                                          "components")
            out.append([col[r] for r in imap])
        return Matrix.from_columns(S.field, out, len(imap))

    SH = GradedSetting(EH, EHp, CH,
                       restrict_structure(S.zeta, amap, "zeta"),
                       restrict_structure(S.zetaprime, apmap, "zetaprime"),
                       name=(S.name + "-truncated") if S.name
                       else "truncated")
    SH.parent = S
    SH.index_map = amap
    SH.index_map_prime = apmap
    SH.coefficient_indices = cidx
    return SH


def truncate(cert: MoritaCertificate, degrees,
             seed: int = 0) -> MoritaCertificate:
    """Restrict a verified certificate to a subgroup of grading degrees.

    The setting and the bimodule are rebuilt over the preimage groups
    and the full graded test is re-run there.  Keeping every degree
    returns the certificate unchanged; keeping only the identity
    produces the certificate of the ungraded equivalence between the
    identity components.
    """
    if cert.status != "verified":
        raise ValueError("only verified certificates can be truncated")
    S = cert.setting
    keep = sorted(set(degrees))
    if keep == list(range(S.Gbar.order)):
        return cert
    SH = truncate_setting(S, keep)
    M = cert.bimodule
    kset = set(keep)
    midx = [i for i, d in enumerate(M.degree_of_index) if d in kset]
    old_to_new = {S.A.Gbar.coset_index[SH.A.Gbar.section(d)]: d
                  for d in range(SH.A.Gbar.order)}
    MH = GradedBimodule(
        SH, [old_to_new[M.degree_of_index[i]] for i in midx],
        [_submatrix_checked(M.left[iG], midx, "left truncation")
         for iG in SH.index_map],
        [_submatrix_checked(M.right[jG], midx, "right truncation")
         for jG in SH.index_map_prime],
        name=f"{M.name or 'bimodule'}-truncated")
    _assert_valid(MH, "truncate")
    out = verify_morita_over_C(DeltaAlgebra(SH), MH, seed=seed,
                               name=(cert.name + "-truncated")
                               if cert.name else "truncated")
    out.parent = cert
    return out


# ---------------------------------------------------------------------------
# centralizer transport through a verified equivalence


def trivial_identity_module(E: BlockExtension) -> AlgebraModule:
    """The one-dimensional module on which each identity-component basis
    vector acts by the coefficient sum of its group-algebra expansion.

    Only defined when the block acts as the identity, which the module
    axiom check enforces.
    """
    F = E.field
    action = []
    for k in range(E.dimB):
        s = 0
        for c in E.B_basis_kG[k]:
            s = F.add(s, c)
        action.append(Matrix(F, [[s]], 1))
    return AlgebraModule(E.B, 1, action, check="full", name="trivial")


def induced_left_module(E: BlockExtension, U: AlgebraModule) -> AlgebraModule:
    """A tensored over its identity component with U, one block per
    grading degree."""
    if U.algebra is not E.B:
        raise ValueError("module is not over the identity component")
    F = E.field
    ng, nu = E.Gbar.order, U.dim
    dim = ng * nu
    action = []
    for i in range(E.dim):
        gi = E.degree_of_index(i)
        mat = Matrix.zeros(F, dim, dim)
        ei = standard_vector(E.dim, i)
        for x in range(ng):
            tgt = E.Gbar.mul(gi, x)
            w = E.algebra.mul(E.unit_invs[tgt],
                              E.algebra.mul(ei, E.units[x]))
            d = E.component_of_vector(w)
            if d is not None and d != E.Gbar.identity_index:
                raise ArithmeticError("induced action left the identity "
                                      "slot")
            umat = U.action_of(w[:E.dimB])
            for r in range(nu):
                for c in range(nu):
                    v = umat.rows[r][c]
                    if v:
                        mat.rows[tgt * nu + r][x * nu + c] = v
        action.append(mat)
    out = AlgebraModule(E.algebra, dim, action, check="auto",
                        name=f"induced[{U.name or U.dim}]")
    out.block_degrees = [x for x in range(ng) for _ in range(nu)]
    return out


def right_coefficient_operator(E: BlockExtension, U: AlgebraModule,
                               cvec) -> Matrix:
    """Right multiplication by a centralizer element on the induced
    module: u_x (x) u maps to the sum over degrees h of
    u_h (x) (u_h^{-1} times the degree-h part of u_x c) u."""
    F = E.field
    ng, nu = E.Gbar.order, U.dim
    mat = Matrix.zeros(F, ng * nu, ng * nu)
    for x in range(ng):
        w = E.algebra.mul(E.units[x], cvec)
        for h, part in E.homogeneous_parts(w).items():
            beta = E.algebra.mul(E.unit_invs[h], part)
            d = E.component_of_vector(beta)
            if d is not None and d != E.Gbar.identity_index:
                raise ArithmeticError("centralizer shift left the identity "
                                      "slot")
            umat = U.action_of(beta[:E.dimB])
            for r in range(nu):
                for c in range(nu):
                    v = umat.rows[r][c]
                    if v:
                        mat.rows[h * nu + r][x * nu + c] = F.add(
                            mat.rows[h * nu + r][x * nu + c], v)
    return mat


class GradedEndomorphisms:
    """The opposite endomorphism algebra of an induced module, graded by
    how far each piece moves the degree blocks."""

    def __init__(self, algebra, mats, degree_of_index, solver):
        self.algebra = algebra
        self.mats = mats
        self.degree_of_index = degree_of_index
        self.solver = solver
        self.dim = len(mats)

    def coords(self, mat: Matrix) -> list[int]:
        out = self.solver.coords([x for row in mat.rows for x in row])
        if out is None:
            raise ArithmeticError("operator is not an endomorphism of the "
                                  "induced module")
        return out


def graded_endomorphisms(E: BlockExtension, V: AlgebraModule,
                         block_degrees) -> GradedEndomorphisms:
    """Split the endomorphisms of V by degree shift and form the algebra
    with reversed composition.

    A piece of shift g sends the degree-x block into the degree-xg
    block; each piece of a module map is checked to be a module map
    again, so the split bases the full endomorphism space.  Reversed
    composition makes the shift multiplicative.
    """
    F = E.field
    Gbar = E.Gbar
    homs = hom_space(V, V)
    pieces: dict[int, list[Matrix]] = {}
    for h in homs:
        split: dict[int, Matrix] = {}
        for r in range(V.dim):
            for c in range(V.dim):
                v = h.rows[r][c]
                if not v:
                    continue
                g = Gbar.mul(Gbar.inv(block_degrees[c]), block_degrees[r])
                split.setdefault(g,
                                 Matrix.zeros(F, V.dim, V.dim)).rows[r][c] = v
        for g, mat in split.items():
            pieces.setdefault(g, []).append(mat)
    mats, degrees = [], []
    for g in sorted(pieces):
        eb = EchelonBasis(F, V.dim * V.dim)
        for mat in pieces[g]:
            if eb.insert([x for row in mat.rows for x in row]) is None:
                continue
            for i in range(E.dim):
                if mat * V.action[i] != V.action[i] * mat:
                    raise ArithmeticError("graded piece of an endomorphism "
                                          "fails linearity")
            mats.append(mat)
            degrees.append(g)
    if len(mats) != len(homs):
        raise ArithmeticError("degree split changed the endomorphism "
                              "dimension")
    solver = SpanSolver(F, [[x for row in m.rows for x in row]
                            for m in mats], V.dim * V.dim)

    def coords(mat):
        out = solver.coords([x for row in mat.rows for x in row])
        if out is None:
            raise ArithmeticError("composition leaves the endomorphism "
                                  "space")
        return out

    table = [[coords(mj * mi) for mj in mats] for mi in mats]
    for i in range(len(mats)):
        for j in range(len(mats)):
            tgt = Gbar.mul(degrees[i], degrees[j])
            for s, c in enumerate(table[i][j]):
                if c and degrees[s] != tgt:
                    raise ArithmeticError("endomorphism grading is not "
                                          "multiplicative")
    alg = StructureConstantAlgebra(F, table,
                                   coords(Matrix.identity(F, V.dim)),
                                   assoc_check="auto",
                                   name="induced-endomorphisms-op")
    return GradedEndomorphisms(alg, mats, degrees, solver)


def _phi2_of(cert: MoritaCertificate, cvec, pairs=None) -> list[int]:
    """Pair the dual basis against a centralizer element and push the
    class through phi: the coefficient-level transfer map."""
    F = cert.setting.field
    X, Y = cert.dual, cert.bimodule
    T = cert.tensor_second
    e1 = X.setting.Gbar.identity_index
    idx1 = X.component_indices(e1)
    rc = X.right_action_of(cvec)
    acc = [0] * T.dim
    for (loc, y), coef in (pairs if pairs is not None
                           else cert.dual_pairs).items():
        emb = _embed_tensor_pair(T, X, Y, rc.column(idx1[loc]),
                                 standard_vector(Y.dim, y))
        acc = vec_addmul(F, acc, coef, emb)
    return cert.phi.mul_vec(acc)


def _canonical_comparison(cert: MoritaCertificate, U: AlgebraModule,
                          V: AlgebraModule, Uprime: AlgebraModule,
                          Vprime: AlgebraModule, q_w: QuotientMap,
                          q_u: QuotientMap) -> Matrix:
    """The unit-wise comparison from dual (x)_A V onto the induced module
    of the transferred coefficient-level module.

    A key f (x) (u_x (x) u) is rewritten as (f u_x) (x) (1 (x) u), the
    product decomposed into unit times identity-component dual vectors,
    and each piece lands in the matching block of the target.
    """
    S = cert.setting
    A, Ap = S.A, S.Aprime
    F = S.field
    X = cert.dual
    e1 = X.setting.Gbar.identity_index
    idx1 = X.component_indices(e1)
    pos1 = {g: l for l, g in enumerate(idx1)}
    nu = U.dim
    nup = Uprime.dim
    cols = []
    for t in range(q_w.dim):
        amb = q_w.lift(standard_vector(q_w.dim, t))
        out = [0] * Vprime.dim
        for p, coef in enumerate(amb):
            if not coef:
                continue
            fidx, vidx = divmod(p, V.dim)
            x, u = divmod(vidx, nu)
            gvec = X.right_action_of(A.units[x]).column(fidx)
            for z, part in _bimodule_parts(X, gvec).items():
                m1 = X.left_action_of(Ap.unit_invs[z]).mul_vec(part)
                local = [0] * (len(idx1) * nu)
                for gidx, c in enumerate(m1):
                    if not c:
                        continue
                    loc = pos1.get(gidx)
                    if loc is None:
                        raise ArithmeticError("unit shift left the "
                                              "identity component")
                    local[loc * nu + u] = c
                cls = q_u.project(local)
                base = z * nup
                for s, c in enumerate(cls):
                    if c:
                        out[base + s] = F.add(out[base + s],
                                              F.mul(coef, c))
        cols.append(out)
    return Matrix.from_columns(F, cols, Vprime.dim)


class CentralizerTransfer:
    """Result of transporting the graded centralizer through a verified
    equivalence: the coefficient-level map, the endomorphism-level map,
    and a report of every checked property."""

    def __init__(self, certificate, module, phi2_columns, phi2_matrix,
                 phi1_matrix, centralizer_first, centralizer_second,
                 endo_first, endo_second, report):
        self.certificate = certificate
        self.module = module
        self.phi2_columns = phi2_columns
        self.phi2_matrix = phi2_matrix
        self.phi1_matrix = phi1_matrix
        self.centralizer_first = centralizer_first
        self.centralizer_second = centralizer_second
        self.endo_first = endo_first
        self.endo_second = endo_second
        self.report = report


def transfer_centralizer(cert: MoritaCertificate,
                         U: AlgebraModule | None = None,
                         seed: int = 0) -> CentralizerTransfer:
    """Transport the graded centralizer of the first identity component
    through a verified equivalence and check both comparison squares.

    The coefficient-level map pairs the dual basis against the
    centralizer element; it is checked to be a graded unital algebra
    isomorphism onto the second centralizer, equivariant under the
    grading group, compatible with both structure maps, and independent
    of the choice of dual pairs.  The endomorphism-level square
    conjugates right-coefficient operators on the induced module of U
    through the canonical comparison map and compares them with the
    operators of the transferred coefficients on the transferred module.
    """
    if cert.status != "verified":
        raise ValueError("centralizer transfer needs a verified "
                         "certificate")
    S = cert.setting
    A, Ap = S.A, S.Aprime
    F = S.field
    report: dict[str, bool] = {}

    CA, basisA = centralizer_graded(A, seed=seed)
    CAp, basisAp = centralizer_graded(Ap, seed=seed)
    phi2_cols = [_phi2_of(cert, c) for c in basisA]

    solver_p = SpanSolver(F, basisAp, Ap.dim)
    coords_p = [solver_p.coords(col) for col in phi2_cols]
    report["phi2_in_centralizer"] = all(c is not None for c in coords_p)
    if not report["phi2_in_centralizer"]:
        raise ArithmeticError("the transferred coefficients leave the "
                              "second centralizer")
    P = Matrix.from_columns(F, coords_p, len(basisAp))
    report["phi2_bijective"] = (len(basisA) == len(basisAp)
                                and is_invertible(P))
    report["phi2_unital"] = (list(_phi2_of(cert, list(A.algebra.unit)))
                             == list(Ap.algebra.unit))
    report["phi2_multiplicative"] = all(
        list(_phi2_of(cert, A.algebra.mul(basisA[s], basisA[t])))
        == list(Ap.algebra.mul(phi2_cols[s], phi2_cols[t]))
        for s in range(len(basisA)) for t in range(len(basisA)))
    report["phi2_graded"] = all(
        not v or Ap.degree_of_index(i) == S.to_prime[CA.degree_of_index[t]]
        for t in range(len(basisA)) for i, v in enumerate(phi2_cols[t]))

    ok = True
    for g in range(S.Gbar.order):
        gp = S.to_prime[g]
        for t in range(len(basisA)):
            acted = CA.act(g, standard_vector(len(basisA), t))
            vec = [0] * A.dim
            for k, c in enumerate(acted):
                vec = vec_addmul(F, vec, c, basisA[k])
            rhs = Ap.algebra.mul(Ap.units[gp],
                                 Ap.algebra.mul(phi2_cols[t],
                                                Ap.unit_invs[gp]))
            if list(_phi2_of(cert, vec)) != list(rhs):
                ok = False
    report["phi2_equivariant"] = ok

    report["zeta_square"] = all(
        list(_phi2_of(cert, S.zeta.column(k))) == list(S.zetaprime.column(k))
        for k in range(S.zeta.ncols))

    T = cert.tensor_second
    e_mid = S.Gbar.identity_index
    rels = T.space.relations_by_degree.get(e_mid, [])
    if rels:
        rng = rng_for(seed, "dual-pair-independence")
        keys = T.space.keys_by_degree[e_mid]
        amb = [0] * len(keys)
        for key, c in cert.dual_pairs.items():
            amb[T.space.pos[key][1]] = c
        for row in rels:
            amb = vec_addmul(F, amb, rng.randrange(1, F.q), row)
        alt = {keys[loc]: c for loc, c in enumerate(amb) if c}
        report["dual_basis_independent"] = all(
            list(_phi2_of(cert, basisA[t], pairs=alt))
            == list(phi2_cols[t]) for t in range(len(basisA)))
    else:
        report["dual_basis_independent"] = True

    if U is None:
        U = trivial_identity_module(A)
    V = induced_left_module(A, U)
    EV = graded_endomorphisms(A, V, V.block_degrees)

    rho_cols = []
    ok = True
    for t, c in enumerate(basisA):
        op = right_coefficient_operator(A, U, c)
        coords = EV.coords(op)
        g = CA.degree_of_index[t]
        if any(v and EV.degree_of_index[s] != g
               for s, v in enumerate(coords)):
            ok = False
        rho_cols.append(coords)
    report["rho_graded"] = ok
    report["rho_multiplicative"] = all(
        right_coefficient_operator(A, U, A.algebra.mul(basisA[s], basisA[t]))
        == right_coefficient_operator(A, U, basisA[t])
        * right_coefficient_operator(A, U, basisA[s])
        for s in range(len(basisA)) for t in range(len(basisA)))

    endU = hom_space(U, U)
    sol_u = SpanSolver(F, [[x for row in h.rows for x in row] for h in endU],
                       U.dim * U.dim)
    eidx = [t for t, g in enumerate(EV.degree_of_index) if g == e_mid]
    restrictions = []
    ok = len(eidx) == len(endU)
    for t in eidx:
        flat = [EV.mats[t].rows[r][c]
                for r in range(U.dim) for c in range(U.dim)]
        if sol_u.coords(flat) is None:
            ok = False
            break
        restrictions.append(flat)
    if ok:
        ok = SpanSolver(F, restrictions, U.dim * U.dim).dim == len(eidx)
    report["endo_identity_component"] = ok

    e1 = cert.dual.setting.Gbar.identity_index
    idx1 = cert.dual.component_indices(e1)
    n1 = len(idx1)
    dual_left1 = [_submatrix_checked(cert.dual.left[l], idx1,
                                     "dual identity component")
                  for l in range(Ap.dimB)]
    dual_right1 = [_submatrix_checked(cert.dual.right[k], idx1,
                                      "dual identity component")
                   for k in range(A.dimB)]
    q_u, rels_u = _tensor_qmap(F, dual_right1, list(U.action), n1, U.dim)
    Uprime = AlgebraModule(
        Ap.B, q_u.dim,
        [_descend(q_u, _slot_operator(F, m, n1, U.dim, 0), rels_u,
                  "transferred module action") for m in dual_left1],
        check="auto", name="transferred")
    Vprime = induced_left_module(Ap, Uprime)
    EVp = graded_endomorphisms(Ap, Vprime, Vprime.block_degrees)

    q_w, rels_w = _tensor_qmap(F, list(cert.dual.right), list(V.action),
                               cert.dual.dim, V.dim)
    w_left = [_descend(q_w, _slot_operator(F, cert.dual.left[j],
                                           cert.dual.dim, V.dim, 0),
                       rels_w, "left action on the double tensor")
              for j in range(Ap.dim)]
    kappa = _canonical_comparison(cert, U, V, Uprime, Vprime, q_w, q_u)
    for j in range(Ap.dim):
        if kappa * w_left[j] != Vprime.action[j] * kappa:
            raise ArithmeticError("canonical comparison is not linear over "
                                  "the second crossed product")
    if not is_invertible(kappa):
        raise ArithmeticError("canonical comparison is not bijective")
    kappa_inv = inverse(kappa)

    phi1_cols = []
    ok = True
    for t in range(EV.dim):
        big = _slot_operator(F, EV.mats[t], cert.dual.dim, V.dim, 1)
        wop = _descend(q_w, big, rels_w, "endomorphism on the double "
                       "tensor")
        coords = EVp.coords(kappa * wop * kappa_inv)
        expect = S.to_prime[EV.degree_of_index[t]]
        if any(v and EVp.degree_of_index[s] != expect
               for s, v in enumerate(coords)):
            ok = False
        phi1_cols.append(coords)
    report["phi1_graded"] = ok
    Phi1 = Matrix.from_columns(F, phi1_cols, EVp.dim)
    report["phi1_bijective"] = (EV.dim == EVp.dim and is_invertible(Phi1))
    report["phi1_multiplicative"] = all(
        list(Phi1.mul_vec(EV.algebra.mul(standard_vector(EV.dim, s),
                                         standard_vector(EV.dim, t))))
        == list(EVp.algebra.mul(phi1_cols[s], phi1_cols[t]))
        for s in range(EV.dim) for t in range(EV.dim))
    report["endo_square"] = all(
        list(Phi1.mul_vec(rho_cols[t]))
        == list(EVp.coords(right_coefficient_operator(Ap, Uprime,
                                                      phi2_cols[t])))
        for t in range(len(basisA)))

    if not all(report.values()):
        raise ArithmeticError(f"centralizer transfer failed: {report}")
    return CentralizerTransfer(cert, U, phi2_cols, P, Phi1, (CA, basisA),
                               (CAp, basisAp), EV, EVp, report)


# ---------------------------------------------------------------------------
# extension of an identity-level equivalence to centralizer coefficients


def _identity_action(E: BlockExtension, mats, perm) -> Matrix:
    """Matrix of the identity-component element b times a kernel element
    on a level-B module given by action matrices."""
    F = E.field
    prod = E.kG.mul(E.kn_to_kg(E.b), E.kG.element_vector(perm))
    coords = E.ambient_solver.coords(prod)
    if coords is None:
        raise ArithmeticError("kernel element leaves the crossed product")
    d = E.component_of_vector(coords)
    if d is not None and d != E.Gbar.identity_index:
        raise ArithmeticError("kernel element leaves the identity slot")
    n = mats[0].nrows if mats else 0
    out = Matrix.zeros(F, n, n)
    for k in range(E.dimB):
        if coords[k]:
            out = out + mats[k].scale(coords[k])
    return out


class NCGNExtension:
    """A bimodule extended to kernel-centralizer coefficients, with its
    setting, certificate, and the explicit coefficient-commutation
    report."""

    def __init__(self, setting, bimodule, certificate, report):
        self.setting = setting
        self.bimodule = bimodule
        self.certificate = certificate
        self.report = report


def extend_to_NCGN(E: BlockExtension, Eprime: BlockExtension, left, right,
                   seed: int = 0, name: str = "") -> NCGNExtension:
    """Extend an identity-level Morita bimodule to coefficients in the
    centralizer of the kernel.

    Three hypotheses are checked first: the centralizer of the kernel
    must lie in the second acting group, the bimodule must be Morita at
    the identity level, and the center of the kernel must act the same
    way through both sides.  Both crossed products are then rebuilt over
    kernel times centralizer, the bimodule is induced on the left, the
    right action routes each basis element through a common centralizer
    element, and the result is certified over the centralizer
    coefficients.  Each centralizer coefficient c satisfies
    m c = (g.c) m on every degree-g basis vector, which is reported
    explicitly.
    """
    F = E.field
    CGN = E.G.centralizer(E.N)
    if not Eprime.G.contains_group(CGN):
        raise ValueError("hypothesis failure: the centralizer of the "
                         "kernel does not lie in the second acting group")
    npset = set(Eprime.N.elements)
    for z in E.N.center().elements:
        if z not in npset:
            raise ValueError("hypothesis failure: the center of the kernel "
                             "is not shared by both kernels")
        if _identity_action(E, left, z) != _identity_action(Eprime, right,
                                                            z):
            raise ValueError("hypothesis failure: the center of the kernel "
                             "acts differently on the two sides")
    verdict = ungraded_morita_verdict(E.B, Eprime.B, left, right, seed=seed)
    if verdict == "not_isomorphic":
        raise ValueError("hypothesis failure: not a Morita bimodule at "
                         "level B")
    if verdict == "undecided":
        raise ArithmeticError("the Morita test at the identity level was "
                              "undecided")

    NC = PermGroup(E.G.degree, sorted(E.G.product_set(E.N, CGN)))
    Enc = block_extension(F, NC, E.N, E.b)
    NCp = PermGroup(Eprime.G.degree,
                    sorted(Eprime.G.product_set(Eprime.N, CGN)))
    Epnc = block_extension(F, NCp, Eprime.N, Eprime.b)
    if Enc.B.table != E.B.table or Epnc.B.table != Eprime.B.table:
        raise ArithmeticError("identity components changed when passing to "
                              "the centralizer extension")
    setting = subgroup_setting(Enc, CGN, Aprime=Epnc,
                               name=name or "kernel-centralizer")

    n = left[0].nrows if left else 0
    U = AlgebraModule(Enc.B, n, left, check="auto", name="level-B side")
    V = induced_left_module(Enc, U)
    ng = Enc.Gbar.order

    cpos = {c: k for k, c in enumerate(CGN.elements)}
    shift_cache: dict[int, Matrix] = {}
    right_out = []
    for j in range(Epnc.dim):
        dp, l = divmod(j, Epnc.dimB)
        if dp not in shift_cache:
            rep = Epnc.Gbar.section(dp)
            match = None
            for xp in CGN.elements:
                cand = compose(rep, inverse_perm(xp))
                if cand in npset:
                    match = (xp, cand)
                    break
            if match is None:
                raise ArithmeticError("no centralizer element matches the "
                                      "coset representative")
            xp, nperm = match
            shift = Matrix.zeros(F, V.dim, V.dim)
            ccol = setting.zeta.column(cpos[xp])
            for x in range(ng):
                w = Enc.algebra.mul(Enc.units[x], ccol)
                for h, part in Enc.homogeneous_parts(w).items():
                    beta = Enc.algebra.mul(Enc.unit_invs[h], part)
                    d = Enc.component_of_vector(beta)
                    if d is not None and d != Enc.Gbar.identity_index:
                        raise ArithmeticError("centralizer shift left the "
                                              "identity slot")
                    umat = U.action_of(beta[:Enc.dimB])
                    for r in range(n):
                        for c in range(n):
                            v = umat.rows[r][c]
                            if v:
                                shift.rows[h * n + r][x * n + c] = F.add(
                                    shift.rows[h * n + r][x * n + c], v)
            nmat = _identity_action(Eprime, right, nperm)
            shift_cache[dp] = shift * _slot_operator(F, nmat, ng, n, 1)
        zmat = _slot_operator(F, right[l], ng, n, 1)
        right_out.append(shift_cache[dp] * zmat)

    X = GradedBimodule(setting, V.block_degrees, V.action, right_out,
                       name=name or "centralizer-extended")
    _assert_valid(X, "extend_to_NCGN")

    formula = True
    for k in range(setting.zeta.ncols):
        rmat = X.right_action_of(setting.zetaprime.column(k))
        for d in range(ng):
            acted = setting.C.act(d, standard_vector(setting.zeta.ncols, k))
            lmat = X.left_action_of(setting.zeta.mul_vec(acted))
            for i in X.component_indices(d):
                if rmat.column(i) != lmat.column(i):
                    formula = False
    report = {"action_formula": formula}

    cert = verify_morita_over_C(DeltaAlgebra(setting), X, seed=seed,
                                name=name or "centralizer-extended")
    return NCGNExtension(setting, X, cert, report)


# ---------------------------------------------------------------------------
# replacing the acting group


def _transport_algebra(Etgt: BlockExtension, Esrc: BlockExtension, amap):
    """Push a crossed product along a kernel-fixing bijection of groups.

    Returns the transport matrix (source coordinates to target
    coordinates), verified to be a bijective algebra map, and the
    induced bijection of grading degrees.
    """
    F = Etgt.field
    cols = []
    for i in range(Esrc.dim):
        amb = [0] * len(Etgt.G.elements)
        for t, c in enumerate(Esrc.basis_ambient[i]):
            if c:
                amb[Etgt.G.index[amap[Esrc.G.elements[t]]]] = c
        coords = Etgt.ambient_solver.coords(amb)
        if coords is None:
            raise ArithmeticError("transported basis vector leaves the "
                                  "crossed product")
        cols.append(coords)
    mat = Matrix.from_columns(F, cols, Etgt.dim)
    hom = AlgebraHom(Esrc.algebra, Etgt.algebra, mat, name="transport")
    if not hom.verify():
        raise ArithmeticError("transport is not an algebra map")
    if not is_invertible(mat):
        raise ArithmeticError("transport is not bijective")
    omega = [Etgt.Gbar.coset_index[amap[Esrc.Gbar.section(d)]]
             for d in range(Esrc.Gbar.order)]
    if sorted(omega) != list(range(Etgt.Gbar.order)):
        raise ArithmeticError("transport does not match the grading "
                              "groups")
    return mat, omega


class ButterflyResult:
    """A certificate transported to a new acting group: the computed
    second group, the new setting and bimodule, and the re-verified
    certificate."""

    def __init__(self, second_group, setting, bimodule, certificate,
                 parent):
        self.second_group = second_group
        self.setting = setting
        self.bimodule = bimodule
        self.certificate = certificate
        self.parent = parent


def butterfly(cert: MoritaCertificate, Ghat: PermGroup, seed: int = 0,
              name: str = "") -> ButterflyResult:
    """Replace the acting group by another group inducing the same
    automorphisms of the kernel, transporting the certificate.

    The new group must normalize the kernel, fix its block, and induce
    exactly the automorphisms the old group induces; the centralizer of
    the kernel must lie in the second acting group.  The new second
    group is the preimage in the new group of the automorphisms induced
    by the old second group.  Transport matches elements by the
    automorphism they induce: either the groups coincide as sets, or
    the kernel centralizer is trivial and the matching is a bijection.
    The transported bimodule is re-certified over the coefficients of
    the new kernel centralizer.
    """
    if cert.status != "verified":
        raise ValueError("butterfly needs a verified certificate")
    S = cert.setting
    E, Ep = S.A, S.Aprime
    N = E.N
    F = S.field
    if Ghat.degree != E.G.degree:
        raise ValueError("the new group acts on a different set")
    if not Ghat.contains_group(N) or not Ghat.is_normal(N):
        raise ValueError("hypothesis failure: the new group does not "
                         "normalize the kernel")
    if not is_invariant(E.kN, E.b, Ghat):
        raise ValueError("hypothesis failure: the block is not invariant "
                         "under the new group")
    if conjugation_image(E.G, N) != conjugation_image(Ghat, N):
        raise ValueError("hypothesis failure: the two groups induce "
                         "different automorphisms of the kernel")
    CGN = E.G.centralizer(N)
    if not Ep.G.contains_group(CGN):
        raise ValueError("hypothesis failure: the centralizer of the "
                         "kernel does not lie in the second acting group")

    target = conjugation_image(Ep.G, N)
    acthat = conjugation_action(Ghat, N)
    prime_elems = sorted(g for g, t in acthat.items() if t in target)
    closed = PermGroup.from_generators(Ghat.degree, prime_elems)
    if sorted(closed.elements) != prime_elems:
        raise ArithmeticError("the preimage of the second automorphism "
                              "group is not closed")
    Ghat_prime = PermGroup(Ghat.degree, prime_elems)
    Chat = Ghat.centralizer(N)
    if not Ghat_prime.contains_group(Chat):
        raise ArithmeticError("the new kernel centralizer escapes the new "
                              "second group")
    if Ghat.product_set(N, Ghat_prime) != set(Ghat.elements):
        raise ArithmeticError("kernel times the new second group misses "
                              "the new group")
    nset = set(N.elements)
    if sorted(g for g in prime_elems if g in nset) != \
            sorted(Ep.N.elements):
        raise ArithmeticError("the kernels of the two second groups "
                              "differ")

    same = (sorted(Ghat.elements) == sorted(E.G.elements)
            and prime_elems == sorted(Ep.G.elements))
    if same:
        amap = {g: g for g in Ghat.elements}
    elif CGN.order == 1:
        by_tuple = {t: g for g, t in conjugation_action(E.G, N).items()}
        amap = {g: by_tuple[t] for g, t in acthat.items()}
        if len(set(amap.values())) != Ghat.order:
            raise ValueError("transport needs identical groups or a "
                             "trivial kernel centralizer")
        for a in Ghat.elements:
            for b in Ghat.elements:
                if amap[compose(a, b)] != compose(amap[a], amap[b]):
                    raise ArithmeticError("conjugation matching is not "
                                          "multiplicative")
    else:
        raise ValueError("transport needs identical groups or a trivial "
                         "kernel centralizer")

    Ahat = block_extension(F, Ghat, N, E.b)
    Ahat_prime = block_extension(F, Ghat_prime, Ep.N, Ep.b)
    setting_hat = subgroup_setting(Ahat, Chat, Aprime=Ahat_prime,
                                   name=name or "butterfly")
    iota, omega = _transport_algebra(E, Ahat, amap)
    iota_p, _ = _transport_algebra(Ep, Ahat_prime,
                                   {g: amap[g] for g in prime_elems})
    omega_inv = [0] * len(omega)
    for dh, d in enumerate(omega):
        omega_inv[d] = dh
    M = cert.bimodule
    Xhat = GradedBimodule(
        setting_hat, [omega_inv[d] for d in M.degree_of_index],
        [M.left_action_of(iota.column(i)) for i in range(Ahat.dim)],
        [M.right_action_of(iota_p.column(j))
         for j in range(Ahat_prime.dim)],
        name=name or "butterfly-transport")
    _assert_valid(Xhat, "butterfly")
    out = verify_morita_over_C(DeltaAlgebra(setting_hat), Xhat, seed=seed,
                               name=name or "butterfly")
    return ButterflyResult(Ghat_prime, setting_hat, Xhat, out, cert)


# ---------------------------------------------------------------------------
# block stabilizers


def _unit_twisted_actions(E: BlockExtension, mats, g, field, dim):
    """Action matrices of the identity-component basis conjugated by the
    degree-g unit."""
    out = []
    for k in range(E.dimB):
        w = E.algebra.mul(E.units[g],
                          E.algebra.mul(standard_vector(E.dim, k),
                                        E.unit_invs[g]))
        d = E.component_of_vector(w)
        if d is not None and d != E.Gbar.identity_index:
            raise ArithmeticError("unit twist left the identity slot")
        mat = Matrix.zeros(field, dim, dim)
        for s, c in enumerate(w[:E.dimB]):
            if c:
                mat = mat + mats[s].scale(c)
        out.append(mat)
    return out


def invariant_degrees(DA: DeltaAlgebra, M: AlgebraModule, seed: int = 0):
    """Degrees whose one-sided unit twist leaves the identity-level
    bimodule unchanged up to isomorphism.

    Twisting the left action by a degree-g unit gives an isomorphic
    bimodule exactly when conjugation by that unit is inner on the
    first identity component, which happens exactly when the degree-g
    centralizer component carries a unit; the right twist detects the
    second block the same way.  The two-sided diagonal twist is always
    trivial and is not computed.  Returns (left degrees, right degrees
    in first-side labels, undecided degrees); each decided set is
    checked to be a subgroup.
    """
    S = DA.setting
    A, Ap = S.A, S.Aprime
    F = S.field
    left, right = pair_actions_of_delta_module(DA, M)
    env = pair_envelope(A.B, Ap.B)
    base = pair_module(env, A.dimB, Ap.dimB, left, right, M.dim,
                       name="level-B")

    left_degs, right_degs, undecided = [], [], []
    for g in range(S.Gbar.order):
        if g == S.Gbar.identity_index:
            left_degs.append(g)
            right_degs.append(g)
            continue
        twisted = pair_module(env, A.dimB, Ap.dimB,
                              _unit_twisted_actions(A, left, g, F, M.dim),
                              right, M.dim, name=f"left-twist[{g}]")
        verdict, _ = module_iso(base, twisted, seed=seed)
        if verdict == "iso":
            left_degs.append(g)
        elif verdict == "undecided":
            undecided.append(g)
        gp = S.to_prime[g]
        twisted = pair_module(env, A.dimB, Ap.dimB, left,
                              _unit_twisted_actions(Ap, right, gp, F, M.dim),
                              M.dim, name=f"right-twist[{g}]")
        verdict, _ = module_iso(base, twisted, seed=seed)
        if verdict == "iso":
            right_degs.append(g)
        elif verdict == "undecided":
            if g not in undecided:
                undecided.append(g)
    if not undecided:
        for degs in (left_degs, right_degs):
            dset = set(degs)
            for a in degs:
                for b in degs:
                    if S.Gbar.mul(a, b) not in dset:
                        raise ArithmeticError("invariant degrees are not a "
                                              "subgroup")
    return left_degs, right_degs, undecided


class GbPreservation:
    """Comparison of the unit-stabilizer subgroups of the two blocks,
    with a certificate over the common stabilizer when available."""

    def __init__(self, report, certificate):
        self.report = report
        self.certificate = certificate


def check_Gb_preserved(DA: DeltaAlgebra, M: AlgebraModule,
                       seed: int = 0) -> GbPreservation:
    """Compare the unit-stabilizer subgroups of the two blocks through an
    identity-level Morita bimodule.

    The stabilizer of a side is the set of degrees whose centralizer
    component contains a unit.  The report lists both stabilizers (the
    second translated into first-side degrees), the one-sided
    twist-invariance degrees of the bimodule, and whether each
    invariance set matches its stabilizer.  Matching is the detection
    theorem; equality of the two stabilizers is the preservation
    theorem.  When everything agrees, the induced bimodule is certified
    and truncated to the common stabilizer.
    """
    S = DA.setting
    A, Ap = S.A, S.Aprime
    left, right = pair_actions_of_delta_module(DA, M)
    verdict = ungraded_morita_verdict(A.B, Ap.B, left, right, seed=seed)
    if verdict == "not_isomorphic":
        raise ValueError("hypothesis failure: not a Morita bimodule at "
                         "level B")
    if verdict == "undecided":
        raise ArithmeticError("the Morita test at the identity level was "
                              "undecided")
    stab_first = list(compute_Gbar_b(A))
    stab_second = sorted(S.to_std[d] for d in compute_Gbar_b(Ap))
    left_degs, right_degs, undecided = invariant_degrees(DA, M, seed=seed)
    report = {
        "stabilizer_first": stab_first,
        "stabilizer_second": stab_second,
        "stabilizers_equal": stab_first == stab_second,
        "left_invariant_degrees": left_degs,
        "right_invariant_degrees": right_degs,
        "undecided_degrees": undecided,
        "left_matches_first": not undecided and left_degs == stab_first,
        "right_matches_second": not undecided and right_degs == stab_second,
    }
    certificate = None
    if not undecided and report["stabilizers_equal"] \
            and left_degs == stab_first and right_degs == stab_second:
        full = verify_morita_over_C(DA, induce_via_tensor(DA, M), seed=seed,
                                    name="stabilizer")
        certificate = truncate(full, stab_first, seed=seed)
    return GbPreservation(report, certificate)
