"""Group algebras, blocks, and block crossed products.

``block_extension`` builds A = b·kG for a G-invariant block idempotent b
of kN, graded by Ḡ = G/N with components A_ḡ = B·u_ḡ for the units
u_ḡ = b·g_ḡ over the fixed lex-least section ḡ ↦ g_ḡ.  The basis of A is
ordered slot by slot (identity slot first), so component membership is a
coordinate-range statement.

``centralizer_graded`` equips C_A(B) with its degreewise structure and
the conjugation action by the units, checked to be independent of the
choice of units.
"""

from __future__ import annotations

from .algebra import (AlgebraHom, StructureConstantAlgebra,
                      central_primitive_idempotents)
from .field import FiniteField
from .groups import PermGroup, QuotientGroup, conjugation_action
from .linalg import (Matrix, SpanSolver, kernel, standard_vector, vec_add,
                     vec_is_zero, vec_scale)
from .modules import AlgebraModule
from .utils import ResourceLimit, rng_for


class GroupAlgebra(StructureConstantAlgebra):
    """kG with basis the sorted group elements.

    Associativity comes from permutation composition being associative; the
    integer multiplication table is still triple-checked for small groups.
    """

    def __init__(self, field: FiniteField, group: PermGroup):
        n = group.order
        if n <= 24:
            for i in range(n):
                for j in range(n):
                    for k in range(n):
                        if group.mul(group.mul(i, j), k) != group.mul(i, group.mul(j, k)):
                            raise ValueError("group table is not associative")
        table = [[standard_vector(n, group.mul(i, j)) for j in range(n)]
                 for i in range(n)]
        unit = standard_vector(n, group.identity_index)
        super().__init__(field, table, unit,
                         labels=[str(g) for g in group.elements],
                         generators=group.generator_indices(),
                         assoc_check="skip", name=f"k[G:{n}]")
        self.group = group
        self._class_sums = None

    def element_vector(self, g) -> list[int]:
        idx = g if isinstance(g, int) else self.group.index[g]
        return standard_vector(self.dim, idx)

    def sum_of(self, elements) -> list[int]:
        v = [0] * self.dim
        for g in elements:
            idx = g if isinstance(g, int) else self.group.index[g]
            v[idx] = self.field.add(v[idx], 1)
        return v

    def augmentation(self, v) -> int:
        F = self.field
        s = 0
        for c in v:
            s = F.add(s, c)
        return s

    def conjugate_vector(self, v, g: tuple) -> list[int]:
        """g * v * g^{-1} as a permutation of coordinates."""
        act = conjugation_action_single(self.group, g)
        out = [0] * self.dim
        for i, c in enumerate(v):
            if c:
                out[act[i]] = c
        return out

    def center(self) -> list[list[int]]:
        if self._class_sums is None:
            sums = [self.sum_of([self.group.index[x] for x in cls])
                    for cls in self.group.conjugacy_classes()]
            ss = SpanSolver(self.field, sums, self.dim)
            self._class_sums = ss.basis_rows()
        return self._class_sums


def conjugation_action_single(group: PermGroup, g: tuple) -> list[int]:
    from .groups import compose, inverse_perm
    gi = inverse_perm(g)
    return [group.index[compose(compose(g, group.elements[i]), gi)]
            for i in range(group.order)]


# -- blocks -----------------------------------------------------------------

_BLOCK_CACHE: dict = {}


def blocks(ga: GroupAlgebra) -> list[list[int]]:
    key = (ga.field.p, ga.field.m, ga.field.modulus, tuple(ga.group.elements))
    got = _BLOCK_CACHE.get(key)
    if got is None:
        got = central_primitive_idempotents(ga)
        _BLOCK_CACHE[key] = got
    return [list(b) for b in got]


def principal_block(ga: GroupAlgebra) -> list[int]:
    """The block not killed by the augmentation map."""
    hits = [b for b in blocks(ga) if ga.augmentation(b) == 1]
    if len(hits) != 1:
        raise ArithmeticError("augmentation did not single out one block")
    return hits[0]


def is_invariant(ga: GroupAlgebra, v, G: PermGroup) -> bool:
    """Stability of a kN element under conjugation by every element of G."""
    return all(ga.conjugate_vector(v, g) == list(v) for g in G.elements)


# -- modules over group algebras --------------------------------------------


def trivial_module(ga: GroupAlgebra) -> AlgebraModule:
    one = Matrix.identity(ga.field, 1)
    return AlgebraModule(ga, 1, [one] * ga.dim, name="triv",
                         perm_tuples=[(0,)] * ga.dim)


def regular_module(ga: GroupAlgebra, side="left") -> AlgebraModule:
    mats = []
    perms = []
    for i in range(ga.dim):
        if side == "left":
            perm = [ga.group.mul(i, j) for j in range(ga.dim)]
        else:
            perm = [ga.group.mul(j, i) for j in range(ga.dim)]
        perms.append(tuple(perm))
        rows = [[0] * ga.dim for _ in range(ga.dim)]
        for src, dst in enumerate(perm):
            rows[dst][src] = 1
        mats.append(Matrix(ga.field, rows, ga.dim))
    return AlgebraModule(ga, ga.dim, mats, side=side, check="skip",
                         name=f"reg({side})", perm_tuples=perms)


def permutation_module(ga: GroupAlgebra, tuples_per_element) -> AlgebraModule:
    npts = len(tuples_per_element[0])
    mats = []
    for t in tuples_per_element:
        rows = [[0] * npts for _ in range(npts)]
        for src, dst in enumerate(t):
            rows[dst][src] = 1
        mats.append(Matrix(ga.field, rows, npts))
    return AlgebraModule(ga, npts, mats, name=f"perm({npts})",
                         perm_tuples=[tuple(t) for t in tuples_per_element])


def restrict_module(M: AlgebraModule, sub_ga: GroupAlgebra,
                    embed_indices: list[int], name="") -> AlgebraModule:
    action = [M.action[i] for i in embed_indices]
    perms = None
    if M.perm_tuples is not None:
        perms = [M.perm_tuples[i] for i in embed_indices]
    return AlgebraModule(sub_ga, M.dim, action, side=M.side, check="skip",
                         name=name or f"res({M.name})", perm_tuples=perms)


def dual_module(M: AlgebraModule, ga: GroupAlgebra) -> AlgebraModule:
    """Contragredient of a left kG-module: g acts by action(g^{-1})^T."""
    action = [M.action[ga.group.inv(i)].transpose() for i in range(ga.dim)]
    return AlgebraModule(ga, M.dim, action, side=M.side, check="skip",
                         name=f"dual({M.name})")


def embed_subgroup_indices(G: PermGroup, H: PermGroup) -> list[int]:
    return [G.index[h] for h in H.elements]


# -- crossed products ---------------------------------------------------------


class BlockExtension:
    """A = b·kG graded by Ḡ = G/N, with B = b·kN in the identity slot."""

    def __init__(self, field: FiniteField, G: PermGroup, N: PermGroup,
                 b: list[int], kN: GroupAlgebra, kG: GroupAlgebra,
                 Gbar: QuotientGroup):
        self.field = field
        self.G, self.N, self.Gbar = G, N, Gbar
        self.kN, self.kG = kN, kG
        self.b = list(b)
        F = field

        n_to_g = embed_subgroup_indices(G, N)
        self.n_to_g = n_to_g

        def kn_to_kg(v):
            out = [0] * kG.dim
            for i, c in enumerate(v):
                if c:
                    out[n_to_g[i]] = c
            return out

        self.kn_to_kg = kn_to_kg

        b_g = kn_to_kg(b)
        bn = [kG.mul(b_g, kG.element_vector(n_to_g[i])) for i in range(kN.dim)]
        bsolver_kg = SpanSolver(F, bn, kG.dim)
        self.B_basis_kG = bsolver_kg.basis_rows()
        self.dimB = len(self.B_basis_kG)

        # basis of A: per slot, the B-basis translated by the slot unit
        basis = []
        self.unit_ambient = []
        for gi in range(Gbar.order):
            rep = Gbar.section(gi)
            rep_vec = kG.element_vector(rep)
            self.unit_ambient.append(kG.mul(b_g, rep_vec))
            for z in self.B_basis_kG:
                basis.append(kG.mul(z, rep_vec))
        self.basis_ambient = basis
        self.dim = len(basis)
        solver = SpanSolver(F, basis, kG.dim)
        if solver.dim != self.dim:
            raise ArithmeticError("crossed product basis is dependent")
        self.ambient_solver = solver

        table = []
        for u in basis:
            row = []
            for v in basis:
                c = solver.coords(kG.mul(u, v))
                if c is None:
                    raise ArithmeticError("product left the crossed product span")
                row.append(c)
            table.append(row)
        unit = solver.coords(b_g)
        if unit is None:
            raise ArithmeticError("unit is outside the span")
        self.algebra = StructureConstantAlgebra(
            F, table, unit, generators=None, name=f"A[{self.dim}]")

        self.units = []
        self.unit_invs = []
        for gi in range(Gbar.order):
            u = solver.coords(self.unit_ambient[gi])
            self.units.append(u)
            ginv = Gbar.inv(gi)
            rep_inv = kG.element_vector(Gbar.section(ginv))
            u_inv_amb = kG.mul(b_g, rep_inv)
            cand = solver.coords(u_inv_amb)
            prod = self.algebra.mul(u, cand)
            if prod != self.algebra.unit:
                cand2 = self.algebra.element_inverse(u)
                if cand2 is None:
                    raise ArithmeticError(f"unit in slot {gi} is not invertible")
                cand = cand2
            self.unit_invs.append(cand)
        self._verify_grading()

    # -- grading helpers -------------------------------------------------

    def component_indices(self, gi: int) -> range:
        return range(gi * self.dimB, (gi + 1) * self.dimB)

    def degree_of_index(self, i: int) -> int:
        return i // self.dimB

    def component_of_vector(self, v):
        """The unique slot supporting v, or None for 0; raises if mixed."""
        deg = None
        for i, c in enumerate(v):
            if c:
                d = self.degree_of_index(i)
                if deg is None:
                    deg = d
                elif deg != d:
                    raise ValueError("vector is not homogeneous")
        return deg

    def homogeneous_parts(self, v) -> dict[int, list[int]]:
        parts = {}
        for i, c in enumerate(v):
            if c:
                parts.setdefault(self.degree_of_index(i), [0] * self.dim)[i] = c
        return parts

    def embed_B(self, bvec_coords) -> list[int]:
        """B written in slot-1 coordinates of A (B basis is the slot basis)."""
        out = [0] * self.dim
        for i, c in enumerate(bvec_coords):
            out[i] = c
        return out

    def _verify_grading(self):
        alg = self.algebra
        nb, ng = self.dimB, self.Gbar.order
        for gi in range(ng):
            for hj in range(ng):
                prods = []
                for i in self.component_indices(gi):
                    for j in self.component_indices(hj):
                        prod = alg.table[i][j]
                        target = self.Gbar.mul(gi, hj)
                        for k, c in enumerate(prod):
                            if c and self.degree_of_index(k) != target:
                                raise ArithmeticError(
                                    "product degrees violate the grading")
                        prods.append(prod)
                if SpanSolver(self.field, prods, self.dim).dim != nb:
                    raise ArithmeticError(
                        "component products do not span the "
                        "full target component")
        if self.units[0] != alg.unit:
            raise ArithmeticError("identity-slot unit is not the unit")
        # unit laws: u_g u_h = beta u_{gh} with beta invertible in B
        for gi in range(ng):
            u = self.units[gi]
            if alg.mul(u, self.unit_invs[gi]) != alg.unit:
                raise ArithmeticError("slot unit has no two-sided inverse")
            if alg.mul(self.unit_invs[gi], u) != alg.unit:
                raise ArithmeticError("slot unit has no two-sided inverse")
            for hj in range(ng):
                prod = alg.mul(u, self.units[hj])
                tgt = self.Gbar.mul(gi, hj)
                beta = alg.mul(prod, self.unit_invs[tgt])
                if self.component_of_vector(beta) != 0:
                    raise ArithmeticError("unit cocycle left the identity slot")
            if self.component_of_vector(u) != gi:
                raise ArithmeticError("slot unit in the wrong component")

    @property
    def B(self) -> StructureConstantAlgebra:
        if not hasattr(self, "_B"):
            nb = self.dimB
            table = [[self.algebra.table[i][j][:nb] for j in range(nb)]
                     for i in range(nb)]
            for i in range(nb):
                for j in range(nb):
                    full = self.algebra.table[i][j]
                    if any(full[nb:]):
                        raise ArithmeticError("B is not closed")
            self._B = StructureConstantAlgebra(
                self.field, table, self.algebra.unit[:nb], name="B")
        return self._B

    def __repr__(self):
        return (f"<BlockExtension dim {self.dim} = {self.dimB}x{self.Gbar.order} "
                f"over {self.field!r}>")


def block_extension(field: FiniteField, G: PermGroup, N: PermGroup,
                    b: list[int] | None = None) -> BlockExtension:
    if not G.is_normal(N):
        raise ValueError("N must be normal in G")
    kN = GroupAlgebra(field, N)
    kG = GroupAlgebra(field, G)
    if b is None:
        b = principal_block(kN)
    if not kN.is_idempotent(b) or not kN.is_central(b):
        raise ValueError("b is not a central idempotent of kN")
    if not is_invariant(kN, b, G):
        raise ValueError("block is not G-invariant")
    Gbar = QuotientGroup(G, N)
    return BlockExtension(field, G, N, b, kN, kG, Gbar)


# -- graded acted algebras ---------------------------------------------------


class GradedActedAlgebra:
    """An algebra graded by Ḡ with a degree-twisting Ḡ-action.

    ``degree_of_index`` labels basis vectors; components may be empty.
    ``action`` holds one automorphism matrix per Ḡ index.  verify() checks
    the grading is multiplicative, the action is a group homomorphism by
    algebra automorphisms, and that it twists degrees by conjugation.
    """

    def __init__(self, algebra: StructureConstantAlgebra, Gbar,
                 degree_of_index: list[int], action: list[Matrix], name=""):
        self.algebra = algebra
        self.Gbar = Gbar
        self.degree_of_index = list(degree_of_index)
        self.action = action
        self.name = name
        self.components: dict[int, list[int]] = {}
        for i, d in enumerate(self.degree_of_index):
            self.components.setdefault(d, []).append(i)

    def component_indices(self, gi: int) -> list[int]:
        return self.components.get(gi, [])

    def support(self) -> list[int]:
        return sorted(self.components)

    def act(self, gi: int, v) -> list[int]:
        return self.action[gi].mul_vec(v)

    def verify(self):
        alg, Gbar = self.algebra, self.Gbar
        F = alg.field
        d = alg.dim
        for i in range(d):
            di = self.degree_of_index[i]
            for j in range(d):
                target = Gbar.mul(di, self.degree_of_index[j])
                for k, c in enumerate(alg.table[i][j]):
                    if c and self.degree_of_index[k] != target:
                        raise AssertionError("grading is not multiplicative")
        for gi in range(Gbar.order):
            T = self.action[gi]
            if T.mul_vec(alg.unit) != alg.unit:
                raise AssertionError("action does not fix the unit")
            cols = [T.mul_vec(standard_vector(d, i)) for i in range(d)]
            for i in range(d):
                for j in range(d):
                    lhs = T.mul_vec(alg.table[i][j])
                    rhs = alg.mul(cols[i], cols[j])
                    if lhs != rhs:
                        raise AssertionError("action is not by algebra maps")
            for i in range(d):
                tgt = Gbar.mul(Gbar.mul(gi, self.degree_of_index[i]), Gbar.inv(gi))
                for k, c in enumerate(cols[i]):
                    if c and self.degree_of_index[k] != tgt:
                        raise AssertionError("action does not twist degrees "
                                             "by conjugation")
        for gi in range(Gbar.order):
            for hj in range(Gbar.order):
                lhs = self.action[gi] * self.action[hj]
                if lhs != self.action[Gbar.mul(gi, hj)]:
                    raise AssertionError("action is not a group homomorphism")
        return True


class GradedActedHom:
    """Algebra map between graded acted algebras, degree-preserving and
    commuting with the group actions on both sides."""

    def __init__(self, source: GradedActedAlgebra, target: GradedActedAlgebra,
                 matrix: Matrix, name=""):
        self.source = source
        self.target = target
        self.matrix = matrix
        self.name = name

    def apply(self, v) -> list[int]:
        return self.matrix.mul_vec(v)

    def verify(self) -> bool:
        if not AlgebraHom(self.source.algebra, self.target.algebra,
                          self.matrix, name=self.name).verify():
            raise AssertionError("underlying map is not an algebra "
                                 "homomorphism")
        for i in range(self.source.algebra.dim):
            di = self.source.degree_of_index[i]
            for k, c in enumerate(self.matrix.column(i)):
                if c and self.target.degree_of_index[k] != di:
                    raise AssertionError("map does not preserve degrees")
        for gi in range(self.source.Gbar.order):
            if self.target.action[gi] * self.matrix != \
                    self.matrix * self.source.action[gi]:
                raise AssertionError("map does not intertwine the actions")
        return True


def group_subalgebra_graded_acted(A: BlockExtension,
                                  Csub: PermGroup) -> GradedActedAlgebra:
    """kC for a subgroup C of C_G(N), graded by cosets of N and acted on by
    coset-representative conjugation (independent of the representative,
    because elements of C commute with all of N)."""
    from .groups import compose, inverse_perm
    kC = GroupAlgebra(A.field, Csub)
    for c in Csub.elements:
        for n in A.N.elements:
            if compose(c, n) != compose(n, c):
                raise ValueError("subgroup does not centralize N")
    degrees = [A.Gbar.project_perm(c) for c in Csub.elements]
    action = []
    for gi in range(A.Gbar.order):
        rep = A.Gbar.section(gi)
        rep_inv = inverse_perm(rep)
        cols = []
        for c in Csub.elements:
            img = compose(compose(rep, c), rep_inv)
            if img not in Csub.index:
                raise ValueError("subgroup is not stable under conjugation")
            cols.append(standard_vector(kC.dim, Csub.index[img]))
        action.append(Matrix.from_columns(A.field, cols, kC.dim))
    C = GradedActedAlgebra(kC, A.Gbar, degrees, action,
                           name=f"k[C:{Csub.order}]")
    C.verify()
    return C


def structure_map_from_subgroup(Csub: PermGroup, A: BlockExtension,
                                CAB=None) -> GradedActedHom:
    """The map c ↦ b·c from kC into C_A(B), for C a subgroup of C_G(N).

    Verified to be an algebra homomorphism that preserves degrees and
    intertwines the conjugation actions.
    """
    C = group_subalgebra_graded_acted(A, Csub)
    if CAB is None:
        CAB = centralizer_graded(A)
    CA, ca_basis = CAB
    ca_solver = SpanSolver(A.field, ca_basis, A.dim)
    b_g = A.kn_to_kg(A.b)
    cols = []
    for i, c in enumerate(Csub.elements):
        amb = A.kG.mul(b_g, A.kG.element_vector(A.G.index[c]))
        a_coords = A.ambient_solver.coords(amb)
        if a_coords is None:
            raise AssertionError("b·c left the crossed product")
        got = A.component_of_vector(a_coords)
        if got != C.degree_of_index[i]:
            raise AssertionError("b·c is not homogeneous of the coset degree")
        cc = ca_solver.coords(a_coords)
        if cc is None:
            raise AssertionError("image of the structure map "
                                 "does not centralize B")
        cols.append(cc)
    zeta = GradedActedHom(C, CA, Matrix.from_columns(A.field, cols, CA.algebra.dim),
                          name="zeta")
    zeta.verify()
    return zeta


def compute_Gbar_b(A: BlockExtension, CAB=None,
                   centralizing_subgroup: PermGroup | None = None,
                   limit: int = 1 << 16) -> list[int]:
    """Degrees h̄ whose centralizer component contains a unit of C_A(B).

    Found by exhaustive search through each component (the component
    dimensions are tiny).  The result is checked to be a subgroup of Ḡ and,
    when a centralizing subgroup is supplied, to contain its image.
    """
    if CAB is None:
        CAB = centralizer_graded(A)
    CA, _ = CAB
    calg = CA.algebra
    F = A.field
    good = []
    for gi in range(A.Gbar.order):
        idxs = CA.component_indices(gi)
        if F.q ** len(idxs) > limit:
            raise ResourceLimit("component too large for invertibility scan")
        found = False
        for mask in range(1, F.q ** len(idxs)):
            v = [0] * calg.dim
            rem = mask
            for pos in idxs:
                v[pos] = rem % F.q
                rem //= F.q
            if calg.element_is_invertible(v):
                found = True
                break
        if found:
            good.append(gi)
    if A.Gbar.identity_index not in good:
        raise AssertionError("identity degree carries no unit")
    gs = set(good)
    for x in good:
        if A.Gbar.inv(x) not in gs:
            raise AssertionError("unit-carrying degrees are not "
                                 "inverse-closed")
        for y in good:
            if A.Gbar.mul(x, y) not in gs:
                raise AssertionError("unit-carrying degrees are not closed")
    if centralizing_subgroup is not None:
        for c in centralizing_subgroup.elements:
            if A.Gbar.project_perm(c) not in gs:
                raise AssertionError("image of the centralizing subgroup "
                                     "escapes the unit-carrying degrees")
    return sorted(good)


def centralizer_graded(A: BlockExtension, seed: int = 0):
    """C_A(B) with its grading and unit-conjugation action.

    Returns (GradedActedAlgebra, columns of the embedding into A).  The
    action is recomputed with perturbed units and must agree: the
    conjugation action of Ḡ on C_A(B) does not depend on the unit choice.
    """
    alg = A.algebra
    F = A.field
    nb = A.dimB
    b_basis = [A.embed_B(standard_vector(nb, i)) for i in range(nb)]

    basis = []
    degrees = []
    for gi in range(A.Gbar.order):
        idxs = list(A.component_indices(gi))
        rows = []
        for z in b_basis:
            Lz = []
            for i in idxs:
                e = standard_vector(alg.dim, i)
                diff = [F.sub(x, y) for x, y in
                        zip(alg.mul(e, z), alg.mul(z, e))]
                Lz.append(diff)
            # columns indexed by slot coords, rows by ambient coords
            M = Matrix.from_columns(F, Lz, alg.dim)
            rows.extend(M.rows)
        ker = kernel(Matrix(F, rows, len(idxs)))
        for kv in ker:
            amb = [0] * alg.dim
            for pos, c in zip(idxs, kv):
                amb[pos] = c
            basis.append(amb)
            degrees.append(gi)

    solver = SpanSolver(F, basis, alg.dim)
    d = len(basis)
    table = []
    for u in basis:
        row = []
        for v in basis:
            c = solver.coords(alg.mul(u, v))
            if c is None:
                raise ArithmeticError("centralizer is not closed under product")
            row.append(c)
        table.append(row)
    unit = solver.coords(alg.unit)
    if unit is None:
        raise ArithmeticError("unit is missing from the centralizer")
    calg = StructureConstantAlgebra(F, table, unit, name="C_A(B)")

    def action_from_units(units, unit_invs):
        mats = []
        for gi in range(A.Gbar.order):
            cols = []
            for v in basis:
                w = alg.mul(alg.mul(units[gi], v), unit_invs[gi])
                c = solver.coords(w)
                if c is None:
                    raise ArithmeticError("conjugation left the centralizer")
                cols.append(c)
            mats.append(Matrix.from_columns(F, cols, d))
        return mats

    action = action_from_units(A.units, A.unit_invs)

    rng = rng_for(seed, "unit-perturbation")
    alt_units, alt_invs = [], []
    for gi in range(A.Gbar.order):
        while True:
            beta_b = [rng.randrange(F.q) for _ in range(nb)]
            beta = A.embed_B(beta_b)
            inv = alg.element_inverse(beta)
            if inv is not None:
                break
        alt_units.append(alg.mul(beta, A.units[gi]))
        alt_invs.append(alg.mul(A.unit_invs[gi], inv))
    alt_action = action_from_units(alt_units, alt_invs)
    for gi in range(A.Gbar.order):
        if action[gi] != alt_action[gi]:
            raise AssertionError("centralizer action depends on unit choice")

    C = GradedActedAlgebra(calg, A.Gbar, degrees, action, name="C_A(B)")
    C.verify()
    return C, basis


def center_of_identity_component(A: BlockExtension) -> list[list[int]]:
    """Z(B) embedded in A, echelonized (for the C_A(B)_1 = Z(B) check)."""
    Bc = A.B.center()
    emb = [A.embed_B(z) for z in Bc]
    return SpanSolver(A.field, emb, A.algebra.dim).basis_rows()
