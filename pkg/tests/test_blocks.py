"""Blocks of group algebras and the graded crossed products built on them.

Every derived expectation is recomputed here by an independent route:
block lists against exhaustive idempotent enumeration in the center,
principal blocks against the trivial-module action, centralizer components
against hand-checked closed forms.
"""

import itertools

import pytest

from gradedblocks.blocks import (BlockExtension, GroupAlgebra, blocks,
                                 block_extension, center_of_identity_component,
                                 centralizer_graded, compute_Gbar_b,
                                 is_invariant, principal_block,
                                 structure_map_from_subgroup, trivial_module)
from gradedblocks.field import GF
from gradedblocks.groups import (QuotientGroup, alternating, cyclic,
                                 direct_product, perm_from_cycles, symmetric,
                                 trivial_group)
from gradedblocks.linalg import SpanSolver, standard_vector


def same_span(F, rows_a, rows_b, ncols):
    sa = SpanSolver(F, list(rows_a), ncols)
    sb = SpanSolver(F, list(rows_b), ncols)
    if sa.dim != sb.dim:
        return False
    return all(sb.coords(r) is not None for r in rows_a)


def exhaustive_primitive_central_idempotents(ga):
    """Oracle: scan the span of the center basis elementwise."""
    F = ga.field
    zbasis = ga.center()
    idems = []
    for t in itertools.product(range(F.q), repeat=len(zbasis)):
        v = [0] * ga.dim
        for c, z in zip(t, zbasis):
            if c:
                for i, x in enumerate(z):
                    v[i] = F.add(v[i], F.mul(c, x))
        if any(v) and ga.mul(v, v) == v:
            idems.append(v)
    primitive = []
    for e in idems:
        if any(f != e and ga.mul(e, f) == f for f in idems):
            continue
        primitive.append(e)
    return primitive


# -- group algebras ----------------------------------------------------------


def test_group_algebra_trivial_group():
    ga = GroupAlgebra(GF(2), trivial_group())
    assert ga.dim == 1
    assert ga.unit == [1]


def test_group_algebra_c3_commutative():
    ga = GroupAlgebra(GF(2), cyclic(3))
    assert ga.dim == 3
    for i in range(3):
        for j in range(3):
            assert ga.table[i][j] == ga.table[j][i]


def test_group_algebra_s4_center_dimension():
    # 5 conjugacy classes; the generic commutant kernel must agree with the
    # class-sum basis.
    ga = GroupAlgebra(GF(3), symmetric(4))
    assert ga.dim == 24
    class_sums = ga.center()
    assert len(class_sums) == 5
    from gradedblocks.algebra import StructureConstantAlgebra
    generic = StructureConstantAlgebra.center(ga)
    assert same_span(ga.field, class_sums, generic, 24)


def test_augmentation():
    ga = GroupAlgebra(GF(4), cyclic(3))
    assert ga.augmentation(ga.sum_of(cyclic(3).elements)) == 3 % 2
    assert ga.augmentation([2, 3, 1]) == 0


# -- blocks ------------------------------------------------------------------


def test_blocks_gf4_a3_against_exhaustive_scan():
    ga = GroupAlgebra(GF(4), alternating(3))
    got = blocks(ga)
    assert len(got) == 3
    oracle = exhaustive_primitive_central_idempotents(ga)
    assert sorted(got) == sorted(oracle)
    # each block spans a one-dimensional ideal
    for e in got:
        span = SpanSolver(ga.field, [ga.mul(e, g) for g in
                                     [standard_vector(3, i) for i in range(3)]],
                          3)
        assert span.dim == 1


def test_blocks_gf3_c3_single():
    ga = GroupAlgebra(GF(3), cyclic(3))
    assert blocks(ga) == [ga.unit]


def test_blocks_gf3_a4_against_exhaustive_scan():
    ga = GroupAlgebra(GF(3), alternating(4))
    got = blocks(ga)
    assert len(got) == 2
    assert len(ga.center()) == 4
    oracle = exhaustive_primitive_central_idempotents(ga)
    assert sorted(got) == sorted(oracle)
    # principal block is the sum over the Klein four-subgroup
    v4 = [g for g in alternating(4).elements if perm_square_is_identity(g)]
    assert len(v4) == 4
    e0 = ga.sum_of(v4)
    assert e0 in got
    assert principal_block(ga) == e0


def perm_square_is_identity(g):
    return all(g[g[i]] == i for i in range(len(g)))


def test_principal_block_gf3_c3_is_unit():
    ga = GroupAlgebra(GF(3), cyclic(3))
    assert principal_block(ga) == ga.unit


def test_principal_block_gf4_a3_closed_form():
    # 1 + n + n**2: fixed by hand arithmetic mod 2.
    ga = GroupAlgebra(GF(4), alternating(3))
    b = principal_block(ga)
    assert b == [1, 1, 1]
    assert ga.mul(b, b) == b


def test_principal_block_by_trivial_module_action():
    for ga in (GroupAlgebra(GF(3), alternating(4)),
               GroupAlgebra(GF(4), alternating(3))):
        triv = trivial_module(ga)
        live = [e for e in blocks(ga)
                if not triv.action_of(e).is_zero()]
        assert live == [principal_block(ga)]


def test_is_invariant():
    ga = GroupAlgebra(GF(4), alternating(3))
    S3 = symmetric(3)
    b0 = principal_block(ga)
    assert is_invariant(ga, b0, S3)
    others = [e for e in blocks(ga) if e != b0]
    assert len(others) == 2
    t = perm_from_cycles(3, [[0, 1]])
    assert ga.conjugate_vector(others[0], t) == others[1]
    assert not is_invariant(ga, others[0], S3)
    assert not is_invariant(ga, others[1], S3)
    # conjugation by elements of A3 itself fixes central elements
    assert is_invariant(ga, others[0], alternating(3))


# -- crossed products ----------------------------------------------------------


def test_block_extension_trivial_quotient():
    ext = block_extension(GF(4), cyclic(3), cyclic(3))
    assert ext.Gbar.order == 1
    assert ext.dim == 1
    assert ext.dimB == 1
    assert ext.algebra.unit == [1]


def test_block_extension_s3():
    ext = block_extension(GF(4), symmetric(3), alternating(3))
    assert ext.dim == 2
    assert ext.dimB == 1
    assert ext.Gbar.order == 2
    assert ext.B.dim == 1
    u = ext.units[1]
    assert ext.algebra.mul(u, u) == ext.algebra.unit


def test_block_extension_s4():
    ext = block_extension(GF(3), symmetric(4), alternating(4))
    assert ext.dimB == 3
    assert ext.dim == 2 * ext.dimB
    # B is isomorphic to kC3: commutative with a cube root of unity basis
    B = ext.B
    for i in range(3):
        for j in range(3):
            assert B.table[i][j] == B.table[j][i]


def test_block_extension_c2xs3():
    G = direct_product(cyclic(2), symmetric(3))
    N = direct_product(cyclic(2), alternating(3))
    kN = GroupAlgebra(GF(3), N)
    bs = blocks(kN)
    assert len(bs) == 2
    b = principal_block(kN)
    c2 = N.index[(1, 0, 2, 3, 4)]
    expected = [0] * 6
    expected[0] = 2
    expected[c2] = 2
    assert b == expected
    other = [e for e in bs if e != b][0]
    expected_other = [0] * 6
    expected_other[0] = 2
    expected_other[c2] = 1
    assert other == expected_other
    ext = block_extension(GF(3), G, N)
    assert ext.dimB == 3
    assert ext.dim == 6
    assert ext.Gbar.order == 2


def test_block_extension_rejects_swapped_block():
    ga = GroupAlgebra(GF(4), alternating(3))
    moved = [e for e in blocks(ga) if e != principal_block(ga)][0]
    with pytest.raises(ValueError):
        block_extension(GF(4), symmetric(3), alternating(3), b=moved)


def test_block_extension_rejects_non_normal():
    S4 = symmetric(4)
    H = S4.subgroup_generated([perm_from_cycles(4, [[0, 1, 2]])])
    with pytest.raises(ValueError):
        block_extension(GF(3), S4, H)


# -- graded centralizers -------------------------------------------------------


def test_centralizer_s3_is_whole_algebra():
    ext = block_extension(GF(4), symmetric(3), alternating(3))
    CA, basis = centralizer_graded(ext)
    assert CA.algebra.dim == 2
    assert [len(CA.component_indices(i)) for i in range(2)] == [1, 1]
    assert same_span(ext.field, basis,
                     [standard_vector(2, 0), standard_vector(2, 1)], 2)


def test_centralizer_s4_identity_component_is_center_of_b():
    ext = block_extension(GF(3), symmetric(4), alternating(4))
    CA, basis = centralizer_graded(ext)
    # slot dims: Z(B) = B has dimension 3; the other slot is the span of
    # the socle of B times the unit (the twist inverts the 3-cycles, and
    # only socle elements absorb the difference)
    assert [len(CA.component_indices(i)) for i in range(2)] == [3, 1]
    slot0 = [basis[i] for i in CA.component_indices(0)]
    zb = center_of_identity_component(ext)
    assert same_span(ext.field, slot0, zb, ext.dim)


def test_centralizer_c2xs3():
    G = direct_product(cyclic(2), symmetric(3))
    N = direct_product(cyclic(2), alternating(3))
    ext = block_extension(GF(3), G, N)
    CA, basis = centralizer_graded(ext)
    assert [len(CA.component_indices(i)) for i in range(2)] == [3, 1]
    slot0 = [basis[i] for i in CA.component_indices(0)]
    assert same_span(ext.field, slot0, center_of_identity_component(ext),
                     ext.dim)


# -- structure maps -------------------------------------------------------------


def test_structure_map_trivial_centralizer_s4():
    ext = block_extension(GF(3), symmetric(4), alternating(4))
    Csub = symmetric(4).centralizer(alternating(4).elements)
    assert Csub.order == 1
    CAB = centralizer_graded(ext)
    zeta = structure_map_from_subgroup(Csub, ext, CAB)
    assert zeta.source.algebra.dim == 1
    assert zeta.apply([1]) == zeta.target.algebra.unit


def test_structure_map_whole_center_c2xs3():
    G = direct_product(cyclic(2), symmetric(3))
    N = direct_product(cyclic(2), alternating(3))
    ext = block_extension(GF(3), G, N)
    Csub = G.centralizer(N.elements)
    assert Csub.order == 6
    CAB = centralizer_graded(ext)
    CA, _ = CAB
    zeta = structure_map_from_subgroup(Csub, ext, CAB)
    # C_G(N) = N here, so the whole image lies in the identity slot and
    # spans Z(B) = B
    slot0 = set(CA.component_indices(0))
    for i in range(6):
        col = zeta.matrix.column(i)
        assert all(k in slot0 for k, c in enumerate(col) if c)
    from gradedblocks.linalg import rank
    assert rank(ext.field, zeta.matrix.transpose().rows) == 3


def test_structure_map_inst_t_collapses_to_unit():
    ext = block_extension(GF(4), cyclic(3), cyclic(3))
    zeta = structure_map_from_subgroup(cyclic(3), ext, centralizer_graded(ext))
    assert zeta.matrix.tolist() == [[1, 1, 1]]


# -- unit-carrying degrees ------------------------------------------------------


def test_gbar_b_full_for_s3():
    ext = block_extension(GF(4), symmetric(3), alternating(3))
    assert compute_Gbar_b(ext) == [0, 1]


def test_gbar_b_trivial_quotient():
    ext = block_extension(GF(4), cyclic(3), cyclic(3))
    assert compute_Gbar_b(ext) == [0]


def test_gbar_b_collapses_for_s4():
    ext = block_extension(GF(3), symmetric(4), alternating(4))
    Csub = symmetric(4).centralizer(alternating(4).elements)
    assert compute_Gbar_b(ext, centralizing_subgroup=Csub) == [0]


def test_gbar_b_collapses_for_c2xs3():
    G = direct_product(cyclic(2), symmetric(3))
    N = direct_product(cyclic(2), alternating(3))
    ext = block_extension(GF(3), G, N)
    assert compute_Gbar_b(ext, centralizing_subgroup=G.centralizer(N.elements)) \
        == [0]


# -- a cross-slot coefficient algebra -------------------------------------------


def build_cross_slot_extension():
    """G = C2 x S3 with N the rotation subgroup of the S3 factor: the
    centralizer C_G(N) = C2 x A3 hits two cosets of N, so coefficient
    algebras built from it are graded with support beyond the identity."""
    G = direct_product(cyclic(2), symmetric(3))
    N = direct_product(trivial_group(2), alternating(3))
    return G, N, block_extension(GF(3), G, N)


def test_cross_slot_extension_shape():
    G, N, ext = build_cross_slot_extension()
    assert N.order == 3
    assert ext.Gbar.order == 4
    assert ext.dimB == 3
    assert ext.dim == 12
    assert all(ext.Gbar.element_order(i) in (1, 2) for i in range(4))


def test_cross_slot_gbar_b_is_proper_subgroup():
    G, N, ext = build_cross_slot_extension()
    Csub = G.centralizer(N.elements)
    assert Csub.order == 6
    got = compute_Gbar_b(ext, centralizing_subgroup=Csub)
    assert len(got) == 2
    central_degree = ext.Gbar.project_perm((1, 0, 2, 3, 4))
    assert got == sorted([0, central_degree])


def test_cross_slot_structure_map_is_graded():
    G, N, ext = build_cross_slot_extension()
    Csub = G.centralizer(N.elements)
    CAB = centralizer_graded(ext)
    zeta = structure_map_from_subgroup(Csub, ext, CAB)
    assert sorted(zeta.source.support()) == \
        sorted({0, ext.Gbar.project_perm((1, 0, 2, 3, 4))})
    from gradedblocks.linalg import rank
    assert rank(ext.field, zeta.matrix.transpose().rows) == 6
