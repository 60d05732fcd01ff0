"""Module layer: hom spaces, endomorphism algebras, direct-sum splitting.

Group algebras supply the test modules; the expected decomposition shapes
are classical and re-derived in comments where not immediate.
"""

from gradedblocks.blocks import (GroupAlgebra, permutation_module,
                                 regular_module, trivial_module)
from gradedblocks.field import GF
from gradedblocks.groups import alternating, cyclic, symmetric
from gradedblocks.linalg import Matrix, inverse
from gradedblocks.modules import (AlgebraModule, decompose_module,
                                  endomorphism_algebra, hom_space,
                                  isotypic_representatives, module_iso)


def test_regular_module_of_c3_in_coprime_characteristic():
    # GF(4) contains the cube roots of unity, so kC3 splits into three
    # one-dimensional summands.
    ga = GroupAlgebra(GF(4), cyclic(3))
    reg = regular_module(ga)
    parts, report = decompose_module(reg)
    assert sorted(s.module.dim for s in parts) == [1, 1, 1]
    assert len(isotypic_representatives(parts)) == 3


def test_regular_module_of_c3_in_dividing_characteristic():
    # kC3 over GF(3) is local, hence indecomposable as a module over itself.
    ga = GroupAlgebra(GF(3), cyclic(3))
    reg = regular_module(ga)
    parts, report = decompose_module(reg)
    assert len(parts) == 1
    assert parts[0].module.dim == 3
    assert parts[0].certificate in ("end_dim_one", "exhaustive_idempotent_scan")


def test_regular_module_of_c6_splits_into_blocks_only():
    # char 3: kC6 = B+ x B-, each block a local algebra of dimension 3.
    ga = GroupAlgebra(GF(3), cyclic(6))
    reg = regular_module(ga)
    parts, report = decompose_module(reg)
    assert sorted(s.module.dim for s in parts) == [3, 3]
    assert len(isotypic_representatives(parts)) == 2


def test_a4_natural_permutation_module_char3():
    # On 4 points over GF(3): all-ones spans a trivial summand; the zero-sum
    # complement is the 3-dimensional module induced from a faithful
    # character of V4, whose endomorphism ring is just scalars.
    A4 = alternating(4)
    ga = GroupAlgebra(GF(3), A4)
    M = permutation_module(ga, [g for g in A4.elements])
    parts, report = decompose_module(M)
    assert sorted(s.module.dim for s in parts) == [1, 3]
    big = max(parts, key=lambda s: s.module.dim)
    assert len(hom_space(big.module, big.module)) == 1
    triv = min(parts, key=lambda s: s.module.dim)
    assert all(mat.is_identity() for mat in triv.module.action)


def test_hom_space_trivial_into_regular():
    # Hom(k, kC3) in char 3 is the socle, which is one-dimensional.
    ga = GroupAlgebra(GF(3), cyclic(3))
    H = hom_space(trivial_module(ga), regular_module(ga))
    assert len(H) == 1
    img = H[0].column(0)
    assert img in ([1, 1, 1], [2, 2, 2])


def test_hom_space_regular_self():
    ga = GroupAlgebra(GF(3), cyclic(3))
    reg = regular_module(ga)
    assert len(hom_space(reg, reg)) == 3


def test_endomorphism_algebra_of_regular_c3():
    ga = GroupAlgebra(GF(4), cyclic(3))
    reg = regular_module(ga)
    E, H, solver = endomorphism_algebra(reg)
    assert E.dim == 3
    for i in range(3):
        for j in range(3):
            assert E.table[i][j] == E.table[j][i]


def test_endomorphism_algebra_of_square_is_2x2_matrices():
    # k + k as a kC3-module with trivial action on each line.
    ga = GroupAlgebra(GF(3), cyclic(3))
    F = ga.field
    ident = Matrix.identity(F, 2)
    M = AlgebraModule(ga, 2, [ident] * 3, name="triv^2")
    E, H, solver = endomorphism_algebra(M)
    assert E.dim == 4
    assert len(E.center()) == 1
    parts, report = decompose_module(M)
    assert sorted(s.module.dim for s in parts) == [1, 1]
    assert len(isotypic_representatives(parts)) == 1


def test_module_iso_positive_and_negative():
    ga = GroupAlgebra(GF(3), cyclic(3))
    perm = permutation_module(ga, [g for g in cyclic(3).elements])
    reg = regular_module(ga)
    status, T = module_iso(perm, reg)
    assert status == "iso"
    assert inverse(T) is not None

    ga4 = GroupAlgebra(GF(4), cyclic(3))
    parts, report = decompose_module(regular_module(ga4))
    ones = [s.module for s in parts]
    for i in range(3):
        for j in range(3):
            if i != j:
                status, _ = module_iso(ones[i], ones[j])
                assert status == "not_isomorphic"


def test_module_iso_respects_action():
    ga = GroupAlgebra(GF(3), cyclic(3))
    perm = permutation_module(ga, [g for g in cyclic(3).elements])
    reg = regular_module(ga)
    status, T = module_iso(perm, reg)
    assert status == "iso"
    for i in range(ga.dim):
        assert reg.action[i] * T == T * perm.action[i]


def test_decompose_s3_regular_char2():
    # kS3 in characteristic 2 is kC2 x M2(k): the regular module is the
    # length-2 projective cover of the trivial module plus two copies of the
    # 2-dimensional simple.
    ga = GroupAlgebra(GF(4), symmetric(3))
    reg = regular_module(ga)
    parts, report = decompose_module(reg)
    assert sorted(s.module.dim for s in parts) == [2, 2, 2]
    assert len(isotypic_representatives(parts)) == 2


def test_summand_witnesses_are_module_maps():
    ga = GroupAlgebra(GF(3), cyclic(6))
    reg = regular_module(ga)
    parts, report = decompose_module(reg)
    for s in parts:
        for i in range(ga.dim):
            lhs = reg.action[i] * s.inclusion
            rhs = s.inclusion * s.module.action[i]
            assert lhs == rhs
