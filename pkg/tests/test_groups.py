"""Permutation group layer: orders, quotients, Sylow subgroups, products.

Expected values here are classical group facts checked by hand or by the
exhaustive constructions in the tests themselves.
"""

import pytest

from gradedblocks.groups import (PermGroup, QuotientGroup, alternating,
                                 compose, conjugation_image, cyclic,
                                 direct_product, fiber_product, identity_perm,
                                 inverse_perm, klein_four, perm_from_cycles,
                                 perm_order, symmetric, trivial_group)


def test_compose_applies_right_factor_first():
    p = (1, 0, 2)
    q = (1, 2, 0)
    assert compose(p, q) == (0, 2, 1)
    assert compose(q, p) == (2, 1, 0)
    assert compose(p, inverse_perm(p)) == identity_perm(3)


def test_perm_from_cycles_and_order():
    t = perm_from_cycles(4, [[0, 1]])
    assert t == (1, 0, 2, 3)
    assert perm_order(t) == 2
    c = perm_from_cycles(4, [[0, 1, 2, 3]])
    assert perm_order(c) == 4
    assert perm_order(perm_from_cycles(6, [[0, 1], [2, 3, 4]])) == 6


def test_standard_group_orders():
    assert symmetric(3).order == 6
    assert symmetric(4).order == 24
    assert alternating(3).order == 3
    assert alternating(4).order == 12
    assert klein_four().order == 4
    assert cyclic(6).order == 6
    assert trivial_group().order == 1


def test_elements_sorted_and_identity_first():
    G = symmetric(3)
    assert G.elements[0] == identity_perm(3)
    assert G.elements == sorted(G.elements)


def test_exponent():
    assert symmetric(3).exponent() == 6
    assert alternating(4).exponent() == 6
    assert klein_four().exponent() == 2


def test_normality_and_centers():
    S4, A4 = symmetric(4), alternating(4)
    assert S4.is_normal(A4)
    V4 = S4.subgroup_generated(
        [perm_from_cycles(4, [[0, 1], [2, 3]]),
         perm_from_cycles(4, [[0, 2], [1, 3]])])
    assert S4.is_normal(V4)
    Q = S4.subgroup_generated([perm_from_cycles(4, [[0, 1, 2]])])
    assert not S4.is_normal(Q)
    assert S4.center().order == 1
    assert A4.center().order == 1
    assert cyclic(6).center().order == 6


def test_centralizers():
    S4, A4 = symmetric(4), alternating(4)
    assert S4.centralizer(A4.elements).order == 1
    G = direct_product(cyclic(2), symmetric(3))
    N = direct_product(cyclic(2), alternating(3))
    assert G.contains_group(N)
    assert G.is_normal(N)
    C = G.centralizer(N.elements)
    assert C.order == 6
    assert set(C.elements) == set(N.elements)


def test_sylow_subgroups():
    S4 = symmetric(4)
    assert S4.sylow_subgroup(2).order == 8
    assert S4.sylow_subgroup(3).order == 3
    A4 = alternating(4)
    assert A4.sylow_subgroup(2).order == 4
    assert A4.sylow_subgroup(3).order == 3
    assert alternating(3).sylow_subgroup(2).order == 1


def test_normalizer_of_sylow():
    S4 = symmetric(4)
    Q = alternating(4).sylow_subgroup(3)
    Gp = S4.normalizer(Q)
    assert Gp.order == 6
    assert Gp.contains_group(Q)


def test_quotient_lex_least_section():
    S4, A4 = symmetric(4), alternating(4)
    Gbar = QuotientGroup(S4, A4)
    assert Gbar.order == 2
    assert Gbar.section(0) == identity_perm(4)
    assert Gbar.section(1) == (0, 1, 3, 2)
    assert Gbar.project_perm((1, 0, 2, 3)) == 1
    assert Gbar.mul(1, 1) == 0
    assert Gbar.inv(1) == 1


def test_quotient_c2xs3_mod_c6():
    G = direct_product(cyclic(2), symmetric(3))
    N = direct_product(cyclic(2), alternating(3))
    Gbar = QuotientGroup(G, N)
    assert Gbar.order == 2
    assert Gbar.element_order(1) == 2


def test_quotient_s4_mod_v4():
    S4 = symmetric(4)
    V4 = S4.subgroup_generated(
        [perm_from_cycles(4, [[0, 1], [2, 3]]),
         perm_from_cycles(4, [[0, 2], [1, 3]])])
    Gbar = QuotientGroup(S4, V4)
    assert Gbar.order == 6
    orders = sorted(Gbar.element_order(i) for i in range(6))
    assert orders == [1, 2, 2, 2, 3, 3]


def test_fiber_product_over_parity():
    S3 = symmetric(3)

    def parity(g):
        n = 0
        for i in range(3):
            for j in range(i + 1, 3):
                if g[i] > g[j]:
                    n += 1
        return n % 2

    K = fiber_product(S3, S3, lambda g, h: parity(g) == parity(h))
    assert K.order == 18
    diag = [tuple(list(g) + [x + 3 for x in g]) for g in S3.elements]
    assert all(d in K.index for d in diag)


def test_conjugation_image_distinguishes_outer_action():
    gens_a4 = [perm_from_cycles(6, [[0, 1, 2]]), perm_from_cycles(6, [[1, 2, 3]])]
    N = PermGroup.from_generators(6, gens_a4)
    assert N.order == 12
    G = PermGroup.from_generators(6, gens_a4 + [perm_from_cycles(6, [[0, 1]])])
    Ghat = PermGroup.from_generators(
        6, gens_a4 + [perm_from_cycles(6, [[0, 1], [4, 5]])])
    Gneg = PermGroup.from_generators(6, gens_a4 + [perm_from_cycles(6, [[4, 5]])])
    assert G.order == Ghat.order == Gneg.order == 24
    img_g = conjugation_image(G, N)
    img_hat = conjugation_image(Ghat, N)
    img_neg = conjugation_image(Gneg, N)
    assert img_g == img_hat
    assert img_neg != img_g
    assert len(img_g) == 24
    assert len(img_neg) == 12
    assert img_neg < img_g


def test_product_set_and_subgroup():
    S4 = symmetric(4)
    A4 = alternating(4)
    C2 = S4.subgroup_generated([perm_from_cycles(4, [[0, 1]])])
    prod = S4.product_set(A4, C2)
    assert len(prod) == 24


def test_conjugacy_class_counts():
    assert len(symmetric(3).conjugacy_classes()) == 3
    assert len(symmetric(4).conjugacy_classes()) == 5
    assert len(alternating(4).conjugacy_classes()) == 4
    assert len(cyclic(6).conjugacy_classes()) == 6


def test_from_generators_rejects_mixed_degrees():
    with pytest.raises(Exception):
        PermGroup.from_generators(3, [(1, 0, 2), (0, 1)])
