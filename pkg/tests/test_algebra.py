"""Structure-constant algebras: products, centers, idempotents, homs.

The block-idempotent answers are cross-checked against closed forms from
Lagrange interpolation, computed inside the tests.
"""

from gradedblocks import polys
from gradedblocks.algebra import (AlgebraHom, StructureConstantAlgebra,
                                  central_primitive_idempotents,
                                  enumerate_idempotents, is_local_algebra,
                                  minimal_polynomial, subalgebra)
from gradedblocks.field import GF
from gradedblocks.linalg import Matrix, standard_vector


def matrix_algebra(field, n):
    """M_n(k) on the basis e_{ij}, row-major."""
    dim = n * n

    def idx(i, j):
        return i * n + j

    table = []
    for a in range(dim):
        i, j = divmod(a, n)
        row = []
        for b in range(dim):
            k, l = divmod(b, n)
            v = [0] * dim
            if j == k:
                v[idx(i, l)] = 1
            row.append(v)
        table.append(row)
    unit = [0] * dim
    for i in range(n):
        unit[idx(i, i)] = 1
    return StructureConstantAlgebra(field, table, unit, name=f"M{n}")


def truncated_poly_algebra(field, n):
    """k[x]/(x^n) on the basis 1, x, ..., x^{n-1}."""
    table = []
    for i in range(n):
        row = []
        for j in range(n):
            v = [0] * n
            if i + j < n:
                v[i + j] = 1
            row.append(v)
        table.append(row)
    return StructureConstantAlgebra(field, table, standard_vector(n, 0),
                                    name=f"k[x]/x^{n}")


def poly_quotient_algebra(field, modulus):
    """k[x]/(f) for a monic modulus given by its coefficient list."""
    n = len(modulus) - 1
    table = []
    for i in range(n):
        row = []
        for j in range(n):
            xi = [0] * i + [1]
            xj = [0] * j + [1]
            r = polys.mod(field, polys.mul(field, xi, xj), modulus)
            row.append(list(r) + [0] * (n - len(r)))
        table.append(row)
    return StructureConstantAlgebra(field, table, standard_vector(n, 0))


def test_matrix_algebra_basics():
    F = GF(5)
    M2 = matrix_algebra(F, 2)
    e01 = standard_vector(4, 1)
    e10 = standard_vector(4, 2)
    assert M2.mul(e01, e10) == [1, 0, 0, 0]
    assert M2.mul(e10, e01) == [0, 0, 0, 1]
    assert M2.mul(e01, e01) == [0, 0, 0, 0]


def test_matrix_algebra_center_is_scalars():
    F = GF(5)
    M2 = matrix_algebra(F, 2)
    Z = M2.center()
    assert len(Z) == 1
    assert Z[0] == M2.unit


def test_matrix_algebra_single_block_not_local():
    F = GF(5)
    M2 = matrix_algebra(F, 2)
    bs = central_primitive_idempotents(M2)
    assert bs == [M2.unit]
    local, witness = is_local_algebra(M2)
    assert not local
    assert M2.is_idempotent(witness)
    assert witness not in ([0] * 4, M2.unit)


def test_matrix_inverse():
    F = GF(5)
    M2 = matrix_algebra(F, 2)
    a = [1, 2, 3, 4]
    inv = M2.element_inverse(a)
    assert inv is not None
    assert M2.mul(a, inv) == M2.unit
    assert M2.mul(inv, a) == M2.unit
    nilp = [0, 1, 0, 0]
    assert M2.element_inverse(nilp) is None
    assert not M2.element_is_invertible(nilp)


def test_truncated_polynomials_are_local():
    F = GF(4)
    A = truncated_poly_algebra(F, 2)
    assert A.center() == [[1, 0], [0, 1]]
    assert central_primitive_idempotents(A) == [A.unit]
    assert is_local_algebra(A)[0]
    x = [0, 1]
    assert minimal_polynomial(A, x) == [0, 0, 1]
    e11_minpoly = minimal_polynomial(matrix_algebra(GF(5), 2),
                                     [1, 0, 0, 0])
    assert e11_minpoly == [0, 4, 1]


def test_idempotent_enumeration_in_local_algebra():
    F = GF(2)
    A = truncated_poly_algebra(F, 3)

    def mul_coords(u, v):
        return A.mul(u, v)

    # zero is skipped by design; the only other idempotent in a local
    # algebra is the unit
    found = enumerate_idempotents(F, mul_coords, A.dim)
    assert found == [[1, 0, 0]]


def test_blocks_of_split_cyclic_algebra_match_interpolation():
    # k[x]/(x^4 - 1) over GF(5): four linear factors, four blocks.
    F = GF(5)
    modulus = [4, 0, 0, 0, 1]
    A = poly_quotient_algebra(F, modulus)
    got = central_primitive_idempotents(A)
    assert len(got) == 4

    # Oracle: Lagrange idempotents e_r = prod_{s != r} (x - s)/(r - s).
    roots = [r for r in range(5) if F.pow(r, 4) == 1]
    assert len(roots) == 4
    expected = []
    for r in roots:
        num = [1]
        den = 1
        for s in roots:
            if s != r:
                num = polys.mul(F, num, [F.neg(s), 1])
                den = F.mul(den, F.sub(r, s))
        num = [F.mul(c, F.inv(den)) for c in num]
        num = polys.mod(F, num, modulus)
        expected.append(list(num) + [0] * (4 - len(num)))
    assert sorted(got) == sorted(expected)
    total = [0] * 4
    for e in got:
        total = [F.add(a, b) for a, b in zip(total, e)]
    assert total == A.unit
    for i, e in enumerate(got):
        for j, f in enumerate(got):
            prod = A.mul(e, f)
            assert prod == (e if i == j else [0] * 4)


def test_blocks_of_nonsplit_semisimple_algebra():
    # k[x]/(x^2 + 1) over GF(3) is a field: one block, and it is local.
    F = GF(3)
    A = poly_quotient_algebra(F, [1, 0, 1])
    assert central_primitive_idempotents(A) == [A.unit]
    assert is_local_algebra(A)[0]
    assert A.element_is_invertible([0, 1])


def test_subalgebra_of_diagonal_matrices():
    F = GF(5)
    M2 = matrix_algebra(F, 2)
    diag = [standard_vector(4, 0), standard_vector(4, 3)]
    D, solver = subalgebra(M2, diag)
    assert D.dim == 2
    bs = central_primitive_idempotents(D)
    assert len(bs) == 2
    for e in bs:
        amb = [0] * 4
        for c, basis_vec in zip(e, diag):
            for i, x in enumerate(basis_vec):
                amb[i] = F.add(amb[i], F.mul(c, x))
        assert M2.is_idempotent(amb)


def test_algebra_hom_verify():
    F = GF(3)
    A = poly_quotient_algebra(F, [2, 0, 1])  # x^2 = 1, so k[C2] in disguise
    k1 = StructureConstantAlgebra(F, [[[1]]], [1], name="k")
    aug = AlgebraHom(A, k1, Matrix(F, [[1, 1]], 2), name="aug")
    assert aug.verify()
    assert aug.is_surjective()
    # x -> -1 is the other character, also a homomorphism
    assert AlgebraHom(A, k1, Matrix(F, [[1, 2]], 2)).verify()
    # x -> 0 is unital but not multiplicative
    assert not AlgebraHom(A, k1, Matrix(F, [[1, 0]], 2)).verify()


def test_power_and_product_helpers():
    F = GF(5)
    M2 = matrix_algebra(F, 2)
    a = [1, 1, 0, 1]
    sq = M2.mul(a, a)
    assert M2.power(a, 2) == sq
    assert M2.power(a, 1) == a
    assert M2.power(a, 0) == M2.unit
    assert M2.product(a, a, a) == M2.mul(sq, a)


def test_opposite_algebra_reverses_products():
    F = GF(5)
    M2 = matrix_algebra(F, 2)
    Mop = M2.opposite()
    e01 = standard_vector(4, 1)
    e10 = standard_vector(4, 2)
    assert Mop.mul(e01, e10) == M2.mul(e10, e01)
    assert Mop.unit == M2.unit


def test_center_of_group_like_table():
    # Direct product table C2 x C2 over GF(3): commutative, 4 blocks.
    F = GF(3)
    mul = {(i, j): i ^ j for i in range(4) for j in range(4)}
    table = [[standard_vector(4, mul[i, j]) for j in range(4)]
             for i in range(4)]
    A = StructureConstantAlgebra(F, table, standard_vector(4, 0))
    assert len(A.center()) == 4
    bs = central_primitive_idempotents(A)
    assert len(bs) == 4
