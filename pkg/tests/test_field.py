"""Field arithmetic against integers-mod-p and hand-checked GF(4)/GF(9) tables."""

import pytest
from hypothesis import given, settings, strategies as st

from gradedblocks.field import GF, FiniteField, smallest_irreducible


def test_gf4_tables_match_hand_computation():
    # GF(4) = F2[x]/(x^2+x+1), elements 0,1,x,x+1 encoded 0,1,2,3.
    F = GF(4)
    assert F.modulus == (1, 1, 1)
    assert F.mul(2, 2) == 3          # x*x = x+1
    assert F.mul(2, 3) == 1          # x*(x+1) = x^2+x = 1
    assert F.mul(3, 3) == 2          # (x+1)^2 = x^2+1 = x
    assert F.add(2, 3) == 1
    assert F.add(1, 1) == 0
    assert F.inv(2) == 3 and F.inv(3) == 2
    assert F.generator == 2
    assert F.frobenius(2) == 3       # squaring

def test_gf9_modulus_and_orders():
    F = GF(9)
    assert F.modulus == (1, 0, 1)    # x^2 + 1, smallest by low-part encoding
    # element 3 encodes x, and x^2 = -1 = 2
    assert F.mul(3, 3) == 2
    orders = sorted(F.element_order(a) for a in range(1, 9))
    assert orders == [1, 2, 4, 4, 8, 8, 8, 8]
    assert F.element_order(F.generator) == 8

def test_prime_field_is_mod_p():
    F = GF(13)
    for a in range(13):
        for b in range(13):
            assert F.add(a, b) == (a + b) % 13
            assert F.mul(a, b) == (a * b) % 13
    assert F.inv(5) == pow(5, 11, 13)

def test_smallest_irreducible_is_irreducible():
    assert smallest_irreducible(2, 2) == (1, 1, 1)
    assert smallest_irreducible(3, 2) == (1, 0, 1)
    # degree 3 over GF(2): x^3 + x + 1
    assert smallest_irreducible(2, 3) == (1, 1, 0, 1)

def test_bad_inputs():
    with pytest.raises(ValueError):
        FiniteField(4)
    with pytest.raises(ValueError):
        GF(12)
    with pytest.raises(ZeroDivisionError):
        GF(4).inv(0)

@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 4, 5, 9, 13]), st.data())
def test_field_axioms(q, data):
    F = GF(q)
    a = data.draw(st.integers(0, q - 1))
    b = data.draw(st.integers(0, q - 1))
    c = data.draw(st.integers(0, q - 1))
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(a, b) == F.mul(b, a)
    assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == 0
    if a:
        assert F.mul(a, F.inv(a)) == 1
    # Frobenius is additive in characteristic p
    assert F.frobenius(F.add(a, b)) == F.add(F.frobenius(a), F.frobenius(b))

def test_dlog_and_roots_of_unity():
    F = GF(13)
    g = F.generator
    for a in range(1, 13):
        assert F.pow(g, F.dlog(a)) == a
    w = F.nth_root_of_unity(3)
    assert F.pow(w, 3) == 1 and w != 1
    with pytest.raises(ValueError):
        F.nth_root_of_unity(5)

def test_field_cache_and_describe():
    assert GF(4) is GF(4)
    assert GF(9).describe() == {"p": 3, "m": 2, "modulus": [1, 0, 1]}
