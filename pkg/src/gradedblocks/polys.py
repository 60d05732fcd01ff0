"""Dense univariate polynomial helpers over a FiniteField.

Coefficient lists are little endian and need not be normalized on input;
every function strips trailing zeros on output.  The zero polynomial is
the empty list.
"""

from __future__ import annotations

from .field import FiniteField


def trim(a: list[int]) -> list[int]:
    n = len(a)
    while n and a[n - 1] == 0:
        n -= 1
    return a[:n]


def degree(a: list[int]) -> int:
    """Degree, with the zero polynomial mapped to -1."""
    return len(trim(a)) - 1


def add(F: FiniteField, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = F.add(out[i], c)
    return trim(out)


def sub(F: FiniteField, a, b):
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = F.sub(out[i], c)
    return trim(out)


def scale(F: FiniteField, c: int, a):
    if c == 0:
        return []
    return trim([F.mul(c, x) for x in a])


def mul(F: FiniteField, a, b):
    a, b = trim(a), trim(b)
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return out


def divmod_poly(F: FiniteField, a, b):
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], a
    rem = list(a)
    quot = [0] * (len(a) - len(b) + 1)
    inv_lead = F.inv(b[-1])
    for shift in range(len(a) - len(b), -1, -1):
        c = F.mul(rem[shift + len(b) - 1], inv_lead)
        if c:
            quot[shift] = c
            for j, y in enumerate(b):
                if y:
                    rem[shift + j] = F.sub(rem[shift + j], F.mul(c, y))
    return trim(quot), trim(rem)


def mod(F: FiniteField, a, b):
    return divmod_poly(F, a, b)[1]


def monic(F: FiniteField, a):
    a = trim(a)
    if not a or a[-1] == 1:
        return a
    return scale(F, F.inv(a[-1]), a)


def gcd(F: FiniteField, a, b):
    a, b = trim(a), trim(b)
    while b:
        a, b = b, mod(F, a, b)
    return monic(F, a)


def ext_gcd(F: FiniteField, a, b):
    """(g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = trim(a), trim(b)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = divmod_poly(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(F, s0, mul(F, q, s1))
        t0, t1 = t1, sub(F, t0, mul(F, q, t1))
    if r0:
        c = F.inv(r0[-1])
        return scale(F, c, r0), scale(F, c, s0), scale(F, c, t0)
    return [], [], []


def evaluate(F: FiniteField, a, x: int) -> int:
    acc = 0
    for c in reversed(trim(a)):
        acc = F.add(F.mul(acc, x), c)
    return acc


def linear_root_factorization(F: FiniteField, a):
    """Write a = lead * prod (x - r)^m by scanning all field elements.

    Returns (lead, [(root, multiplicity)...], remainder) where remainder is
    the monic part with no roots in F (1 when a splits completely).
    """
    a = trim(a)
    if not a:
        raise ValueError("zero polynomial")
    lead = a[-1]
    rem = monic(F, a)
    roots = []
    for r in F.elements:
        m = 0
        while True:
            q, s = divmod_poly(F, rem, [F.neg(r), 1])
            if s:
                break
            rem = q
            m += 1
            if not rem or rem == [1]:
                break
        if m:
            roots.append((r, m))
        if rem == [1] or not rem:
            break
    return lead, roots, (rem if rem else [1])
