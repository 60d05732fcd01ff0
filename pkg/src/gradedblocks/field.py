"""Arithmetic in small finite fields GF(p^m).

Elements are plain ints in ``range(q)``.  The int ``e`` stands for the
polynomial ``sum(d_i * x**i)`` where ``d_0, d_1, ...`` are the base-``p``
digits of ``e`` (little endian), reduced modulo a fixed monic irreducible
of degree ``m``.  With this encoding 0 and 1 are the additive and
multiplicative identities of every field, and the prime subfield is
``range(p)``.

All arithmetic is table backed, exact and deterministic: the modulus is
the monic irreducible whose low-coefficient encoding is smallest, and the
multiplicative generator is the smallest element of full order.
"""

from __future__ import annotations


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _int_to_poly(e: int, p: int, m: int) -> list[int]:
    digits = []
    for _ in range(m):
        digits.append(e % p)
        e //= p
    return digits


def _poly_to_int(coeffs, p: int) -> int:
    e = 0
    for c in reversed(coeffs):
        e = e * p + (c % p)
    return e


def _poly_mod(a: list[int], modulus: list[int], p: int) -> list[int]:
    # modulus is monic, little endian
    a = [c % p for c in a]
    m = len(modulus) - 1
    for i in range(len(a) - 1, m - 1, -1):
        c = a[i]
        if c:
            a[i] = 0
            for j in range(m):
                a[i - m + j] = (a[i - m + j] - c * modulus[j]) % p
    return a[:m] + [0] * max(0, m - len(a))


def _poly_mul_mod(a: list[int], b: list[int], modulus: list[int], p: int) -> list[int]:
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] = (prod[i + j] + ai * bj) % p
    return _poly_mod(prod, modulus, p)


def _is_irreducible(modulus: list[int], p: int) -> bool:
    """Trial division of a monic polynomial by every lower-degree monic."""
    m = len(modulus) - 1
    if m == 1:
        return True
    for d in range(1, m // 2 + 1):
        for low in range(p ** d):
            div = _int_to_poly(low, p, d) + [1]
            if _poly_divides(div, modulus, p):
                return False
    return True


def _poly_divides(div: list[int], target: list[int], p: int) -> bool:
    rem = [c % p for c in target]
    dd = len(div) - 1
    while len(rem) - 1 >= dd:
        lead = rem[-1]
        if lead:
            shift = len(rem) - 1 - dd
            for j in range(dd + 1):
                rem[shift + j] = (rem[shift + j] - lead * div[j]) % p
        rem.pop()
        while len(rem) > 1 and rem[-1] == 0 and len(rem) - 1 >= dd:
            rem.pop()
    return all(c == 0 for c in rem)


def smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Monic irreducible of degree m over GF(p) with least low-part encoding."""
    if m == 1:
        return (0, 1)
    for low in range(p ** m):
        cand = _int_to_poly(low, p, m) + [1]
        if cand[0] == 0:
            continue  # divisible by x
        if _is_irreducible(cand, p):
            return tuple(cand)
    raise ArithmeticError(f"no irreducible of degree {m} over GF({p})")


_ADD_TABLE_LIMIT = 512


class FiniteField:
    """GF(p^m) with precomputed exp/log (and, for small q, addition) tables."""

    def __init__(self, p: int, m: int = 1, modulus=None):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if m < 1:
            raise ValueError("extension degree must be >= 1")
        self.p = p
        self.m = m
        self.q = p ** m
        if modulus is None:
            modulus = smallest_irreducible(p, m)
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != m + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree m")
        if not _is_irreducible(list(modulus), p):
            raise ValueError("modulus is reducible")
        self.modulus = modulus
        self._build_tables()

    # -- construction ---------------------------------------------------

    def _build_tables(self):
        p, m, q = self.p, self.m, self.q
        mod = list(self.modulus)

        if m == 1:
            mul_pairs = lambda a, b: (a * b) % p
        else:
            def mul_pairs(a, b):
                pa = _int_to_poly(a, p, m)
                pb = _int_to_poly(b, p, m)
                return _poly_to_int(_poly_mul_mod(pa, pb, mod, p), p)

        # smallest generator of the multiplicative group
        target = q - 1
        gen = None
        for g in range(1, q):
            x, order = g, 1
            while x != 1:
                x = mul_pairs(x, g)
                order += 1
                if order > target:
                    break
            if order == target:
                gen = g
                break
        if gen is None:
            raise ArithmeticError("no generator found; modulus not irreducible?")
        self.generator = gen

        exp = [1] * target
        for i in range(1, target):
            exp[i] = mul_pairs(exp[i - 1], gen)
        log = [0] * q  # log[0] unused
        for i, v in enumerate(exp):
            log[v] = i
        self._exp = exp
        self._log = log

        if q <= _ADD_TABLE_LIMIT:
            if m == 1:
                self._add = [[(a + b) % p for b in range(q)] for a in range(q)]
            else:
                add_digits = lambda a, b: _poly_to_int(
                    [(x + y) % p for x, y in
                     zip(_int_to_poly(a, p, m), _int_to_poly(b, p, m))], p)
                self._add = [[add_digits(a, b) for b in range(q)] for a in range(q)]
            self._neg = [self._add[a].index(0) for a in range(q)]
        else:
            self._add = None
            self._neg = None

    # -- arithmetic ------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self._add is not None:
            return self._add[a][b]
        p, m = self.p, self.m
        if m == 1:
            return (a + b) % p
        return _poly_to_int([(x + y) % p for x, y in
                             zip(_int_to_poly(a, p, m), _int_to_poly(b, p, m))], p)

    def neg(self, a: int) -> int:
        if self._neg is not None:
            return self._neg[a]
        p, m = self.p, self.m
        if m == 1:
            return (-a) % p
        return _poly_to_int([(-x) % p for x in _int_to_poly(a, p, m)], p)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            if n == 0:
                return 1
            if n < 0:
                raise ZeroDivisionError("negative power of 0")
            return 0
        return self._exp[(self._log[a] * n) % (self.q - 1)]

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def frobenius_inv(self, a: int) -> int:
        return self.pow(a, self.p ** (self.m - 1))

    def from_int(self, n: int) -> int:
        """Image of the rational integer n in the prime subfield."""
        return n % self.p

    def element_order(self, a: int) -> int:
        if a == 0:
            raise ValueError("0 has no multiplicative order")
        d = self._log[a]
        n = self.q - 1
        from math import gcd
        return n // gcd(n, d)

    def dlog(self, a: int) -> int:
        """Discrete log base ``self.generator``; a must be nonzero."""
        if a == 0:
            raise ZeroDivisionError("dlog of 0")
        return self._log[a]

    def exp(self, n: int) -> int:
        return self._exp[n % (self.q - 1)]

    def nth_root_of_unity(self, n: int) -> int:
        """A fixed primitive n-th root of unity; requires n | q - 1."""
        if n <= 0 or (self.q - 1) % n != 0:
            raise ValueError(f"field has no primitive {n}-th root of unity")
        return self.exp((self.q - 1) // n)

    # -- misc --------------------------------------------------------------

    @property
    def elements(self):
        return range(self.q)

    def describe(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    def __eq__(self, other):
        return (isinstance(other, FiniteField)
                and (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus))

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __repr__(self):
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m})"


_FIELD_CACHE: dict[int, FiniteField] = {}


def GF(q: int) -> FiniteField:
    """The field with q elements (cached; q must be a prime power)."""
    f = _FIELD_CACHE.get(q)
    if f is not None:
        return f
    p = None
    for d in range(2, q + 1):
        if q % d == 0:
            p = d
            break
    if p is None or not is_prime(p):
        raise ValueError(f"{q} is not a prime power")
    m = 0
    r = q
    while r % p == 0 and r > 1:
        r //= p
        m += 1
    if r != 1:
        raise ValueError(f"{q} is not a prime power")
    f = FiniteField(p, m)
    _FIELD_CACHE[q] = f
    return f
