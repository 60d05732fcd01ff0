"""Permutation groups and their quotients.

Permutations are one-line tuples on {0..degree-1} composed as
(p∘q)(i) = p[q[i]] (apply q first).  Element lists are always sorted, and
since the identity is lexicographically least in any subgroup, index 0 is
the identity both in a PermGroup and in a QuotientGroup.  Coset
representatives are lexicographically least, fixed once, and reused by
everything downstream.
"""

from __future__ import annotations

from math import lcm


def compose(p: tuple, q: tuple) -> tuple:
    return tuple(p[q[i]] for i in range(len(q)))


def inverse_perm(p: tuple) -> tuple:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def identity_perm(degree: int) -> tuple:
    return tuple(range(degree))


def perm_from_cycles(degree: int, cycles) -> tuple:
    out = list(range(degree))
    for cyc in cycles:
        for i, v in enumerate(cyc):
            out[v] = cyc[(i + 1) % len(cyc)]
    return tuple(out)


def perm_order(p: tuple) -> int:
    n = 1
    q = p
    ident = identity_perm(len(p))
    while q != ident:
        q = compose(q, p)
        n += 1
    return n


class PermGroup:
    def __init__(self, degree: int, elements):
        self.degree = degree
        self.elements = sorted(set(elements))
        if identity_perm(degree) not in set(self.elements):
            raise ValueError("missing identity")
        self.index = {g: i for i, g in enumerate(self.elements)}
        self.order = len(self.elements)
        self._mul_table = None
        self._inv_table = None
        self._gen_indices = None

    @classmethod
    def from_generators(cls, degree: int, generators):
        gens = [tuple(g) for g in generators]
        seen = {identity_perm(degree)}
        frontier = list(seen)
        while frontier:
            nxt = []
            for g in frontier:
                for h in gens:
                    p = compose(g, h)
                    if p not in seen:
                        seen.add(p)
                        nxt.append(p)
            frontier = nxt
        grp = cls(degree, seen)
        grp._gen_indices = sorted(grp.index[g] for g in gens)
        return grp

    # -- index based ops ---------------------------------------------------

    @property
    def identity_index(self) -> int:
        return 0

    def mul(self, i: int, j: int) -> int:
        if self._mul_table is None:
            self._mul_table = [
                [self.index[compose(a, b)] for b in self.elements]
                for a in self.elements]
        return self._mul_table[i][j]

    def inv(self, i: int) -> int:
        if self._inv_table is None:
            self._inv_table = [self.index[inverse_perm(g)] for g in self.elements]
        return self._inv_table[i]

    def generator_indices(self) -> list[int]:
        if self._gen_indices:
            return list(self._gen_indices)
        return list(range(self.order))

    def element_order(self, i: int) -> int:
        return perm_order(self.elements[i])

    def exponent(self) -> int:
        return lcm(*(perm_order(g) for g in self.elements))

    # -- subgroup machinery ---------------------------------------------------

    def contains_group(self, other: "PermGroup") -> bool:
        if other.degree != self.degree:
            return False
        mine = set(self.elements)
        return all(g in mine for g in other.elements)

    def subgroup(self, elements) -> "PermGroup":
        sub = PermGroup(self.degree, elements)
        if not self.contains_group(sub):
            raise ValueError("not a subset of the group")
        return sub

    def subgroup_generated(self, generators) -> "PermGroup":
        sub = PermGroup.from_generators(self.degree, generators)
        if not self.contains_group(sub):
            raise ValueError("generators leave the group")
        return sub

    def is_normal(self, N: "PermGroup") -> bool:
        nset = set(N.elements)
        if not self.contains_group(N):
            return False
        for g in self.elements:
            gi = inverse_perm(g)
            for n in N.elements:
                if compose(compose(g, n), gi) not in nset:
                    return False
        return True

    def centralizer(self, S) -> "PermGroup":
        elems = S.elements if isinstance(S, PermGroup) else list(S)
        out = [g for g in self.elements
               if all(compose(g, s) == compose(s, g) for s in elems)]
        return PermGroup(self.degree, out)

    def center(self) -> "PermGroup":
        return self.centralizer(self)

    def normalizer(self, H: "PermGroup") -> "PermGroup":
        hset = set(H.elements)
        out = []
        for g in self.elements:
            gi = inverse_perm(g)
            if all(compose(compose(g, h), gi) in hset for h in H.elements):
                out.append(g)
        return PermGroup(self.degree, out)

    def conjugacy_classes(self) -> list[list[tuple]]:
        seen = set()
        classes = []
        for g in self.elements:
            if g in seen:
                continue
            cls = {compose(compose(h, g), inverse_perm(h)) for h in self.elements}
            seen |= cls
            classes.append(sorted(cls))
        return classes

    def sylow_subgroup(self, p: int) -> "PermGroup":
        target = 1
        n = self.order
        while n % p == 0:
            n //= p
            target *= p
        if target == 1:
            return PermGroup(self.degree, [identity_perm(self.degree)])
        pelems = [g for g in self.elements
                  if _is_p_power(perm_order(g), p)]
        for r in range(1, 5):
            found = _search_subgroup(self.degree, pelems, target, r)
            if found is not None:
                return PermGroup(self.degree, found)
        raise ArithmeticError("Sylow subgroup search failed")

    def product_set(self, A: "PermGroup", B: "PermGroup") -> set:
        return {compose(a, b) for a in A.elements for b in B.elements}

    def __repr__(self):
        return f"<PermGroup deg {self.degree} order {self.order}>"


def _is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def _search_subgroup(degree, pool, target, ngens):
    """Smallest generator tuples first; returns the element set or None."""
    pool = [g for g in pool if g != identity_perm(degree)]

    def rec(start, gens):
        if gens:
            grp = PermGroup.from_generators(degree, gens)
            if grp.order == target:
                return set(grp.elements)
            if grp.order > target or target % grp.order != 0:
                return None
            if len(gens) == ngens:
                return None
        if len(gens) == ngens:
            return None
        for i in range(start, len(pool)):
            res = rec(i + 1, gens + [pool[i]])
            if res is not None:
                return res
        return None

    return rec(0, [])


class QuotientGroup:
    """G/N on lexicographically least coset representatives.

    Elements are indices 0..order-1; ``section`` maps an index to its
    representative permutation, ``project_perm`` maps a permutation of G to
    its coset index.
    """

    def __init__(self, G: PermGroup, N: PermGroup):
        if not G.is_normal(N):
            raise ValueError("subgroup is not normal")
        self.G = G
        self.N = N
        coset_of = {}
        reps = []
        for g in G.elements:  # sorted, so the first hit is the lex-least rep
            if g in coset_of:
                continue
            coset = sorted(compose(g, n) for n in N.elements)
            rep = coset[0]
            idx = len(reps)
            reps.append(rep)
            for x in coset:
                coset_of[x] = idx
        order = {rep: i for i, rep in enumerate(sorted(reps))}
        self.reps = sorted(reps)
        self.coset_index = {g: order[reps[i]] for g, i in coset_of.items()}
        self.order = len(self.reps)
        self.table = [[self.coset_index[compose(a, b)] for b in self.reps]
                      for a in self.reps]
        self.inv_table = [row.index(0) for row in self.table]

    @property
    def identity_index(self) -> int:
        return 0

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inv(self, i: int) -> int:
        return self.inv_table[i]

    def section(self, i: int) -> tuple:
        return self.reps[i]

    def project_perm(self, g: tuple) -> int:
        return self.coset_index[g]

    def element_order(self, i: int) -> int:
        n, j = 1, i
        while j != 0:
            j = self.mul(j, i)
            n += 1
        return n

    def __repr__(self):
        return f"<QuotientGroup order {self.order}>"


# ---------------------------------------------------------------------------
# products and actions


def direct_product(G: PermGroup, H: PermGroup) -> PermGroup:
    d = G.degree + H.degree
    elems = []
    for g in G.elements:
        for h in H.elements:
            elems.append(tuple(list(g) + [x + G.degree for x in h]))
    return PermGroup(d, elems)


def embed_left(g: tuple, total_degree: int) -> tuple:
    return tuple(list(g) + list(range(len(g), total_degree)))


def embed_right(h: tuple, offset: int) -> tuple:
    return tuple(list(range(offset)) + [x + offset for x in h])


def fiber_product(G: PermGroup, Gp: PermGroup, match) -> PermGroup:
    """Pairs (g,g') with match(g,g') inside the direct product."""
    d = G.degree + Gp.degree
    elems = []
    for g in G.elements:
        for h in Gp.elements:
            if match(g, h):
                elems.append(tuple(list(g) + [x + G.degree for x in h]))
    return PermGroup(d, elems)


def conjugation_action(G: PermGroup, N: PermGroup) -> dict:
    """g -> permutation of N's element indices induced by conjugation."""
    out = {}
    for g in G.elements:
        gi = inverse_perm(g)
        out[g] = tuple(N.index[compose(compose(g, n), gi)] for n in N.elements)
    return out


def conjugation_image(G: PermGroup, N: PermGroup) -> frozenset:
    """The set of automorphisms of N induced by G, as index tuples."""
    return frozenset(conjugation_action(G, N).values())


# ---------------------------------------------------------------------------
# standard groups


def cyclic(n: int) -> PermGroup:
    return PermGroup.from_generators(n, [tuple((i + 1) % n for i in range(n))])


def symmetric(n: int) -> PermGroup:
    if n == 1:
        return PermGroup(1, [(0,)])
    gens = [perm_from_cycles(n, [[0, 1]]), perm_from_cycles(n, [list(range(n))])]
    return PermGroup.from_generators(n, gens)


def alternating(n: int) -> PermGroup:
    if n <= 2:
        return PermGroup(max(n, 1), [identity_perm(max(n, 1))])
    gens = [perm_from_cycles(n, [[i, i + 1, i + 2]]) for i in range(n - 2)]
    return PermGroup.from_generators(n, gens)


def klein_four() -> PermGroup:
    return PermGroup.from_generators(
        4, [perm_from_cycles(4, [[0, 1], [2, 3]]), perm_from_cycles(4, [[0, 2], [1, 3]])])


def trivial_group(degree: int = 1) -> PermGroup:
    return PermGroup(degree, [identity_perm(degree)])
