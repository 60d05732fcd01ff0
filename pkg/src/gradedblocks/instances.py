"""Worked finite-group scenarios with their pinned numeric facts.

Each entry bundles a field, a normal pair N inside G, a block idempotent
of kN, and a default coefficient subgroup.  The ``expected`` dictionary
records dimensions and grading data that the test suite asserts; entries
are built lazily and cached module-wide so a test run constructs each
crossed product once.
"""

from __future__ import annotations

from .blocks import GroupAlgebra, block_extension, principal_block
from .field import FiniteField
from .graded import (DeltaAlgebra, GradedBimodule, GradedSetting,
                     subgroup_setting, trivial_setting)
from .groups import (PermGroup, alternating, cyclic, direct_product,
                     klein_four, symmetric, trivial_group)
from .linalg import standard_vector


class Instance:
    """A named block-extension scenario plus its coefficient choice."""

    def __init__(self, name: str, field: FiniteField, G: PermGroup,
                 N: PermGroup, b=None, coefficient_subgroup=None,
                 expected=None, description: str = ""):
        self.name = name
        self.field = field
        self.G = G
        self.N = N
        self._b = b
        self.coefficient_subgroup = coefficient_subgroup
        self.expected = dict(expected or {})
        self.description = description
        self._extension = None
        self._setting = None
        self._delta = None

    @property
    def extension(self):
        if self._extension is None:
            self._extension = block_extension(self.field, self.G, self.N,
                                              self._b)
        return self._extension

    def setting(self) -> GradedSetting:
        if self._setting is None:
            A = self.extension
            if self.coefficient_subgroup is None:
                self._setting = trivial_setting(A)
            else:
                self._setting = subgroup_setting(A, self.coefficient_subgroup,
                                                 name=f"{self.name}-setting")
        return self._setting

    def delta(self) -> DeltaAlgebra:
        if self._delta is None:
            self._delta = DeltaAlgebra(self.setting())
        return self._delta

    def __repr__(self):
        return f"<Instance {self.name}>"


def _make_trivial_grading() -> Instance:
    """Semisimple coefficients, no grading: G = N cyclic of order three
    over GF(4), principal block of dimension one."""
    F = FiniteField(2, 2)
    C3 = cyclic(3)
    return Instance(
        "trivial-grading", F, C3, C3, b=None, coefficient_subgroup=C3,
        expected={
            "num_blocks": 3, "dim_B": 1, "dim_A": 1, "gbar_order": 1,
            "coefficient_dim": 3, "delta_dim": 1, "delta_o_dim": 1,
        },
        description="G = N = C3 over GF(4); one-dimensional principal block")


def _make_s3() -> Instance:
    """Two-element grading on a one-dimensional identity component."""
    F = FiniteField(2, 2)
    G = symmetric(3)
    N = alternating(3)
    return Instance(
        "s3", F, G, N, b=None, coefficient_subgroup=N,
        expected={
            "principal_b": [1, 1, 1], "dim_B": 1, "dim_A": 2,
            "gbar_order": 2, "coefficient_dim": 3,
            "delta_dim": 2, "delta_o_dim": 2,
            "centralizer_slot_dims": [1, 1], "gbar_b": [0, 1],
        },
        description="S3 over A3 at p = 2, principal block, GF(4)")


def _make_s4() -> Instance:
    """Defect-one block of kA4 at p = 3, graded by S4/A4; the acting
    group centralizes nothing, so the default coefficients are scalars."""
    F = FiniteField(3)
    G = symmetric(4)
    N = alternating(4)
    kN = GroupAlgebra(F, N)
    b = kN.sum_of(list(klein_four().elements))
    return Instance(
        "s4", F, G, N, b=b, coefficient_subgroup=None,
        expected={
            "dim_B": 3, "dim_A": 6, "gbar_order": 2, "coefficient_dim": 1,
            "delta_dim": 18, "delta_o_dim": 18,
            "centralizer_slot_dims": [3, 1], "gbar_b": [0],
        },
        description="S4 over A4 at p = 3, block of the Klein-four sum")


def _make_c2xs3() -> Instance:
    """Principal block with the kernel equal to its own centralizer."""
    F = FiniteField(3)
    G = direct_product(cyclic(2), symmetric(3))
    N = direct_product(cyclic(2), alternating(3))
    return Instance(
        "c2xs3", F, G, N, b=None, coefficient_subgroup=N,
        expected={
            "dim_B": 3, "dim_A": 6, "gbar_order": 2, "coefficient_dim": 6,
            "delta_dim": 6, "delta_o_dim": 18, "delta_z_dim": 6,
            "centralizer_slot_dims": [3, 1], "gbar_b": [0],
        },
        description="C2 x S3 over C2 x A3 at p = 3, principal block")


def _make_cross_slot() -> Instance:
    """Klein-four grading with coefficients spread over two degrees.

    The kernel is only the alternating factor, so the central C2 sits in
    a nontrivial degree and its coefficients tie different slot pairs of
    the diagonal algebra together.
    """
    F = FiniteField(3)
    G = direct_product(cyclic(2), symmetric(3))
    N = direct_product(trivial_group(2), alternating(3))
    Csub = direct_product(cyclic(2), alternating(3))
    return Instance(
        "cross-slot", F, G, N, b=None, coefficient_subgroup=Csub,
        expected={
            "dim_B": 3, "dim_A": 12, "gbar_order": 4, "coefficient_dim": 6,
            "coefficient_degree_one_dim": 3,
            "delta_dim": 6,
            "centralizer_slot_dims": [3, 3, 1, 1],
            "gbar_b_size": 2,
        },
        description="C2 x S3 over 1 x A3 at p = 3; coefficients in two "
                    "degrees")


def _make_s4_wide() -> Instance:
    """The s4 scenario acting on six points with the last two fixed.

    Same block data as s4, but the ambient degree leaves room for an
    overgroup whose odd coset also swaps the two extra points; that
    overgroup induces the same automorphisms of the kernel while being
    a different permutation group.
    """
    F = FiniteField(3)
    G = PermGroup.from_generators(6, [(1, 0, 2, 3, 4, 5),
                                      (1, 2, 3, 0, 4, 5)])
    N = PermGroup.from_generators(6, [(1, 2, 0, 3, 4, 5),
                                      (1, 0, 3, 2, 4, 5)])
    kN = GroupAlgebra(F, N)
    b = kN.sum_of([(0, 1, 2, 3, 4, 5), (1, 0, 3, 2, 4, 5),
                   (2, 3, 0, 1, 4, 5), (3, 2, 1, 0, 4, 5)])
    return Instance(
        "s4-wide", F, G, N, b=b, coefficient_subgroup=None,
        expected={
            "dim_B": 3, "dim_A": 6, "gbar_order": 2, "coefficient_dim": 1,
            "overgroup_order": 24,
        },
        description="S4 over A4 on six points, Klein-four block at p = 3")


_BUILDERS = {
    "trivial-grading": _make_trivial_grading,
    "s3": _make_s3,
    "s4": _make_s4,
    "c2xs3": _make_c2xs3,
    "cross-slot": _make_cross_slot,
    "s4-wide": _make_s4_wide,
}

CATALOG_NAMES = list(_BUILDERS)

_CACHE: dict[str, Instance] = {}


def get_instance(name: str) -> Instance:
    if name not in _BUILDERS:
        raise KeyError(f"unknown instance {name!r}; have "
                       f"{', '.join(CATALOG_NAMES)}")
    if name not in _CACHE:
        _CACHE[name] = _BUILDERS[name]()
    return _CACHE[name]


def delta_instances() -> list[Instance]:
    """The four catalog scenarios used by the diagonal-algebra checks."""
    return [get_instance(n) for n in
            ("trivial-grading", "s3", "s4", "c2xs3")]


def extended_s4_setting() -> GradedSetting:
    """The s4 scenario with coefficients enlarged to the full kernel.

    Legal because the identity component of that block is commutative, so
    the kernel's block image still centralizes it; the coefficient chain
    then properly shrinks the diagonal algebra.
    """
    inst = get_instance("s4")
    return subgroup_setting(inst.extension, alternating(4),
                            name="s4-extended-setting")


def widened_s4_overgroup() -> PermGroup:
    """The order-24 overgroup of the s4-wide kernel whose odd coset swaps
    the two extra points; it induces exactly the automorphisms the plain
    six-point S4 induces, without sharing its odd elements."""
    return PermGroup.from_generators(6, [(1, 2, 0, 3, 4, 5),
                                         (1, 0, 3, 2, 4, 5),
                                         (1, 0, 2, 3, 5, 4)])


_MIXED_PAIR: dict = {}


def mixed_pair():
    """Two genuinely different crossed products joined by a bimodule.

    The first extension is the plus-part block of C2 x S3 over C2 x A3;
    the second is the principal block of the diagonal copy of S3 (sign
    matching the C2 coordinate) over its rotation subgroup.  Multiplying
    by the first block idempotent identifies the second crossed product
    with the first algebra, and the first algebra with its right action
    pulled back along that identification is a graded bimodule over
    coefficients in the shared rotation subgroup.  Returns the setting
    and that bimodule, cached module-wide.
    """
    if "setting" in _MIXED_PAIR:
        return _MIXED_PAIR["setting"], _MIXED_PAIR["bimodule"]
    F = FiniteField(3)
    G = direct_product(cyclic(2), symmetric(3))
    N = direct_product(cyclic(2), alternating(3))
    Gp = PermGroup.from_generators(5, [(1, 0, 3, 2, 4), (0, 1, 3, 4, 2)])
    Np = PermGroup.from_generators(5, [(0, 1, 3, 4, 2)])
    kN = GroupAlgebra(F, N)
    b = [0] * kN.dim
    half = F.inv(2)
    b[N.index[tuple(range(5))]] = half
    b[N.index[(1, 0, 2, 3, 4)]] = half
    E = block_extension(F, G, N, b)
    Ep = block_extension(F, Gp, Np, None)
    setting = subgroup_setting(E, Np, Aprime=Ep, name="mixed-pair")

    b_g = E.kn_to_kg(E.b)
    right = []
    for j in range(Ep.dim):
        amb = [0] * len(G.elements)
        for t, c in enumerate(Ep.basis_ambient[j]):
            if c:
                amb[G.index[Gp.elements[t]]] = c
        coords = E.ambient_solver.coords(E.kG.mul(b_g, amb))
        if coords is None:
            raise ArithmeticError("block image of the second algebra "
                                  "leaves the first")
        right.append(E.algebra.right_mult_matrix(coords))
    left = [E.algebra.left_mult_matrix(standard_vector(E.dim, i))
            for i in range(E.dim)]
    labels = [E.degree_of_index(i) for i in range(E.dim)]
    bimodule = GradedBimodule(setting, labels, left, right,
                              name="block-identification")
    _MIXED_PAIR["setting"] = setting
    _MIXED_PAIR["bimodule"] = bimodule
    return setting, bimodule
