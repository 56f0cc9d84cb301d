"""Hopf-Hochschild cohomology groups and the induced Gerstenhaber structure.

``HH^n`` is computed in the coordinates of the canonical cochain-space basis:
cocycles are the left kernel of the ``d_CH^n`` matrix and coboundaries the
row space of ``d_CH^{n-1}``.  Coset representatives come from reducing the
RREF cocycle basis against the RREF coboundary basis, so class coordinates
are reproducible.

Degree-0 classes are computed but take no part in cup products or brackets,
since operad arities start at one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .cochains import (
    DEFAULT_DEGREE_CAP,
    CochainSpace,
    DegreeCapError,
    ReducedCochain,
    cochain_space_basis,
    d_CH,
    d_CH_matrix,
)
from .linalg import ExactArray, SubspaceBasis, nullspace, quotient, stack
from .operad import BraceCalculus, bracket_degree_one, calculus
from .rng import Lcg
from .structures import ModuleAlgebra

DEGREE_ZERO_NOTE = "HH^0 is computed but excluded from cup products and brackets (operad arities start at 1)"


class InternalConsistencyError(RuntimeError):
    """A result that theory guarantees failed to hold; it signals a bug, never bad input."""


@dataclass(frozen=True, eq=False)
class CohomologyGroup:
    """``HH^n``; subspaces are held in coordinates of ``space``."""

    ma: ModuleAlgebra
    degree: int
    space: CochainSpace
    cocycles: SubspaceBasis
    coboundaries: SubspaceBasis
    representatives: SubspaceBasis

    @property
    def dimension(self) -> int:
        return self.representatives.dim

    def representative(self, i: int) -> ReducedCochain:
        return self.space.combination(self.representatives.vector(i))

    def representative_cochains(self) -> list[ReducedCochain]:
        return [self.representative(i) for i in range(self.dimension)]

    def basis_class(self, i: int) -> "CohomologyClass":
        coords = ExactArray.basis_vector(self.ma.field, self.dimension, i)
        return CohomologyClass(self, coords)

    def basis_classes(self) -> list["CohomologyClass"]:
        return [self.basis_class(i) for i in range(self.dimension)]

    def zero(self) -> "CohomologyClass":
        return CohomologyClass(self, ExactArray.zeros(self.ma.field, (self.dimension,)))

    def is_cocycle(self, f: ReducedCochain) -> bool:
        return f.degree == self.degree and self.cocycles.contains(self.space.coordinates(f))

    def is_coboundary(self, f: ReducedCochain) -> bool:
        return f.degree == self.degree and self.coboundaries.contains(self.space.coordinates(f))

    def class_of(self, f: ReducedCochain) -> "CohomologyClass":
        """The class of a cocycle."""
        if f.degree != self.degree:
            raise ValueError(f"degree-{f.degree} cochain in HH^{self.degree}")
        v = self.space.coordinates(f)
        if not self.cocycles.contains(v):
            raise ValueError("cochain is not a cocycle")
        w = self.coboundaries.reduce(v)
        return CohomologyClass(self, self.representatives.coordinates(w))

    def __repr__(self):
        return f"HH^{self.degree}({self.ma.name}) of dimension {self.dimension}"


@dataclass(frozen=True, eq=False)
class CohomologyClass:
    group: CohomologyGroup
    coordinates: ExactArray

    def __post_init__(self):
        if self.coordinates.shape != (self.group.dimension,):
            raise ValueError(f"{self.coordinates.shape[0]} coordinates for a "
                             f"{self.group.dimension}-dimensional group")

    @property
    def degree(self) -> int:
        return self.group.degree

    @property
    def representative(self) -> ReducedCochain:
        return self.group.space.combination(self.group.representatives.combination(self.coordinates))

    def is_zero(self) -> bool:
        return self.coordinates.is_zero()

    def __eq__(self, other):
        return (isinstance(other, CohomologyClass) and self.degree == other.degree
                and self.coordinates == other.coordinates)

    def __hash__(self):
        return hash((self.degree, self.coordinates))

    def __add__(self, other):
        return CohomologyClass(self.group, self.coordinates + other.coordinates)

    def __sub__(self, other):
        return CohomologyClass(self.group, self.coordinates - other.coordinates)

    def __neg__(self):
        return CohomologyClass(self.group, -self.coordinates)

    def signed(self, e: int) -> "CohomologyClass":
        return -self if e % 2 else self

    def __repr__(self):
        return f"CohomologyClass(degree={self.degree}, {self.coordinates.values()})"


def compute_HH(ma: ModuleAlgebra, n: int, cap: int = DEFAULT_DEGREE_CAP) -> CohomologyGroup:
    if n < 0:
        raise ValueError(f"negative degree {n}")
    if n + 1 > cap:
        raise DegreeCapError(f"HH^{n} needs cochains of degree {n + 1}, beyond the cap {cap}")
    cache = ma.__dict__.setdefault("_hh", {})
    if n in cache:
        return cache[n]
    space = cochain_space_basis(ma, n, cap)
    F = ma.field
    if space.dim == 0:
        empty = SubspaceBasis.zero(F, 0)
        group = CohomologyGroup(ma, n, space, empty, empty, empty)
        cache[n] = group
        return group
    D = d_CH_matrix(ma, n, cap)  # rows: images of basis cochains
    if D.shape[1] == 0:
        cocycles = SubspaceBasis.full(F, space.dim)
    else:
        cocycles = nullspace(D.T)
    if n == 0 or cochain_space_basis(ma, n - 1, cap).dim == 0:
        coboundaries = SubspaceBasis.zero(F, space.dim)
    else:
        coboundaries = SubspaceBasis.span(F, space.dim, d_CH_matrix(ma, n - 1, cap))
    if not coboundaries.is_subspace_of(cocycles):
        raise InternalConsistencyError(f"some coboundary of degree {n} is not a cocycle")
    q = quotient(cocycles, coboundaries)
    group = CohomologyGroup(ma, n, space, cocycles, coboundaries, q.representatives)
    if group.dimension != cocycles.dim - coboundaries.dim:
        raise InternalConsistencyError("quotient dimension mismatch")
    cache[n] = group
    return group


def cohomology_dimensions(ma: ModuleAlgebra, max_degree: int, cap: int = DEFAULT_DEGREE_CAP) -> list[int]:
    return [compute_HH(ma, n, cap).dimension for n in range(max_degree + 1)]


def is_coboundary(ma: ModuleAlgebra, f: ReducedCochain, cap: int = DEFAULT_DEGREE_CAP) -> bool:
    if f.degree < 1:
        raise ValueError("degree-0 cochains are never coboundaries of anything but zero")
    return compute_HH(ma, f.degree, max(cap, f.degree + 1)).is_coboundary(f)


def invariant_center_dimension(ma: ModuleAlgebra) -> int:
    """``dim {z in Z(A) : b . z = eps(b) z for all b}``, solved directly as a cross-check of ``HH^0``."""
    d, F = ma.dim, ma.field
    rows = []
    mu = ma.alg.mult
    for j in range(d):
        # z e_j - e_j z = 0, as linear conditions on the coordinates of z
        rows.append(mu[:, j, :].T - mu[j, :, :].T)
    for h in range(ma.hopf.dim):
        eps = ma.hopf.counit[h]
        rows.append(ma.rho[h].T - ExactArray.identity(F, d).scale(eps))
    C = stack(F, rows).reshape(len(rows) * d, d, order="C")
    return nullspace(C).dim


# --- induced operations -------------------------------------------------------


def _target(ma: ModuleAlgebra, degree: int, cap: int) -> CohomologyGroup:
    if degree + 1 > cap:
        raise DegreeCapError(f"result of degree {degree} needs cochains of degree {degree + 1}, "
                             f"beyond the cap {cap}")
    return compute_HH(ma, degree, cap)


def _operands(*classes: CohomologyClass) -> None:
    for c in classes:
        if c.degree < 1:
            raise ValueError(DEGREE_ZERO_NOTE)


def _class_of_result(ma: ModuleAlgebra, f: ReducedCochain, cap: int, what: str) -> CohomologyClass:
    G = _target(ma, f.degree, cap)
    if not d_CH(ma, f, max(cap, f.degree + 1)).is_zero():
        raise InternalConsistencyError(f"{what} of cocycles is not a cocycle")
    return G.class_of(f)


def _perturbed(ma: ModuleAlgebra, f: ReducedCochain, rng: Lcg, cap: int) -> ReducedCochain:
    """``f + d_CH(g)`` for a seeded random ``g`` of degree ``deg f - 1``."""
    n = f.degree
    lower = cochain_space_basis(ma, n - 1, cap)
    if lower.dim == 0:
        return f
    coeffs = ExactArray.from_values(ma.field, [rng.coefficient() for _ in range(lower.dim)])
    return f + d_CH(ma, lower.combination(coeffs), cap)


def _checked(ma, op, name: str, reps: list[ReducedCochain], cap: int, check_seed: int | None):
    result = _class_of_result(ma, op(*reps), cap, name)
    if check_seed is not None:
        rng = Lcg(check_seed)
        moved = [_perturbed(ma, r, rng, cap) for r in reps]
        if _class_of_result(ma, op(*moved), cap, name) != result:
            raise InternalConsistencyError(f"{name} depends on the choice of representatives")
    return result


def induced_cup(x: CohomologyClass, y: CohomologyClass, cap: int = DEFAULT_DEGREE_CAP,
                check_seed: int | None = 0, calc: BraceCalculus | None = None) -> CohomologyClass:
    """``[x] cup [y]``; with ``check_seed`` set, also recomputes on perturbed representatives."""
    _operands(x, y)
    ma = x.group.ma
    C = calc or calculus(ma)
    _target(ma, x.degree + y.degree, cap)
    return _checked(ma, C.cup, "cup product", [x.representative, y.representative], cap, check_seed)


def induced_bracket(x: CohomologyClass, y: CohomologyClass, cap: int = DEFAULT_DEGREE_CAP,
                    check_seed: int | None = 0, calc: BraceCalculus | None = None) -> CohomologyClass:
    _operands(x, y)
    ma = x.group.ma
    C = calc or calculus(ma)
    _target(ma, x.degree + y.degree - 1, cap)
    return _checked(ma, C.bracket, "bracket", [x.representative, y.representative], cap, check_seed)


# --- class-level G-algebra checks ---------------------------------------------

GRADED_COMMUTATIVITY = "cup graded commutativity"
CUP_ASSOCIATIVITY = "cup associativity on classes"
BRACKET_ANTISYMMETRY = "bracket graded antisymmetry"
BRACKET_JACOBI = "bracket graded Jacobi"
BRACKET_LEIBNIZ = "bracket Leibniz rule"
HH1_ANTISYMMETRY = "HH^1 bracket antisymmetry"
HH1_JACOBI = "HH^1 bracket Jacobi"
HH1_FORMULA = "HH^1 bracket matches composition commutator"
CUP_INDEPENDENCE = "cup representative independence"
BRACKET_INDEPENDENCE = "bracket representative independence"
ZERO_CLASS = "cup with a coboundary is zero"

G_CHECKS = (
    GRADED_COMMUTATIVITY, CUP_ASSOCIATIVITY, BRACKET_ANTISYMMETRY, BRACKET_JACOBI, BRACKET_LEIBNIZ,
    HH1_ANTISYMMETRY, HH1_JACOBI, HH1_FORMULA, CUP_INDEPENDENCE, BRACKET_INDEPENDENCE, ZERO_CLASS,
)


@dataclass
class GCheck:
    name: str
    instances: int = 0
    failures: int = 0
    counterexample: str = ""

    @property
    def passed(self) -> bool:
        return self.failures == 0


@dataclass
class GerstenhaberReport:
    model: str
    max_degree: int
    seed: int
    perturbations: int
    dimensions: list[int]
    checks: list[GCheck] = field(default_factory=list)
    cup_table: list[tuple[tuple[int, int], tuple[int, int], list]] = field(default_factory=list)
    bracket_table: list[tuple[tuple[int, int], tuple[int, int], list]] = field(default_factory=list)
    note: str = DEGREE_ZERO_NOTE

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> GCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


class _Checks:
    def __init__(self):
        self.by_name = {n: GCheck(n) for n in G_CHECKS}

    def record(self, name: str, lhs: CohomologyClass, rhs: CohomologyClass, where: str):
        c = self.by_name[name]
        c.instances += 1
        if lhs != rhs:
            c.failures += 1
            if not c.counterexample:
                c.counterexample = f"{where}: {lhs.coordinates.values()} vs {rhs.coordinates.values()}"


def _label(*pairs: tuple[int, int]) -> str:
    return ", ".join(f"HH^{n}[{i}]" for n, i in pairs)


def check_gerstenhaber(ma: ModuleAlgebra, max_degree: int = 3, seed: int = 0, perturbations: int = 16,
                       cap: int = DEFAULT_DEGREE_CAP) -> GerstenhaberReport:
    """Verify the G-algebra identities on all basis classes with result degree at most ``max_degree``."""
    if max_degree + 1 > cap:
        raise DegreeCapError(f"classes up to degree {max_degree} need a cochain cap of {max_degree + 1}")
    C = calculus(ma)
    groups = [compute_HH(ma, n, cap) for n in range(max_degree + 1)]
    report = GerstenhaberReport(ma.name, max_degree, seed, perturbations, [g.dimension for g in groups])
    chk = _Checks()
    basis = {n: groups[n].basis_classes() for n in range(1, max_degree + 1)}
    labelled = [((n, i), c) for n in range(1, max_degree + 1) for i, c in enumerate(basis[n])]

    cup_cache: dict = {}
    br_cache: dict = {}

    def cup(x, y):
        key = (x.degree, x.coordinates, y.degree, y.coordinates)
        if key not in cup_cache:
            cup_cache[key] = induced_cup(x, y, cap, None, C)
        return cup_cache[key]

    def br(x, y):
        key = (x.degree, x.coordinates, y.degree, y.coordinates)
        if key not in br_cache:
            br_cache[key] = induced_bracket(x, y, cap, None, C)
        return br_cache[key]

    def sh(c):
        return c.degree - 1

    for (lx, x), (ly, y) in itertools.product(labelled, repeat=2):
        m, n = x.degree, y.degree
        if m + n <= max_degree:
            xy = cup(x, y)
            report.cup_table.append((lx, ly, xy.coordinates.values()))
            chk.record(GRADED_COMMUTATIVITY, xy, cup(y, x).signed(m * n), _label(lx, ly))
        if m + n - 1 <= max_degree:
            xy = br(x, y)
            report.bracket_table.append((lx, ly, xy.coordinates.values()))
            chk.record(BRACKET_ANTISYMMETRY, xy, -br(y, x).signed(sh(x) * sh(y)), _label(lx, ly))

    for (lx, x), (ly, y), (lz, z) in itertools.product(labelled, repeat=3):
        a, b, c = x.degree, y.degree, z.degree
        where = _label(lx, ly, lz)
        if a + b + c <= max_degree:
            chk.record(CUP_ASSOCIATIVITY, cup(cup(x, y), z), cup(x, cup(y, z)), where)
        if a - 1 + b + c <= max_degree:
            lhs = br(x, cup(y, z))
            rhs = cup(br(x, y), z) + cup(y, br(x, z)).signed(sh(x) * b)
            chk.record(BRACKET_LEIBNIZ, lhs, rhs, where)
        if a + b + c - 2 <= max_degree:
            total = (br(x, br(y, z)).signed(sh(x) * sh(z)) + br(y, br(z, x)).signed(sh(y) * sh(x))
                     + br(z, br(x, y)).signed(sh(z) * sh(y)))
            chk.record(BRACKET_JACOBI, total, total.group.zero(), where)

    if max_degree >= 1:
        H1 = groups[1]

        def lie(x, y):
            return H1.class_of(bracket_degree_one(ma, x.representative, y.representative))

        one = basis[1]
        for (i, x), (j, y) in itertools.product(enumerate(one), repeat=2):
            where = _label((1, i), (1, j))
            chk.record(HH1_ANTISYMMETRY, lie(x, y), -lie(y, x), where)
            chk.record(HH1_FORMULA, lie(x, y), br(x, y), where)
        for (i, x), (j, y), (k, z) in itertools.product(enumerate(one), repeat=3):
            total = lie(x, lie(y, z)) + lie(y, lie(z, x)) + lie(z, lie(x, y))
            chk.record(HH1_JACOBI, total, H1.zero(), _label((1, i), (1, j), (1, k)))

    _independence(ma, C, chk, labelled, max_degree, seed, perturbations, cap)
    report.checks = [chk.by_name[n] for n in G_CHECKS]
    return report


def _independence(ma, C, chk: _Checks, labelled, max_degree: int, seed: int, count: int, cap: int):
    """Seeded random coboundary perturbations of both representatives."""
    rng = Lcg(seed)
    cup_pairs = [(a, b) for a in labelled for b in labelled if a[1].degree + b[1].degree <= max_degree]
    br_pairs = [(a, b) for a in labelled for b in labelled if a[1].degree + b[1].degree - 1 <= max_degree]
    for name, pairs, op in ((CUP_INDEPENDENCE, cup_pairs, C.cup), (BRACKET_INDEPENDENCE, br_pairs, C.bracket)):
        if not pairs:
            continue
        for t in range(count):
            (lx, x), (ly, y) = pairs[rng.below(len(pairs))]
            base = _class_of_result(ma, op(x.representative, y.representative), cap, name)
            moved = op(_perturbed(ma, x.representative, rng, cap), _perturbed(ma, y.representative, rng, cap))
            chk.record(name, _class_of_result(ma, moved, cap, name), base, f"{_label(lx, ly)} perturbation {t}")
    # the class of x cup d(g) vanishes
    for t in range(count if cup_pairs else 0):
        (lx, x), (ly, y) = cup_pairs[rng.below(len(cup_pairs))]
        f = _perturbed(ma, ReducedCochain.zero(ma, y.degree), rng, cap)
        lhs = _class_of_result(ma, C.cup(x.representative, f), cap, ZERO_CLASS)
        chk.record(ZERO_CLASS, lhs, lhs.group.zero(), f"{_label(lx)} with a coboundary, draw {t}")
