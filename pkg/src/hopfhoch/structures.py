"""Structure-constant presentations of algebras, bialgebras and module-algebras.

Conventions (all tensors are :class:`ExactArray`):

* ``mult[i, j, k]`` is the coefficient of ``e_k`` in ``e_i e_j``;
* ``comult[i, j, k]`` is the coefficient of ``e_j (x) e_k`` in ``Delta(e_i)``;
* ``action[b, a, c]`` is the coefficient of ``e_c`` in ``e_b . e_a``;
* an element of ``A^{(x) k}`` is a tensor of shape ``(dim A,) * k`` whose
  axis ``s`` is tensor slot ``s``; flattening is Fortran order (slot 0 fastest).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .linalg import ExactArray, Field, einsum, tensordot


class StructureError(ValueError):
    """Tables whose shapes do not fit together."""


@dataclass(frozen=True)
class Violation:
    axiom: str
    indices: tuple[str, ...]
    lhs: tuple
    rhs: tuple

    def __str__(self):
        where = ", ".join(self.indices)
        return f"{self.axiom} fails at ({where}): lhs={list(self.lhs)} rhs={list(self.rhs)}"


@dataclass
class ValidationReport:
    subject: str
    violations: list[Violation] = field(default_factory=list)
    checked: dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def axioms_failed(self) -> list[str]:
        seen: list[str] = []
        for v in self.violations:
            if v.axiom not in seen:
                seen.append(v.axiom)
        return seen

    def extend(self, other: "ValidationReport") -> None:
        self.violations.extend(other.violations)
        for k, n in other.checked.items():
            self.checked[k] = self.checked.get(k, 0) + n

    def lines(self) -> list[str]:
        out = [f"{name}: {'FAIL' if name in self.axioms_failed() else 'ok'} ({n} instances)"
               for name, n in self.checked.items()]
        out.extend(str(v) for v in self.violations)
        return out


class AxiomError(ValueError):
    """Load-time validation failure; carries the full report."""

    def __init__(self, report: ValidationReport):
        self.report = report
        msg = f"{report.subject}: axioms violated: {', '.join(report.axioms_failed())}"
        super().__init__(msg)


def _compare(report: ValidationReport, axiom: str, lhs: ExactArray, rhs: ExactArray,
             labels: list[tuple[str, ...]], nidx: int, limit: int = 8) -> None:
    """Record every index tuple (over the first ``nidx`` axes) where lhs != rhs."""
    report.checked[axiom] = report.checked.get(axiom, 0) + int(np.prod(lhs.shape[:nidx], dtype=int))
    diff = lhs - rhs
    if diff.is_zero():
        return
    bad = sorted({t[:nidx] for t in diff.nonzero()})
    for t in bad[:limit]:
        names = tuple(labels[s][i] for s, i in enumerate(t))
        l, r = lhs[t], rhs[t]
        report.violations.append(Violation(
            axiom, names,
            tuple(l.values()) if isinstance(l, ExactArray) else (l,),
            tuple(r.values()) if isinstance(r, ExactArray) else (r,),
        ))


def _delta(field: Field, d: int) -> ExactArray:
    return ExactArray.identity(field, d)


@dataclass(frozen=True, eq=False)
class FiniteAlgebra:
    field: Field
    mult: ExactArray
    unit: ExactArray
    names: tuple[str, ...]

    def __post_init__(self):
        d = len(self.names)
        if self.mult.shape != (d, d, d):
            raise StructureError(f"multiplication table has shape {self.mult.shape}, expected {(d, d, d)}")
        if self.unit.shape != (d,):
            raise StructureError(f"unit has shape {self.unit.shape}, expected {(d,)}")
        for t in (self.mult, self.unit):
            if t.field != self.field:
                raise StructureError("structure tensors over different fields")

    @property
    def dim(self) -> int:
        return len(self.names)

    def multiply(self, u: ExactArray, v: ExactArray) -> ExactArray:
        return einsum("i,j,ijk->k", u, v, self.mult)

    @cached_property
    def reduced_mult(self) -> ExactArray:
        """Multiplication as a tensor ``[out, in1, in2]``."""
        return self.mult.transpose(2, 0, 1)

    def validate(self) -> ValidationReport:
        rep = ValidationReport("algebra")
        d, mu, u = self.dim, self.mult, self.unit
        lab = [self.names] * 4
        _compare(rep, "associativity", einsum("ijm,mkn->ijkn", mu, mu), einsum("jkm,imn->ijkn", mu, mu), lab, 3)
        I = _delta(self.field, d)
        _compare(rep, "left unitality", einsum("i,ijk->jk", u, mu), I, lab, 1)
        _compare(rep, "right unitality", einsum("j,ijk->ik", u, mu), I, lab, 1)
        return rep

    def opposite(self) -> "FiniteAlgebra":
        return FiniteAlgebra(self.field, self.mult.transpose(1, 0, 2), self.unit, self.names)

    def is_commutative(self) -> bool:
        return self.mult == self.mult.transpose(1, 0, 2)


@dataclass(frozen=True, eq=False)
class FiniteBialgebra:
    algebra: FiniteAlgebra
    comult: ExactArray
    counit: ExactArray

    def __post_init__(self):
        d = self.algebra.dim
        if self.comult.shape != (d, d, d):
            raise StructureError(f"comultiplication has shape {self.comult.shape}, expected {(d, d, d)}")
        if self.counit.shape != (d,):
            raise StructureError(f"counit has shape {self.counit.shape}, expected {(d,)}")

    @property
    def field(self) -> Field:
        return self.algebra.field

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def names(self) -> tuple[str, ...]:
        return self.algebra.names

    @property
    def mult(self) -> ExactArray:
        return self.algebra.mult

    @property
    def unit(self) -> ExactArray:
        return self.algebra.unit

    def validate(self) -> ValidationReport:
        rep = self.algebra.validate()
        rep.subject = "bialgebra"
        D, eps, mu, u = self.comult, self.counit, self.mult, self.unit
        lab = [self.names] * 4
        I = _delta(self.field, self.dim)
        _compare(rep, "coassociativity", einsum("imc,mab->iabc", D, D), einsum("iam,mbc->iabc", D, D), lab, 1)
        _compare(rep, "left counit", einsum("j,ijk->ik", eps, D), I, lab, 1)
        _compare(rep, "right counit", einsum("k,ijk->ij", eps, D), I, lab, 1)
        _compare(rep, "comultiplication is multiplicative",
                 einsum("xym,mab->xyab", mu, D),
                 einsum("xpq,yrs,pra,qsb->xyab", D, D, mu, mu), lab, 2)
        _compare(rep, "comultiplication is unital", einsum("i,iab->ab", u, D), einsum("a,b->ab", u, u), lab, 0)
        _compare(rep, "counit is multiplicative", einsum("xym,m->xy", mu, eps), einsum("x,y->xy", eps, eps), lab, 2)
        _compare(rep, "counit is unital", einsum("i,i->", u, eps).reshape(1),
                 ExactArray.from_values(self.field, [1]), lab, 0)
        return rep

    def iterated_coproduct(self, b: ExactArray, k: int) -> ExactArray:
        """``Delta^{(k)}(b)`` in ``H^{(x) k}``, expanding on the first slot."""
        if k < 1:
            raise ValueError(f"iterated coproduct needs k >= 1, got {k}")
        if b.shape != (self.dim,):
            raise StructureError(f"element of length {b.shape} in a {self.dim}-dimensional bialgebra")
        t = b
        for level in range(2, k + 1):
            # (Delta (x) id^{level-2}) applied to slot 0
            t = tensordot(self.comult, t, axes=([0], [0]))
        return t

    def basis_coproduct(self, i: int, k: int) -> ExactArray:
        return self._coproducts(k)[i]

    def _coproducts(self, k: int) -> list[ExactArray]:
        cache = self.__dict__.setdefault("_cop_cache", {})
        if k not in cache:
            cache[k] = [self.iterated_coproduct(ExactArray.basis_vector(self.field, self.dim, i), k)
                        for i in range(self.dim)]
        return cache[k]


def trivial_bialgebra(field: Field, name: str = "1") -> FiniteBialgebra:
    """H = K with its one grouplike basis element."""
    one = ExactArray.from_values(field, [1])
    alg = FiniteAlgebra(field, ExactArray.from_values(field, [[[1]]]), one, (name,))
    return FiniteBialgebra(alg, ExactArray.from_values(field, [[[1]]]), one)


@dataclass(frozen=True, eq=False)
class ModuleAlgebra:
    hopf: FiniteBialgebra
    alg: FiniteAlgebra
    action: ExactArray
    name: str = ""
    description: str = ""

    def __post_init__(self):
        if self.hopf.field != self.alg.field:
            raise StructureError(
                f"bialgebra over {self.hopf.field.descriptor} but algebra over {self.alg.field.descriptor}"
            )
        shape = (self.hopf.dim, self.alg.dim, self.alg.dim)
        if self.action.shape != shape:
            raise StructureError(f"action table has shape {self.action.shape}, expected {shape}")

    @property
    def field(self) -> Field:
        return self.alg.field

    @property
    def dim(self) -> int:
        return self.alg.dim

    @cached_property
    def rho(self) -> list[ExactArray]:
        """``rho[b][a, c]``: action of the basis element ``b`` as a (d, d) table."""
        return [self.action[b] for b in range(self.hopf.dim)]

    def act(self, b: ExactArray, a: ExactArray) -> ExactArray:
        return einsum("b,a,bac->c", b, a, self.action)

    def validate(self) -> ValidationReport:
        rep = ValidationReport(self.name or "module-algebra")
        rep.extend(self.alg.validate())
        rep.extend(self.hopf.validate())
        H, A = self.hopf, self.alg
        rho, muA, muH, D = self.action, A.mult, H.mult, H.comult
        labH, labA = H.names, A.names
        I = _delta(self.field, A.dim)
        _compare(rep, "unit of H acts as identity", einsum("b,bac->ac", H.unit, rho), I, [labA], 1)
        _compare(rep, "module action (xy).a = x.(y.a)",
                 einsum("xym,mac->xyac", muH, rho), einsum("yat,xtc->xyac", rho, rho),
                 [labH, labH, labA], 3)
        _compare(rep, "module-algebra axiom b(a1 a2) = sum (b1 a1)(b2 a2)",
                 einsum("ijm,bmc->bijc", muA, rho),
                 einsum("bpq,pis,qjt,stc->bijc", D, rho, rho, muA),
                 [labH, labA, labA], 3)
        _compare(rep, "unit compatibility b.1 = eps(b) 1",
                 einsum("i,bic->bc", A.unit, rho), einsum("b,c->bc", H.counit, A.unit),
                 [labH], 1)
        return rep

    # --- tensors in A^{(x) k} -------------------------------------------------

    def apply_to_slot(self, t: ExactArray, rho: ExactArray, axis: int) -> ExactArray:
        """Apply the (d, d) action table ``rho`` to one axis of ``t``."""
        r = tensordot(t, rho, axes=([axis], [0]))
        return r.moveaxis(-1, axis)

    def act_diagonal(self, b: ExactArray, t: ExactArray, offset: int = 0) -> ExactArray:
        """``sum b_(1) t_1 (x) ... (x) b_(k) t_k`` on the axes ``offset, ..., ndim-1``."""
        k = t.ndim - offset
        if k < 1:
            raise ValueError("act_diagonal needs at least one tensor slot")
        if any(n != self.dim for n in t.shape[offset:]):
            raise StructureError(f"tensor of shape {t.shape} is not in A^(x){k}")
        cop = self.hopf.iterated_coproduct(b, k)
        total = None
        for hs in cop.nonzero():
            c = cop[hs]
            term = t
            for s, h in enumerate(hs):
                term = self.apply_to_slot(term, self.rho[h], offset + s)
            term = term.scale(c)
            total = term if total is None else total + term
        return total if total is not None else ExactArray.zeros(self.field, t.shape)

    def diagonal_action_matrix(self, b: ExactArray, k: int) -> ExactArray:
        """Matrix of ``act_diagonal(b, -)`` on ``A^{(x) k}`` in the flattened basis."""
        d = self.dim
        if k == 0:
            # A^{(x) 0} = K, on which b acts by its counit
            return einsum("b,b->", b, self.hopf.counit).reshape(1, 1)
        n = d**k
        batch = ExactArray.identity(self.field, n).reshape((n,) + (d,) * k)
        out = self.act_diagonal(b, batch, offset=1)
        # row j of out.reshape(n, n) is the image of basis tensor j
        return out.reshape(n, n).T


def iterated_coproduct(h: FiniteBialgebra, b: ExactArray, k: int) -> ExactArray:
    return h.iterated_coproduct(b, k)


def act_diagonal(ma: ModuleAlgebra, b: ExactArray, t: ExactArray) -> ExactArray:
    return ma.act_diagonal(b, t)


def validate_module_algebra(ma: ModuleAlgebra) -> ValidationReport:
    return ma.validate()


def basis_tensor(field: Field, d: int, idx: tuple[int, ...]) -> ExactArray:
    t = np.zeros((d,) * len(idx), dtype=np.int64)
    t[idx] = 1
    return ExactArray(field, t, 1, normalized=True)


def simple_tensor(vectors: list[ExactArray]) -> ExactArray:
    letters = "abcdefghijklmnop"[: len(vectors)]
    return einsum(",".join(letters) + "->" + letters, *vectors)


def all_index_tuples(d: int, k: int):
    return itertools.product(range(d), repeat=k)
