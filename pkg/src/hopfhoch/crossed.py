"""The crossed product algebra X = A (x) A (x) H and the bar complex CB_*(A).

X acts on CB_n(A) = A^{(x)(n+2)} by

    (a (x) a' (x) b)(a_0 (x) ... (x) a_{n+1})
        = sum a b_(1)a_0 (x) b_(2)a_1 (x) ... (x) b_(n+2)a_{n+1} a'

and each face map, which multiplies two adjacent tensor factors, is X-linear.
Elements of X are tensors of shape ``(dim A, dim A, dim H)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import ExactArray, einsum, tensordot
from .structures import ModuleAlgebra, StructureError, basis_tensor, simple_tensor

DEFAULT_LEVEL_CAP = 5


class LevelCapError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class CrossedElement:
    tensor: ExactArray

    @classmethod
    def basis(cls, ma: ModuleAlgebra, i: int, j: int, h: int) -> "CrossedElement":
        t = ExactArray.zeros(ma.field, (ma.dim, ma.dim, ma.hopf.dim)).num.copy()
        t[i, j, h] = 1
        return cls(ExactArray(ma.field, t))

    @classmethod
    def simple(cls, a: ExactArray, a2: ExactArray, b: ExactArray) -> "CrossedElement":
        return cls(simple_tensor([a, a2, b]))

    @classmethod
    def one(cls, ma: ModuleAlgebra) -> "CrossedElement":
        return cls.simple(ma.alg.unit, ma.alg.unit, ma.hopf.unit)

    def check(self, ma: ModuleAlgebra) -> None:
        shape = (ma.dim, ma.dim, ma.hopf.dim)
        if self.tensor.shape != shape:
            raise StructureError(f"element of X has shape {self.tensor.shape}, expected {shape}")

    def __eq__(self, other):
        return isinstance(other, CrossedElement) and self.tensor == other.tensor

    def __add__(self, other):
        return CrossedElement(self.tensor + other.tensor)


@dataclass(frozen=True, eq=False)
class BarChain:
    level: int
    tensor: ExactArray

    def __post_init__(self):
        if self.level < 0 or self.tensor.ndim != self.level + 2:
            raise StructureError(f"a level-{self.level} chain needs {self.level + 2} tensor slots, "
                                 f"got shape {self.tensor.shape}")

    @classmethod
    def basis(cls, ma: ModuleAlgebra, idx: tuple[int, ...]) -> "BarChain":
        return cls(len(idx) - 2, basis_tensor(ma.field, ma.dim, idx))

    @classmethod
    def simple(cls, vectors: list[ExactArray]) -> "BarChain":
        return cls(len(vectors) - 2, simple_tensor(vectors))

    def check(self, ma: ModuleAlgebra) -> None:
        if any(n != ma.dim for n in self.tensor.shape):
            raise StructureError(f"chain of shape {self.tensor.shape} over a {ma.dim}-dimensional algebra")

    def __eq__(self, other):
        return isinstance(other, BarChain) and self.level == other.level and self.tensor == other.tensor

    def __add__(self, other):
        return BarChain(self.level, self.tensor + other.tensor)

    def __sub__(self, other):
        return BarChain(self.level, self.tensor - other.tensor)

    def scale(self, s):
        return BarChain(self.level, self.tensor.scale(s))


def _second_coproducts(ma: ModuleAlgebra) -> ExactArray:
    """``D2[p, s, t, w]``: coefficient of ``e_s (x) e_t (x) e_w`` in Delta^2(e_p)."""
    cache = ma.__dict__.setdefault("_xcache", {})
    if "D2" not in cache:
        h = ma.hopf
        cache["D2"] = einsum("pmw,mst->pstw", h.comult, h.comult)
    return cache["D2"]


def x_structure(ma: ModuleAlgebra) -> ExactArray:
    """Structure constants of X: ``S[i,x,p, a,j,q, k,l,r]``.

    This is the coefficient of ``e_k (x) e_l (x) e_r`` in
    ``(e_i (x) e_x (x) e_p)(e_a (x) e_j (x) e_q)``, computed from
    ``(a1 (x) a1' (x) b1)(a2 (x) a2' (x) b2) = a1(b1_(1)a2) (x) (b1_(3)a2')a1' (x) b1_(2)b2``.
    """
    cache = ma.__dict__.setdefault("_xcache", {})
    if "S" not in cache:
        D2 = _second_coproducts(ma)
        mA, mH, rho = ma.alg.mult, ma.hopf.mult, ma.action
        # Delta^2(e_p) = e_s (x) e_v (x) e_w
        cache["S"] = einsum("psvw,sam,imk,wjn,nxl,vqr->ixpajqklr", D2, rho, mA, rho, mA, mH)
    return cache["S"]


def x_multiply(ma: ModuleAlgebra, u: CrossedElement, v: CrossedElement) -> CrossedElement:
    u.check(ma)
    v.check(ma)
    return CrossedElement(einsum("ixp,ajq,ixpajqklr->klr", u.tensor, v.tensor, x_structure(ma)))


def x_act_on_A(ma: ModuleAlgebra, u: CrossedElement, a0: ExactArray) -> ExactArray:
    """``(a (x) a' (x) b) a0 = a (b a0) a'``."""
    u.check(ma)
    mA, rho = ma.alg.mult, ma.action
    return einsum("ixp,c,pcm,imn,nxk->k", u.tensor, a0, rho, mA, mA)


def _left_mult(ma: ModuleAlgebra, a: ExactArray, t: ExactArray, axis: int) -> ExactArray:
    """``a * (slot axis)`` for a fixed element ``a``."""
    L = einsum("i,imk->mk", a, ma.alg.mult)
    return ma.apply_to_slot(t, L, axis)


def _right_mult(ma: ModuleAlgebra, a: ExactArray, t: ExactArray, axis: int) -> ExactArray:
    R = einsum("x,mxk->mk", a, ma.alg.mult)
    return ma.apply_to_slot(t, R, axis)


def x_act_tensor(ma: ModuleAlgebra, u: CrossedElement, t: ExactArray, offset: int = 0) -> ExactArray:
    """X-action on the tensor slots ``offset, ..., ndim-1`` of ``t``."""
    last = t.ndim - 1
    # act by each basis element of H once, then fold in the A (x) A^op part
    total = None
    for p in range(ma.hopf.dim):
        coeff = u.tensor[:, :, p]
        if coeff.is_zero():
            continue
        hp = ExactArray.basis_vector(ma.field, ma.hopf.dim, p)
        s = ma.act_diagonal(hp, t, offset=offset)
        # a_0 -> sum_i,x coeff[i, x] e_i a_0 ; a_last -> a_last e_x
        for i, x in coeff.nonzero():
            term = _right_mult(ma, ExactArray.basis_vector(ma.field, ma.dim, x),
                               _left_mult(ma, ExactArray.basis_vector(ma.field, ma.dim, i), s, offset),
                               last).scale(coeff[i, x])
            total = term if total is None else total + term
    return total if total is not None else ExactArray.zeros(ma.field, t.shape)


def x_act_on_bar(ma: ModuleAlgebra, u: CrossedElement, c: BarChain) -> BarChain:
    u.check(ma)
    c.check(ma)
    return BarChain(c.level, x_act_tensor(ma, u, c.tensor))


def _contract_adjacent(ma: ModuleAlgebra, t: ExactArray, j: int) -> ExactArray:
    """Multiply tensor slots ``j`` and ``j + 1`` into one slot at position ``j``."""
    r = tensordot(t, ma.alg.mult, axes=([j, j + 1], [0, 1]))
    return r.moveaxis(-1, j)


def bar_face(ma: ModuleAlgebra, j: int, c: BarChain) -> BarChain:
    """``d_j(a_0 (x) ... (x) a_{n+1}) = ... (x) a_j a_{j+1} (x) ...`` for level n >= 1."""
    c.check(ma)
    n = c.level
    if n < 1:
        raise ValueError("faces out of level 0 leave the bar complex; use augmentation")
    if not 0 <= j <= n:
        raise ValueError(f"face index {j} out of range 0..{n} at level {n}")
    return BarChain(n - 1, _contract_adjacent(ma, c.tensor, j))


def augmentation(ma: ModuleAlgebra, c: BarChain) -> ExactArray:
    """Level-0 face ``A (x) A -> A``, the multiplication."""
    c.check(ma)
    if c.level != 0:
        raise ValueError(f"augmentation is defined on level 0, got level {c.level}")
    return _contract_adjacent(ma, c.tensor, 0)


def bar_differential(ma: ModuleAlgebra, c: BarChain, cap: int = DEFAULT_LEVEL_CAP) -> BarChain:
    n = c.level
    if n < 1:
        raise ValueError("the bar differential is defined from level 1 on")
    if n > cap:
        raise LevelCapError(f"level {n} exceeds the bar complex cap {cap} (dimension {ma.dim ** (n + 2)})")
    total = bar_face(ma, 0, c)
    for j in range(1, n + 1):
        f = bar_face(ma, j, c)
        total = total - f if j % 2 else total + f
    return total


def face_tensor(ma: ModuleAlgebra, t: ExactArray, j: int, offset: int = 0) -> ExactArray:
    """Face map on the slots ``offset, ...`` of a batched tensor."""
    return _contract_adjacent(ma, t, offset + j)
