"""Hopf-Hochschild cochains in reduced form.

An X-linear map ``g: A^{(x)(n+2)} -> A`` is determined by its reduction
``f(a_1 ... a_n) = g(1 (x) a_1 ... a_n (x) 1)`` through

    g(a_0 (x) ... (x) a_{n+1}) = a_0 f(a_1 ... a_n) a_{n+1},

and the reductions that occur are exactly the H-equivariant multilinear maps.
A reduced cochain of degree n is a tensor with axes ``[out, in_1, ..., in_n]``;
its matrix (``dim A`` rows, ``dim A ** n`` columns) is the column-major
reshape.  Unreduced maps have axes ``[out, a_0, ..., a_{n+1}]``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import ExactArray, SubspaceBasis, einsum, kron, nullspace, stack, tensordot
from .structures import ModuleAlgebra, StructureError

DEFAULT_DEGREE_CAP = 4
_LETTERS = "abcdefghijlnpqstuvwxyz"


class DegreeCapError(RuntimeError):
    """A cochain degree beyond the configured cap was requested."""


class ContractError(ValueError):
    """Input that violates equivariance or X-linearity."""


@dataclass(frozen=True, eq=False)
class ReducedCochain:
    """A degree-n cochain, or with ``batch=1`` a stack of them along a leading axis."""

    degree: int
    tensor: ExactArray
    batch: int = 0

    def __post_init__(self):
        if self.batch not in (0, 1):
            raise StructureError("at most one batch axis is supported")
        if self.tensor.ndim != self.degree + 1 + self.batch:
            raise StructureError(f"degree-{self.degree} cochain needs {self.degree + 1 + self.batch} axes, "
                                 f"got shape {self.tensor.shape}")

    @classmethod
    def from_vector(cls, degree: int, dim: int, v: ExactArray) -> "ReducedCochain":
        return cls(degree, v.reshape((dim,) * (degree + 1)))

    @classmethod
    def from_matrix(cls, m: ExactArray) -> "ReducedCochain":
        d, cols = m.shape
        n = 0
        while d**n < cols:
            n += 1
        if d**n != cols:
            raise StructureError(f"{cols} columns is not a power of {d}")
        return cls(n, m.reshape((d,) * (n + 1)))

    @classmethod
    def zero(cls, ma: ModuleAlgebra, degree: int, batch_size: int | None = None) -> "ReducedCochain":
        lead = () if batch_size is None else (batch_size,)
        return cls(degree, ExactArray.zeros(ma.field, lead + (ma.dim,) * (degree + 1)), len(lead))

    @classmethod
    def stack(cls, cochains: list["ReducedCochain"]) -> "ReducedCochain":
        """Batch unbatched cochains of one degree along a new leading axis."""
        c0 = cochains[0]
        return cls(c0.degree, stack(c0.field, [c.tensor for c in cochains]), 1)

    @property
    def field(self):
        return self.tensor.field

    @property
    def dim(self) -> int:
        return self.tensor.shape[self.batch]

    @property
    def batch_size(self) -> int | None:
        return self.tensor.shape[0] if self.batch else None

    def item(self, i: int) -> "ReducedCochain":
        if not self.batch:
            raise ValueError("not a batched cochain")
        return ReducedCochain(self.degree, self.tensor[i])

    def _unbatched(self) -> None:
        if self.batch:
            raise ValueError("operation needs an unbatched cochain")

    @property
    def matrix(self) -> ExactArray:
        self._unbatched()
        return self.tensor.reshape(self.dim, self.dim**self.degree)

    @property
    def vector(self) -> ExactArray:
        self._unbatched()
        return self.tensor.flatten()

    def is_zero(self) -> bool:
        return self.tensor.is_zero()

    def __eq__(self, other):
        return (isinstance(other, ReducedCochain) and self.degree == other.degree
                and self.batch == other.batch and self.tensor == other.tensor)

    def __hash__(self):
        return hash((self.degree, self.batch, self.tensor))

    def _same(self, other: "ReducedCochain") -> None:
        if self.degree != other.degree:
            raise StructureError(f"cannot add cochains of degrees {self.degree} and {other.degree}")

    def _wrap(self, t: ExactArray, other: "ReducedCochain | None" = None) -> "ReducedCochain":
        return ReducedCochain(self.degree, t, max(self.batch, other.batch if other else 0))

    def _broadcast(self, other: "ReducedCochain"):
        a, b = self.tensor, other.tensor
        if self.batch == other.batch:
            return a, b
        # one side batched: repeat the other along the batch axis
        if self.batch:
            return a, stack(b.field, [b] * self.batch_size)
        return stack(a.field, [a] * other.batch_size), b

    def __add__(self, other):
        self._same(other)
        a, b = self._broadcast(other)
        return self._wrap(a + b, other)

    def __sub__(self, other):
        self._same(other)
        a, b = self._broadcast(other)
        return self._wrap(a - b, other)

    def __neg__(self):
        return self._wrap(-self.tensor)

    def scale(self, s) -> "ReducedCochain":
        return self._wrap(self.tensor.scale(s))

    def signed(self, exponent: int) -> "ReducedCochain":
        return -self if exponent % 2 else self

    def mismatches(self, other: "ReducedCochain") -> list[int]:
        """Batch positions where two cochains differ (``[0]`` or ``[]`` when unbatched)."""
        if self.degree != other.degree:
            return list(range(self.batch_size or other.batch_size or 1))
        a, b = self._broadcast(other)
        if not (self.batch or other.batch):
            return [] if a == b else [0]
        diff = (a - b).num
        flat = diff.reshape(diff.shape[0], -1)
        return [int(i) for i in range(flat.shape[0]) if flat[i].any()]

    def __call__(self, *inputs: ExactArray) -> ExactArray:
        """Evaluate on ``a_1 (x) ... (x) a_n`` given as vectors."""
        self._unbatched()
        if len(inputs) != self.degree:
            raise ValueError(f"degree-{self.degree} cochain applied to {len(inputs)} inputs")
        t = self.tensor
        for v in inputs:
            t = tensordot(t, v, axes=([1], [0]))
        return t

    def __repr__(self):
        b = f", batch of {self.batch_size}" if self.batch else ""
        return f"ReducedCochain(degree={self.degree}{b}, {self.tensor!r})"


# --- equivariance -----------------------------------------------------------


def precompose_diagonal(ma: ModuleAlgebra, b: ExactArray, t: ExactArray, offset: int = 1) -> ExactArray:
    """``t o (b acting diagonally on the input axes offset, ...)``."""
    k = t.ndim - offset
    if k == 0:
        return t.scale(einsum("b,b->", b, ma.hopf.counit).values()[0])
    cop = ma.hopf.iterated_coproduct(b, k)
    total = None
    for hs in cop.nonzero():
        term = t
        for s, h in enumerate(hs):
            # input slot s sees h . a, so contract against rho_h transposed
            term = ma.apply_to_slot(term, ma.rho[h].T, offset + s)
        term = term.scale(cop[hs])
        total = term if total is None else total + term
    return total if total is not None else ExactArray.zeros(ma.field, t.shape)


def postcompose_action(ma: ModuleAlgebra, h: int, t: ExactArray, axis: int = 0) -> ExactArray:
    return ma.apply_to_slot(t, ma.rho[h], axis)


def equivariance_defects(ma: ModuleAlgebra, f: ReducedCochain) -> list[str]:
    """Basis elements b of H with ``f(b . v) != b . f(v)`` for some basis tensor v."""
    bad = []
    for h in range(ma.hopf.dim):
        hb = ExactArray.basis_vector(ma.field, ma.hopf.dim, h)
        if precompose_diagonal(ma, hb, f.tensor) != postcompose_action(ma, h, f.tensor):
            bad.append(ma.hopf.names[h])
    return bad


def is_equivariant(ma: ModuleAlgebra, f: ReducedCochain) -> bool:
    return not equivariance_defects(ma, f)


# --- cochain spaces ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CochainSpace:
    degree: int
    algebra_dim: int
    basis: SubspaceBasis

    @property
    def dim(self) -> int:
        return self.basis.dim

    @property
    def ambient_dim(self) -> int:
        return self.basis.ambient_dim

    def cochain(self, i: int) -> ReducedCochain:
        return ReducedCochain.from_vector(self.degree, self.algebra_dim, self.basis.vector(i))

    def cochains(self) -> list[ReducedCochain]:
        return [self.cochain(i) for i in range(self.dim)]

    def combination(self, coords: ExactArray) -> ReducedCochain:
        return ReducedCochain.from_vector(self.degree, self.algebra_dim, self.basis.combination(coords))

    def contains(self, f: ReducedCochain) -> bool:
        return f.degree == self.degree and self.basis.contains(f.vector)

    def coordinates(self, f: ReducedCochain) -> ExactArray:
        return self.basis.coordinates(f.vector)


def _check_cap(n: int, cap: int) -> None:
    if n < 0:
        raise ValueError(f"negative degree {n}")
    if n > cap:
        raise DegreeCapError(f"degree {n} exceeds the cochain degree cap {cap}")


def equivariance_constraints(ma: ModuleAlgebra, n: int) -> ExactArray:
    """Rows ``vec(T D_b) - vec(rho_b T)`` for every basis element b of H."""
    d = ma.dim
    blocks = []
    for h in range(ma.hopf.dim):
        hb = ExactArray.basis_vector(ma.field, ma.hopf.dim, h)
        D = ma.diagonal_action_matrix(hb, n)  # (d^n, d^n), columns are images of basis tensors
        P = ma.rho[h].T  # P[c, a]: coefficient of e_c in h . e_a
        blocks.append(kron(D.T, ExactArray.identity(ma.field, d)) - kron(ExactArray.identity(ma.field, d**n), P))
    return stack(ma.field, blocks).reshape(len(blocks) * d ** (n + 1), d ** (n + 1), order="C")


def cochain_space_basis(ma: ModuleAlgebra, n: int, cap: int = DEFAULT_DEGREE_CAP) -> CochainSpace:
    """RREF basis of the H-equivariant maps ``A^{(x) n} -> A``."""
    _check_cap(n, cap)
    cache = ma.__dict__.setdefault("_spaces", {})
    if n not in cache:
        C = equivariance_constraints(ma, n)
        if C.is_zero():
            basis = SubspaceBasis.full(ma.field, ma.dim ** (n + 1))
        else:
            basis = nullspace(C)
        cache[n] = CochainSpace(n, ma.dim, basis)
    return cache[n]


# --- extension and reduction ------------------------------------------------


def _extend_tensor(ma: ModuleAlgebra, t: ExactArray, n: int) -> ExactArray:
    """``G[k, a_0, c_1..c_n, z] = sum mu[a_0, o, m] t[o, c..] mu[m, z, k]``."""
    ins = _LETTERS[:n]
    mu = ma.alg.mult
    return einsum(f"Aom,o{ins},mZk->kA{ins}Z", mu, t, mu)


def x_linearity_defects(ma: ModuleAlgebra, g: ExactArray) -> list[str]:
    """Generators ``e (x) 1 (x) 1``, ``1 (x) e (x) 1``, ``1 (x) 1 (x) h`` of X on which g fails."""
    A, H = ma.alg, ma.hopf
    last = g.ndim - 1
    mu = A.mult
    bad = []
    for i in range(A.dim):
        L = mu[i]  # L[a, m]: e_i a
        lhs = ma.apply_to_slot(g, L.T, 1)
        rhs = ma.apply_to_slot(g, mu[i], 0)
        if lhs != rhs:
            bad.append(f"{A.names[i]} (x) 1 (x) 1")
    for x in range(A.dim):
        R = mu[:, x]  # R[z, m]: z e_x
        lhs = ma.apply_to_slot(g, R.T, last)
        rhs = ma.apply_to_slot(g, R, 0)
        if lhs != rhs:
            bad.append(f"1 (x) {A.names[x]} (x) 1")
    for h in range(H.dim):
        hb = ExactArray.basis_vector(ma.field, H.dim, h)
        if precompose_diagonal(ma, hb, g, offset=1) != postcompose_action(ma, h, g):
            bad.append(f"1 (x) 1 (x) {H.names[h]}")
    return bad


def extend(ma: ModuleAlgebra, f: ReducedCochain, check: bool = True) -> ExactArray:
    """The X-linear map ``a_0 (x) ... (x) a_{n+1} -> a_0 f(a_1 ... a_n) a_{n+1}``."""
    if check:
        bad = equivariance_defects(ma, f)
        if bad:
            raise ContractError(f"cochain is not H-equivariant for {', '.join(bad)}")
    g = _extend_tensor(ma, f.tensor, f.degree)
    if check:
        bad = x_linearity_defects(ma, g)
        if bad:  # pragma: no cover - would mean a bug in the extension
            raise AssertionError(f"extension is not X-linear on {', '.join(bad)}")
    return g


def reduce(ma: ModuleAlgebra, g: ExactArray, check: bool = True) -> ReducedCochain:
    """``f(a_1 ... a_n) = g(1 (x) a_1 ... a_n (x) 1)`` for an X-linear g."""
    if g.ndim < 3:
        raise StructureError(f"unreduced map needs at least 3 axes, got shape {g.shape}")
    if check:
        bad = x_linearity_defects(ma, g)
        if bad:
            raise ContractError(f"map is not X-linear; violated generators: {', '.join(bad)}")
    u = ma.alg.unit
    t = tensordot(g, u, axes=([1], [0]))
    t = tensordot(t, u, axes=([t.ndim - 1], [0]))
    return ReducedCochain(g.ndim - 3, t)


# --- the differential -------------------------------------------------------


def d_ch_tensor(ma: ModuleAlgebra, t: ExactArray, n: int, batch: bool = False) -> ExactArray:
    """Reduced differential on a tensor ``[out, in_1..in_n]`` (with a leading batch axis if asked).

    ``(d f)(a_1..a_{n+1}) = a_1 f(a_2..) + sum_i (-1)^i f(.., a_i a_{i+1}, ..) + (-1)^{n+1} f(a_1..a_n) a_{n+1}``
    """
    mu = ma.alg.mult
    B = "B" if batch else ""
    L = _LETTERS[: n + 1]
    out = f"{B}k{L}"
    total = einsum(f"{L[0]}ok,{B}o{L[1:]}->{out}", mu, t)
    for i in range(1, n + 1):
        term = einsum(f"{L[i - 1]}{L[i]}m,{B}k{L[:i - 1]}m{L[i + 1:]}->{out}", mu, t)
        total = total - term if i % 2 else total + term
    last = einsum(f"o{L[n]}k,{B}o{L[:n]}->{out}", mu, t)
    return total - last if (n + 1) % 2 else total + last


def d_CH(ma: ModuleAlgebra, f: ReducedCochain, cap: int = DEFAULT_DEGREE_CAP) -> ReducedCochain:
    _check_cap(f.degree + 1, cap)
    return ReducedCochain(f.degree + 1, d_ch_tensor(ma, f.tensor, f.degree, batch=bool(f.batch)), f.batch)


def bar_differential_matrix(ma: ModuleAlgebra, level: int) -> ExactArray:
    """Matrix of ``d^{CB}: CB_level -> CB_{level-1}`` in the flattened bases, built from the face maps."""
    from .crossed import face_tensor

    d = ma.dim
    N = d ** (level + 2)
    batch = ExactArray.identity(ma.field, N).reshape((N,) + (d,) * (level + 2))
    total = None
    for j in range(level + 1):
        f = face_tensor(ma, batch, j, offset=1)
        total = f if total is None else (total - f if j % 2 else total + f)
    # row c of total is d(e_c); return [target, source]
    return total.reshape(N, d ** (level + 1)).T


def d_CH_dual(ma: ModuleAlgebra, f: ReducedCochain, cap: int = DEFAULT_DEGREE_CAP) -> ReducedCochain:
    """``reduce(extend(f) o d^{CB})``: the differential as the dual of the bar differential."""
    _check_cap(f.degree + 1, cap)
    n, d = f.degree, ma.dim
    g = extend(ma, f).reshape(d, d ** (n + 2))
    dg = g @ bar_differential_matrix(ma, n + 1)
    return reduce(ma, dg.reshape((d,) * (n + 4)))


def d_CH_matrix(ma: ModuleAlgebra, n: int, cap: int = DEFAULT_DEGREE_CAP) -> ExactArray:
    """``d_CH^n`` in the canonical bases: row i holds the degree-(n+1) coordinates of ``d(basis_i)``."""
    src = cochain_space_basis(ma, n, cap)
    dst = cochain_space_basis(ma, n + 1, cap)
    if src.dim == 0:
        return ExactArray.zeros(ma.field, (0, dst.dim))
    d = ma.dim
    t = src.basis.vectors.reshape((src.dim,) + (d,) * (n + 1))
    images = d_ch_tensor(ma, t, n, batch=True).reshape(src.dim, d ** (n + 2))
    return dst.basis.coordinates(images)
