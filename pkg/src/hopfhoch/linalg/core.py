"""Row reduction, nullspaces, spans and quotients over an exact field."""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import reduce

import numpy as np

from . import _backend
from .array import ExactArray, stack
from .fields import Field, FieldError, PrimeField


class NotASubspaceError(ValueError):
    pass


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def rref(m: ExactArray) -> tuple[ExactArray, int, tuple[int, ...]]:
    """Reduced row echelon form, rank and pivot columns.

    Pivots are the first nonzero entry scanning left to right, so the result
    is the canonical RREF of the row space.
    """
    if m.ndim != 2:
        raise ValueError(f"rref needs a matrix, got shape {m.shape}")
    f = m.field
    nrows, ncols = m.shape
    if nrows == 0 or ncols == 0:
        return ExactArray.zeros(f, m.shape), 0, ()
    if isinstance(f, PrimeField):
        work, pivots = _backend.rref_modp(m.num, f.p)
        return ExactArray(f, work, 1, normalized=True), len(pivots), tuple(pivots)
    work, pivots = _backend.rref_int(m.num)
    rank = len(pivots)
    if rank == 0:
        return ExactArray.zeros(f, m.shape), 0, ()
    pivvals = [int(work[r, c]) for r, c in enumerate(pivots)]
    L = reduce(_lcm, pivvals, 1)
    if L == 1:
        out = np.zeros((nrows, ncols), dtype=work.dtype)
        out[:rank] = work[:rank]
        return ExactArray(f, out, 1), rank, tuple(pivots)
    out = np.zeros((nrows, ncols), dtype=object)
    for r, pv in enumerate(pivvals):
        out[r] = np.asarray(work[r], dtype=object) * (L // pv)
    return ExactArray(f, out, L), rank, tuple(pivots)


def rank(m: ExactArray) -> int:
    if m.ndim != 2:
        raise ValueError("rank needs a matrix")
    # fewer rows means fewer pivot sweeps
    if m.shape[0] > m.shape[1]:
        m = m.T
    return rref(m)[1]


@dataclass(frozen=True)
class SubspaceBasis:
    """A subspace of ``field^ambient_dim`` held as the rows of its RREF."""

    field: Field
    ambient_dim: int
    vectors: ExactArray
    pivots: tuple[int, ...] = dc_field(default=())

    def __post_init__(self):
        if self.vectors.shape != (len(self.pivots), self.ambient_dim):
            raise ValueError(
                f"basis shape {self.vectors.shape} does not match {len(self.pivots)} pivots "
                f"in dimension {self.ambient_dim}"
            )

    @classmethod
    def zero(cls, field: Field, ambient_dim: int) -> "SubspaceBasis":
        return cls(field, ambient_dim, ExactArray.zeros(field, (0, ambient_dim)), ())

    @classmethod
    def full(cls, field: Field, ambient_dim: int) -> "SubspaceBasis":
        return cls(field, ambient_dim, ExactArray.identity(field, ambient_dim), tuple(range(ambient_dim)))

    @classmethod
    def span(cls, field: Field, ambient_dim: int, rows: ExactArray | list[ExactArray]) -> "SubspaceBasis":
        if isinstance(rows, list):
            rows = stack(field, rows, shape=(ambient_dim,))
        if rows.shape[0] == 0:
            return cls.zero(field, ambient_dim)
        if rows.shape[1] != ambient_dim:
            raise ValueError(f"vectors of length {rows.shape[1]} in dimension {ambient_dim}")
        R, r, piv = rref(rows)
        return cls(field, ambient_dim, R[:r] if r else ExactArray.zeros(field, (0, ambient_dim)), piv)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def __len__(self) -> int:
        return self.dim

    def vector(self, i: int) -> ExactArray:
        return self.vectors[i]

    def _check(self, v: ExactArray) -> None:
        if v.field != self.field:
            raise FieldError(f"mixed fields: {v.field.descriptor} and {self.field.descriptor}")
        if v.shape[-1] != self.ambient_dim:
            raise ValueError(f"vector of length {v.shape[-1]} against ambient dimension {self.ambient_dim}")

    def reduce(self, v: ExactArray) -> ExactArray:
        """Subtract the basis combination matching ``v`` on the pivot columns.

        Works on a single vector or on the rows of a matrix.
        """
        self._check(v)
        if self.dim == 0:
            return v
        coords = v[..., list(self.pivots)]
        return v - coords @ self.vectors if v.ndim > 1 else v - (coords.reshape(1, self.dim) @ self.vectors).reshape(self.ambient_dim)

    def contains(self, v: ExactArray) -> bool:
        return self.reduce(v).is_zero()

    def coordinates(self, v: ExactArray) -> ExactArray:
        """Coefficients of ``v`` in this basis; raises if ``v`` is outside the span."""
        if not self.contains(v):
            raise NotASubspaceError("vector is not in the span")
        if self.dim == 0:
            return ExactArray.zeros(self.field, v.shape[:-1] + (0,))
        return v[..., list(self.pivots)]

    def combination(self, coords: ExactArray) -> ExactArray:
        if coords.shape[-1] != self.dim:
            raise ValueError(f"{coords.shape[-1]} coordinates for a {self.dim}-dimensional space")
        if self.dim == 0:
            return ExactArray.zeros(self.field, coords.shape[:-1] + (self.ambient_dim,))
        if coords.ndim == 1:
            return (coords.reshape(1, self.dim) @ self.vectors).reshape(self.ambient_dim)
        return coords @ self.vectors

    def is_subspace_of(self, other: "SubspaceBasis") -> bool:
        return self.dim == 0 or other.reduce(self.vectors).is_zero()


def in_span(v: ExactArray, basis: SubspaceBasis) -> bool:
    if v.ndim != 1:
        raise ValueError("in_span expects a single vector")
    return basis.contains(v)


def nullspace(m: ExactArray) -> SubspaceBasis:
    """Basis (in RREF) of ``{v : m v = 0}``; its dimension is ``cols - rank``."""
    f = m.field
    nrows, ncols = m.shape
    R, r, piv = rref(m)
    free = [c for c in range(ncols) if c not in set(piv)]
    if not free:
        return SubspaceBasis.zero(f, ncols)
    if r == 0:
        return SubspaceBasis.full(f, ncols)
    # v[free_k] = 1, v[pivot_i] = -R[i, free_k]
    neg = -(R[:r].T)[free]
    num = np.zeros((len(free), ncols), dtype=neg.num.dtype)
    num[:, list(piv)] = neg.num
    for k, c in enumerate(free):
        num[k, c] = neg.den
    return SubspaceBasis.span(f, ncols, ExactArray(f, num, neg.den))


@dataclass(frozen=True)
class Quotient:
    dim: int
    representatives: SubspaceBasis

    def class_coordinates(self, v: ExactArray, subspace: SubspaceBasis) -> ExactArray:
        """Coordinates of the coset ``v + subspace`` in the representative basis."""
        w = subspace.reduce(v)
        return self.representatives.coordinates(w)


def quotient(space: SubspaceBasis, subspace: SubspaceBasis) -> Quotient:
    """``space / subspace`` with canonical coset representatives.

    Representatives are the RREF of the space vectors reduced against the
    subspace, so they vanish on the subspace pivot columns.
    """
    if space.ambient_dim != subspace.ambient_dim:
        raise ValueError("ambient dimensions differ")
    if not subspace.is_subspace_of(space):
        raise NotASubspaceError("not a subspace: some subspace vector lies outside the space")
    if space.dim == 0:
        return Quotient(0, SubspaceBasis.zero(space.field, space.ambient_dim))
    reps = SubspaceBasis.span(space.field, space.ambient_dim, subspace.reduce(space.vectors))
    assert reps.dim == space.dim - subspace.dim
    return Quotient(reps.dim, reps)


def quotient_dim(space: SubspaceBasis, subspace: SubspaceBasis) -> int:
    return quotient(space, subspace).dim


def solve(m: ExactArray, b: ExactArray) -> ExactArray | None:
    """One solution of ``m x = b`` (free variables set to 0), or None."""
    f = m.field
    nrows, ncols = m.shape
    if ncols == 0:
        return ExactArray.zeros(f, (0,)) if b.is_zero() else None
    # [m | b] with a common denominator
    cols = stack(f, [m.T[i] for i in range(ncols)] + [b])
    R, r, piv = rref(cols.T)
    if piv and piv[-1] == ncols:
        return None
    x = ExactArray.zeros(f, (ncols,))
    if r == 0:
        return x
    vals = R[:r, ncols]
    num = np.zeros(ncols, dtype=vals.num.dtype)
    num[list(piv)] = vals.num
    return ExactArray(f, num, vals.den)
