"""Exact scalar arithmetic and dense linear algebra over Q and F_p."""

from ._backend import available as available_backends, current as current_backend, set_backend, use_backend
from .array import ExactArray, einsum, kron, outer, stack, sum_arrays, tensordot
from .core import (
    NotASubspaceError,
    Quotient,
    SubspaceBasis,
    in_span,
    nullspace,
    quotient,
    quotient_dim,
    rank,
    rref,
    solve,
)
from .fields import GF, QQ, Field, FieldError, PrimeField, Rationals, field_from_descriptor

__all__ = [
    "ExactArray", "einsum", "kron", "outer", "stack", "sum_arrays", "tensordot",
    "NotASubspaceError", "Quotient", "SubspaceBasis", "in_span", "nullspace",
    "quotient", "quotient_dim", "rank", "rref", "solve",
    "GF", "QQ", "Field", "FieldError", "PrimeField", "Rationals", "field_from_descriptor",
    "available_backends", "current_backend", "set_backend", "use_backend",
]
