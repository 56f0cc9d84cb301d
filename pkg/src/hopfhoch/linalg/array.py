"""Exact dense arrays over a field.

An :class:`ExactArray` stores an integer numerator array and, over the
rationals, a single positive common denominator.  After every operation the
pair is brought to lowest terms (``gcd(all numerators, den) == 1``), so two
arrays are equal exactly when their shapes, numerators and denominators are.
Over ``F_p`` the denominator is always 1 and numerators are residues.

Numerators live in ``int64`` whenever an a-priori bound shows the next
operation cannot overflow; otherwise they are promoted to Python ints
(``dtype=object``) and demoted again once they fit.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .fields import QQ, Field, FieldError, PrimeField

_SAFE = 2**62


def _max_abs(num: np.ndarray) -> int:
    if num.size == 0:
        return 0
    if num.dtype == object:
        return max(abs(int(v)) for v in num.flat)
    return int(np.abs(num).max())


def _demote(num: np.ndarray) -> np.ndarray:
    if num.dtype == object and _max_abs(num) < _SAFE:
        return num.astype(np.int64)
    return num


def _promote(num: np.ndarray) -> np.ndarray:
    return num if num.dtype == object else num.astype(object)


def _gcd_all(num: np.ndarray, start: int) -> int:
    if num.size == 0:
        return start
    if num.dtype == object:
        return reduce(math.gcd, (int(v) for v in num.flat), start)
    return math.gcd(int(np.gcd.reduce(num, axis=None)), start)


def _check_same_field(*arrays: "ExactArray") -> Field:
    f = arrays[0].field
    for a in arrays[1:]:
        if a.field != f:
            raise FieldError(f"mixed fields: {f.descriptor} and {a.field.descriptor}")
    return f


class ExactArray:
    """An n-dimensional array of exact scalars over one field."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: Field, num, den: int = 1, *, normalized: bool = False):
        self.field = field
        num = np.asarray(num)
        if num.dtype != object and num.dtype != np.int64:
            num = num.astype(np.int64)
        self.num = num
        self.den = int(den)
        if not normalized:
            self._normalize()

    # construction ---------------------------------------------------------

    @classmethod
    def zeros(cls, field: Field, shape) -> "ExactArray":
        return cls(field, np.zeros(shape, dtype=np.int64), 1, normalized=True)

    @classmethod
    def identity(cls, field: Field, n: int) -> "ExactArray":
        return cls(field, np.eye(n, dtype=np.int64), 1, normalized=True)

    @classmethod
    def basis_vector(cls, field: Field, n: int, i: int) -> "ExactArray":
        v = np.zeros(n, dtype=np.int64)
        v[i] = 1
        return cls(field, v, 1, normalized=True)

    @classmethod
    def from_values(cls, field: Field, values, shape=None) -> "ExactArray":
        """Build from nested lists / arrays of ints, Fractions or scalar strings."""
        arr = np.array(values, dtype=object)
        if shape is not None:
            arr = arr.reshape(shape)
        flat = [field.coerce(v) for v in arr.flat]
        if isinstance(field, PrimeField):
            num = np.array(flat, dtype=object).reshape(arr.shape)
            return cls(field, _demote(num), 1)
        den = reduce(lambda a, b: a * b // math.gcd(a, b), (v.denominator for v in flat), 1)
        num = np.array([v.numerator * (den // v.denominator) for v in flat], dtype=object)
        return cls(field, _demote(num.reshape(arr.shape)), den)

    def _normalize(self) -> None:
        f = self.field
        if isinstance(f, PrimeField):
            if self.num.dtype == object:
                self.num = np.array([int(v) % f.p for v in self.num.flat], dtype=np.int64).reshape(
                    self.num.shape
                )
            else:
                self.num = np.mod(self.num, f.p)
            self.den = 1
            return
        if self.den == 1 and self.num.dtype != object:
            return
        if self.den == 0:
            raise FieldError("zero denominator")
        if self.den < 0:
            self.num = -self.num
            self.den = -self.den
        g = _gcd_all(self.num, self.den)
        if g == 0 or not self.num.any():
            self.num = np.zeros(self.num.shape, dtype=np.int64)
            self.den = 1
            return
        if g > 1:
            self.num = self.num // g
            self.den //= g
        self.num = _demote(self.num)

    # shape ----------------------------------------------------------------

    @property
    def shape(self) -> tuple:
        return self.num.shape

    @property
    def ndim(self) -> int:
        return self.num.ndim

    @property
    def size(self) -> int:
        return self.num.size

    def _wrap(self, num) -> "ExactArray":
        return ExactArray(self.field, num, self.den, normalized=True)

    def reshape(self, *shape, order: str = "F") -> "ExactArray":
        """Reshape with slot 0 varying fastest (Fortran order) by default."""
        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = tuple(shape[0])
        return self._wrap(self.num.reshape(shape, order=order))

    def flatten(self) -> "ExactArray":
        return self._wrap(self.num.reshape(-1, order="F"))

    def transpose(self, *axes) -> "ExactArray":
        return self._wrap(np.transpose(self.num, axes or None))

    def moveaxis(self, src, dst) -> "ExactArray":
        return self._wrap(np.moveaxis(self.num, src, dst))

    @property
    def T(self) -> "ExactArray":
        return self._wrap(self.num.T)

    def __getitem__(self, idx) -> "ExactArray | Fraction | int":
        sub = self.num[idx]
        if isinstance(sub, np.ndarray):
            return ExactArray(self.field, sub, self.den)
        return self._scalar(sub)

    def _scalar(self, v):
        if isinstance(self.field, PrimeField):
            return int(v)
        return Fraction(int(v), self.den)

    def copy(self) -> "ExactArray":
        return self._wrap(self.num.copy())

    # values ---------------------------------------------------------------

    def values(self) -> list:
        """Flat list of scalars in C order."""
        return [self._scalar(v) for v in self.num.flat]

    def tolist(self):
        arr = np.empty(self.shape, dtype=object)
        for idx in np.ndindex(*self.shape):
            arr[idx] = self._scalar(self.num[idx])
        return arr.tolist()

    def is_zero(self) -> bool:
        return not self.num.any()

    def nonzero(self) -> list[tuple]:
        return [tuple(int(i) for i in t) for t in zip(*np.nonzero(self.num))]

    def __eq__(self, other):
        if not isinstance(other, ExactArray):
            return NotImplemented
        return (
            self.field == other.field
            and self.shape == other.shape
            and self.den == other.den
            and np.array_equal(self.num, other.num)
        )

    def __hash__(self):
        return hash((self.field, self.shape, self.den, self.num.tobytes() if self.num.dtype != object else tuple(self.num.flat)))

    def __repr__(self):
        if self.den == 1:
            return f"ExactArray({self.field.descriptor}, {self.num.tolist()})"
        return f"ExactArray({self.field.descriptor}, {self.num.tolist()} / {self.den})"

    # arithmetic -----------------------------------------------------------

    def __neg__(self) -> "ExactArray":
        return ExactArray(self.field, -self.num, self.den)

    def __add__(self, other: "ExactArray") -> "ExactArray":
        f = _check_same_field(self, other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        if isinstance(f, PrimeField):
            return ExactArray(f, self.num + other.num, 1)
        L = self.den * other.den // math.gcd(self.den, other.den)
        sa, sb = L // self.den, L // other.den
        a, b = self.num, other.num
        if (_max_abs(a) * sa + _max_abs(b) * sb) >= _SAFE:
            a, b = _promote(a), _promote(b)
        return ExactArray(f, a * sa + b * sb, L)

    def __sub__(self, other: "ExactArray") -> "ExactArray":
        return self + (-other)

    def scale(self, s) -> "ExactArray":
        f = self.field
        s = f.coerce(s)
        if isinstance(f, PrimeField):
            num = self.num if s * (f.p - 1) < _SAFE else _promote(self.num)
            return ExactArray(f, num * s, 1)
        num = self.num
        if _max_abs(num) * abs(s.numerator) >= _SAFE:
            num = _promote(num)
        return ExactArray(f, num * s.numerator, self.den * s.denominator)

    def __mul__(self, s):
        if isinstance(s, ExactArray):
            raise TypeError("use tensordot/einsum/matmul for array products")
        return self.scale(s)

    __rmul__ = __mul__

    def __matmul__(self, other: "ExactArray") -> "ExactArray":
        return einsum_contract(np.matmul, self, other, inner=self.shape[-1] if self.ndim else 1)


def einsum_contract(op, *arrays: ExactArray, inner: int) -> ExactArray:
    """Apply a multilinear numpy ``op`` to numerators with overflow protection.

    ``inner`` bounds the number of products summed into one output entry.
    """
    f = _check_same_field(*arrays)
    if isinstance(f, PrimeField):
        bound = (f.p - 1) ** len(arrays) * max(inner, 1)
    else:
        bound = max(inner, 1)
        for a in arrays:
            bound *= _max_abs(a.num)
    nums = [a.num for a in arrays]
    if bound >= _SAFE:
        nums = [_promote(n) for n in nums]
    num = op(*nums)
    den = 1
    for a in arrays:
        den *= a.den
    return ExactArray(f, np.asarray(num), den)


def einsum(subscripts: str, *arrays: ExactArray) -> ExactArray:
    """Exact ``np.einsum`` with explicit ``->`` output."""
    lhs, out = subscripts.replace(" ", "").split("->")
    terms = lhs.split(",")
    sizes: dict[str, int] = {}
    for t, a in zip(terms, arrays):
        for ch, n in zip(t, a.shape):
            sizes[ch] = n
    inner = 1
    for ch, n in sizes.items():
        if ch not in out:
            inner *= n

    def op(*nums):
        if any(n.dtype == object for n in nums):
            nums = [_promote(n) for n in nums]
            return np.einsum(subscripts, *nums, optimize=False)
        return np.einsum(subscripts, *nums, optimize=len(nums) > 2)

    return einsum_contract(op, *arrays, inner=inner)


def tensordot(a: ExactArray, b: ExactArray, axes) -> ExactArray:
    ax_a, ax_b = axes
    if isinstance(ax_a, int):
        ax_a, ax_b = [ax_a], [ax_b]
    inner = 1
    for i in ax_a:
        inner *= a.shape[i]

    def op(x, y):
        return np.tensordot(x, y, axes=(list(ax_a), list(ax_b)))

    return einsum_contract(op, a, b, inner=inner)


def outer(*arrays: ExactArray) -> ExactArray:
    """Tensor product; axes of the first factor come first."""
    result = arrays[0]
    for b in arrays[1:]:
        result = einsum_contract(np.multiply.outer, result, b, inner=1)
    return result


def kron(a: ExactArray, b: ExactArray) -> ExactArray:
    """Kronecker product of matrices; ``vec(A X B) = kron(B.T, A) vec(X)`` for column-major vec."""
    return einsum_contract(np.kron, a, b, inner=1)


def stack(field: Field, arrays: Sequence[ExactArray], shape=None) -> ExactArray:
    """Stack arrays along a new leading axis over a common denominator."""
    if not arrays:
        if shape is None:
            raise ValueError("cannot stack an empty list without a shape")
        return ExactArray.zeros(field, (0,) + tuple(shape))
    for a in arrays:
        if a.field != field:
            raise FieldError(f"mixed fields: {field.descriptor} and {a.field.descriptor}")
    if isinstance(field, PrimeField):
        return ExactArray(field, np.stack([a.num for a in arrays]), 1, normalized=True)
    L = reduce(lambda x, y: x * y // math.gcd(x, y), (a.den for a in arrays), 1)
    big = any(_max_abs(a.num) * (L // a.den) >= _SAFE for a in arrays)
    parts = [(_promote(a.num) if big else a.num) * (L // a.den) for a in arrays]
    return ExactArray(field, np.stack(parts), L)


def sum_arrays(arrays: Iterable[ExactArray], like: ExactArray | None = None) -> ExactArray:
    total = None
    for a in arrays:
        total = a if total is None else total + a
    if total is None:
        if like is None:
            raise ValueError("empty sum needs a template")
        return ExactArray.zeros(like.field, like.shape)
    return total


def integer_rows(m: ExactArray) -> np.ndarray:
    """Numerator matrix: over Q this is ``m`` scaled by its denominator."""
    return m.num


__all__ = [
    "ExactArray",
    "einsum",
    "tensordot",
    "outer",
    "kron",
    "stack",
    "sum_arrays",
    "QQ",
]
