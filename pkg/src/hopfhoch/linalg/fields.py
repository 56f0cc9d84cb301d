"""Ground fields: the rationals and prime fields F_p.

Scalars are plain Python values: :class:`fractions.Fraction` over the
rationals and ``int`` residues in ``[0, p)`` over ``F_p``.  The field
descriptor travels with the containers (:class:`ExactArray`), not with
individual scalars.
"""

from __future__ import annotations

import re
from fractions import Fraction

_SCALAR_RE = re.compile(r"^[+-]?\d+(/[+-]?\d+)?$")

# residues are multiplied in int64 by the compiled kernels
MAX_PRIME = 2**31 - 1


class FieldError(ValueError):
    """Raised for malformed scalars or mixed field descriptors."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class Field:
    characteristic: int = 0
    descriptor: str = ""

    def __eq__(self, other):
        return isinstance(other, Field) and self.descriptor == other.descriptor

    def __hash__(self):
        return hash(self.descriptor)

    def __repr__(self):
        return f"Field({self.descriptor!r})"

    def parse(self, text: str):
        """Parse ``"n"`` or ``"p/q"`` into a canonical scalar of this field."""
        s = text.strip()
        if not _SCALAR_RE.match(s):
            raise FieldError(f"malformed scalar {text!r}")
        if "/" in s:
            a, b = s.split("/")
            if int(b) == 0:
                raise FieldError(f"zero denominator in scalar {text!r}")
            return self.coerce(Fraction(int(a), int(b)))
        return self.coerce(int(s))


class Rationals(Field):
    characteristic = 0
    descriptor = "rationals"

    def coerce(self, x) -> Fraction:
        if isinstance(x, str):
            return self.parse(x)
        return Fraction(x)

    def format(self, x) -> str:
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class PrimeField(Field):
    def __init__(self, p: int):
        p = int(p)
        if not _is_prime(p):
            raise FieldError(f"{p} is not prime")
        if p > MAX_PRIME:
            raise FieldError(f"prime {p} exceeds the supported bound {MAX_PRIME}")
        self.p = p
        self.characteristic = p
        self.descriptor = f"prime {p}"

    def coerce(self, x) -> int:
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise FieldError(f"{x} has no image in F_{self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def format(self, x) -> str:
        return str(int(x) % self.p)


QQ = Rationals()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_descriptor(text: str) -> Field:
    """Inverse of ``Field.descriptor``: ``"rationals"`` or ``"prime p"``."""
    parts = text.split()
    if parts == ["rationals"]:
        return QQ
    if len(parts) == 2 and parts[0] == "prime" and parts[1].isdigit():
        return PrimeField(int(parts[1]))
    raise FieldError(f"unknown field descriptor {text!r}")
