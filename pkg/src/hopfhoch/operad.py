"""Operad composition, braces, cup product, differential and bracket on reduced cochains.

In reduced form the composition is plain substitution,
``gamma(f; g_1, ..., g_k) = f o (g_1 (x) ... (x) g_k)``, the identity is the
identity map of A and the multiplication element is the product of A.

Brace signs.  ``x{x_1, ..., x_n}`` sums ``(-1)^e gamma(x; Id.., x_1, Id.., x_n, Id..)``
over the ways of placing ``x_p`` in slot ``i_p`` (0-based, increasing), with
``e = sum_p (m_p - 1) * (inputs in front of x_p)``.  An input in front of
``x_p`` is an argument of A that the composite reads before the first input
of ``x_p``: each identity slot contributes one and each earlier ``x_q``
contributes ``m_q``, so the count is ``i_p + sum_{q<p} (m_q - 1)``.  Counting
operad slots instead (``e = sum (m_p - 1) i_p``) is available as the
``"slots"`` rule; it breaks brace associativity once two insertions have
arity at least two.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

from .cochains import ReducedCochain
from .linalg import ExactArray, tensordot
from .structures import ModuleAlgebra


class ArityError(ValueError):
    pass


def _insert(F: ExactArray, slot: int, G: ExactArray, batch: int = 0, gbatch: int = 0) -> ExactArray:
    """Feed the output of G into input ``slot`` of F.

    Either tensor may carry leading batch axes (``batch`` for F, ``gbatch`` for
    G); the result has F's batch axes, then G's, then ``[out, inputs]``.
    """
    m = G.ndim - 1 - gbatch
    R = tensordot(F, G, axes=([batch + 1 + slot], [gbatch]))
    if m == 0 and gbatch == 0:
        return R
    nF = F.ndim - 1
    src = list(range(nF, R.ndim))
    dst = list(range(batch, batch + gbatch)) + list(range(batch + gbatch + 1 + slot, batch + gbatch + 1 + slot + m))
    return R.moveaxis(src, dst)


def _require_operadic(*xs: ReducedCochain) -> None:
    for x in xs:
        if x.degree < 1:
            raise ArityError("degree-0 cochains are not operad elements; arities start at 1")


def identity_element(ma: ModuleAlgebra) -> ReducedCochain:
    return ReducedCochain(1, ExactArray.identity(ma.field, ma.dim))


def multiplication_element(ma: ModuleAlgebra) -> ReducedCochain:
    return ReducedCochain(2, ma.alg.reduced_mult)


def gamma(ma: ModuleAlgebra, f: ReducedCochain, gs: Sequence[ReducedCochain]) -> ReducedCochain:
    """``gamma(f; g_1, ..., g_k)`` in reduced form."""
    _require_operadic(f, *gs)
    if len(gs) != f.degree:
        raise ArityError(f"gamma of an arity-{f.degree} element needs {f.degree} arguments, got {len(gs)}")
    if f.batch + sum(g.batch for g in gs) > 1:
        raise ArityError("at most one batched argument per composition")
    ident = ExactArray.identity(ma.field, ma.dim)
    R, batch = f.tensor, f.batch
    for slot in range(len(gs) - 1, -1, -1):
        g = gs[slot]
        if g.degree == 1 and not g.batch and g.tensor == ident:
            continue
        R = _insert(R, slot, g.tensor, batch, g.batch)
        batch += g.batch
    return ReducedCochain(sum(g.degree for g in gs), R, batch)


# --- sign rules -------------------------------------------------------------


def _inputs_rule(positions, arities) -> int:
    e, shift = 0, 0
    for i, m in zip(positions, arities):
        e += (m - 1) * (i + shift)
        shift += m - 1
    return e


def _slots_rule(positions, arities) -> int:
    return sum((m - 1) * i for i, m in zip(positions, arities))


def _unsigned_rule(positions, arities) -> int:
    return 0


SIGN_RULES: dict[str, Callable] = {
    "inputs": _inputs_rule,
    "slots": _slots_rule,
    "unsigned": _unsigned_rule,
}


@dataclass(frozen=True)
class SignedSubstitution:
    positions: tuple[int, ...]  # slot of x that receives x_p, 0-based and increasing
    arities: tuple[int, ...]
    gaps: tuple[int, ...]  # r_1, ..., r_{n+1}: identity blocks around the insertions
    exponent: int

    @property
    def sign(self) -> int:
        return -1 if self.exponent % 2 else 1

    def inputs_in_front(self) -> tuple[int, ...]:
        out, shift = [], 0
        for i, m in zip(self.positions, self.arities):
            out.append(i + shift)
            shift += m - 1
        return tuple(out)


def substitutions(k: int, arities: Sequence[int], rule: str = "inputs") -> list[SignedSubstitution]:
    """All ways to insert elements of the given arities, in order, into k slots."""
    n = len(arities)
    sign = SIGN_RULES[rule]
    out = []
    for pos in itertools.combinations(range(k), n):
        if n:
            gaps = [pos[0]] + [pos[j] - pos[j - 1] - 1 for j in range(1, n)] + [k - pos[-1] - 1]
        else:
            gaps = [k]
        out.append(SignedSubstitution(tuple(pos), tuple(arities), tuple(gaps), sign(pos, arities)))
    return out


class BraceCalculus:
    """Braces and everything built from them, for one module-algebra and one sign rule."""

    def __init__(self, ma: ModuleAlgebra, rule: str = "inputs"):
        if rule not in SIGN_RULES:
            raise ValueError(f"unknown sign rule {rule!r}; choose from {', '.join(SIGN_RULES)}")
        self.ma = ma
        self.rule = rule
        self.Id = identity_element(ma)
        self.pi = multiplication_element(ma)

    def gamma(self, f, gs):
        return gamma(self.ma, f, gs)

    def brace_terms(self, x: ReducedCochain, xs: Sequence[ReducedCochain]):
        """``(substitution, signed composite)`` pairs whose sum is ``x{xs}``."""
        _require_operadic(x, *xs)
        out = []
        for sub in substitutions(x.degree, [y.degree for y in xs], self.rule):
            args = [self.Id] * x.degree
            for i, y in zip(sub.positions, xs):
                args[i] = y
            out.append((sub, self.gamma(x, args).signed(sub.exponent)))
        return out

    def brace(self, x: ReducedCochain, xs: Sequence[ReducedCochain]) -> ReducedCochain:
        _require_operadic(x, *xs)
        deg = x.degree - len(xs) + sum(y.degree for y in xs)
        if len(xs) > x.degree:
            warnings.warn(
                f"brace with {len(xs)} insertions into an arity-{x.degree} element is an empty sum",
                stacklevel=2,
            )
            sizes = [c.batch_size for c in (x, *xs) if c.batch]
            return ReducedCochain.zero(self.ma, deg, sizes[0] if sizes else None)
        if not xs:
            return x
        terms = self.brace_terms(x, xs)
        total = terms[0][1]
        for _, t in terms[1:]:
            total = total + t
        return total

    def product(self, x, y) -> ReducedCochain:
        """``pi{x, y}``, the cup product without its sign."""
        return self.brace(self.pi, [x, y])

    def cup(self, x, y) -> ReducedCochain:
        """``x cup y = (-1)^{deg x} pi{x, y}``."""
        return self.product(x, y).signed(x.degree)

    def d(self, x) -> ReducedCochain:
        """``d(x) = pi{x} - (-1)^{|x|} x{pi}``."""
        a = self.brace(self.pi, [x])
        b = self.brace(x, [self.pi])
        return a + b if x.degree % 2 == 0 else a - b

    def bracket(self, x, y) -> ReducedCochain:
        """``[x, y] = x{y} - (-1)^{(m-1)(n-1)} y{x}`` for degrees m and n."""
        a, b = self.brace(x, [y]), self.brace(y, [x])
        return a - b.signed((x.degree - 1) * (y.degree - 1))


_default: dict[tuple[int, str], BraceCalculus] = {}


def calculus(ma: ModuleAlgebra, rule: str = "inputs") -> BraceCalculus:
    key = (id(ma), rule)
    c = _default.get(key)
    if c is None or c.ma is not ma:
        c = _default[key] = BraceCalculus(ma, rule)
    return c


def brace(ma, x, xs, rule: str = "inputs"):
    return calculus(ma, rule).brace(x, xs)


def cup(ma, x, y, rule: str = "inputs"):
    return calculus(ma, rule).cup(x, y)


def differential_d(ma, x, rule: str = "inputs"):
    return calculus(ma, rule).d(x)


def bracket(ma, x, y, rule: str = "inputs"):
    return calculus(ma, rule).bracket(x, y)


# --- closed forms evaluated on basis tensors --------------------------------


def _basis_vectors(ma: ModuleAlgebra, idx: Sequence[int]) -> list[ExactArray]:
    return [ExactArray.basis_vector(ma.field, ma.dim, i) for i in idx]


def _unreduced_value(ma: ModuleAlgebra, a0: ExactArray, value: ExactArray, alast: ExactArray) -> ExactArray:
    return ma.alg.multiply(ma.alg.multiply(a0, value), alast)


def evaluate_unreduced(ma: ModuleAlgebra, f: ReducedCochain, idx: Sequence[int]) -> ExactArray:
    """``f(a_0 (x) ... (x) a_{n+1})`` on basis elements, via ``a_0 f(a_1..a_n) a_{n+1}``."""
    v = _basis_vectors(ma, idx)
    return _unreduced_value(ma, v[0], f(*v[1:-1]), v[-1])


def brace_exp_terms(ma: ModuleAlgebra, f: ReducedCochain, gs: Sequence[ReducedCochain],
                    idx: Sequence[int]) -> list[tuple[tuple[int, ...], int, ExactArray]]:
    """Terms of ``f{g_1..g_n}(a_0 (x) ... (x) a_{k+M-n+1})`` read off the explicit index formula.

    ``idx`` lists the basis indices of ``a_0, ..., a_{k+M-n+1}``.  For slots
    ``i_1 < ... < i_n`` the element ``g_j`` reads ``a_s`` for
    ``i_j + M_{j-1} - j + 2 <= s <= i_j + M_j - j + 1`` and the remaining
    arguments go to f in order.  The sign exponent is
    ``sum_j (m_j - 1)(i_j + M_{j-1} - (j - 1))``, i.e. the number of inputs
    read before ``g_j``.  Returns ``(positions, sign, value)`` per term.
    """
    k, n = f.degree, len(gs)
    ms = [g.degree for g in gs]
    M = sum(ms)
    top = k + M - n + 1
    if len(idx) != top + 1:
        raise ValueError(f"expected {top + 1} arguments a_0..a_{top}, got {len(idx)}")
    a = _basis_vectors(ma, idx)
    terms = []
    for pos in itertools.combinations(range(k), n):
        # 1-based positions as in the formula: i_j counts the slots before g_j
        Mprev = [sum(ms[:j]) for j in range(n + 1)]
        args: list[ExactArray] = []
        prev_end = 0  # last a-index already consumed (a_0 is the outer left argument)
        exponent = 0
        for j in range(1, n + 1):
            i_j = pos[j - 1]
            start = i_j + Mprev[j - 1] - j + 2
            end = i_j + Mprev[j] - j + 1
            args.extend(a[prev_end + 1:start])
            args.append(gs[j - 1](*a[start:end + 1]))
            exponent += (ms[j - 1] - 1) * (i_j + Mprev[j - 1] - (j - 1))
            prev_end = end
        args.extend(a[prev_end + 1:top])
        value = _unreduced_value(ma, a[0], f(*args), a[top])
        sign = -1 if exponent % 2 else 1
        terms.append((pos, sign, value.scale(sign)))
    return terms


def single_brace_closed_form(ma: ModuleAlgebra, psi: ReducedCochain, phi: ReducedCochain,
                             idx: Sequence[int]) -> ExactArray:
    """``psi{phi}(a_{0,m+n}) = sum_i (-1)^{(i-1)(n-1)} psi(a_{0,i-1} (x) phi(1 (x) a_{i,i+n-1} (x) 1) (x) a_{i+n,m+n})``."""
    m, n = psi.degree, phi.degree
    if len(idx) != m + n + 1:
        raise ValueError(f"expected {m + n + 1} arguments, got {len(idx)}")
    a = _basis_vectors(ma, idx)
    total = ExactArray.zeros(ma.field, (ma.dim,))
    for i in range(1, m + 1):
        inner = phi(*a[i:i + n])
        full = a[0:i] + [inner] + a[i + n:m + n + 1]
        v = _unreduced_value(ma, full[0], psi(*full[1:-1]), full[-1])
        total = total + (v.scale(-1) if (i - 1) * (n - 1) % 2 else v)
    return total


def bracket_degree_one(ma: ModuleAlgebra, psi: ReducedCochain, phi: ReducedCochain) -> ReducedCochain:
    """``[psi, phi](a_0 (x) a_1 (x) a_2) = psi(a_0 (x) phi(1 (x) a_1 (x) 1) (x) a_2) - (psi <-> phi)``, reduced."""
    if psi.degree != 1 or phi.degree != 1:
        raise ArityError("the degree-one bracket formula needs two degree-1 cochains")
    # reduced form: psi o phi - phi o psi, as matrices
    return ReducedCochain(1, psi.matrix @ phi.matrix - phi.matrix @ psi.matrix)


def cup_closed_form(ma: ModuleAlgebra, psi: ReducedCochain, phi: ReducedCochain,
                    prefactor: str = "printed") -> ReducedCochain:
    """``(psi cup phi)(a_1..a_{m+n}) = s * psi(a_1..a_m) phi(a_{m+1}..a_{m+n})``.

    ``prefactor="printed"`` uses ``s = (-1)^{m+n-1}``; ``"mn"`` uses
    ``s = (-1)^{mn}``, which is what the brace definition of the cup produces.
    """
    m, n = psi.degree, phi.degree
    P = ma.alg.reduced_mult  # [out, left, right]
    t = _insert(_insert(P, 1, phi.tensor), 0, psi.tensor)
    e = m + n - 1 if prefactor == "printed" else m * n
    return ReducedCochain(m + n, t).signed(e)


def check_suite(ma: ModuleAlgebra, max_degree: int = 3, sample_count: int = 32, seed: int = 0, **options):
    """Run the identity checks of :mod:`hopfhoch.suite` (kept there to avoid a cycle)."""
    from .suite import check_suite as _run

    return _run(ma, max_degree, sample_count, seed, **options)
