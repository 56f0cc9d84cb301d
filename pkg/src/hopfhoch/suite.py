"""Exact identity checks for the operad, brace and homotopy Gerstenhaber layers.

Every identity is multilinear, so it is checked on tuples of basis cochains.
When the number of basis tuples for a degree profile fits the budget the
check is exhaustive; otherwise it runs on ``samples`` seeded random linear
combinations (coefficients in -3..3) and the report says so.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from math import prod
from typing import Callable, Iterator, Sequence

from .cochains import DEFAULT_DEGREE_CAP, ReducedCochain, cochain_space_basis, d_CH
from .operad import BraceCalculus, gamma
from .rng import Lcg
from .structures import ModuleAlgebra

DEFAULT_BUDGET = 4096
EXHAUSTIVE_ARITY_SUM = 4


@dataclass
class IdentityResult:
    name: str
    instances: int = 0
    exhaustive: bool = True
    failures: int = 0
    counterexample: str = ""
    exhaustive_instances: int = 0

    @property
    def passed(self) -> bool:
        return self.failures == 0

    @property
    def mode(self) -> str:
        return "exhaustive" if self.exhaustive else "sampled"


@dataclass
class SuiteReport:
    model: str
    max_degree: int
    seed: int
    samples: int
    rule: str
    results: list[IdentityResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def result(self, name: str) -> IdentityResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def failed(self) -> list[str]:
        return [r.name for r in self.results if not r.passed]


# Identity names, in report order.
OPERAD_ASSOC = "operad associativity"
OPERAD_UNIT = "operad unit"
MULTIPLICATION = "multiplication pi"
PI_PI = "pi{pi} = 0"
BRACE_ASSOC = "brace associativity"
CUP_ASSOC = "cup associativity"
COND1 = "homotopy-G condition (1)"
COND1_PRODUCT = "homotopy-G condition (1), unsigned product"
COND2 = "homotopy-G condition (2)"
COND2_PRODUCT = "homotopy-G condition (2), unsigned product"
LEIBNIZ = "d derivation of cup"
D_SQUARED = "d^2 = 0"
DIFF = "d_CH = (-1)^(n+1) d"

ALL_IDENTITIES = (
    OPERAD_ASSOC, OPERAD_UNIT, MULTIPLICATION, PI_PI, BRACE_ASSOC, CUP_ASSOC,
    COND1, COND1_PRODUCT, COND2, COND2_PRODUCT, LEIBNIZ, D_SQUARED, DIFF,
)


def _first_difference(lhs: ReducedCochain, rhs: ReducedCochain) -> str:
    if lhs.degree != rhs.degree:
        return f"degrees {lhs.degree} vs {rhs.degree}"
    diff = lhs.tensor - rhs.tensor
    idx = diff.nonzero()[0]
    return f"entry [out={idx[0]}, in={list(idx[1:])}]: lhs {lhs.tensor[idx]} rhs {rhs.tensor[idx]}"


class _Runner:
    def __init__(self, ma: ModuleAlgebra, max_degree: int, samples: int, seed: int, rule: str,
                 budget: int, cap: int):
        self.ma = ma
        self.D = max_degree
        self.samples = samples
        self.rng = Lcg(seed)
        self.C = BraceCalculus(ma, rule)
        self.budget = budget
        self.cap = cap
        self.results: dict[str, IdentityResult] = {}
        self._stacks: dict = {}

    # elements ---------------------------------------------------------------

    def space(self, n: int):
        return cochain_space_basis(self.ma, n, max(self.cap, n))

    def random_element(self, n: int) -> ReducedCochain:
        S = self.space(n)
        if S.dim == 0:
            return ReducedCochain.zero(self.ma, n)
        from .linalg import ExactArray

        coeffs = ExactArray.from_values(self.ma.field, [self.rng.coefficient() for _ in range(S.dim)])
        return S.combination(coeffs)

    def batched_basis(self, n: int) -> ReducedCochain | None:
        """The whole basis of degree-n cochains stacked along a batch axis."""
        key = ("batched", n)
        if key not in self._stacks:
            cs = self.space(n).cochains()
            self._stacks[key] = ReducedCochain.stack(list(cs)) if cs else None
        return self._stacks[key]

    def tuples(self, degrees: Sequence[int], force: bool = False):
        """Yield ``(argument tuple, labels)`` covering all basis tuples, or samples.

        In exhaustive mode the widest argument is a batched basis, so one
        evaluation covers ``dim`` basis tuples; ``labels(i)`` names the basis
        tuple behind batch position ``i``.
        """
        dims = [self.space(n).dim for n in degrees]
        if force or prod(dims) <= self.budget:
            if prod(dims) == 0:
                return True, iter(())
            wide = max(range(len(dims)), key=lambda i: dims[i])
            rest = [range(dims[i]) if i != wide else [None] for i in range(len(dims))]
            bases = [self.space(n).cochains() for n in degrees]

            def exhaustive():
                for idx in itertools.product(*rest):
                    args = tuple(self.batched_basis(degrees[i]) if i == wide else bases[i][j]
                                 for i, j in enumerate(idx))
                    yield args, (lambda b, idx=idx: tuple(b if j is None else j for j in idx))

            return True, exhaustive()

        def sampled():
            for t in range(self.samples):
                yield tuple(self.random_element(n) for n in degrees), (lambda b, t=t: t)

        return False, sampled()

    # bookkeeping ------------------------------------------------------------

    def record(self, name: str, exhaustive: bool, lhs: ReducedCochain, rhs: ReducedCochain, where,
               size: int = 1):
        """Compare both sides; ``where(i)`` describes batch position ``i``."""
        r = self.results.setdefault(name, IdentityResult(name))
        r.instances += size
        r.exhaustive = r.exhaustive and exhaustive
        if exhaustive:
            r.exhaustive_instances += size
        bad = lhs.mismatches(rhs)
        if bad:
            r.failures += len(bad)
            if not r.counterexample:
                i = bad[0]
                lo = lhs.item(i) if lhs.batch else lhs
                ro = rhs.item(i) if rhs.batch else rhs
                r.counterexample = f"{where(i)}: {_first_difference(lo, ro)}"

    def declare(self, name: str):
        self.results.setdefault(name, IdentityResult(name))

    def run_profile(self, name: str, degrees: Sequence[int], check: Callable, label: str,
                    force: bool = False):
        exhaustive, it = self.tuples(degrees, force)
        for args, labels in it:
            lhs, rhs = check(*args)
            size = max((a.batch_size or 1) for a in args)
            kind = "basis tuple" if exhaustive else "sample"
            self.record(name, exhaustive, lhs, rhs, lambda i: f"{label} {kind} {labels(i)}", size)

    def run_on_basis(self, name: str, n: int, check: Callable, label: str):
        """Check a one-argument identity on the whole degree-n basis at once."""
        B = self.batched_basis(n)
        if B is None:
            return
        lhs, rhs = check(B)
        self.record(name, True, lhs, rhs, lambda i: f"{label} basis element {i}", B.batch_size)


def _compositions(total: int, parts: int, top: int) -> Iterator[tuple[int, ...]]:
    """Tuples of ``parts`` integers in 1..top summing to ``total``."""
    for t in itertools.product(range(1, top + 1), repeat=parts):
        if sum(t) == total:
            yield t


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def check_suite(ma: ModuleAlgebra, max_degree: int = 3, samples: int = 32, seed: int = 0,
                rule: str = "inputs", budget: int = DEFAULT_BUDGET,
                cap: int = DEFAULT_DEGREE_CAP, only: Sequence[str] | None = None) -> SuiteReport:
    """Run every identity with arguments of degree 1..max_degree."""
    with warnings.catch_warnings():
        # over-full braces are empty sums by convention
        warnings.simplefilter("ignore")
        return _check_suite(ma, max_degree, samples, seed, rule, budget, cap, only)


def _check_suite(ma, max_degree, samples, seed, rule, budget, cap, only) -> SuiteReport:
    run = _Runner(ma, max_degree, samples, seed, rule, budget, cap)
    C, D = run.C, max_degree
    report = SuiteReport(ma.name, max_degree, seed, samples, rule)
    wanted = set(ALL_IDENTITIES if only is None else only)
    if D < 1:
        return report
    top_arity = D + 1

    if OPERAD_ASSOC in wanted:
        run.declare(OPERAD_ASSOC)
        for k in range(1, D + 1):
            for N in range(k, top_arity + 1):
                for ns in _compositions(N, k, D):
                    for Mtot in range(N, top_arity + 1):
                        for hs in _compositions(Mtot, N, D):
                            label = f"profile f:{k} g:{ns} h:{hs}"

                            def check(f, *rest, ns=ns):
                                gs, hs_ = rest[:len(ns)], rest[len(ns):]
                                lhs = gamma(ma, gamma(ma, f, gs), hs_)
                                inner, pos = [], 0
                                for g in gs:
                                    inner.append(gamma(ma, g, hs_[pos:pos + g.degree]))
                                    pos += g.degree
                                return lhs, gamma(ma, f, inner)

                            # small profiles (element arities summing to at most 4) are always exhaustive
                            run.run_profile(OPERAD_ASSOC, (k, *ns, *hs), check, label,
                                            force=k + N + Mtot <= EXHAUSTIVE_ARITY_SUM)

    if OPERAD_UNIT in wanted:
        run.declare(OPERAD_UNIT)
        for k in range(1, D + 1):
            run.run_on_basis(OPERAD_UNIT, k, lambda f, k=k: (gamma(ma, f, [C.Id] * k), f), f"arity {k} right unit")
            run.run_on_basis(OPERAD_UNIT, k, lambda f: (gamma(ma, C.Id, [f]), f), f"arity {k} left unit")

    if MULTIPLICATION in wanted:
        run.record(MULTIPLICATION, True, gamma(ma, C.pi, [C.pi, C.Id]), gamma(ma, C.pi, [C.Id, C.pi]),
                   lambda i: "pi")

    if PI_PI in wanted:
        run.record(PI_PI, True, C.brace(C.pi, [C.pi]), ReducedCochain.zero(ma, 3), lambda i: "pi")

    if BRACE_ASSOC in wanted:
        run.declare(BRACE_ASSOC)
        for dx in range(1, D + 1):
            for m in range(1, min(dx, 2) + 1):
                for xds in itertools.product(range(1, D + 1), repeat=m):
                    mid = dx - m + sum(xds)
                    for n in range(0, 3):
                        if m + n > 3:
                            continue
                        for yds in itertools.product(range(1, D + 1), repeat=n):
                            if mid - n + sum(yds) > D + 2:
                                continue
                            label = f"profile x:{dx} xs:{xds} ys:{yds}"

                            def check(x, *rest, m=m):
                                xs, ys = list(rest[:m]), list(rest[m:])
                                return C.brace(C.brace(x, xs), ys), brace_associativity_rhs(C, x, xs, ys)

                            run.run_profile(BRACE_ASSOC, (dx, *xds, *yds), check, label)

    pairs = [(a, b) for a in range(1, D + 1) for b in range(1, D + 1)]

    if CUP_ASSOC in wanted:
        run.declare(CUP_ASSOC)
        for a, b in pairs:
            for c in range(1, D + 1):
                if a + b + c > D + 3:
                    continue

                def check(x, y, z):
                    return C.cup(C.cup(x, y), z), C.cup(x, C.cup(y, z))

                run.run_profile(CUP_ASSOC, (a, b, c), check, f"profile {a},{b},{c}")

    for name, use_cup in ((COND1, True), (COND1_PRODUCT, False)):
        if name not in wanted:
            continue
        run.declare(name)
        for a, b in pairs:
            for n in range(0, 3):
                for yds in itertools.product(range(1, D + 1), repeat=n):
                    if a + b + sum(yds) - n > D + 2:
                        continue

                    def check(x1, x2, *ys, use_cup=use_cup):
                        return condition_one(C, x1, x2, list(ys), use_cup)

                    run.run_profile(name, (a, b, *yds), check, f"profile x1:{a} x2:{b} ys:{yds}")

    for name, use_cup in ((COND2, True), (COND2_PRODUCT, False)):
        if name not in wanted:
            continue
        run.declare(name)
        for dx in range(1, D + 1):
            for n in range(0, 2):
                for xds in itertools.product(range(1, D + 1), repeat=n + 1):
                    if dx + sum(xds) - n > D + 1:
                        continue

                    def check(x, *xs, use_cup=use_cup):
                        return condition_two(C, x, list(xs), use_cup)

                    run.run_profile(name, (dx, *xds), check, f"profile x:{dx} xs:{xds}")

    if LEIBNIZ in wanted:
        run.declare(LEIBNIZ)
        for a, b in pairs:
            if a + b > D + 2:
                continue

            def check(x, y):
                lhs = C.d(C.cup(x, y))
                return lhs, C.cup(C.d(x), y) + C.cup(x, C.d(y)).signed(x.degree)

            run.run_profile(LEIBNIZ, (a, b), check, f"profile {a},{b}")

    if D_SQUARED in wanted:
        run.declare(D_SQUARED)
        for n in range(1, D + 1):
            run.run_on_basis(D_SQUARED, n, lambda f, n=n: (C.d(C.d(f)), ReducedCochain.zero(ma, n + 2)),
                             f"degree {n}")

    if DIFF in wanted:
        run.declare(DIFF)
        for n in range(1, D + 1):
            run.run_on_basis(DIFF, n, lambda f, n=n: (d_CH(ma, f, max(cap, n + 1)), C.d(f).signed(n + 1)),
                             f"degree {n}")

    report.results = [run.results[n] for n in ALL_IDENTITIES if n in run.results]
    return report


# --- right-hand sides -------------------------------------------------------


def brace_associativity_rhs(C: BraceCalculus, x, xs: list, ys: list) -> ReducedCochain:
    """``sum (-1)^e x{y_1..y_{i_1}, x_1{y_{i_1+1}..y_{j_1}}, y_{j_1+1}, .., x_m{..}, .., y_n}``.

    The sum runs over ``0 <= i_1 <= j_1 <= i_2 <= ... <= j_m <= n`` and
    ``e = sum_p |x_p| sum_{q <= i_p} |y_q|``.
    """
    m, n = len(xs), len(ys)
    deg = lambda v: v.degree - 1  # noqa: E731
    total = None
    for cuts in itertools.combinations_with_replacement(range(n + 1), 2 * m):
        args, cur, e = [], 0, 0
        for p in range(m):
            i, j = cuts[2 * p], cuts[2 * p + 1]
            args.extend(ys[cur:i])
            args.append(C.brace(xs[p], ys[i:j]) if j > i else xs[p])
            e += deg(xs[p]) * sum(deg(y) for y in ys[:i])
            cur = j
        args.extend(ys[cur:])
        if len(args) > x.degree:
            continue
        t = C.brace(x, args).signed(e)
        total = t if total is None else total + t
    if total is None:
        d = x.degree - m + sum(v.degree for v in xs) - n + sum(v.degree for v in ys)
        return ReducedCochain.zero(C.ma, d)
    return total


def condition_one(C: BraceCalculus, x1, x2, ys: list, use_cup: bool = True):
    """``(x1 * x2){y_1..y_n}`` against ``sum_k (-1)^e x1{y_1..y_k} * x2{y_{k+1}..y_n}``.

    ``e = |x2| sum_{p<=k} |y_p|``, and ``*`` is the cup product, or the
    unsigned product ``pi{-, -}`` when ``use_cup`` is false.
    """
    op = C.cup if use_cup else C.product
    lhs = C.brace(op(x1, x2), ys)
    rhs = None
    for k in range(len(ys) + 1):
        e = (x2.degree - 1) * sum(y.degree - 1 for y in ys[:k])
        t = op(C.brace(x1, ys[:k]), C.brace(x2, ys[k:])).signed(e)
        rhs = t if rhs is None else rhs + t
    return lhs, rhs


def condition_two(C: BraceCalculus, x, xs: list, use_cup: bool = True):
    """Both sides of the compatibility of d with braces, for ``xs = x_1..x_{n+1}``.

    lhs = d(x{xs}) - (dx){xs} - (-1)^{|x|} sum_i (-1)^{|x_1|+..+|x_{i-1}|} x{.., dx_i, ..}
    rhs = (-1)^{|x||x_1|+1} x_1 * x{x_2..} + (-1)^{|x|} sum_i (-1)^{|x_1|+..+|x_{i-1}|} x{.., x_i * x_{i+1}, ..}
          - x{x_1..x_n} * x_{n+1}
    """
    op = C.cup if use_cup else C.product
    ax = x.degree - 1
    n = len(xs) - 1
    s = lambda i: sum(v.degree - 1 for v in xs[:i])  # noqa: E731
    lhs = C.d(C.brace(x, xs)) - C.brace(C.d(x), xs)
    for i in range(n + 1):
        ys = list(xs)
        ys[i] = C.d(xs[i])
        lhs = lhs - C.brace(x, ys).signed(ax + s(i))
    rhs = op(xs[0], C.brace(x, xs[1:])).signed(ax * (xs[0].degree - 1) + 1)
    for i in range(n):
        ys = xs[:i] + [op(xs[i], xs[i + 1])] + xs[i + 2:]
        rhs = rhs + C.brace(x, ys).signed(ax + s(i))
    rhs = rhs - op(C.brace(x, xs[:n]), xs[n])
    return lhs, rhs
