"""Command-line entry point: ``hopfhoch {validate,spaces,axioms,cohomology,gerstenhaber}``.

Every command builds a list of records.  ``--format structured`` prints them
as tab-separated lines in a fixed order (see ``docs/report_format.md``);
``--format text`` renders the same numbers for reading.  The exit status is
0 when every check passes, 1 when some check fails, and 2 for unusable
input or an exceeded resource cap.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from typing import Sequence

from .cochains import DEFAULT_DEGREE_CAP, DegreeCapError, cochain_space_basis
from .cohomology import (
    DEGREE_ZERO_NOTE,
    check_gerstenhaber,
    compute_HH,
    invariant_center_dimension,
)
from .models import ModelParseError, UnknownModelError, parse, read_model_text
from .structures import AxiomError, ModuleAlgebra

FORMAT_VERSION = "1"
EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2
SUITE_CAP = DEFAULT_DEGREE_CAP + 1


@dataclass(frozen=True)
class RunConfig:
    command: str
    model: str
    max_degree: int = 3
    seed: int = 0
    samples: int = 32
    format: str = "text"
    oracle: bool = False

    def __post_init__(self):
        if self.max_degree < 0:
            raise ValueError("max_degree must be non-negative")
        if self.samples < 1:
            raise ValueError("samples must be at least 1")
        if self.format not in ("text", "structured"):
            raise ValueError(f"unknown format {self.format!r}")


@dataclass
class Report:
    command: str
    records: list[tuple] = field(default_factory=list)
    text: list[str] = field(default_factory=list)
    status: int = EXIT_OK

    def add(self, *fields) -> None:
        self.records.append(tuple(fields))

    def say(self, line: str = "") -> None:
        self.text.append(line)

    def fail(self) -> None:
        self.status = max(self.status, EXIT_FAIL)

    def structured(self) -> str:
        lines = ["\t".join(_clean(f) for f in r) for r in self.records]
        lines.append(f"status\t{_STATUS[self.status]}")
        return "\n".join(lines) + "\n"

    def rendered(self) -> str:
        return "\n".join(self.text + [f"status: {_STATUS[self.status]}"]) + "\n"


_STATUS = {EXIT_OK: "pass", EXIT_FAIL: "fail", EXIT_ERROR: "error"}


def _clean(v) -> str:
    return str(v).replace("\t", " ").replace("\n", " ")


def _ok(flag: bool) -> str:
    return "pass" if flag else "fail"


def _values(arr) -> str:
    return " ".join(str(v) for v in arr.values())


def _header(r: Report, cfg: RunConfig, ma_name: str) -> None:
    r.add("report", cfg.command, FORMAT_VERSION)
    r.add("model", ma_name)
    r.add("max-degree", cfg.max_degree)
    r.add("seed", cfg.seed)
    r.add("samples", cfg.samples)


def _load(cfg: RunConfig, r: Report) -> ModuleAlgebra | None:
    try:
        mf = parse(read_model_text(cfg.model))
    except (ModelParseError, UnknownModelError, OSError) as exc:
        r.add("error", exc)
        r.say(f"error: {exc}")
        r.status = EXIT_ERROR
        return None
    rep = mf.module.validate()
    if not rep.ok:
        r.add("error", AxiomError(rep))
        for ln in rep.lines():
            r.add("validation", ln)
        r.say(f"error: {AxiomError(rep)}")
        r.text.extend(rep.lines())
        r.status = EXIT_ERROR
        return None
    return mf.module


# --- commands -----------------------------------------------------------------


def cmd_validate(cfg: RunConfig) -> Report:
    r = Report("validate")
    try:
        mf = parse(read_model_text(cfg.model))
    except (ModelParseError, UnknownModelError, OSError) as exc:
        r.add("error", exc)
        r.say(f"error: {exc}")
        r.status = EXIT_ERROR
        return r
    ma = mf.module
    r.add("report", "validate", FORMAT_VERSION)
    r.add("model", ma.name)
    rep = ma.validate()
    failed = set(rep.axioms_failed())
    r.say(f"model {ma.name}: {ma.alg.dim}-dimensional algebra, {ma.hopf.dim}-dimensional bialgebra")
    for name in sorted(rep.checked, key=list(rep.checked).index):
        r.add("axiom", name, rep.checked[name], _ok(name not in failed))
        r.say(f"  {name}: {_ok(name not in failed)} ({rep.checked[name]} instances)")
    for v in rep.violations:
        r.add("violation", v.axiom, " ".join(v.indices), _clean(v.lhs), _clean(v.rhs))
        r.say(f"  violation: {v}")
    if not rep.ok:
        r.fail()
    return r


def cmd_spaces(cfg: RunConfig) -> Report:
    """Dimensions of the equivariant cochain spaces C^0..C^max_degree."""
    r = Report("spaces")
    ma = _load(cfg, r)
    if ma is None:
        return r
    _header(r, cfg, ma.name)
    try:
        for n in range(cfg.max_degree + 1):
            S = cochain_space_basis(ma, n, DEFAULT_DEGREE_CAP)
            r.add("space", n, ma.dim ** (n + 1), S.dim)
            r.say(f"C^{n}: {S.dim} of {ma.dim ** (n + 1)} multilinear maps are H-equivariant")
    except DegreeCapError as exc:
        return _cap_error(r, exc)
    return r


def _cap_error(r: Report, exc: Exception) -> Report:
    r.add("error", exc)
    r.say(f"error: {exc}")
    r.status = EXIT_ERROR
    return r


def cmd_axioms(cfg: RunConfig) -> Report:
    from .suite import check_suite

    r = Report("axioms")
    ma = _load(cfg, r)
    if ma is None:
        return r
    _header(r, cfg, ma.name)
    # composites of degree-D arguments reach degree D + 2
    if cfg.max_degree + 2 > SUITE_CAP:
        return _cap_error(r, DegreeCapError(f"max-degree {cfg.max_degree} needs cochains of degree "
                                            f"{cfg.max_degree + 2}, beyond the suite cap {SUITE_CAP}"))
    rep = check_suite(ma, cfg.max_degree, cfg.samples, cfg.seed, cap=SUITE_CAP)
    if not rep.results:
        r.add("note", "no identities in range")
        r.say("no identities in range (identities need cochains of degree at least 1)")
        return r
    w = max(len(x.name) for x in rep.results)
    for x in rep.results:
        r.add("identity", x.name, x.instances, x.mode, x.failures, _ok(x.passed))
        r.say(f"{x.name:<{w}}  {x.instances:>7}  {x.mode:<10}  {_ok(x.passed)}"
              + (f"  ({x.failures} failing)" if x.failures else ""))
    for x in rep.results:
        if x.counterexample:
            r.add("counterexample", x.name, x.counterexample)
            r.say(f"counterexample for {x.name}: {x.counterexample}")
    if not rep.ok:
        r.fail()
    return r


def cmd_cohomology(cfg: RunConfig) -> Report:
    r = Report("cohomology")
    ma = _load(cfg, r)
    if ma is None:
        return r
    _header(r, cfg, ma.name)
    try:
        groups = [compute_HH(ma, n) for n in range(cfg.max_degree + 1)]
    except DegreeCapError as exc:
        return _cap_error(r, exc)
    r.say(f"{'n':>2}  {'dim C^n':>8}  {'dim ker':>8}  {'dim im':>8}  {'dim HH^n':>8}")
    for g in groups:
        r.add("degree", g.degree, g.space.dim, g.cocycles.dim, g.coboundaries.dim, g.dimension)
        r.say(f"{g.degree:>2}  {g.space.dim:>8}  {g.cocycles.dim:>8}  {g.coboundaries.dim:>8}  {g.dimension:>8}")
    z = invariant_center_dimension(ma)
    agree = z == groups[0].dimension
    r.add("check", "HH^0 equals the invariant center", groups[0].dimension, z, _ok(agree))
    r.say(f"HH^0 against the invariant center solved directly: {groups[0].dimension} vs {z}: {_ok(agree)}")
    if not agree:
        r.fail()
    if cfg.oracle:
        from .oracle import oracle_dimensions

        res = oracle_dimensions(ma, cfg.max_degree)
        for g, od, hd in zip(groups, res.dims, res.hom_dims):
            same = od == g.dimension and hd == g.space.dim
            r.add("oracle", g.degree, hd, od, _ok(same))
            r.say(f"oracle HH^{g.degree}: {od} (Hom_X dimension {hd}): {'agrees' if same else 'DISAGREES'}")
            if not same:
                r.fail()
    return r


def cmd_gerstenhaber(cfg: RunConfig) -> Report:
    r = Report("gerstenhaber")
    if cfg.max_degree < 2:
        r.add("error", "gerstenhaber needs max-degree at least 2")
        r.say("error: gerstenhaber needs --max-degree at least 2")
        r.status = EXIT_ERROR
        return r
    ma = _load(cfg, r)
    if ma is None:
        return r
    _header(r, cfg, ma.name)
    try:
        rep = check_gerstenhaber(ma, cfg.max_degree, cfg.seed, max(16, cfg.samples))
    except DegreeCapError as exc:
        return _cap_error(r, exc)
    r.add("note", DEGREE_ZERO_NOTE)
    r.say(f"note: {DEGREE_ZERO_NOTE}")
    for n, dim in enumerate(rep.dimensions):
        r.add("group", n, dim)
        r.say(f"HH^{n}: dimension {dim}")
        g = compute_HH(ma, n)
        for i in range(dim):
            rep_vec = g.representative(i).tensor.flatten()
            r.add("class", n, i, _values(rep_vec))
            r.say(f"  HH^{n}[{i}] represented by the cochain with entries {_values(rep_vec)}")
    for kind, table in (("cup", rep.cup_table), ("bracket", rep.bracket_table)):
        for (m, i), (n, j), coords in table:
            vals = " ".join(str(c) for c in coords)
            r.add(kind, f"HH^{m}[{i}]", f"HH^{n}[{j}]", vals)
            sym = "cup" if kind == "cup" else "bracket"
            r.say(f"{sym}(HH^{m}[{i}], HH^{n}[{j}]) = ({vals})")
    for c in rep.checks:
        r.add("gcheck", c.name, c.instances, _ok(c.passed))
        r.say(f"{c.name}: {_ok(c.passed)} ({c.instances} instances)"
              + (f", counterexample {c.counterexample}" if c.counterexample else ""))
    if not rep.ok:
        r.fail()
    return r


COMMANDS = {
    "validate": cmd_validate,
    "spaces": cmd_spaces,
    "axioms": cmd_axioms,
    "cohomology": cmd_cohomology,
    "gerstenhaber": cmd_gerstenhaber,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hopfhoch", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        s = sub.add_parser(name, help=(fn.__doc__ or name).splitlines()[0] if fn.__doc__ else None)
        s.add_argument("--model", required=True, help="registry name or path to a model file")
        s.add_argument("--max-degree", type=int, default=3)
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--samples", type=int, default=32)
        s.add_argument("--format", choices=("text", "structured"), default="text")
        if name == "cohomology":
            s.add_argument("--oracle", action="store_true", help="also run the unreduced brute-force oracle")
    return p


def run(cfg: RunConfig) -> Report:
    return COMMANDS[cfg.command](cfg)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(args.command, args.model, args.max_degree, args.seed, args.samples, args.format,
                        getattr(args, "oracle", False))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    report = run(cfg)
    sys.stdout.write(report.structured() if cfg.format == "structured" else report.rendered())
    return report.status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
