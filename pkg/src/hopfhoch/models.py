"""Model files: algebras, bialgebras and actions written out by structure constants.

A model file looks like::

    model c2-sign
    description C2 acting on the dual numbers by x -> -x
    field rationals

    bialgebra
      basis e g
      unit e
      mult
        e: e | g
        g: g | e
      comult
        e: e@e
        g: g@g
      counit
        e: 1
        g: 1

    algebra
      basis 1 x
      unit 1
      mult
        1: 1 | x
        x: x | 0

    action
      e: 1 | x
      g: 1 | -x

Row ``a: c_1 | ... | c_d`` of a ``mult`` table gives the products ``a * b_j``
for the basis elements ``b_j`` in declared order; ``action`` rows give
``h . b_j``.  Entries are linear combinations such as ``2*x - 1/3*y`` (or
``u@v`` terms for ``comult``).  A missing ``bialgebra`` block means the
trivial bialgebra ``K``, and a missing ``action`` block means every element
acts through its counit.  See ``docs/model_format.md`` for the grammar.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .linalg import ExactArray, Field, FieldError, QQ, field_from_descriptor
from .structures import (
    AxiomError,
    FiniteAlgebra,
    FiniteBialgebra,
    ModuleAlgebra,
    StructureError,
    trivial_bialgebra,
)


class ModelParseError(ValueError):
    def __init__(self, line: int, column: int, reason: str):
        self.line, self.column, self.reason = line, column, reason
        super().__init__(f"line {line}, column {column}: {reason}")


class UnknownModelError(KeyError):
    def __str__(self):
        # KeyError would quote the message
        return str(self.args[0]) if self.args else ""


_NAME = re.compile(r"[A-Za-z0-9_.'()]+")
_BLOCKS = ("algebra", "bialgebra", "action")
_KEYS = {
    "algebra": ("basis", "dim", "unit", "mult"),
    "bialgebra": ("basis", "dim", "unit", "mult", "comult", "counit"),
    "action": (),
}


@dataclass(eq=False)
class ModelFile:
    name: str
    description: str
    module: ModuleAlgebra

    @property
    def field(self) -> Field:
        return self.module.field

    def __eq__(self, other):
        if not isinstance(other, ModelFile):
            return NotImplemented
        a, b = self.module, other.module
        return (
            self.name == other.name
            and self.description == other.description
            and a.field == b.field
            and a.alg.names == b.alg.names
            and a.hopf.names == b.hopf.names
            and a.alg.mult == b.alg.mult
            and a.alg.unit == b.alg.unit
            and a.hopf.mult == b.hopf.mult
            and a.hopf.unit == b.hopf.unit
            and a.hopf.comult == b.hopf.comult
            and a.hopf.counit == b.hopf.counit
            and a.action == b.action
        )


# --- parsing ----------------------------------------------------------------


@dataclass
class _Line:
    no: int
    indent: int
    text: str


@dataclass
class _Table:
    line: int
    rows: list  # (line_no, col, row_name, [(col, entry_text), ...])


class _Block:
    def __init__(self, kind: str, line: int):
        self.kind, self.line = kind, line
        self.basis: tuple[str, ...] | None = None
        self.basis_line = line
        self.dim: tuple[int, int] | None = None  # (value, line)
        self.unit: tuple[int, int, str] | None = None
        self.tables: dict[str, _Table] = {}


def _scalar(field: Field, text: str, line: int, col: int):
    try:
        return field.coerce(text)
    except (FieldError, ValueError, ZeroDivisionError) as exc:
        raise ModelParseError(line, col, f"malformed scalar {text!r}: {exc}") from None


_NUMBER = re.compile(r"\d+(/\d+)?")
_TERM = re.compile(r"\s*([+-])?\s*([^\s+-][^+-]*?)\s*(?=[+-]|$)")


def _combination(field: Field, text: str, line: int, col: int, names: list[tuple[str, ...]],
                 allow_scalar: bool = False) -> dict[tuple[int, ...], object]:
    """Parse ``c1*u + c2*v - w`` into {index tuple: coefficient}.

    ``names`` lists the basis names allowed in each tensor slot.  With
    ``allow_scalar`` the combination is a bare scalar (empty index tuple).
    """
    text = text.strip()
    if not text:
        raise ModelParseError(line, col, "empty entry")
    out: dict[tuple[int, ...], object] = {}
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ModelParseError(line, col + pos, f"cannot parse term in {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        body = m.group(2).strip()
        tcol = col + m.start(2)
        if "*" in body:
            coef_text, mono = (s.strip() for s in body.split("*", 1))
            coef = _scalar(field, coef_text, line, tcol)
        else:
            coef_text, mono = None, body
            coef = field.coerce(1)
        slots = mono.split("@")
        if allow_scalar:
            if coef_text is not None:
                raise ModelParseError(line, tcol, f"expected a scalar, got {body!r}")
            key, coef = (), _scalar(field, mono, line, tcol)
        elif len(slots) == len(names) and all(s in n for s, n in zip(slots, names)):
            key = tuple(n.index(s) for s, n in zip(slots, names))
        elif coef_text is None and "@" not in mono and _NUMBER.fullmatch(mono):
            value = _scalar(field, mono, line, tcol)
            if value != 0:
                raise ModelParseError(line, tcol, f"{mono!r} is not a basis element")
            key, coef = None, 0
        else:
            expected = "@".join(["name"] * len(names))
            raise ModelParseError(line, tcol, f"unknown basis element {mono!r} (expected {expected})")
        if key is not None:
            out[key] = field.coerce(out.get(key, 0) + sign * coef)
        pos = m.end()
    return out


def _logical_lines(text: str) -> list[_Line]:
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        s = raw.split("#", 1)[0].rstrip()
        if s.strip():
            out.append(_Line(no, len(s) - len(s.lstrip()), s.strip()))
    return out


def parse(text: str) -> ModelFile:
    lines = _logical_lines(text)
    meta = {"model": "", "description": "", "field": "rationals"}
    blocks: dict[str, _Block] = {}
    block: _Block | None = None
    table: _Table | None = None
    for ln in lines:
        head, _, rest = ln.text.partition(" ")
        if head in meta and ln.indent == 0:
            meta[head] = rest.strip()
            block = table = None
            continue
        if head in _BLOCKS and ln.indent == 0:
            if rest.strip():
                raise ModelParseError(ln.no, len(head) + 2, f"unexpected text after block header {head!r}")
            if head in blocks:
                raise ModelParseError(ln.no, 1, f"duplicate {head} block")
            block = blocks[head] = _Block(head, ln.no)
            table = None
            if head == "action":
                table = block.tables["action"] = _Table(ln.no, [])
            continue
        if ln.indent == 0:
            raise ModelParseError(ln.no, 1, f"unknown block or key {head!r}")
        if block is None:
            raise ModelParseError(ln.no, ln.indent + 1, "indented line outside any block")
        if head in _KEYS[block.kind]:
            table = None
            if head == "basis":
                names = tuple(rest.split())
                for i, nm in enumerate(names):
                    if not _NAME.fullmatch(nm):
                        raise ModelParseError(ln.no, ln.indent + 1, f"invalid basis name {nm!r}")
                    if nm in names[:i]:
                        raise ModelParseError(ln.no, ln.indent + 1, f"basis name {nm!r} declared twice")
                if not names:
                    raise ModelParseError(ln.no, ln.indent + 1, "empty basis")
                block.basis, block.basis_line = names, ln.no
            elif head == "dim":
                try:
                    block.dim = (int(rest), ln.no)
                except ValueError:
                    raise ModelParseError(ln.no, ln.indent + 5, f"dimension {rest!r} is not an integer") from None
            elif head == "unit":
                block.unit = (ln.no, ln.indent + len(head) + 2, rest)
            else:
                if rest.strip():
                    raise ModelParseError(ln.no, ln.indent + len(head) + 2, f"table rows go on the lines after {head!r}")
                table = block.tables[head] = _Table(ln.no, [])
            continue
        if table is None or ":" not in ln.text:
            raise ModelParseError(ln.no, ln.indent + 1, f"unexpected line in {block.kind} block: {ln.text!r}")
        row, _, body = ln.text.partition(":")
        col0 = ln.indent + len(row) + 2
        cells, c = [], col0
        for piece in body.split("|"):
            cells.append((c + len(piece) - len(piece.lstrip()), piece))
            c += len(piece) + 1
        table.rows.append((ln.no, ln.indent + 1, row.strip(), cells))

    try:
        field = field_from_descriptor(meta["field"])
    except FieldError as exc:
        no = next((l.no for l in lines if l.text.startswith("field")), 1)
        raise ModelParseError(no, 7, str(exc)) from None

    if "algebra" not in blocks:
        raise ModelParseError(lines[-1].no if lines else 1, 1, "missing algebra block")
    alg = _build_algebra(field, blocks["algebra"])
    if "bialgebra" in blocks:
        hopf = _build_bialgebra(field, blocks["bialgebra"])
    else:
        hopf = trivial_bialgebra(field)
    if "action" in blocks:
        action = _build_action(field, blocks["action"], hopf, alg)
    else:
        action = _counit_action(hopf, alg)
    try:
        ma = ModuleAlgebra(hopf, alg, action, meta["model"], meta["description"])
    except StructureError as exc:
        raise ModelParseError(1, 1, str(exc)) from None
    return ModelFile(meta["model"], meta["description"], ma)


def _basis(b: _Block) -> tuple[str, ...]:
    if b.basis is None:
        raise ModelParseError(b.line, 1, f"{b.kind} block has no basis line")
    if b.dim is not None and b.dim[0] != len(b.basis):
        raise ModelParseError(b.dim[1], 1, f"dim {b.dim[0]} but {len(b.basis)} basis names declared")
    return b.basis


def _square_table(field: Field, b: _Block, key: str, names: tuple[str, ...],
                  slot_names: list[tuple[str, ...]], ncells: int, allow_scalar=False) -> np.ndarray:
    """Fill ``out[row, cell, *slots]`` from a table keyed by basis names."""
    if key not in b.tables:
        raise ModelParseError(b.line, 1, f"{b.kind} block has no {key} table")
    t = b.tables[key]
    d = len(names)
    dims = [len(n) for n in slot_names]
    out = np.zeros((d, ncells, *dims), dtype=object)
    out[...] = Fraction(0) if field == QQ else 0
    seen = set()
    for no, col, row, cells in t.rows:
        if row not in names:
            raise ModelParseError(no, col, f"{row!r} is not a basis element of the {b.kind}")
        if row in seen:
            raise ModelParseError(no, col, f"row {row!r} given twice")
        seen.add(row)
        if len(cells) != ncells:
            raise ModelParseError(no, col, f"dimension mismatch: row has {len(cells)} entries, expected {ncells}")
        r = names.index(row)
        for j, (ccol, cell) in enumerate(cells):
            for idx, coef in _combination(field, cell, no, ccol, slot_names, allow_scalar).items():
                out[(r, j) + idx] = coef
    if len(seen) != d:
        missing = [n for n in names if n not in seen]
        raise ModelParseError(t.line, 1, f"dimension mismatch: {key} table has no rows for {', '.join(missing)}")
    return out


def _exact(field: Field, arr: np.ndarray) -> ExactArray:
    return ExactArray.from_values(field, arr.tolist() if arr.ndim else [arr.item()], shape=arr.shape)


def _vector(field: Field, unit, names) -> ExactArray:
    no, col, text = unit
    v = np.zeros(len(names), dtype=object)
    v[...] = 0
    for idx, coef in _combination(field, text, no, col, [names]).items():
        v[idx] = coef
    return _exact(field, v)


def _build_algebra(field: Field, b: _Block) -> FiniteAlgebra:
    names = _basis(b)
    mult = _square_table(field, b, "mult", names, [names], len(names))
    if b.unit is None:
        raise ModelParseError(b.line, 1, f"{b.kind} block has no unit line")
    return FiniteAlgebra(field, _exact(field, mult), _vector(field, b.unit, names), names)


def _build_bialgebra(field: Field, b: _Block) -> FiniteBialgebra:
    alg = _build_algebra(field, b)
    names = alg.names
    comult = _square_table(field, b, "comult", names, [names, names], 1)[:, 0]
    counit = _square_table(field, b, "counit", names, [], 1, allow_scalar=True)[:, 0]
    return FiniteBialgebra(alg, _exact(field, comult), _exact(field, counit))


def _build_action(field: Field, b: _Block, hopf: FiniteBialgebra, alg: FiniteAlgebra) -> ExactArray:
    b.basis = hopf.names
    arr = _square_table(field, b, "action", hopf.names, [alg.names], alg.dim)
    return _exact(field, arr)


def _counit_action(hopf: FiniteBialgebra, alg: FiniteAlgebra) -> ExactArray:
    from .linalg import einsum

    return einsum("b,ac->bac", hopf.counit, ExactArray.identity(alg.field, alg.dim))


# --- serialization ----------------------------------------------------------


def _fmt_combo(field: Field, coeffs: list[tuple[str, object]]) -> str:
    parts = []
    for name, c in coeffs:
        if c == 0:
            continue
        s = field.format(c)
        neg = s.startswith("-")
        mag = s[1:] if neg else s
        term = name if mag == "1" else f"{mag}*{name}"
        parts.append(("- " if neg else "+ ") + term)
    if not parts:
        return "0"
    out = " ".join(parts)
    return out[2:] if out.startswith("+ ") else "-" + out[2:]


def _vec_combo(field, vec: ExactArray, names) -> str:
    return _fmt_combo(field, list(zip(names, vec.values())))


def _alg_lines(field, a: FiniteAlgebra) -> list[str]:
    out = ["  basis " + " ".join(a.names), "  unit " + _vec_combo(field, a.unit, a.names), "  mult"]
    for i, n in enumerate(a.names):
        cells = [_vec_combo(field, a.mult[i, j], a.names) for j in range(a.dim)]
        out.append(f"    {n}: " + " | ".join(cells))
    return out


def serialize(model: ModelFile) -> str:
    ma = model.module
    f = ma.field
    out = []
    if model.name:
        out.append(f"model {model.name}")
    if model.description:
        out.append(f"description {model.description}")
    out.append(f"field {f.descriptor}")
    h = ma.hopf
    out += ["", "bialgebra"] + _alg_lines(f, h.algebra) + ["  comult"]
    pairs = [f"{x}@{y}" for y in h.names for x in h.names]
    for i, n in enumerate(h.names):
        out.append(f"    {n}: " + _fmt_combo(f, list(zip(pairs, h.comult[i].flatten().values()))))
    out.append("  counit")
    for i, n in enumerate(h.names):
        out.append(f"    {n}: {f.format(h.counit[i])}")
    out += ["", "algebra"] + _alg_lines(f, ma.alg)
    out += ["", "action"]
    for b, n in enumerate(h.names):
        cells = [_vec_combo(f, ma.action[b, a], ma.alg.names) for a in range(ma.dim)]
        out.append(f"  {n}: " + " | ".join(cells))
    return "\n".join(out) + "\n"


# --- registry ---------------------------------------------------------------

_DUAL = """\
model dual-numbers
description the dual numbers K[x]/(x^2) with trivial H
field rationals

algebra
  basis 1 x
  unit 1
  mult
    1: 1 | x
    x: x | 0
"""

_C2_SIGN = """\
model c2-sign
description the group algebra of C2 acting on K[x]/(x^2) by g.x = -x
field rationals

bialgebra
  basis e g
  unit e
  mult
    e: e | g
    g: g | e
  comult
    e: e@e
    g: g@g
  counit
    e: 1
    g: 1

algebra
  basis 1 x
  unit 1
  mult
    1: 1 | x
    x: x | 0

action
  e: 1 | x
  g: 1 | -x
"""

_M2 = """\
model m2
description 2x2 matrices with trivial H
field rationals

algebra
  basis e11 e12 e21 e22
  unit e11 + e22
  mult
    e11: e11 | e12 | 0 | 0
    e12: 0 | 0 | e11 | e12
    e21: e21 | e22 | 0 | 0
    e22: 0 | 0 | e21 | e22
"""


def _cyclic_names(n: int) -> list[str]:
    return ["e"] + ["g" if k == 1 else f"g{k}" for k in range(1, n)]


def _group_algebra_block(n: int) -> list[str]:
    g = _cyclic_names(n)
    lines = ["bialgebra", "  basis " + " ".join(g), "  unit e", "  mult"]
    for i in range(n):
        lines.append(f"    {g[i]}: " + " | ".join(g[(i + j) % n] for j in range(n)))
    lines.append("  comult")
    lines += [f"    {x}: {x}@{x}" for x in g]
    lines.append("  counit")
    lines += [f"    {x}: 1" for x in g]
    return lines


def _function_algebra_block(n: int) -> list[str]:
    d = ["d_" + x for x in _cyclic_names(n)]
    lines = ["algebra", "  basis " + " ".join(d), "  unit " + " + ".join(d), "  mult"]
    for i in range(n):
        lines.append(f"    {d[i]}: " + " | ".join(d[i] if i == j else "0" for j in range(n)))
    return lines


def _fun_text(n: int) -> str:
    head = [f"model fun(C{n})", f"description functions on the cyclic group C{n}", "field rationals", ""]
    return "\n".join(head + _function_algebra_block(n)) + "\n"


def _group_translate_text(n: int) -> str:
    g, d = _cyclic_names(n), ["d_" + x for x in _cyclic_names(n)]
    head = [
        f"model group-translate(C{n})",
        f"description K[C{n}] acting on functions on C{n} by translation, g.d_h = d_(h g^-1)",
        "field rationals",
        "",
    ]
    action = ["action"]
    for k in range(n):
        # g^k . d_(g^j) = d_(g^(j-k))
        action.append(f"  {g[k]}: " + " | ".join(d[(j - k) % n] for j in range(n)))
    return "\n".join(head + _group_algebra_block(n) + [""] + _function_algebra_block(n) + [""] + action) + "\n"


_CUBIC = """\
model cubic
description the truncated polynomial algebra K[x]/(x^3) with trivial H
field rationals

algebra
  basis 1 x x2
  unit 1
  mult
    1: 1 | x | x2
    x: x | x2 | 0
    x2: x2 | 0 | 0
"""

_ALGEBRA_TEXTS = {
    "dual-numbers": _DUAL,
    "m2": _M2,
    "cubic": _CUBIC,
    "fun(C2)": _fun_text(2),
    "fun(C3)": _fun_text(3),
}

_MODEL_TEXTS = {
    "dual-numbers": _DUAL,
    "c2-sign": _C2_SIGN,
    "m2": _M2,
    "group-translate(C2)": _group_translate_text(2),
    "group-translate(C3)": _group_translate_text(3),
}

# The models every suite runs over.
REGISTRY = (
    "dual-numbers",
    "c2-sign",
    "m2",
    "group-translate(C2)",
    "group-translate(C3)",
    "trivial-H(fun(C3))",
)

_TRIVIAL = re.compile(r"trivial-H\((.+)\)")
_cache: dict[str, ModuleAlgebra] = {}


def registry_names() -> tuple[str, ...]:
    return REGISTRY


def model_text(name: str) -> str:
    """Model-file text of a built-in, including ``trivial-H(...)`` forms."""
    m = _TRIVIAL.fullmatch(name)
    if m:
        inner = m.group(1)
        if inner in _ALGEBRA_TEXTS:
            src = _ALGEBRA_TEXTS[inner]
        elif inner in _MODEL_TEXTS:
            src = _MODEL_TEXTS[inner]
        else:
            raise UnknownModelError(name)
        # keep only the algebra block: H becomes K acting by its counit
        parsed = parse(src)
        a = parsed.module.alg
        hopf = trivial_bialgebra(a.field)
        ma = ModuleAlgebra(hopf, a, _counit_action(hopf, a), name,
                           f"trivial H over {inner}")
        text = serialize(ModelFile(name, f"trivial H over {inner}", ma))
        return text
    if name in _MODEL_TEXTS:
        return _MODEL_TEXTS[name]
    raise UnknownModelError(name)


def read_model_text(name_or_path: str | Path) -> str:
    """Text of a built-in, or the contents of a model file."""
    s = str(name_or_path)
    try:
        return model_text(s)
    except UnknownModelError:
        p = Path(s)
        if not p.is_file():
            known = ", ".join(REGISTRY)
            raise UnknownModelError(f"{s!r} is neither a built-in ({known}) nor a readable file") from None
        return p.read_text()


def load_model_file(name_or_path: str | Path) -> ModelFile:
    mf = parse(read_model_text(name_or_path))
    report = mf.module.validate()
    if not report.ok:
        raise AxiomError(report)
    return mf


def load(name_or_path: str | Path) -> ModuleAlgebra:
    """Parse and validate a built-in model or a model file; raises on any violated axiom."""
    key = str(name_or_path)
    if key in _cache:
        return _cache[key]
    ma = load_model_file(name_or_path).module
    if key in REGISTRY or _TRIVIAL.fullmatch(key) or key in _MODEL_TEXTS:
        _cache[key] = ma
    return ma
