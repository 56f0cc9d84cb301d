"""Brute-force cohomology dimensions from the unreduced complex.

This is a deliberately separate code path.  It never touches reduced
cochains: it solves for the X-linear maps ``A^{(x)(n+2)} -> A`` directly as
the nullspace of their linear constraints, composes them with the bar
differential, and reads ``dim HH^n`` off ranks.  It only uses the raw
structure tables and the exact row reduction.

The constraint system is solved in two stages.  Left and right
A-linearity involve only the outer slots and the output, so their
constraint matrix is block diagonal with one identical block per choice of
the middle slots; stage one solves that block.  Stage two imposes
H-linearity on the coefficients of the stage-one solutions.  On small cases
the result is validated against the nullspace of the whole system at once.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .linalg import ExactArray, PrimeField, nullspace, rank
from .structures import ModuleAlgebra

UNSTAGED_LIMIT = 800  # unknowns up to which the full system is also solved
_SAFE = 2**62


@dataclass(frozen=True)
class OracleResult:
    model: str
    max_degree: int
    hom_dims: list[int]  # dim Hom_X(CB_n, A) for n = 0..max_degree
    ranks: list[int]  # rank of g -> g o d on Hom_X(CB_n, A), n = 0..max_degree
    dims: list[int]  # dim HH^n, n = 0..max_degree

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "OracleResult":
        return cls(**json.loads(text))


def _maxabs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return int(max(abs(int(a.max())), abs(int(a.min()))))


def _exact(a) -> np.ndarray:
    """int64 when every entry fits comfortably, else Python integers."""
    a = np.asarray(a)
    if a.dtype != object:
        return a.astype(np.int64)
    return a.astype(np.int64) if _maxabs(a) < _SAFE else a


def _tensordot(a: np.ndarray, b: np.ndarray, axes) -> np.ndarray:
    """Integer tensordot that switches to Python integers when int64 could overflow."""
    inner = 1
    for i in axes[0]:
        inner *= a.shape[i]
    if _maxabs(a) * _maxabs(b) * max(inner, 1) >= _SAFE:
        a, b = a.astype(object), b.astype(object)
    else:
        a, b = a.astype(np.int64), b.astype(np.int64)
    return _exact(np.tensordot(a, b, axes=axes))


def _apply(t: np.ndarray, m: np.ndarray, axis: int) -> np.ndarray:
    """``new[..c..] = sum_a m[a, c] t[..a..]`` along ``axis``."""
    r = _tensordot(t, m, axes=([axis], [0]))
    return np.moveaxis(r, -1, axis)


class _Tables:
    """Structure constants as integer arrays (denominators cleared)."""

    def __init__(self, ma: ModuleAlgebra):
        self.field = ma.field
        self.d, self.h = ma.dim, ma.hopf.dim
        self.mult = self._obj(ma.alg.mult)
        self.unit = self._obj(ma.alg.unit)
        self.comult = self._obj(ma.hopf.comult)
        self.action = self._obj(ma.action)  # [b, a, c]

    @staticmethod
    def _obj(a: ExactArray) -> np.ndarray:
        # constraints are homogeneous, so clearing the denominator is harmless
        return _exact(a.num)

    def coproduct(self, b: int, k: int) -> dict[tuple[int, ...], object]:
        """``Delta^{(k)}(e_b)`` as ``{(h_1, ..., h_k): coefficient}``."""
        terms = {(b,): 1}
        for _ in range(k - 1):
            nxt: dict = {}
            for hs, c in terms.items():
                last = hs[-1]
                for s in range(self.h):
                    for t in range(self.h):
                        w = self.comult[last, s, t]
                        if w:
                            key = hs[:-1] + (s, t)
                            nxt[key] = nxt.get(key, 0) + c * w
            terms = {k_: v for k_, v in nxt.items() if v}
        return terms


def _to_exact(field, rows: list[np.ndarray], width: int) -> ExactArray:
    if not rows:
        return ExactArray.zeros(field, (0, width))
    return ExactArray(field, np.array([np.asarray(r, dtype=object) for r in rows], dtype=object))


def _nonzero_rows(mat: np.ndarray) -> list[np.ndarray]:
    seen, out = set(), []
    for row in mat:
        if any(row):
            key = tuple(row)
            if key not in seen:
                seen.add(key)
                out.append(row)
    return out


def _left_right_defects(T: _Tables, g: np.ndarray) -> list[np.ndarray]:
    """For a batch ``g[B, k, a_0, ..., a_last]``: left and right A-linearity defects per generator."""
    last = g.ndim - 1
    out = []
    for i in range(T.d):
        L = T.mult[i]  # L[a, m]: e_i a = sum_m L[a, m] e_m
        # g(e_i a_0 ...) : new[..a..] = sum_m L[a, m] g[..m..]
        lhs = _apply(g, L.T, 2)
        rhs = _apply(g, L, 1)
        out.append(lhs - rhs)
    for x in range(T.d):
        R = T.mult[:, x]  # R[z, m]: z e_x
        lhs = _apply(g, R.T, last)
        rhs = _apply(g, R, 1)
        out.append(lhs - rhs)
    return out


def _h_defects(T: _Tables, g: np.ndarray) -> list[np.ndarray]:
    """``g o (b acting diagonally) - b . g`` for every basis element b of H."""
    slots = g.ndim - 2
    out = []
    for b in range(T.h):
        lhs = np.zeros(g.shape, dtype=np.int64)
        for hs, c in T.coproduct(b, slots).items():
            term = g
            for s, h in enumerate(hs):
                term = _apply(term, T.action[h].T, 2 + s)
            lhs = lhs + c * term
        out.append(lhs - _apply(g, T.action[b], 1))
    return out


def _solve(field, batch: np.ndarray, defects) -> np.ndarray:
    """Coefficient vectors ``c`` (rows) with ``sum_j c_j batch[j]`` satisfying the constraints."""
    N = batch.shape[0]
    cols = [D.reshape(N, -1) for D in defects(batch)]
    V = np.concatenate(cols, axis=1) if cols else np.zeros((N, 0), dtype=np.int64)
    rows = _nonzero_rows(V.T)
    if not rows:
        return np.eye(N, dtype=np.int64)
    K = nullspace(_to_exact(field, rows, N))
    return _coeff_rows(K.vectors)


def _coeff_rows(v: ExactArray) -> np.ndarray:
    # rows are defined up to scale; clear the denominator
    return _exact(v.num)


def _combine(coeffs: np.ndarray, batch: np.ndarray) -> np.ndarray:
    N = batch.shape[0]
    flat = batch.reshape(N, -1)
    return _tensordot(coeffs, flat, axes=([1], [0])).reshape((coeffs.shape[0],) + batch.shape[1:])


def _identity_batch(shape: tuple[int, ...]) -> np.ndarray:
    N = int(np.prod(shape))
    return np.eye(N, dtype=np.int64).reshape((N,) + shape, order="F")


def hom_x_basis(ma: ModuleAlgebra, n: int, tables: _Tables | None = None) -> np.ndarray:
    """Basis of ``Hom_X(A^{(x)(n+2)}, A)`` as a stack of tensors ``[k, a_0, ..., a_{n+1}]``."""
    T = tables or _Tables(ma)
    d = T.d
    # stage one: the block on (output, a_0, a_{n+1}), then one copy per middle index
    block = _identity_batch((d, d, d))
    bim = _combine(_solve(T.field, block, lambda g: _left_right_defects(T, g)), block)
    r1 = bim.shape[0]
    mid = d**n
    stage1 = np.zeros((r1 * mid, d, d) + (d,) * n + (d,), dtype=bim.dtype)
    for beta in range(r1):
        for mu in range(mid):
            idx = np.unravel_index(mu, (d,) * n, order="F") if n else ()
            stage1[(beta * mid + mu, slice(None), slice(None)) + tuple(idx) + (slice(None),)] = bim[beta]
    if stage1.shape[0] == 0:
        return stage1
    # stage two: H-linearity on the stage-one coefficients
    coeffs = _solve(T.field, stage1, lambda g: _h_defects(T, g))
    return _combine(coeffs, stage1)


def hom_x_basis_unstaged(ma: ModuleAlgebra, n: int) -> np.ndarray:
    """The same space from one constraint system on all ``d^(n+3)`` unknowns."""
    T = _Tables(ma)
    d = T.d
    batch = _identity_batch((d,) * (n + 3))
    coeffs = _solve(T.field, batch, lambda g: _left_right_defects(T, g) + _h_defects(T, g))
    return _combine(coeffs, batch)


def staged_matches_unstaged(ma: ModuleAlgebra, n: int) -> bool:
    """Both solution routes span the same space (only sensible for small systems)."""
    a, b = hom_x_basis(ma, n), hom_x_basis_unstaged(ma, n)
    if a.shape[0] != b.shape[0]:
        return False
    if a.shape[0] == 0:
        return True
    F = ma.field
    both = np.concatenate([a.reshape(a.shape[0], -1), b.reshape(b.shape[0], -1)])
    return rank(ExactArray(F, _exact(both))) == a.shape[0]


def _coboundary_images(T: _Tables, basis: np.ndarray) -> np.ndarray:
    """``g o d`` for each basis map g, where ``d = sum_j (-1)^j face_j`` on ``A^{(x)(n+3)}``."""
    N = basis.shape[0]
    slots = basis.ndim - 2  # n + 2 input slots
    d = T.d
    out = None
    for j in range(slots):
        # (g o face_j)[.., a_j, a_{j+1}, ..] = sum_m mult[a_j, a_{j+1}, m] g[.., m, ..]
        r = _tensordot(basis, T.mult, axes=([2 + j], [2]))  # batch, k, others..., a_j, a_{j+1}
        r = np.moveaxis(r, [-2, -1], [2 + j, 3 + j])
        out = r if out is None else (out - r if j % 2 else out + r)
    return out.reshape(N, -1) if out is not None else np.zeros((N, d ** (slots + 2)), dtype=np.int64)


def _rank_rows(field, rows: np.ndarray) -> int:
    """Rank of a tall-or-wide integer matrix.

    Over Q, ``rank(V) = rank(V V^T)``, which keeps the elimination on a
    square matrix of the row count.  Over F_p the matrix is reduced directly.
    """
    if rows.shape[0] == 0:
        return 0
    if isinstance(field, PrimeField):
        return rank(_to_exact(field, list(rows), rows.shape[1]))
    G = _tensordot(rows, rows.T, axes=([1], [0]))
    return rank(ExactArray(field, G))


def coboundary_rank(ma: ModuleAlgebra, n: int, basis: np.ndarray | None = None,
                    tables: _Tables | None = None) -> int:
    T = tables or _Tables(ma)
    B = hom_x_basis(ma, n, T) if basis is None else basis
    if B.shape[0] == 0:
        return 0
    return _rank_rows(T.field, _coboundary_images(T, B))


def oracle_dimensions(ma: ModuleAlgebra, max_degree: int = 3) -> OracleResult:
    T = _Tables(ma)
    bases = [hom_x_basis(ma, n, T) for n in range(max_degree + 1)]
    hom_dims = [b.shape[0] for b in bases]
    ranks = [coboundary_rank(ma, n, bases[n], T) for n in range(max_degree + 1)]
    dims = [hom_dims[n] - ranks[n] - (ranks[n - 1] if n else 0) for n in range(max_degree + 1)]
    return OracleResult(ma.name, max_degree, hom_dims, ranks, dims)


def golden_path(directory: str | Path, model: str) -> Path:
    safe = "".join(c if c.isalnum() or c in "-_" else "_" for c in model)
    return Path(directory) / f"{safe}.json"


def write_golden(directory: str | Path, models, max_degree: int = 3) -> list[Path]:
    from .models import load

    Path(directory).mkdir(parents=True, exist_ok=True)
    paths = []
    for name in models:
        res = oracle_dimensions(load(name), max_degree)
        p = golden_path(directory, name)
        p.write_text(res.to_json())
        paths.append(p)
    return paths


def read_golden(directory: str | Path, model: str) -> OracleResult:
    return OracleResult.from_json(golden_path(directory, model).read_text())
