"""Select the compiled row-reduction kernels, falling back to pure Python."""

from __future__ import annotations

import contextlib
import logging

import numpy as np

from . import _pykernels

log = logging.getLogger(__name__)

try:
    from . import _kernels  # type: ignore[attr-defined]
except ImportError:  # pragma: no cover - depends on the build
    _kernels = None

_active = "compiled" if _kernels is not None else "python"


def available() -> tuple[str, ...]:
    return ("compiled", "python") if _kernels is not None else ("python",)


def current() -> str:
    return _active


def set_backend(name: str) -> None:
    global _active
    if name not in ("compiled", "python"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "compiled" and _kernels is None:
        raise RuntimeError("compiled kernels are not built; reinstall with a C compiler")
    _active = name


@contextlib.contextmanager
def use_backend(name: str):
    prev = _active
    set_backend(name)
    try:
        yield
    finally:
        set_backend(prev)


def rref_int(num: np.ndarray) -> tuple[list[list[int]] | np.ndarray, list[int]]:
    nrows, ncols = num.shape
    if _active == "compiled" and num.dtype != object:
        work = np.ascontiguousarray(num, dtype=np.int64).copy()
        ok, pivots = _kernels.rref_int64(work)
        if ok:
            return work, list(pivots)
        log.debug("int64 overflow in rref of %dx%d matrix; using Python ints", nrows, ncols)
    rows = [[int(v) for v in row] for row in num.tolist()]
    out, pivots = _pykernels.rref_int(rows, ncols)
    return np.array(out, dtype=object).reshape(nrows, ncols), pivots


def rref_modp(num: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    nrows, ncols = num.shape
    if _active == "compiled":
        work = np.ascontiguousarray(num, dtype=np.int64).copy()
        _, pivots = _kernels.rref_modp(work, p)
        return work, list(pivots)
    rows = [[int(v) for v in row] for row in num.tolist()]
    out, pivots = _pykernels.rref_modp(rows, ncols, p)
    return np.array(out, dtype=np.int64).reshape(nrows, ncols), pivots
