"""Kernel backend selection.

The hot p^4 sweeps have two interchangeable implementations: a compiled
Cython extension (``gl2sums.kernels._fast``) and a NumPy fallback
(``gl2sums.kernels.ref``). The extension is used when importable; set
GL2SUMS_BACKEND=numpy to force the fallback (any other value selects the
compiled backend and raises if it is missing).
"""

from __future__ import annotations

import os

import numpy as np

from ..gl2 import KernelCtx, kernel_ctx
from . import ref as _ref

_requested = os.environ.get("GL2SUMS_BACKEND", "").lower()
if _requested in ("numpy", "ref", "py"):
    _impl = _ref
else:
    try:
        from . import _fast as _impl  # type: ignore[attr-defined]
    except ImportError:
        if _requested:
            raise
        _impl = _ref

BACKEND: str = _impl.BACKEND

CELL_ALL, CELL_PU, CELL_W = 0, 1, 2


def _flat(ctx: KernelCtx):
    return (ctx.p, ctx.n_classes, ctx.inv2, ctx.inv4tau, ctx.inv, ctx.legendre,
            ctx.sqrtm, ctx.central_idx, ctx.nonss_idx, ctx.split_idx, ctx.ell_idx)


def _vec(v, p, dtype):
    v = np.ascontiguousarray(v, dtype=dtype)
    if v.shape != (p,):
        raise ValueError(f"expected a length-{p} vector")
    return v


def class_weights(p, v11, v12, v21, v22, cell=CELL_ALL, a_range=None,
                  backend=None):
    """Per-class totals of v11[a]*v12[b]*v21[c]*v22[d] over invertible
    (a, b, c, d), optionally restricted to one Bruhat cell."""
    ctx = kernel_ctx(p)
    a_lo, a_hi = a_range if a_range is not None else (0, p)
    vs = [_vec(v, p, np.complex128) for v in (v11, v12, v21, v22)]
    impl = _backend(backend)
    return impl.class_weights(*_flat(ctx), *vs, cell, a_lo, a_hi)


def class_counts(p, n11, n12, n21, n22, a_range=None, backend=None):
    """Exact per-class totals of n11[a]*n12[b]*n21[c]*n22[d]; index 0 collects
    the singular matrices, index 1+c conjugacy class c."""
    ctx = kernel_ctx(p)
    a_lo, a_hi = a_range if a_range is not None else (0, p)
    ns = [_vec(n, p, np.int64) for n in (n11, n12, n21, n22)]
    impl = _backend(backend)
    return impl.class_counts(*_flat(ctx), *ns, a_lo, a_hi)


def plancherel_weights(p, v11, v12, v21, v22, backend=None):
    ctx = kernel_ctx(p)
    vs = [_vec(v, p, np.complex128) for v in (v11, v12, v21, v22)]
    impl = _backend(backend)
    return impl.plancherel_weights(*_flat(ctx), *vs)


def disc_zero_count(p, n11, n12, n21, n22, backend=None):
    ctx = kernel_ctx(p)
    ns = [_vec(n, p, np.int64) for n in (n11, n12, n21, n22)]
    impl = _backend(backend)
    return impl.disc_zero_count(*_flat(ctx), *ns)


def legendre_disc_sum(p, n11, n12, n21, n22, backend=None):
    ctx = kernel_ctx(p)
    ns = [_vec(n, p, np.int64) for n in (n11, n12, n21, n22)]
    impl = _backend(backend)
    return impl.legendre_disc_sum(*_flat(ctx), *ns)


def build_class_index(p):
    """Row-major class-index table over all p^4 residue matrices (-1 where
    singular). Table construction, not a hot path: always the NumPy backend."""
    return _ref.build_class_index(*_flat(kernel_ctx(p)))


def _backend(name):
    if name is None:
        return _impl
    if name in ("numpy", "ref", "py"):
        return _ref
    if name in ("cython", "fast", "c"):
        from . import _fast  # raises if not built

        return _fast
    raise ValueError(f"unknown backend {name!r}")


def available_backends() -> list[str]:
    out = ["numpy"]
    try:
        from . import _fast  # noqa: F401

        out.append("cython")
    except ImportError:
        pass
    return out
