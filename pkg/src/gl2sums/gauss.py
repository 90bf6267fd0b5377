"""Traces of matrix Gauss sums over GL(2, F_p).

The central quantity is T(rho, A) = sum over X in GL(2, F_p) of
chi_rho(X) e_p(tr(AX)), evaluated three ways:

* brute force: one sweep over the group, grouping e_p(tr(AX)) by conjugacy
  class and pairing with table rows;
* Bruhat cells: the same sweep restricted to the two cells {a11 != 0} and
  {a11 == 0}, whose sum must reproduce the full trace;
* closed form: for invertible A via equivariance, T = g(rho) chi_rho(A^{-1});
  for singular A via the rank-one reduction to diag(a, 0) or the nilpotent
  [[0, 1], [0, 0]], where only the trivial representation, the Steinberg and
  (in the semisimple case) principal(0, k) survive.

g(rho) is computed, never assumed: it is the full-group sum at A = I,
organized by conjugacy class (e_p(tr X) is a class function). Its magnitude
p^{(4 - k)/2}, k the unit multiplicity, is asserted downstream, not here.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache

import numpy as np

from .arith import classical_gauss_sum, e_frac
from .chartable import ONEDIM, PRINCIPAL, STEINBERG, CharacterTable, IrrepLabel, unit_multiplicity
from .errors import VerificationError
from .gl2 import Mat2, classify_entries, group_order
from . import kernels


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("GL2_WORKERS", "1")))
    except ValueError:
        return 1


def _as_residue(A, p: int) -> Mat2:
    if isinstance(A, Mat2):
        return A if A.p == p else A.reduce(p)
    a, b, c, d = A
    return Mat2(a, b, c, d, p)


def ep_trace_vectors(p: int, A: Mat2):
    """Per-entry phase vectors with tr(AX) = A11*x11 + A12*x21 + A21*x12 + A22*x22."""
    t = np.arange(p)

    def phases(coef):
        return np.exp(2j * np.pi * ((coef * t) % p) / p)

    return phases(A.a), phases(A.c), phases(A.b), phases(A.d)


def _weights_chunk(args):
    p, entries, cell, a_lo, a_hi = args
    A = Mat2(*entries, p)
    v = ep_trace_vectors(p, A)
    return kernels.class_weights(p, *v, cell=cell, a_range=(a_lo, a_hi))


def class_phase_weights(p: int, A: Mat2, cell: int = kernels.CELL_ALL,
                        workers: int | None = None) -> np.ndarray:
    """Per-class totals of e_p(tr(AX)) over X in GL(2, F_p) (or one cell).

    With workers > 1 the sweep is partitioned by the leading entry of X and
    the exact partial sums are combined.
    """
    workers = default_workers() if workers is None else workers
    if workers <= 1:
        v = ep_trace_vectors(p, A)
        return kernels.class_weights(p, *v, cell=cell)
    bounds = np.linspace(0, p, workers + 1, dtype=int)
    jobs = [
        (p, A.entries, cell, int(lo), int(hi))
        for lo, hi in zip(bounds[:-1], bounds[1:])
        if hi > lo
    ]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_weights_chunk, jobs))
    return np.sum(parts, axis=0)


def gauss_trace_bruteforce(table: CharacterTable, irrep: IrrepLabel, A,
                           workers: int | None = None) -> complex:
    A = _as_residue(A, table.p)
    w = class_phase_weights(table.p, A, workers=workers)
    return complex(table.row(irrep) @ w)


def gauss_trace_cells(table: CharacterTable, irrep: IrrepLabel, A,
                      workers: int | None = None) -> tuple[complex, complex]:
    """(G1, G2): the Bruhat-cell halves, summing to the full trace."""
    A = _as_residue(A, table.p)
    row = table.row(irrep)
    w1 = class_phase_weights(table.p, A, cell=kernels.CELL_PU, workers=workers)
    w2 = class_phase_weights(table.p, A, cell=kernels.CELL_W, workers=workers)
    return complex(row @ w1), complex(row @ w2)


@lru_cache(maxsize=8)
def _g_vector_cached(p: int) -> np.ndarray:
    from .chartable import build_table

    table = build_table(p)
    eptr = table.class_eptr()
    out = np.empty(table.n, dtype=np.complex128)
    for i in range(table.n):
        out[i] = table.row(i) @ eptr
    return out / table.dims


def g_scalar(table: CharacterTable, irrep: IrrepLabel) -> complex:
    """g(rho) = T(rho, I) / dim(rho); the scalar of the identity Gauss sum."""
    return complex(_g_vector_cached(table.p)[table.irrep_index(irrep)])


def g_vector(table: CharacterTable) -> np.ndarray:
    return _g_vector_cached(table.p)


def kondo_magnitude(p: int, irrep: IrrepLabel) -> float:
    """Predicted |g(rho)| = p^{(4 - k)/2} from the unit multiplicity."""
    return float(p) ** ((4 - unit_multiplicity(irrep)) / 2)


def singular_type(A: Mat2) -> tuple[str, int | None]:
    """Conjugacy type of a singular residue matrix: ("zero", None),
    ("semisimple", a) with a = tr(A) != 0, or ("nilpotent", None)."""
    if A.det() != 0:
        raise ValueError("expected a singular matrix")
    if all(v == 0 for v in A.entries):
        return "zero", None
    t = A.trace()
    return ("semisimple", t) if t != 0 else ("nilpotent", None)


def singular_trace_closed(table: CharacterTable, irrep: IrrepLabel,
                          kind: str, a: int | None = None) -> complex:
    """Closed-form T(rho, A) for singular A of the given conjugacy type."""
    p = table.p
    if kind == "zero":
        if irrep == IrrepLabel(ONEDIM, (0,)):
            return complex(group_order(p))
        return 0j
    if irrep == IrrepLabel(ONEDIM, (0,)):
        return complex(-p * (p - 1))
    if irrep == IrrepLabel(STEINBERG, (0,)):
        return complex(p * p * (p - 1)) if kind == "nilpotent" else complex(-p * (p - 1))
    if irrep.kind == PRINCIPAL and irrep.params[0] == 0:
        # Nonzero only in the rank-one semisimple case: in the Bruhat-cell
        # evaluation both cells vanish at the nilpotent type (the Weyl factor
        # moves the evaluation point off the invariant vector's support),
        # which the explicit induced model confirms.
        if kind == "nilpotent":
            return 0j
        k = irrep.params[1]
        gk = _classical_gauss_cached(p, k)
        chi_a_bar = e_frac(-k * int(_dlog(p, a)), p - 1)
        return p * (p - 1) * chi_a_bar * gk
    return 0j


@lru_cache(maxsize=None)
def _classical_gauss_cached(p: int, k: int) -> complex:
    return classical_gauss_sum(p, k)


def _dlog(p: int, a: int) -> int:
    from .arith import unit_group

    return int(unit_group(p).dlog[a % p])


def gauss_trace_closed(table: CharacterTable, irrep: IrrepLabel, A) -> complex:
    """Closed-form trace, dispatching on the rank of A."""
    A = _as_residue(A, table.p)
    if A.det() == 0:
        kind, a = singular_type(A)
        return singular_trace_closed(table, irrep, kind, a)
    inv = A.inverse()
    label = classify_entries(table.p, *inv.entries)
    return g_scalar(table, irrep) * table.char_value(irrep, label)


def char_ft(table: CharacterTable, irrep: IrrepLabel, A) -> complex:
    """Fourier coefficient of the extended character at A:
    p^{-4} T(rho, -A), with |value| <= dim(rho)/p^2 checked for nonzero A."""
    p = table.p
    A = _as_residue(A, p)
    value = gauss_trace_closed(table, irrep, -A) / p**4
    if any(v != 0 for v in A.entries):
        bound = table.dim(irrep) / p**2
        if abs(value) > bound * (1 + 1e-9) + 1e-12:
            raise VerificationError(
                "char-ft-bound", f"|{value}| > {bound} at p={p}, {irrep}"
            )
    return value
