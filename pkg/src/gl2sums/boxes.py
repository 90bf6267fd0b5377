"""Matrix intervals, additive characters of M(2, F_p), indicator Fourier
transforms, box character sums and the bound scanner.

A box character sum S(rho, I) = sum over integer matrices A in the interval I
of the extended character chi_rho(A mod p) is computed two ways:

* direct: one residue sweep gives the exact count of interval points above
  each conjugacy class; S is the dot product with the character row.
* plancherel: S = sum over B in M(2, F_p) of T(rho, -B) * conj(dhat(B)),
  where dhat is the normalized indicator transform of the interval and
  T(rho, .) is evaluated in closed form. One dual sweep serves every
  irreducible, so the cost is O(p^4 + p^2 per irreducible) independent of the
  interval size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import e_frac
from .chartable import ONEDIM, CharacterTable, IrrepLabel
from .errors import VerificationError
from .gauss import g_vector, singular_trace_closed
from .gl2 import Mat2, group_order
from . import kernels


@dataclass(frozen=True)
class MatrixInterval:
    """Product of four integer intervals [lo, hi], one per matrix entry."""

    i11: tuple[int, int]
    i12: tuple[int, int]
    i21: tuple[int, int]
    i22: tuple[int, int]

    def __post_init__(self):
        for lo, hi in self.components():
            if lo > hi:
                raise ValueError("empty interval component")

    def components(self):
        return (self.i11, self.i12, self.i21, self.i22)

    def lengths(self) -> tuple[int, ...]:
        return tuple(hi - lo + 1 for lo, hi in self.components())

    def cardinality(self) -> int:
        n = 1
        for length in self.lengths():
            n *= length
        return n

    def budget(self, p: int) -> float:
        """Smallest c with every component length <= c*p."""
        return max(self.lengths()) / p

    @classmethod
    def height_box(cls, x: int, base: Mat2 | None = None) -> "MatrixInterval":
        """All integer matrices with h(A - base) <= x (base defaults to 0)."""
        if x < 0:
            raise ValueError("x must be >= 0")
        e = base.entries if base is not None else (0, 0, 0, 0)
        return cls(*(((v - x, v + x) for v in e)))

    @classmethod
    def full_residue_box(cls, p: int) -> "MatrixInterval":
        return cls((0, p - 1), (0, p - 1), (0, p - 1), (0, p - 1))


def additive_interval_sum(p: int, b, lo: int, hi: int) -> complex:
    """Closed-form sum of e_p(b*n) for n in [lo, hi], with the standard bound
    min(length, 1/(2||b/p||)) checked for b != 0 mod p."""
    if hi < lo:
        raise ValueError("empty interval")
    length = hi - lo + 1
    b = int(b) % p
    if b == 0:
        return complex(length)
    num = e_frac(b * length, p) - 1.0
    den = e_frac(b, p) - 1.0
    value = e_frac(b * lo, p) * num / den
    dist = min(b, p - b) / p
    bound = min(length, 1.0 / (2.0 * dist))
    if abs(value) > bound * (1 + 1e-9) + 1e-9:
        raise VerificationError("geometric-sum-bound", f"p={p} b={b} len={length}")
    return value


def interval_indicator_ft(p: int, interval: MatrixInterval, B) -> complex:
    """dhat(B) = p^{-4} * sum over X in the reduced interval of e_p(-tr(BX)).

    tr(BX) pairs entry (i, j) of B with entry (j, i) of X, so the transform
    factors into four geometric sums with transposed components. The product
    bound p^{-4} * prod min(length, ||b_ij/p||^{-1}) is checked.
    """
    B = B if isinstance(B, Mat2) else Mat2(*B, p)
    factors = (
        additive_interval_sum(p, -B.a, *interval.i11),
        additive_interval_sum(p, -B.b, *interval.i21),
        additive_interval_sum(p, -B.c, *interval.i12),
        additive_interval_sum(p, -B.d, *interval.i22),
    )
    value = factors[0] * factors[1] * factors[2] * factors[3] / p**4
    bound = 1.0
    pairs = ((B.a, interval.i11), (B.b, interval.i21), (B.c, interval.i12),
             (B.d, interval.i22))
    for coef, (lo, hi) in pairs:
        coef %= p
        if coef == 0:
            bound *= hi - lo + 1
        else:
            bound *= min(hi - lo + 1, p / min(coef, p - coef))
    if abs(value) > bound / p**4 * (1 + 1e-9) + 1e-12:
        raise VerificationError("indicator-ft-bound", f"p={p} B={B.literal()}")
    return value


def interval_residue_counts(p: int, interval: MatrixInterval):
    """Four int64[p] vectors: per-entry counts of interval integers in each
    residue class."""
    r = np.arange(p, dtype=np.int64)

    def counts(lo, hi):
        return (hi - r) // p - (lo - 1 - r) // p

    return tuple(counts(lo, hi) for lo, hi in interval.components())


def interval_class_counts(p: int, interval: MatrixInterval) -> np.ndarray:
    """Exact counts of interval points above the singular locus (index 0) and
    above each conjugacy class (index 1 + c)."""
    n11, n12, n21, n22 = interval_residue_counts(p, interval)
    return kernels.class_counts(p, n11, n12, n21, n22)


def _geometry_vectors(p: int, interval: MatrixInterval):
    """conj(dhat)-side per-entry vectors: v[t] = sum over the paired component
    of e_p(+t*n); the kernel multiplies them along the dual sweep."""
    t = np.arange(p)

    def vec(lo, hi):
        return np.array([additive_interval_sum(p, int(b), lo, hi) for b in t])

    return (
        vec(*interval.i11),
        vec(*interval.i21),
        vec(*interval.i12),
        vec(*interval.i22),
    )


@lru_cache(maxsize=32)
def _plancherel_weights_cached(p: int, interval: MatrixInterval) -> np.ndarray:
    return kernels.plancherel_weights(p, *_geometry_vectors(p, interval))


def box_char_sum(table: CharacterTable, irrep: IrrepLabel,
                 interval: MatrixInterval, method: str = "auto") -> complex:
    """Sum of the extended character over the integer matrices in the interval."""
    if method == "auto":
        method = "direct" if interval.cardinality() <= table.p**4 else "plancherel"
    if method == "direct":
        if interval.cardinality() > 10**8:
            raise ValueError("interval too large for the direct method; "
                             "use method='plancherel'")
        counts = interval_class_counts(table.p, interval)
        return complex(table.row(irrep) @ counts[1:].astype(np.float64))
    if method == "plancherel":
        return complex(box_char_sums_all(table, interval)[table.irrep_index(irrep)])
    raise ValueError(f"unknown method {method!r}")


def box_char_sums_all(table: CharacterTable, interval: MatrixInterval,
                      method: str = "plancherel") -> np.ndarray:
    """S(rho, I) for every irreducible at once (one shared sweep)."""
    p = table.p
    if method == "direct":
        counts = interval_class_counts(p, interval)[1:].astype(np.float64)
        out = np.empty(table.n, dtype=np.complex128)
        for i in range(table.n):
            out[i] = table.row(i) @ counts
        return out
    w = _plancherel_weights_cached(p, interval)
    w0, w_ss, w_nilp, w_classes = w[0], w[1:p], w[p], w[p + 1:]
    gv = g_vector(table)
    out = np.empty(table.n, dtype=np.complex128)
    for i in range(table.n):
        irrep = table.irreps[i]
        total = gv[i] * (table.row(i) @ w_classes)
        total += singular_trace_closed(table, irrep, "nilpotent") * w_nilp
        for a in range(1, p):
            ss = singular_trace_closed(table, irrep, "semisimple", a)
            if ss != 0:
                total += ss * w_ss[a - 1]
        if irrep == IrrepLabel(ONEDIM, (0,)):
            total += group_order(p) * w0
        out[i] = total / p**4
    return out


def plancherel_check(p: int, f, g) -> float:
    """Deviation |LHS - RHS| of the Plancherel identity
    p^{-4} sum_X f(X) conj(g(X)) = sum_B fhat(B) conj(ghat(B))
    for two functions given as length-p^4 value lists in row-major
    (x11, x12, x21, x22) order."""
    f = np.asarray(f, dtype=np.complex128)
    g = np.asarray(g, dtype=np.complex128)
    if f.shape != (p**4,) or g.shape != (p**4,):
        raise ValueError(f"value lists must have length p^4 = {p**4}")
    lhs = complex(f @ g.conj()) / p**4
    fhat = _matrix_dft(p, f)
    ghat = _matrix_dft(p, g)
    rhs = complex((fhat * ghat.conj()).sum())
    return abs(lhs - rhs)


def _matrix_dft(p: int, f: np.ndarray) -> np.ndarray:
    """fhat(B) = p^{-4} sum_X f(X) e_p(-tr(BX)), returned row-major over
    (b11, b12, b21, b22)."""
    t = np.arange(p)
    E = np.exp(-2j * np.pi * np.outer(t, t) / p)
    f4 = f.reshape(p, p, p, p)  # axes: x11, x12, x21, x22
    # pairings: b11<->x11, b12<->x21, b21<->x12, b22<->x22
    out = np.einsum("ax,by,cz,dw,xzyw->abcd", E, E, E, E, f4, optimize=True)
    return out.reshape(-1) / p**4


@dataclass(frozen=True)
class PvRow:
    p: int
    irrep: IrrepLabel
    dim: int
    x: int
    abs_sum: float
    ratio: float


def pv_ratio_denominator(p: int, dim: int) -> float:
    return dim * p * p * math.log(p) ** 4


def pv_scan(p: int, x_values, c: float | None = None, base: Mat2 | None = None,
            table: CharacterTable | None = None,
            assert_bound: bool = True) -> list[PvRow]:
    """Normalized box-sum ratios |S(rho, I)| / (dim * p^2 * log(p)^4) for all
    nontrivial irreducibles over the given box sizes.

    For centered height boxes the ratio is checked against 16 when p >= 11;
    for shifted boxes it is checked against ((c+3)/2)^4 whenever every
    component length fits the budget c*p. Violations raise VerificationError.
    """
    from .chartable import build_table

    table = table or build_table(p)
    rows: list[PvRow] = []
    trivial = table.irrep_index(IrrepLabel(ONEDIM, (0,)))
    for x in x_values:
        interval = MatrixInterval.height_box(x, base)
        sums = box_char_sums_all(table, interval)
        denom_base = p * p * math.log(p) ** 4
        if base is None:
            limit = 16.0 if p >= 11 else None
        else:
            budget = c if c is not None else math.ceil(interval.budget(p))
            within = max(interval.lengths()) <= budget * p
            limit = ((budget + 3) / 2) ** 4 if (p >= 11 and within) else None
        for i in range(table.n):
            if i == trivial:
                continue
            dim = int(table.dims[i])
            ratio = abs(sums[i]) / (dim * denom_base)
            rows.append(PvRow(p, table.irreps[i], dim, x, abs(sums[i]), ratio))
            if assert_bound and limit is not None and ratio > limit:
                raise VerificationError(
                    "pv-ratio",
                    f"p={p} x={x} {table.irreps[i]}: ratio {ratio:.3f} > {limit}",
                )
    return rows


def special_family_diagnostic(p: int, x_values,
                              table: CharacterTable | None = None) -> list[PvRow]:
    """Reported (never asserted) diagnostic for the cuspidal and nontrivially
    twisted Steinberg families: |S| / (x^2 p log p + p^2 log^4 p) over height
    boxes. The growth constant for these families is not pinned down, so the
    ratio is informational."""
    from .chartable import CUSPIDAL, STEINBERG, build_table

    table = table or build_table(p)
    logp = math.log(p)
    rows: list[PvRow] = []
    for x in x_values:
        sums = box_char_sums_all(table, MatrixInterval.height_box(x))
        denom = x * x * p * logp + p * p * logp**4
        for i, irrep in enumerate(table.irreps):
            if irrep.kind == CUSPIDAL or (
                irrep.kind == STEINBERG and irrep.params[0] != 0
            ):
                rows.append(
                    PvRow(p, irrep, int(table.dims[i]), x, abs(sums[i]),
                          abs(sums[i]) / denom)
                )
    return rows


def indicator_ft_l1(p: int, interval: MatrixInterval) -> float:
    """sum over B of |dhat(B)|, computed as a product of four scalar sums."""
    total = 1.0
    t = np.arange(p)
    for lo, hi in (interval.i11, interval.i21, interval.i12, interval.i22):
        vals = np.abs([additive_interval_sum(p, int(b), lo, hi) for b in t])
        total *= float(np.sum(vals))
    return total / p**4
