"""Exact counts of bounded-height integer matrices with prescribed reductions,
main-term comparisons, the Fourier-coefficient pipeline for the primitive
indicator, and the shifted-generator counts in F_{p^2}.

All counts are exact integers obtained from one residue sweep: the number of
integers in [-x, x] in each residue class is a closed form, so a count over a
union of conjugacy classes is a dot product against the per-class interval
counts. Asymptotic main terms are comparison targets only; their unspecified
error constants are reported as normalized residuals, never asserted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .arith import (
    QuadExtElement,
    divisors,
    e_frac,
    legendre_symbol,
    mobius,
    quad_unit_group,
    smallest_nonresidue,
    totient,
)
from .boxes import MatrixInterval, box_char_sums_all, interval_class_counts, interval_residue_counts
from .chartable import CUSPIDAL, ONEDIM, PRINCIPAL, STEINBERG, CharacterTable, IrrepLabel, build_table
from .errors import VerificationError
from .gl2 import CENTRAL, ELLIPTIC, NONSS, ClassLabel, class_inventory, group_order
from . import kernels

MAX_EXACT_X = 4869  # (2x+1)^4 stays below 2^53: counts remain exact integers


@dataclass(frozen=True)
class CountReport:
    p: int
    x: int
    set_kind: str
    exact_count: int
    main_term: float
    residual: float
    normalized_residual: float
    method: str

    def payload(self) -> dict:
        return {
            "p": self.p,
            "x": self.x,
            "set": self.set_kind,
            "exact_count": self.exact_count,
            "main_term": self.main_term,
            "residual": self.residual,
            "normalized_residual": self.normalized_residual,
            "method": self.method,
        }


def nonsingular_density(p: int) -> float:
    """Proportion of residue matrices that are invertible."""
    return 1 - 1 / p - 1 / p**2 + 1 / p**3


def _check_x(x: int):
    if x < 0:
        raise ValueError("x must be >= 0")
    if x > MAX_EXACT_X:
        raise ValueError(f"x > {MAX_EXACT_X} would overflow the exact counters")


def class_mask(p: int, set_kind) -> np.ndarray:
    """Boolean mask over the canonical class list for a conjugation-invariant
    subset of GL(2, F_p)."""
    inv = class_inventory(p)
    if isinstance(set_kind, ClassLabel):
        return np.array([cd.label == set_kind for cd in inv])
    if set_kind == "nonsingular":
        return np.ones(len(inv), dtype=bool)
    if set_kind == "elliptic":
        return np.array([cd.label.kind == ELLIPTIC for cd in inv])
    if set_kind == "primitive":
        n = p * p - 1
        return np.array(
            [cd.label.kind == ELLIPTIC and cd.order == n for cd in inv]
        )
    raise ValueError(f"no class mask for set kind {set_kind!r}")


@lru_cache(maxsize=8)
def _membership_table(p: int, set_kind_key: str) -> np.ndarray:
    """Flat bool[p^4] membership table (oracle scale)."""
    if p > 31:
        raise ValueError("membership tables are limited to p <= 31")
    if set_kind_key == "disc_zero":
        r = np.arange(p, dtype=np.int64)
        a = r[:, None, None, None]
        b = r[None, :, None, None]
        c = r[None, None, :, None]
        d = r[None, None, None, :]
        return ((((a - d) ** 2 + 4 * b * c) % p) == 0).ravel()
    set_kind = (
        ClassLabel.parse(set_kind_key) if set_kind_key.count(":") else set_kind_key
    )
    mask = class_mask(p, set_kind)
    cls = kernels.build_class_index(p)
    out = np.zeros(p**4, dtype=bool)
    ok = cls >= 0
    out[ok] = mask[cls[ok]]
    return out


def _set_key(set_kind) -> str:
    return str(set_kind) if isinstance(set_kind, ClassLabel) else set_kind


def residue_box_count(p: int, x: int, subset) -> int:
    """Exact number of integer matrices of height <= x whose reduction lies in
    the subset: a named set kind, a ClassLabel, a flat bool[p^4] table, an
    explicit collection of residue matrices, or a predicate on Mat2."""
    _check_x(x)
    interval = MatrixInterval.height_box(x)
    if isinstance(subset, np.ndarray):
        return _table_box_count(p, interval, subset)
    if isinstance(subset, (set, frozenset, list)) or callable(subset):
        return _table_box_count(p, interval, _subset_table(p, subset))
    if subset == "disc_zero":
        n = interval_residue_counts(p, interval)
        return kernels.disc_zero_count(p, *n)
    counts = interval_class_counts(p, interval)[1:]
    return int(counts[class_mask(p, subset)].sum())


def _subset_table(p: int, subset) -> np.ndarray:
    """Materialize an explicit matrix collection or predicate as a flat
    membership table (enumeration scale only)."""
    from .gl2 import Mat2

    if p > 31:
        raise ValueError("explicit subsets are limited to p <= 31")
    out = np.zeros(p**4, dtype=bool)
    if callable(subset):
        i = 0
        for a in range(p):
            for b in range(p):
                for c in range(p):
                    for d in range(p):
                        out[i] = bool(subset(Mat2(a, b, c, d, p)))
                        i += 1
    else:
        for m in subset:
            if m.p != p:
                raise ValueError("modulus mismatch in subset")
            out[((m.a * p + m.b) * p + m.c) * p + m.d] = True
    return out


def _table_box_count(p: int, interval: MatrixInterval, table: np.ndarray) -> int:
    if table.shape != (p**4,):
        raise ValueError("membership table must be flat with length p^4")
    n11, n12, n21, n22 = (
        v.astype(np.float64) for v in interval_residue_counts(p, interval)
    )
    w = (
        n11[:, None, None, None]
        * n12[None, :, None, None]
        * n21[None, None, :, None]
        * n22[None, None, None, :]
    ).ravel()
    return int(round(float(w[table].sum())))


def naive_box_count(p: int, x: int, subset) -> int:
    """Enumeration oracle: walk all (2x+1)^4 integer matrices, reduce mod p,
    test membership. Exponentially slower than the residue path; used only to
    certify it."""
    _check_x(x)
    table = (
        subset if isinstance(subset, np.ndarray)
        else _membership_table(p, _set_key(subset))
    )
    rng = np.arange(-x, x + 1, dtype=np.int64)
    bm = (rng[:, None, None] % p) * p**2
    cm = (rng[None, :, None] % p) * p
    dm = rng[None, None, :] % p
    tail = (bm + cm + dm).ravel()
    total = 0
    for a in rng:
        flat = (a % p) * p**3 + tail
        total += int(table[flat].sum())
    return total


def fourier_box_count(p: int, x: int, set_kind) -> int:
    """Third counting route: expand the set indicator over the irreducible
    characters and sum the box character sums. Only conjugation-invariant
    subsets of the group qualify (disc_zero has a singular part that the
    extended characters cannot see)."""
    _check_x(x)
    if set_kind == "disc_zero":
        raise ValueError("disc_zero is not a union of conjugacy classes")
    table = build_table(p)
    mask = class_mask(p, set_kind)
    weights = np.where(mask, table.sizes, 0)
    coeffs = table.values.conj() @ weights / group_order(p)
    sums = box_char_sums_all(table, MatrixInterval.height_box(x), method="direct")
    total = complex(coeffs @ sums)
    if abs(total.imag) > 1e-6 or abs(total.real - round(total.real)) > 1e-6:
        raise VerificationError("fourier-count-integrality", f"p={p} x={x} {set_kind}")
    return int(round(total.real))


def _main_term_and_envelope(p: int, x: int, set_kind) -> tuple[float, float]:
    gamma = nonsingular_density(p)
    logp = math.log(p)
    if isinstance(set_kind, ClassLabel):
        size = next(cd.size for cd in class_inventory(p) if cd.label == set_kind)
        return 16 * size * gamma / group_order(p) * x**4, float(x**3)
    if set_kind == "nonsingular":
        return 16 * gamma * x**4, float(x**3)
    if set_kind == "disc_zero":
        return 16 * x**4 / p, float(x**3)
    if set_kind == "elliptic":
        return 8 * (1 - 2 / p + 1 / p**2) * x**4, x**3 * math.sqrt(p) * logp
    if set_kind == "primitive":
        phi = totient(p * p - 1)
        main = 8 * phi / (p * p - 1) * (1 - 2 / p + 1 / p**2) * x**4
        env = x**3 * math.sqrt(p) * logp + x**2 * p * logp + p**2
        return main, env
    raise ValueError(f"unknown set kind {set_kind!r}")


def count_with_main_term(p: int, x: int, set_kind,
                         method: str = "residue_count") -> CountReport:
    """Exact count with the asymptotic main term and the residual normalized
    by the error envelope of the matching growth statement."""
    if method == "residue_count":
        exact = residue_box_count(p, x, set_kind)
    elif method == "enumeration":
        exact = naive_box_count(p, x, set_kind)
    elif method == "fourier":
        exact = fourier_box_count(p, x, set_kind)
    else:
        raise ValueError(f"unknown method {method!r}")
    main, env = _main_term_and_envelope(p, x, set_kind)
    residual = exact - main
    return CountReport(
        p=p,
        x=x,
        set_kind=_set_key(set_kind),
        exact_count=exact,
        main_term=main,
        residual=residual,
        normalized_residual=residual / env if env else float("inf"),
        method=method,
    )


# -- Fourier coefficients of the primitive indicator -------------------------


def _mobius_divisor_sum(n: int, order: int) -> Fraction:
    """sum of mu(d)/d over divisors d of n that order divides."""
    total = Fraction(0)
    for d in divisors(n):
        if d % order == 0:
            total += Fraction(mobius(d), d)
    return total


def fourier_coeff(p: int, irrep: IrrepLabel) -> float:
    """Closed-form coefficient of the irreducible in the expansion of the
    primitive-set indicator (exact rational, returned as float)."""
    n = p * p - 1
    if irrep.kind == PRINCIPAL:
        return 0.0
    if irrep.kind in (ONEDIM, STEINBERG):
        k = irrep.params[0]
        order = (p - 1) // math.gcd(k, p - 1)
        value = _mobius_divisor_sum(n, order) / 2
        return float(value) if irrep.kind == ONEDIM else float(-value)
    k = irrep.params[0]
    order = n // math.gcd(k, n)
    return float(-_mobius_divisor_sum(n, order))


def fourier_coeff_oracle(table: CharacterTable, irrep: IrrepLabel) -> complex:
    """(p^2 - 1)^{-1} * sum over primitive classes of conj(char value)."""
    mask = table.primitive_class_mask()
    return complex(table.row(irrep)[mask].conj().sum()) / (table.p**2 - 1)


def fourier_coeff_vector(table: CharacterTable) -> np.ndarray:
    return np.array([fourier_coeff(table.p, r) for r in table.irreps])


def coeff_sum_report(p: int) -> tuple[float, float, float]:
    """Per-family sums of |coefficient|; each is checked against the divisor
    count of p^2 - 1."""
    table = build_table(p)
    sums = {ONEDIM: 0.0, STEINBERG: 0.0, CUSPIDAL: 0.0}
    for irrep in table.irreps:
        if irrep.kind in sums:
            sums[irrep.kind] += abs(fourier_coeff(p, irrep))
    tau = len(divisors(p * p - 1))
    for kind, value in sums.items():
        if value > tau + 1e-9:
            raise VerificationError(
                "coefficient-family-sum", f"{kind}: {value} > tau = {tau}"
            )
    return sums[ONEDIM], sums[STEINBERG], sums[CUSPIDAL]


def generator_indicator(m: int, n: int) -> int:
    """Mobius-character double sum recognizing residues coprime to m; equals
    [gcd(n, m) == 1]."""
    if m < 1:
        raise ValueError("m must be >= 1")
    total = 0.0
    for d in divisors(m):
        inner = 0.0
        for t in range(d):
            inner += e_frac(t * n, d).real
        total += mobius(d) / d * inner
    return int(round(total))


def fourier_expansion_residual(p: int, x: int) -> float:
    """|exact primitive count - sum over irreducibles of c_rho * S(rho, box)|;
    must vanish to 1e-4 (the expansion is an exact identity)."""
    table = build_table(p)
    exact = residue_box_count(p, x, "primitive")
    interval = MatrixInterval.height_box(x)
    sums = box_char_sums_all(table, interval, method="direct")
    total = complex(fourier_coeff_vector(table) @ sums)
    residual = abs(exact - total)
    if residual > 1e-4:
        raise VerificationError(
            "fourier-expansion", f"p={p} x={x}: residual {residual:.2e}"
        )
    return residual


def class_type_identity_check(p: int, x: int) -> float:
    """Exact identity between the trivial-minus-Steinberg box sum and its
    class-type decomposition: sum (chi_1 - chi_St) over the box equals
    2*S(elliptic) + S(nonss) + (1 - p)*S(central)."""
    table = build_table(p)
    counts = interval_class_counts(p, MatrixInterval.height_box(x))[1:]
    lhs_row = table.row(IrrepLabel(ONEDIM, (0,))) - table.row(IrrepLabel(STEINBERG, (0,)))
    lhs = complex(lhs_row @ counts.astype(np.float64))
    elliptic = int(counts[table.kind_mask(ELLIPTIC)].sum())
    nonss = int(counts[table.kind_mask(NONSS)].sum())
    central = int(counts[table.kind_mask(CENTRAL)].sum())
    rhs = 2 * elliptic + nonss + (1 - p) * central
    return abs(lhs - rhs)


class DiscIdentity(NamedTuple):
    half_sum: float  # S = ((2x+1)^4 - S') / 2
    legendre_sum: int  # S'
    elliptic_count: int
    disc_zero_count: int
    residual: int  # exact integer defect of 2S = 2*elliptic + disc_zero


def elliptic_disc_identity(p: int, x: int) -> DiscIdentity:
    """The exact square-count identity behind the elliptic growth estimate:
    (2x+1)^4 - S' = 2*S(elliptic, x) + S(disc_zero, x) with S' the Legendre
    sum of the characteristic discriminant over the box."""
    _check_x(x)
    n = interval_residue_counts(p, MatrixInterval.height_box(x))
    s_prime = kernels.legendre_disc_sum(p, *n)
    total = (2 * x + 1) ** 4
    elliptic = residue_box_count(p, x, "elliptic")
    disc0 = residue_box_count(p, x, "disc_zero")
    residual = (total - s_prime) - (2 * elliptic + disc0)
    return DiscIdentity((total - s_prime) / 2, s_prime, elliptic, disc0, residual)


# -- classical interval character sums ---------------------------------------


@lru_cache(maxsize=None)
def _legendre_prefix(p: int) -> np.ndarray:
    vals = np.array([legendre_symbol(a, p) for a in range(p)], dtype=np.int64)
    return np.concatenate([[0], np.cumsum(vals)])


def legendre_interval_sum(p: int, start: int, length: int) -> complex:
    """Sum of the Legendre character over [start, start + length); the
    root-p log-p bound is checked on every call."""
    if length < 1:
        raise ValueError("length must be >= 1")
    prefix = _legendre_prefix(p)
    s0 = start % p
    full, r = divmod(length, p)
    end = s0 + r
    if end <= p:
        total = prefix[end] - prefix[s0]
    else:
        total = (prefix[p] - prefix[s0]) + prefix[end - p]
    value = float(total)
    bound = math.sqrt(p) * math.log(p)
    if abs(value) > bound + 1e-9:
        raise VerificationError(
            "legendre-interval-bound", f"p={p} start={start} len={length}"
        )
    return complex(value)


# -- shifted generators in F_{p^2} -------------------------------------------


def _theta_pair(p: int, theta) -> tuple[int, int]:
    if isinstance(theta, QuadExtElement):
        x, y = theta.x, theta.y
    else:
        x, y = (int(v) % p for v in theta)
    if y % p == 0:
        raise ValueError("theta generates a proper subfield")
    return x % p, y % p


def ps_shifted_generator_count(p: int, theta, x: int) -> CountReport:
    """#{0 <= m <= x : theta + m generates F_{p^2}^*} with the density main
    term phi(p^2-1)/(p^2-1) * (x+1)."""
    tx, ty = _theta_pair(p, theta)
    fp2 = quad_unit_group(p)
    n = p * p - 1
    count = 0
    for m in range(x + 1):
        j = int(fp2.dlog[((tx + m) % p) * p + ty])
        if math.gcd(j, n) == 1:
            count += 1
    main = totient(n) / n * (x + 1)
    env = math.sqrt(p) * math.log(p)
    residual = count - main
    return CountReport(
        p=p,
        x=x,
        set_kind="shifted-generators",
        exact_count=count,
        main_term=main,
        residual=residual,
        normalized_residual=residual / env,
        method="enumeration",
    )


def ps_generator_count_oracle(p: int, theta, x: int) -> int:
    """Same count by raw order testing (divisor-by-divisor exponentiation)."""
    tx, ty = _theta_pair(p, theta)
    tau = smallest_nonresidue(p)
    n = p * p - 1
    divs = divisors(n)
    one = QuadExtElement(1, 0, tau, p)
    count = 0
    for m in range(x + 1):
        z = QuadExtElement(tx + m, ty, tau, p)
        order = next(d for d in divs if z**d == one)
        if order == n:
            count += 1
    return count


def ps_char_sum_scan(p: int, x: int, theta=None) -> float:
    """Largest |sum over 0 <= m <= x' of chi(theta + m)| over all nontrivial
    characters chi of F_{p^2}^*, all prefixes x' <= x, and (when theta is
    None) all theta outside F_p. Checked against 2*sqrt(p)*log(p)."""
    fp2 = quad_unit_group(p)
    n = p * p - 1
    roots = np.exp(2j * np.pi * np.arange(n) / n)
    ks = np.arange(1, n, dtype=np.int64)
    thetas = (
        [_theta_pair(p, theta)]
        if theta is not None
        else [(tx, ty) for tx in range(p) for ty in range(1, p)]
    )
    worst = 0.0
    for tx, ty in thetas:
        flat = ((tx + np.arange(x + 1)) % p) * p + ty
        dlogs = fp2.dlog[flat]
        phases = roots[(ks[:, None] * dlogs[None, :]) % n]
        partial = np.cumsum(phases, axis=1)
        worst = max(worst, float(np.abs(partial).max()))
    bound = 2 * math.sqrt(p) * math.log(p)
    if worst > bound + 1e-9:
        raise VerificationError("shifted-character-bound", f"p={p} max={worst:.3f}")
    return worst


def partition_primitive_count(p: int, x: int) -> int:
    """Primitive count assembled family-by-family over the partition of the
    box by A ~ A + nI; valid (and enforced) only for x < p."""
    if x >= p:
        raise ValueError("the partition argument requires x < p")
    _check_x(x)
    table = _membership_table(p, "primitive") if p <= 31 else None
    if table is None:
        raise ValueError("partition count is limited to p <= 31")
    rng = np.arange(-x, x + 1, dtype=np.int64)
    total = 0
    for k in range(-2 * x, 2 * x + 1):  # k = a - d labels the family diagonal
        a_lo, a_hi = max(-x, k - x), min(x, k + x)
        if a_lo > a_hi:
            continue
        a = np.arange(a_lo, a_hi + 1, dtype=np.int64)
        flat = (
            (a[None, None, :] % p) * p**3
            + (rng[:, None, None] % p) * p**2
            + (rng[None, :, None] % p) * p
            + ((a[None, None, :] - k) % p)
        )
        total += int(table[flat.ravel()].sum())
    return total
