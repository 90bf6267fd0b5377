"""2x2 matrices over Z and F_p: conjugacy classification, class inventory,
Bruhat-cell factorization and element-set predicates.

Conjugacy classes of GL(2, F_p) come in four families with canonical labels:

* ``central(a)``        scalar matrix aI, a in F_p^*                (size 1)
* ``nonss(a)``          conjugate to [[a, 1], [0, a]]               (size p^2 - 1)
* ``split(a, b)``       distinct eigenvalues a < b in F_p^*         (size p^2 + p)
* ``elliptic(x, y)``    eigenvalues x +- tau'*y, 1 <= y <= (p-1)/2  (size p^2 - p)

The class list is ordered central, nonss, split, elliptic with parameters
ascending; this order fixes the class indices used by the compiled kernels
and by every table in the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .arith import (
    QuadExtElement,
    divisors,
    legendre_symbol,
    quad_ext_norm,
    quad_unit_group,
    require_odd_prime,
    smallest_nonresidue,
    totient,
    unit_group,
)
from .errors import NotInvertibleError

CENTRAL = "central"
NONSS = "nonss"
SPLIT = "split"
ELLIPTIC = "elliptic"

CELL_PU = "PU'"
CELL_W = "wP'"


@dataclass(frozen=True)
class Mat2:
    """2x2 matrix; residue mode when p is set, integral mode when p is None."""

    a: int
    b: int
    c: int
    d: int
    p: int | None = None

    def __post_init__(self):
        if self.p is not None:
            require_odd_prime(self.p)
        for name in "abcd":
            v = int(getattr(self, name))
            object.__setattr__(self, name, v % self.p if self.p is not None else v)

    @property
    def mode(self) -> str:
        return "integral" if self.p is None else "residue"

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def det(self) -> int:
        v = self.a * self.d - self.b * self.c
        return v % self.p if self.p is not None else v

    def trace(self) -> int:
        v = self.a + self.d
        return v % self.p if self.p is not None else v

    def height(self) -> int:
        if self.p is not None:
            raise ValueError("height is defined only in integral mode")
        return max(abs(v) for v in self.entries)

    def reduce(self, p: int) -> "Mat2":
        return Mat2(self.a, self.b, self.c, self.d, p)

    def __matmul__(self, other: "Mat2") -> "Mat2":
        if self.p != other.p:
            raise ValueError("mode/modulus mismatch")
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
            self.p,
        )

    def __neg__(self) -> "Mat2":
        return Mat2(-self.a, -self.b, -self.c, -self.d, self.p)

    def inverse(self) -> "Mat2":
        if self.p is None:
            raise ValueError("inverse supported in residue mode only")
        dt = self.det()
        if dt == 0:
            raise NotInvertibleError("not invertible")
        di = pow(dt, self.p - 2, self.p)
        return Mat2(self.d * di, -self.b * di, -self.c * di, self.a * di, self.p)

    def __pow__(self, n: int) -> "Mat2":
        if self.p is None:
            raise ValueError("powers supported in residue mode only")
        if n < 0:
            return self.inverse() ** (-n)
        result = identity(self.p)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def is_scalar(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d

    def is_identity(self) -> bool:
        return self.is_scalar() and self.a == 1

    def literal(self) -> str:
        return f"{self.a},{self.b};{self.c},{self.d}"

    @classmethod
    def parse(cls, text: str, p: int | None = None) -> "Mat2":
        """Parse the matrix literal format "a11,a12;a21,a22"."""
        rows = text.strip().split(";")
        if len(rows) != 2:
            raise ValueError(f"bad matrix literal {text!r}")
        try:
            (a, b), (c, d) = (tuple(int(v) for v in row.split(",")) for row in rows)
        except ValueError as exc:
            raise ValueError(f"bad matrix literal {text!r}") from exc
        return cls(a, b, c, d, p)


def identity(p: int) -> Mat2:
    return Mat2(1, 0, 0, 1, p)


@dataclass(frozen=True)
class ClassLabel:
    kind: str
    params: tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.kind}:" + ",".join(str(v) for v in self.params)

    @classmethod
    def parse(cls, text: str) -> "ClassLabel":
        kind, _, rest = text.partition(":")
        if kind not in (CENTRAL, NONSS, SPLIT, ELLIPTIC):
            raise ValueError(f"unknown class kind {kind!r}")
        params = tuple(int(v) for v in rest.split(",")) if rest else ()
        return cls(kind, params)


class ClassData(NamedTuple):
    label: ClassLabel
    rep: Mat2
    size: int
    order: int


def class_sizes(p: int) -> dict[str, int]:
    return {
        CENTRAL: 1,
        NONSS: p * p - 1,
        SPLIT: p * p + p,
        ELLIPTIC: p * p - p,
    }


def group_order(p: int) -> int:
    return (p * p - 1) * (p * p - p)


def class_representative(p: int, label: ClassLabel) -> Mat2:
    tau = smallest_nonresidue(p)
    if label.kind == CENTRAL:
        (a,) = label.params
        return Mat2(a, 0, 0, a, p)
    if label.kind == NONSS:
        (a,) = label.params
        return Mat2(a, 1, 0, a, p)
    if label.kind == SPLIT:
        a, b = label.params
        return Mat2(a, 0, 0, b, p)
    x, y = label.params
    return Mat2(x, tau * y % p, y, x, p)


def _mul_order(value: int, group_size: int, dlog: np.ndarray) -> int:
    j = int(dlog[value])
    return group_size // math.gcd(j, group_size) if j else 1


@lru_cache(maxsize=None)
def class_inventory(p: int) -> tuple[ClassData, ...]:
    """All p^2 - 1 conjugacy classes in canonical order, with representative,
    size and element order."""
    require_odd_prime(p)
    sizes = class_sizes(p)
    fp = unit_group(p)
    fp2 = quad_unit_group(p)
    out: list[ClassData] = []
    for a in range(1, p):
        lab = ClassLabel(CENTRAL, (a,))
        order = _mul_order(a, p - 1, fp.dlog)
        out.append(ClassData(lab, class_representative(p, lab), sizes[CENTRAL], order))
    for a in range(1, p):
        lab = ClassLabel(NONSS, (a,))
        order = p * _mul_order(a, p - 1, fp.dlog)
        out.append(ClassData(lab, class_representative(p, lab), sizes[NONSS], order))
    for a in range(1, p):
        for b in range(a + 1, p):
            lab = ClassLabel(SPLIT, (a, b))
            oa = _mul_order(a, p - 1, fp.dlog)
            ob = _mul_order(b, p - 1, fp.dlog)
            order = oa * ob // math.gcd(oa, ob)
            out.append(ClassData(lab, class_representative(p, lab), sizes[SPLIT], order))
    n = p * p - 1
    for x in range(p):
        for y in range(1, (p - 1) // 2 + 1):
            lab = ClassLabel(ELLIPTIC, (x, y))
            j = int(fp2.dlog[x * p + y])
            order = n // math.gcd(j, n) if j else 1
            out.append(ClassData(lab, class_representative(p, lab), sizes[ELLIPTIC], order))
    assert len(out) == p * p - 1
    assert sum(cd.size for cd in out) == group_order(p)
    return tuple(out)


@lru_cache(maxsize=None)
def class_index_map(p: int) -> dict[ClassLabel, int]:
    return {cd.label: i for i, cd in enumerate(class_inventory(p))}


@lru_cache(maxsize=None)
def _sqrt_table(p: int) -> np.ndarray:
    """sqrt_table[a] = canonical square root of a in [0, (p-1)/2], or -1."""
    t = np.full(p, -1, dtype=np.int64)
    for r in range((p - 1) // 2, -1, -1):
        t[r * r % p] = r
    return t


def classify_entries(p: int, a: int, b: int, c: int, d: int) -> ClassLabel:
    """Conjugacy label of an invertible residue matrix from its entries."""
    a, b, c, d = a % p, b % p, c % p, d % p
    det = (a * d - b * c) % p
    if det == 0:
        raise NotInvertibleError("not in GL(2)")
    tr = (a + d) % p
    disc = (tr * tr - 4 * det) % p
    inv2 = pow(2, p - 2, p)
    if disc == 0:
        if b == 0 and c == 0:
            return ClassLabel(CENTRAL, (a,))
        return ClassLabel(NONSS, (tr * inv2 % p,))
    if legendre_symbol(disc, p) == 1:
        s = int(_sqrt_table(p)[disc])
        r1 = (tr + s) * inv2 % p
        r2 = (tr - s) * inv2 % p
        return ClassLabel(SPLIT, (min(r1, r2), max(r1, r2)))
    tau = smallest_nonresidue(p)
    x = tr * inv2 % p
    ysq = disc * pow(4 * tau % p, p - 2, p) % p
    y = int(_sqrt_table(p)[ysq])
    return ClassLabel(ELLIPTIC, (x, y))


def classify_conjugacy(m: Mat2) -> ClassLabel:
    if m.p is None:
        raise ValueError("classification requires residue mode")
    return classify_entries(m.p, m.a, m.b, m.c, m.d)


@dataclass(frozen=True)
class BruhatFactorization:
    """Factorization X = x_u x_l x_m x_{u'} (cell PU') or X = w x_l x_m x_{u'}
    (cell wP'), with x_u lower unipotent, x_l = diag(l, 1), x_m = diag(1, m)
    and x_{u'} upper unipotent."""

    cell: str
    l: int
    m: int
    u_prime: int
    u: int | None = None

    def assemble(self, p: int) -> Mat2:
        x_l = Mat2(self.l, 0, 0, 1, p)
        x_m = Mat2(1, 0, 0, self.m, p)
        x_up = Mat2(1, self.u_prime, 0, 1, p)
        if self.cell == CELL_PU:
            x_u = Mat2(1, 0, self.u, 1, p)
            return x_u @ x_l @ x_m @ x_up
        w = Mat2(0, 1, 1, 0, p)
        return w @ x_l @ x_m @ x_up


def bruhat_factorize(m: Mat2) -> BruhatFactorization:
    """Split an invertible residue matrix into its Bruhat cell; PU' is exactly
    the cell with a11 != 0."""
    if m.p is None:
        raise ValueError("factorization requires residue mode")
    p = m.p
    det = m.det()
    if det == 0:
        raise NotInvertibleError("not in GL(2)")
    if m.a != 0:
        ai = pow(m.a, p - 2, p)
        fac = BruhatFactorization(
            cell=CELL_PU,
            l=m.a,
            m=det * ai % p,
            u_prime=m.b * ai % p,
            u=m.c * ai % p,
        )
    else:
        # X = (0, m; l, l*u') with l = a21, m = a12
        li = pow(m.c, p - 2, p)
        fac = BruhatFactorization(cell=CELL_W, l=m.c, m=m.b, u_prime=m.d * li % p)
    assert fac.assemble(p) == m
    return fac


def element_order(m: Mat2) -> int:
    """Multiplicative order by divisor testing against p*(p^2 - 1)."""
    if m.p is None:
        raise ValueError("order requires residue mode")
    p = m.p
    if m.det() == 0:
        raise NotInvertibleError("not invertible")
    one = identity(p)
    for d in divisors(p * (p * p - 1)):
        if m**d == one:
            return d
    raise AssertionError("order must divide p*(p^2-1)")


SET_KINDS = ("nonsingular", "elliptic", "primitive", "disc_zero")


def disc_zero_entries(p: int, a: int, b: int, c: int, d: int) -> bool:
    return ((a - d) ** 2 + 4 * b * c) % p == 0


def set_membership(m: Mat2, set_kind) -> bool:
    """Membership of a residue matrix in a named subset of M(2, F_p), or in a
    single conjugacy class when ``set_kind`` is a ClassLabel."""
    if m.p is None:
        raise ValueError("membership requires residue mode")
    p = m.p
    if isinstance(set_kind, ClassLabel):
        return m.det() != 0 and classify_conjugacy(m) == set_kind
    if set_kind == "nonsingular":
        return m.det() != 0
    if set_kind == "disc_zero":
        return disc_zero_entries(p, m.a, m.b, m.c, m.d)
    if set_kind == "elliptic":
        return m.det() != 0 and classify_conjugacy(m).kind == ELLIPTIC
    if set_kind == "primitive":
        if m.det() == 0 or classify_conjugacy(m).kind != ELLIPTIC:
            return False
        return element_order(m) == p * p - 1
    raise ValueError(f"unknown set kind {set_kind!r}")


def set_cardinality(p: int, set_kind) -> int:
    """Number of residue matrices in the subset."""
    require_odd_prime(p)
    if isinstance(set_kind, ClassLabel):
        return class_sizes(p)[set_kind.kind]
    if set_kind == "nonsingular":
        return group_order(p)
    if set_kind == "elliptic":
        return (p * p - p) ** 2 // 2
    if set_kind == "primitive":
        return (p * p - p) * totient(p * p - 1) // 2
    if set_kind == "disc_zero":
        return p**3
    raise ValueError(f"unknown set kind {set_kind!r}")


def elliptic_unit(p: int, label: ClassLabel) -> QuadExtElement:
    """The eigenvalue zeta = x + tau'*y attached to an elliptic label."""
    if label.kind != ELLIPTIC:
        raise ValueError("expected an elliptic label")
    x, y = label.params
    return QuadExtElement(x, y, smallest_nonresidue(p), p)


def elliptic_norm(p: int, label: ClassLabel) -> int:
    return quad_ext_norm(elliptic_unit(p, label)).value


class KernelCtx(NamedTuple):
    """Flat lookup tables consumed by the sweep kernels."""

    p: int
    n_classes: int
    inv2: int
    inv4tau: int
    inv: np.ndarray  # int64[p]
    legendre: np.ndarray  # int64[p]
    sqrtm: np.ndarray  # int64[p]
    central_idx: np.ndarray  # int32[p]
    nonss_idx: np.ndarray  # int32[p]
    split_idx: np.ndarray  # int32[p*p]
    ell_idx: np.ndarray  # int32[p*p]


@lru_cache(maxsize=None)
def kernel_ctx(p: int) -> KernelCtx:
    require_odd_prime(p)
    idx = class_index_map(p)
    tau = smallest_nonresidue(p)
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, p - 2, p)
    leg = np.array([legendre_symbol(a, p) for a in range(p)], dtype=np.int64)
    sqrtm = _sqrt_table(p)
    central_idx = np.full(p, -1, dtype=np.int32)
    nonss_idx = np.full(p, -1, dtype=np.int32)
    split_idx = np.full(p * p, -1, dtype=np.int32)
    ell_idx = np.full(p * p, -1, dtype=np.int32)
    for a in range(1, p):
        central_idx[a] = idx[ClassLabel(CENTRAL, (a,))]
        nonss_idx[a] = idx[ClassLabel(NONSS, (a,))]
    for a in range(1, p):
        for b in range(a + 1, p):
            j = idx[ClassLabel(SPLIT, (a, b))]
            split_idx[a * p + b] = j
            split_idx[b * p + a] = j
    for x in range(p):
        for y in range(1, (p - 1) // 2 + 1):
            ell_idx[x * p + y] = idx[ClassLabel(ELLIPTIC, (x, y))]
    return KernelCtx(
        p=p,
        n_classes=p * p - 1,
        inv2=pow(2, p - 2, p),
        inv4tau=pow(4 * tau % p, p - 2, p),
        inv=inv,
        legendre=leg,
        sqrtm=sqrtm,
        central_idx=central_idx,
        nonss_idx=nonss_idx,
        split_idx=split_idx,
        ell_idx=ell_idx,
    )
