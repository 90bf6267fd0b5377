"""Irreducible characters of GL(2, F_p).

The p^2 - 1 irreducible representations come in four families, labelled by
exponents against the canonical generators of F_p^* (modulus p - 1) and
F_{p^2}^* (modulus p^2 - 1):

* ``onedim(k)``         dim 1,    chi_k composed with det
* ``steinberg(k)``      dim p,    twist of the Steinberg by chi_k
* ``principal(k, l)``   dim p+1,  k < l (the pair is unordered)
* ``cuspidal(k)``       dim p-1,  (p+1) does not divide k; k is the smaller
                                  of {k, k*p mod (p^2-1)}

Character values on the four class families are produced from the standard
closed forms; the values the closed forms do not pin down directly are
certified by orthogonality and by the induced-character oracle rather than
trusted (see ``CharacterTable._certify`` and ``induced_character``).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .arith import e_frac, is_prime, quad_unit_group, require_odd_prime, unit_group
from .errors import VerificationError
from .gl2 import (
    ELLIPTIC,
    ClassData,
    ClassLabel,
    Mat2,
    class_index_map,
    class_inventory,
    classify_conjugacy,
    elliptic_norm,
    group_order,
)

ONEDIM = "onedim"
STEINBERG = "steinberg"
PRINCIPAL = "principal"
CUSPIDAL = "cuspidal"


@dataclass(frozen=True)
class IrrepLabel:
    kind: str
    params: tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.kind}:" + ",".join(str(v) for v in self.params)

    def dim(self, p: int) -> int:
        return {ONEDIM: 1, STEINBERG: p, PRINCIPAL: p + 1, CUSPIDAL: p - 1}[self.kind]


def canonical_cuspidal_index(p: int, k: int) -> int:
    n = p * p - 1
    k %= n
    if k % (p + 1) == 0:
        raise ValueError(f"cuspidal index {k} is fixed by Frobenius")
    return min(k, k * p % n)


def make_irrep(p: int, kind: str, params: Iterable[int]) -> IrrepLabel:
    """Normalize parameters to the canonical label for this p."""
    params = tuple(int(v) for v in params)
    if kind == ONEDIM or kind == STEINBERG:
        (k,) = params
        return IrrepLabel(kind, (k % (p - 1),))
    if kind == PRINCIPAL:
        k, l = (v % (p - 1) for v in params)
        if k == l:
            raise ValueError("principal labels need distinct exponents")
        return IrrepLabel(PRINCIPAL, (min(k, l), max(k, l)))
    if kind == CUSPIDAL:
        (k,) = params
        return IrrepLabel(CUSPIDAL, (canonical_cuspidal_index(p, k),))
    raise ValueError(f"unknown irrep kind {kind!r}")


@lru_cache(maxsize=None)
def irrep_list(p: int) -> tuple[IrrepLabel, ...]:
    out = [IrrepLabel(ONEDIM, (k,)) for k in range(p - 1)]
    out += [IrrepLabel(STEINBERG, (k,)) for k in range(p - 1)]
    out += [
        IrrepLabel(PRINCIPAL, (k, l))
        for k in range(p - 1)
        for l in range(k + 1, p - 1)
    ]
    n = p * p - 1
    out += [
        IrrepLabel(CUSPIDAL, (k,))
        for k in range(1, n)
        if k % (p + 1) != 0 and k <= k * p % n
    ]
    assert len(out) == p * p - 1
    return tuple(out)


def unit_multiplicity(irrep: IrrepLabel) -> int:
    """Multiplicity of eigenvalue 1 in the semisimple part of the conjugacy
    class parametrizing the representation: 2 for the trivial representation
    and the Steinberg, 1 for principal(0, l), 0 otherwise."""
    if irrep.kind in (ONEDIM, STEINBERG):
        return 2 if irrep.params[0] == 0 else 0
    if irrep.kind == PRINCIPAL:
        return 1 if irrep.params[0] == 0 else 0
    return 0


class _ClassColumns:
    """Per-family class data laid out as arrays, in canonical class order."""

    def __init__(self, p: int):
        fp = unit_group(p)
        fp2 = quad_unit_group(p)
        self.p = p
        units = np.arange(1, p)
        self.cen_dlog = fp.dlog[units]
        spl = [(a, b) for a in range(1, p) for b in range(a + 1, p)]
        self.spl_dlog_a = fp.dlog[[a for a, _ in spl]]
        self.spl_dlog_b = fp.dlog[[b for _, b in spl]]
        ell = [(x, y) for x in range(p) for y in range(1, (p - 1) // 2 + 1)]
        self.ell_norm_dlog = fp.dlog[
            [elliptic_norm(p, ClassLabel(ELLIPTIC, xy)) for xy in ell]
        ]
        self.ell_dlog2 = fp2.dlog[[x * p + y for x, y in ell]]
        self.ell_dlog2_conj = fp2.dlog[[x * p + (p - y) for x, y in ell]]
        self.cen_dlog2 = fp2.dlog[[a * p for a in range(1, p)]]
        self.n_split = len(spl)
        self.n_ell = len(ell)


def _char_row(p: int, cols: _ClassColumns, irrep: IrrepLabel) -> np.ndarray:
    """Character values of one irreducible on every class, canonical order."""

    def w(k, dlogs):  # values of chi_k at units with the given dlogs
        return np.exp(2j * np.pi * ((k * dlogs) % (p - 1)) / (p - 1))

    def w2(k, dlogs):
        n = p * p - 1
        return np.exp(2j * np.pi * ((k * dlogs) % n) / n)

    if irrep.kind == ONEDIM:
        (k,) = irrep.params
        central = w(2 * k, cols.cen_dlog)
        nonss = central
        split = w(k, cols.spl_dlog_a + cols.spl_dlog_b)
        ell = w(k, cols.ell_norm_dlog)
    elif irrep.kind == STEINBERG:
        (k,) = irrep.params
        central = p * w(2 * k, cols.cen_dlog)
        nonss = np.zeros(p - 1, dtype=complex)
        split = w(k, cols.spl_dlog_a + cols.spl_dlog_b)
        ell = -w(k, cols.ell_norm_dlog)
    elif irrep.kind == PRINCIPAL:
        k, l = irrep.params
        central = (p + 1) * w(k + l, cols.cen_dlog)
        nonss = w(k + l, cols.cen_dlog)
        split = (
            w(k, cols.spl_dlog_a) * w(l, cols.spl_dlog_b)
            + w(k, cols.spl_dlog_b) * w(l, cols.spl_dlog_a)
        )
        ell = np.zeros(cols.n_ell, dtype=complex)
    else:
        (k,) = irrep.params
        central = (p - 1) * w2(k, cols.cen_dlog2)
        nonss = -w2(k, cols.cen_dlog2)
        split = np.zeros(cols.n_split, dtype=complex)
        ell = -(w2(k, cols.ell_dlog2) + w2(k, cols.ell_dlog2_conj))
    return np.concatenate([central, nonss, split, ell]).astype(np.complex128)


class CharacterTable:
    """Immutable character table of GL(2, F_p).

    ``row(irrep)`` gives the character on every conjugacy class in canonical
    order; the dense (irrep x class) grid is materialized lazily on first
    access of ``values`` (about 1.7 GB at p = 101, a few MB at desk scale).
    """

    def __init__(self, p: int, certify: bool | None = None):
        require_odd_prime(p)
        if p > 101:
            raise ValueError("supported range is 3 <= p <= 101")
        self.p = p
        self.classes: tuple[ClassData, ...] = class_inventory(p)
        self.irreps: tuple[IrrepLabel, ...] = irrep_list(p)
        self.sizes = np.array([cd.size for cd in self.classes], dtype=np.int64)
        self.orders = np.array([cd.order for cd in self.classes], dtype=np.int64)
        self.dims = np.array([r.dim(p) for r in self.irreps], dtype=np.int64)
        self.n = p * p - 1
        self._cols = _ClassColumns(p)
        self._irrep_index = {r: i for i, r in enumerate(self.irreps)}
        self._class_index = class_index_map(p)
        self._values: np.ndarray | None = None
        self._row_cache: dict[int, np.ndarray] = {}
        if certify is None:
            certify = p <= 19
        self._certify_cheap()
        if certify:
            self._certify_orthogonality()

    # -- access -----------------------------------------------------------

    @property
    def values(self) -> np.ndarray:
        if self._values is None:
            self._values = np.vstack([self.row(i) for i in range(self.n)])
        return self._values

    def irrep_index(self, irrep: IrrepLabel) -> int:
        return self._irrep_index[irrep]

    def class_index(self, label: ClassLabel) -> int:
        return self._class_index[label]

    def row(self, irrep: IrrepLabel | int) -> np.ndarray:
        i = irrep if isinstance(irrep, int) else self._irrep_index[irrep]
        if self._values is not None:
            return self._values[i]
        if i not in self._row_cache:
            if len(self._row_cache) > 4 * self.p:
                self._row_cache.clear()
            row = _char_row(self.p, self._cols, self.irreps[i])
            row.setflags(write=False)
            self._row_cache[i] = row
        return self._row_cache[i]

    def dim(self, irrep: IrrepLabel) -> int:
        return irrep.dim(self.p)

    def char_value(self, irrep: IrrepLabel, x) -> complex:
        """Extended character: 0 on singular matrices, table value otherwise."""
        if isinstance(x, ClassLabel):
            return complex(self.row(irrep)[self.class_index(x)])
        if isinstance(x, Mat2):
            m = x if x.p is not None else x.reduce(self.p)
            if m.det() == 0:
                return 0j
            return complex(self.row(irrep)[self.class_index(classify_conjugacy(m))])
        raise TypeError("expected a ClassLabel or Mat2")

    def class_eptr(self) -> np.ndarray:
        """|C| * e_p(tr C) per class; the weight vector behind g(rho)."""
        tr = np.array([cd.rep.trace() for cd in self.classes])
        return self.sizes * np.exp(2j * np.pi * tr / self.p)

    def primitive_class_mask(self) -> np.ndarray:
        kinds = np.array([cd.label.kind == ELLIPTIC for cd in self.classes])
        return kinds & (self.orders == self.p * self.p - 1)

    def kind_mask(self, kind: str) -> np.ndarray:
        return np.array([cd.label.kind == kind for cd in self.classes])

    # -- certification ----------------------------------------------------

    def _certify_cheap(self):
        if int((self.dims**2).sum()) != group_order(self.p):
            raise VerificationError("table-dimension-sum", f"p={self.p}")
        counts = {
            ONEDIM: self.p - 1,
            STEINBERG: self.p - 1,
            PRINCIPAL: (self.p - 1) * (self.p - 2) // 2,
            CUSPIDAL: (self.p * self.p - self.p) // 2,
        }
        for kind, expected in counts.items():
            got = sum(1 for r in self.irreps if r.kind == kind)
            if got != expected:
                raise VerificationError("table-family-count", f"{kind}: {got} != {expected}")

    def _certify_orthogonality(self, tol: float = 1e-8):
        v = self.values
        gram = (v * self.sizes) @ v.conj().T / group_order(self.p)
        dev = float(np.abs(gram - np.eye(self.n)).max())
        if dev > tol:
            raise VerificationError("table-row-orthogonality", f"deviation {dev:.2e}")

    def __repr__(self):
        return f"CharacterTable(p={self.p}, irreps={self.n}, classes={self.n})"


@lru_cache(maxsize=8)
def build_table(p: int, certify: bool | None = None) -> CharacterTable:
    """Build (and certify) the character table for a prime 3 <= p <= 101."""
    if not (3 <= p <= 101) or not is_prime(p):
        raise ValueError(f"p must be a prime in [3, 101], got {p}")
    return CharacterTable(p, certify=certify)


# -- induced-character oracle ----------------------------------------------


@lru_cache(maxsize=4)
def _group_elements(p: int):
    """Entry arrays of all invertible residue matrices (oracle scale only)."""
    if p > 31:
        raise ValueError("induced-character oracle is limited to p <= 31")
    r = np.arange(p, dtype=np.int64)
    a, b, c, d = np.meshgrid(r, r, r, r, indexing="ij")
    a, b, c, d = (v.ravel() for v in (a, b, c, d))
    det = (a * d - b * c) % p
    keep = det != 0
    a, b, c, d, det = (v[keep] for v in (a, b, c, d, det))
    det_inv = np.zeros(p, dtype=np.int64)
    for t in range(1, p):
        det_inv[t] = pow(t, p - 2, p)
    di = det_inv[det]
    return a, b, c, d, di


def induced_character(p: int, subgroup, target: ClassLabel) -> complex:
    """Value at ``target`` of the character induced from ``subgroup``:
    (1/|H|) * sum over x in G with x^{-1} g x in H of theta(x^{-1} g x).

    ``subgroup`` is ``("MU'", None)`` for the trivial character of the
    mirabolic-type subgroup {(1, *; 0, m)}, or ``("P'", (k, l))`` for the
    character chi_k (x) chi_l of the upper-triangular subgroup.
    """
    name, theta = subgroup
    g = next(cd.rep for cd in class_inventory(p) if cd.label == target)
    a, b, c, d, di = _group_elements(p)
    # y = x^{-1} g x, computed entrywise from the adjugate
    ga, gb, gc, gd = g.entries
    # t = g @ x
    ta = (ga * a + gb * c) % p
    tb = (ga * b + gb * d) % p
    tc = (gc * a + gd * c) % p
    td = (gc * b + gd * d) % p
    y11 = (d * di % p * ta - b * di % p * tc) % p
    y21 = (a * di % p * tc - c * di % p * ta) % p
    y22 = (a * di % p * td - c * di % p * tb) % p
    if name == "MU'":
        if theta not in (None, (0, 0)):
            raise ValueError("only the trivial character of MU' is supported")
        mask = (y21 == 0) & (y11 == 1)
        total = complex(np.count_nonzero(mask))
        h_order = p * (p - 1)
    elif name == "P'":
        k, l = theta
        mask = y21 == 0
        dlog = unit_group(p).dlog
        e = (k * dlog[y11[mask]] + l * dlog[y22[mask]]) % (p - 1)
        total = complex(np.exp(2j * np.pi * e / (p - 1)).sum())
        h_order = p * (p - 1) ** 2
    else:
        raise ValueError(f"unknown subgroup {name!r}")
    return total / h_order


def induced_character_row(p: int, subgroup) -> np.ndarray:
    """Induced character at every class, canonical order."""
    return np.array(
        [induced_character(p, subgroup, cd.label) for cd in class_inventory(p)]
    )


def decompose(table: CharacterTable, class_function: np.ndarray) -> np.ndarray:
    """Inner products with every irreducible character."""
    weighted = class_function * table.sizes
    return table.values.conj() @ weighted / group_order(table.p)


# -- explicit induced models -------------------------------------------------


class InducedModel:
    """Explicit (p+1)-dimensional model of the representation induced from the
    character chi_k (x) chi_l of the upper-triangular subgroup.

    The basis is indexed by the projective line: index 0 is the identity coset
    (the point at infinity), index 1 + u is the coset of x_u w (the affine
    point u). ``steinberg_model`` wraps the theta = (0, 0) permutation model
    restricted to the sum-zero subspace.
    """

    def __init__(self, p: int, theta: tuple[int, int], steinberg: bool = False):
        require_odd_prime(p)
        if steinberg and theta != (0, 0):
            raise ValueError("the Steinberg submodel sits inside theta=(0,0)")
        self.p = p
        self.theta = (theta[0] % (p - 1), theta[1] % (p - 1))
        self.steinberg = steinberg
        self.dimension = p if steinberg else p + 1
        self._dlog = unit_group(p).dlog
        self._inv = [0] + [pow(t, p - 2, p) for t in range(1, p)]

    def _theta_value(self, alpha: int, delta: int) -> complex:
        k, l = self.theta
        e = (k * int(self._dlog[alpha]) + l * int(self._dlog[delta])) % (self.p - 1)
        return e_frac(e, self.p - 1)

    def action(self, m: Mat2) -> tuple[np.ndarray, np.ndarray]:
        """Sparse action on the parent space: rho(m) e_j = phase[j] e_{tgt[j]}."""
        p = self.p
        if m.p != p:
            raise ValueError("modulus mismatch")
        if m.det() == 0:
            raise ValueError("not in GL(2)")
        tgt = np.empty(p + 1, dtype=np.int64)
        phase = np.empty(p + 1, dtype=np.complex128)
        reps = [(1, 0, 0, 1)] + [(u, 1, 1, 0) for u in range(p)]
        for j, (ra, rb, rc, rd) in enumerate(reps):
            ga = (m.a * ra + m.b * rc) % p
            gb = (m.a * rb + m.b * rd) % p
            gc = (m.c * ra + m.d * rc) % p
            gd = (m.c * rb + m.d * rd) % p
            if gc == 0:
                tgt[j] = 0
                phase[j] = self._theta_value(ga, gd)
            else:
                u = ga * self._inv[gc] % p
                tgt[j] = 1 + u
                # p' = (x_u w)^{-1} (g r) = (gc, gd; 0, gb - u*gd)
                phase[j] = self._theta_value(gc, (gb - u * gd) % p)
        return tgt, phase

    def matrix(self, m: Mat2) -> np.ndarray:
        """Dense matrix of the parent (p+1)-dimensional action."""
        tgt, phase = self.action(m)
        out = np.zeros((self.p + 1, self.p + 1), dtype=np.complex128)
        out[tgt, np.arange(self.p + 1)] = phase
        return out

    def character(self, m: Mat2) -> complex:
        tgt, phase = self.action(m)
        fixed = tgt == np.arange(self.p + 1)
        tr = complex(phase[fixed].sum())
        if self.steinberg:
            tr -= 1.0  # the trivial subrepresentation of the parent
        return tr

    def subgroup_elements(self, name: str):
        p = self.p
        if name == "MU'":
            return [
                Mat2(1, u, 0, m, p) for m in range(1, p) for u in range(p)
            ]
        if name == "P'":
            return [
                Mat2(a, b, 0, d, p)
                for a in range(1, p)
                for d in range(1, p)
                for b in range(p)
            ]
        raise ValueError(f"unknown subgroup {name!r}")


def induced_model(p: int, theta: tuple[int, int]) -> InducedModel:
    return InducedModel(p, theta)


def steinberg_model(p: int) -> InducedModel:
    return InducedModel(p, (0, 0), steinberg=True)


def projection_rank(model: InducedModel, subgroup: str,
                    tol: float = 1e-8) -> tuple[int, np.ndarray | None]:
    """Rank of the averaging projector of ``subgroup`` on the model, and the
    invariant vector when the rank is one.

    The projector Pr = |H|^{-1} sum rho(h) is accumulated sparsely; its trace
    is an exact multiplicity masked only by float noise, so the rank is the
    rounded trace (guard band 0.01). For the Steinberg submodel the parent
    projector is restricted to the sum-zero subspace.
    """
    if subgroup not in ("MU'", "P'"):
        raise ValueError(f"unknown subgroup {subgroup!r}")
    p = model.p
    n = p + 1
    elements = model.subgroup_elements(subgroup)
    pr = np.zeros((n, n), dtype=np.complex128)
    cols = np.arange(n)
    for h in elements:
        tgt, phase = model.action(h)
        np.add.at(pr, (tgt, cols), phase)
    pr /= len(elements)
    if float(np.abs(pr @ pr - pr).max()) > 1e-6:
        raise VerificationError("projector-idempotence", f"p={p} H={subgroup}")
    if model.steinberg:
        # restrict to the sum-zero subspace: Pr J = J for the permutation model
        pr = pr - np.full((n, n), 1.0 / n)
        trace = pr.trace()
    else:
        trace = pr.trace()
    rank_f = trace.real
    rank = int(round(rank_f))
    if abs(rank_f - rank) > 0.01 or abs(trace.imag) > 0.01:
        raise VerificationError("projector-rank-roundoff", f"trace={trace}")
    if rank != 1:
        return rank, None
    norms = np.linalg.norm(pr, axis=0)
    vec = pr[:, int(norms.argmax())].copy()
    vec /= vec[int(np.abs(vec).argmax())]
    return rank, vec


def expected_invariant_vector(model: InducedModel) -> np.ndarray:
    """delta_in in model coordinates: the basis vector at the identity coset,
    or delta_infinity - (1/p) * delta_affine for the Steinberg submodel."""
    n = model.p + 1
    if model.steinberg:
        v = np.full(n, -1.0 / model.p, dtype=np.complex128)
        v[0] = 1.0
        return v
    v = np.zeros(n, dtype=np.complex128)
    v[0] = 1.0
    return v


def vectors_parallel(u: np.ndarray, v: np.ndarray, tol: float = 1e-8) -> bool:
    """Equality case of Cauchy-Schwarz, up to tolerance."""
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    return abs(abs(np.vdot(u, v)) - nu * nv) <= tol * max(1.0, nu * nv)
