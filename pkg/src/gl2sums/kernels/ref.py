"""NumPy reference implementation of the sweep kernels.

Each kernel makes one pass over the p^4 matrices (a, b, c, d), slicing on the
first entry so memory stays O(p^3). Counting kernels accumulate integer values
in float64 bincounts; every partial sum is an integer below 2^53, so the
results are exact.
"""

from __future__ import annotations

import numpy as np

BACKEND = "numpy"


def _classify(p, inv2, inv4tau, legendre, sqrtm, central_idx, nonss_idx,
              split_idx, ell_idx, a, b, c, d):
    """Class index of each matrix (broadcast over entries); -1 where singular."""
    det = (a * d - b * c) % p
    tr = (a + d) % p
    disc = (tr * tr - 4 * det) % p
    leg = legendre[disc]
    s = sqrtm[disc]
    r1 = ((tr + s) * inv2) % p
    r2 = ((tr - s) * inv2) % p
    halftr = (tr * inv2) % p
    y = sqrtm[(disc * inv4tau) % p]
    y = np.where(y < 0, 0, y)
    cls = np.where(leg == 1, split_idx[r1 * p + r2], ell_idx[halftr * p + y])
    scalar = (b == 0) & (c == 0)
    cls = np.where(disc == 0, np.where(scalar, central_idx[a], nonss_idx[halftr]), cls)
    return np.where(det == 0, -1, cls)


def _grids(p):
    r = np.arange(p, dtype=np.int64)
    return r[:, None, None], r[None, :, None], r[None, None, :]


def _bincount_complex(keys, weights, nkeys):
    re = np.bincount(keys, weights=weights.real, minlength=nkeys)
    im = np.bincount(keys, weights=weights.imag, minlength=nkeys)
    return re + 1j * im


def class_weights(p, n_classes, inv2, inv4tau, inv, legendre, sqrtm,
                  central_idx, nonss_idx, split_idx, ell_idx,
                  v11, v12, v21, v22, cell, a_lo, a_hi):
    out = np.zeros(n_classes, dtype=np.complex128)
    b, c, d = _grids(p)
    wslice = v12[:, None, None] * v21[None, :, None] * v22[None, None, :]
    for a in range(a_lo, a_hi):
        if (cell == 1 and a == 0) or (cell == 2 and a != 0):
            continue
        cls = _classify(p, inv2, inv4tau, legendre, sqrtm, central_idx,
                        nonss_idx, split_idx, ell_idx, a, b, c, d)
        keys = cls.ravel() + 1
        w = (v11[a] * wslice).ravel()
        out += _bincount_complex(keys, w, n_classes + 1)[1:]
    return out


def class_counts(p, n_classes, inv2, inv4tau, inv, legendre, sqrtm,
                 central_idx, nonss_idx, split_idx, ell_idx,
                 n11, n12, n21, n22, a_lo, a_hi):
    out = np.zeros(n_classes + 1, dtype=np.float64)
    b, c, d = _grids(p)
    f12, f21, f22 = (v.astype(np.float64) for v in (n12, n21, n22))
    wslice = f12[:, None, None] * f21[None, :, None] * f22[None, None, :]
    for a in range(a_lo, a_hi):
        cls = _classify(p, inv2, inv4tau, legendre, sqrtm, central_idx,
                        nonss_idx, split_idx, ell_idx, a, b, c, d)
        keys = cls.ravel() + 1
        out += float(n11[a]) * np.bincount(keys, weights=wslice.ravel(),
                                           minlength=n_classes + 1)
    return np.rint(out).astype(np.int64)


def plancherel_weights(p, n_classes, inv2, inv4tau, inv, legendre, sqrtm,
                       central_idx, nonss_idx, split_idx, ell_idx,
                       v11, v12, v21, v22):
    """Weights of the dual sweep over B, grouped by the value class of the
    Fourier-side trace: key 0 is B = 0, keys 1..p-1 are singular B with
    -tr(B) = key, key p is singular nilpotent type, key p+1+c groups the
    invertible B whose -B^{-1} lies in conjugacy class c."""
    nkeys = p + 1 + n_classes
    out = np.zeros(nkeys, dtype=np.complex128)
    b, c, d = _grids(p)
    wslice = v12[:, None, None] * v21[None, :, None] * v22[None, None, :]
    for a in range(p):
        det = (a * d - b * c) % p
        t = (a + d) % p
        sing_key = np.where(t == 0, p, p - t)
        di = inv[det]
        e11 = (p - d * di % p) % p
        e12 = (b * di) % p
        e21 = (c * di) % p
        e22 = (p - a * di % p) % p
        cls = _classify(p, inv2, inv4tau, legendre, sqrtm, central_idx,
                        nonss_idx, split_idx, ell_idx, e11, e12, e21, e22)
        keys = np.where(det == 0, sing_key, p + 1 + cls)
        if a == 0:
            keys[0, 0, 0] = 0
        out += _bincount_complex(keys.ravel(), (v11[a] * wslice).ravel(), nkeys)
    return out


def disc_zero_count(p, n_classes, inv2, inv4tau, inv, legendre, sqrtm,
                    central_idx, nonss_idx, split_idx, ell_idx,
                    n11, n12, n21, n22):
    total = 0.0
    b, c, d = _grids(p)
    f12, f21, f22 = (v.astype(np.float64) for v in (n12, n21, n22))
    wslice = f12[:, None, None] * f21[None, :, None] * f22[None, None, :]
    for a in range(p):
        disc = ((a - d) ** 2 + 4 * b * c) % p
        total += float(n11[a]) * wslice[disc == 0].sum()
    return int(round(total))


def legendre_disc_sum(p, n_classes, inv2, inv4tau, inv, legendre, sqrtm,
                      central_idx, nonss_idx, split_idx, ell_idx,
                      n11, n12, n21, n22):
    total = 0.0
    b, c, d = _grids(p)
    f12, f21, f22 = (v.astype(np.float64) for v in (n12, n21, n22))
    wslice = f12[:, None, None] * f21[None, :, None] * f22[None, None, :]
    for a in range(p):
        disc = ((a - d) ** 2 + 4 * b * c) % p
        total += float(n11[a]) * (wslice * legendre[disc]).sum()
    return int(round(total))


def build_class_index(p, n_classes, inv2, inv4tau, inv, legendre, sqrtm,
                      central_idx, nonss_idx, split_idx, ell_idx):
    """Full p^4 class-index table in row-major (a, b, c, d) order."""
    b, c, d = _grids(p)
    slices = [
        _classify(p, inv2, inv4tau, legendre, sqrtm, central_idx, nonss_idx,
                  split_idx, ell_idx, a, b, c, d).astype(np.int32)
        for a in range(p)
    ]
    return np.concatenate([s.ravel() for s in slices])
