# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementation of the p^4 sweep kernels (see ref.py for the
reference semantics)."""

import numpy as np

BACKEND = "cython"


cdef inline int _classify_one(int p, int inv2, int inv4tau,
                              const long long[::1] legendre,
                              const long long[::1] sqrtm,
                              const int[::1] central_idx,
                              const int[::1] nonss_idx,
                              const int[::1] split_idx,
                              const int[::1] ell_idx,
                              int a, int b, int c, int d) noexcept nogil:
    cdef int det, tr, disc, s, m1, m2, r1, r2, halftr, y
    det = (a * d - b * c) % p
    if det < 0:
        det += p
    if det == 0:
        return -1
    tr = a + d
    if tr >= p:
        tr -= p
    disc = (tr * tr - 4 * det) % p
    if disc < 0:
        disc += p
    if disc == 0:
        if b == 0 and c == 0:
            return central_idx[a]
        return nonss_idx[(tr * inv2) % p]
    if legendre[disc] == 1:
        s = <int> sqrtm[disc]
        m1 = tr + s
        if m1 >= p:
            m1 -= p
        m2 = tr - s
        if m2 < 0:
            m2 += p
        r1 = (m1 * inv2) % p
        r2 = (m2 * inv2) % p
        return split_idx[r1 * p + r2]
    halftr = (tr * inv2) % p
    y = <int> sqrtm[(disc * inv4tau) % p]
    return ell_idx[halftr * p + y]


def class_weights(int p, int n_classes, int inv2, int inv4tau,
                  long long[::1] inv, long long[::1] legendre,
                  long long[::1] sqrtm, int[::1] central_idx,
                  int[::1] nonss_idx, int[::1] split_idx, int[::1] ell_idx,
                  double complex[::1] v11, double complex[::1] v12,
                  double complex[::1] v21, double complex[::1] v22,
                  int cell, int a_lo, int a_hi):
    out = np.zeros(n_classes, dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef int a, b, c, d, cls, bc
    cdef double complex wa, wab, wabc
    with nogil:
        for a in range(a_lo, a_hi):
            if (cell == 1 and a == 0) or (cell == 2 and a != 0):
                continue
            wa = v11[a]
            for b in range(p):
                wab = wa * v12[b]
                for c in range(p):
                    wabc = wab * v21[c]
                    bc = (b * c) % p
                    for d in range(p):
                        cls = _classify_one(p, inv2, inv4tau, legendre, sqrtm,
                                            central_idx, nonss_idx, split_idx,
                                            ell_idx, a, b, c, d)
                        if cls >= 0:
                            o[cls] = o[cls] + wabc * v22[d]
    return out


def class_counts(int p, int n_classes, int inv2, int inv4tau,
                 long long[::1] inv, long long[::1] legendre,
                 long long[::1] sqrtm, int[::1] central_idx,
                 int[::1] nonss_idx, int[::1] split_idx, int[::1] ell_idx,
                 long long[::1] n11, long long[::1] n12,
                 long long[::1] n21, long long[::1] n22,
                 int a_lo, int a_hi):
    out = np.zeros(n_classes + 1, dtype=np.int64)
    cdef long long[::1] o = out
    cdef int a, b, c, d, cls
    cdef long long wa, wab, wabc
    with nogil:
        for a in range(a_lo, a_hi):
            wa = n11[a]
            if wa == 0:
                continue
            for b in range(p):
                wab = wa * n12[b]
                for c in range(p):
                    wabc = wab * n21[c]
                    for d in range(p):
                        cls = _classify_one(p, inv2, inv4tau, legendre, sqrtm,
                                            central_idx, nonss_idx, split_idx,
                                            ell_idx, a, b, c, d)
                        o[cls + 1] = o[cls + 1] + wabc * n22[d]
    return out


def plancherel_weights(int p, int n_classes, int inv2, int inv4tau,
                       long long[::1] inv, long long[::1] legendre,
                       long long[::1] sqrtm, int[::1] central_idx,
                       int[::1] nonss_idx, int[::1] split_idx,
                       int[::1] ell_idx,
                       double complex[::1] v11, double complex[::1] v12,
                       double complex[::1] v21, double complex[::1] v22):
    cdef int nkeys = p + 1 + n_classes
    out = np.zeros(nkeys, dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef int a, b, c, d, det, t, di, e11, e12, e21, e22, cls, key
    cdef double complex wa, wab, wabc
    with nogil:
        for a in range(p):
            wa = v11[a]
            for b in range(p):
                wab = wa * v12[b]
                for c in range(p):
                    wabc = wab * v21[c]
                    for d in range(p):
                        det = (a * d - b * c) % p
                        if det < 0:
                            det += p
                        if det == 0:
                            if a == 0 and b == 0 and c == 0 and d == 0:
                                key = 0
                            else:
                                t = a + d
                                if t >= p:
                                    t -= p
                                key = p if t == 0 else p - t
                        else:
                            di = <int> inv[det]
                            e11 = (p - (d * di) % p) % p
                            e12 = (b * di) % p
                            e21 = (c * di) % p
                            e22 = (p - (a * di) % p) % p
                            cls = _classify_one(p, inv2, inv4tau, legendre,
                                                sqrtm, central_idx, nonss_idx,
                                                split_idx, ell_idx,
                                                e11, e12, e21, e22)
                            key = p + 1 + cls
                        o[key] = o[key] + wabc * v22[d]
    return out


def disc_zero_count(int p, int n_classes, int inv2, int inv4tau,
                    long long[::1] inv, long long[::1] legendre,
                    long long[::1] sqrtm, int[::1] central_idx,
                    int[::1] nonss_idx, int[::1] split_idx, int[::1] ell_idx,
                    long long[::1] n11, long long[::1] n12,
                    long long[::1] n21, long long[::1] n22):
    cdef long long total = 0
    cdef int a, b, c, d, disc
    cdef long long wa, wab, wabc
    with nogil:
        for a in range(p):
            wa = n11[a]
            for b in range(p):
                wab = wa * n12[b]
                for c in range(p):
                    wabc = wab * n21[c]
                    for d in range(p):
                        disc = ((a - d) * (a - d) + 4 * b * c) % p
                        if disc == 0:
                            total += wabc * n22[d]
    return int(total)


def legendre_disc_sum(int p, int n_classes, int inv2, int inv4tau,
                      long long[::1] inv, long long[::1] legendre,
                      long long[::1] sqrtm, int[::1] central_idx,
                      int[::1] nonss_idx, int[::1] split_idx, int[::1] ell_idx,
                      long long[::1] n11, long long[::1] n12,
                      long long[::1] n21, long long[::1] n22):
    cdef long long total = 0
    cdef int a, b, c, d, disc
    cdef long long wa, wab, wabc
    with nogil:
        for a in range(p):
            wa = n11[a]
            for b in range(p):
                wab = wa * n12[b]
                for c in range(p):
                    wabc = wab * n21[c]
                    for d in range(p):
                        disc = ((a - d) * (a - d) + 4 * b * c) % p
                        total += legendre[disc] * wabc * n22[d]
    return int(total)
