# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernels; see ``_pykernels`` for the reference versions."""

import numpy as np
cimport numpy as cnp

ctypedef long long i64


cdef inline i64 md(i64 x, i64 M) noexcept nogil:
    x = x % M
    return x + M if x < 0 else x


cdef inline void qmul4(i64 a1, i64 b1, i64 c1, i64 d1,
                       i64 a2, i64 b2, i64 c2, i64 d2,
                       i64 p, i64 e, i64* out) noexcept nogil:
    # unreduced; callers reduce once per accumulated sum
    out[0] = a1 * a2 + e * b1 * b2 + p * (c1 * c2 - e * d1 * d2)
    out[1] = a1 * b2 + b1 * a2 + p * (c1 * d2 - d1 * c2)
    out[2] = c1 * a2 + e * d1 * b2 + a1 * c2 - e * b1 * d2
    out[3] = c1 * b2 + d1 * a2 + a1 * d2 - b1 * c2


def pair_hist(X, Y, A, gx, gy, int ngx, int ngy, long long p, long long e,
              int level, int koff, bint check_inv):
    cdef i64 M = p ** level
    cdef int j2 = koff // 2
    cdef int odd = koff % 2
    cdef i64 mu = p ** (j2 + odd)
    cdef i64 mz = p ** j2
    cdef i64 ncodes = p ** (2 * koff)
    cdef cnp.int64_t[:, :, ::1] Xv = np.ascontiguousarray(X, dtype=np.int64)
    cdef cnp.int64_t[:, :, ::1] Yv = np.ascontiguousarray(Y, dtype=np.int64)
    cdef cnp.int64_t[:, :, ::1] Av = np.ascontiguousarray(A, dtype=np.int64)
    cdef cnp.int64_t[::1] gxv = np.ascontiguousarray(gx, dtype=np.int64)
    cdef cnp.int64_t[::1] gyv = np.ascontiguousarray(gy, dtype=np.int64)
    cdef Py_ssize_t n1 = Xv.shape[0], n2 = Yv.shape[0], m = Av.shape[0]
    hist_arr = np.zeros((ngx, ngy, ncodes), dtype=np.int64)
    cdef cnp.int64_t[:, :, ::1] hist = hist_arr
    # AY[j, i, :] = sum_k A[i, k] y_j[k]
    ay_arr = np.zeros((n2, m, 4), dtype=np.int64)
    cdef cnp.int64_t[:, :, ::1] AY = ay_arr
    cdef i64 t[4]
    cdef i64 acc[4]
    cdef Py_ssize_t ix, iy, i, k, r
    cdef i64 code, da, db
    # invertibility mod P depends only on the residues of x and y mod p
    cdef Py_ssize_t R4 = p ** 4 if check_inv else 1
    ry_arr = np.zeros(n2, dtype=np.int64)
    cdef cnp.int64_t[::1] ry = ry_arr
    inv_arr = np.ones((R4, R4), dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] inv = inv_arr
    cdef i64 rx = 0
    cdef i64 u0a, u0b, u1a, u1b, v0a, v0b, v1a, v1b
    cdef Py_ssize_t s1, s2
    if check_inv:
        for iy in range(n2):
            ry[iy] = ((md(Yv[iy, 0, 0], p) * p + md(Yv[iy, 0, 1], p)) * p
                      + md(Yv[iy, 1, 0], p)) * p + md(Yv[iy, 1, 1], p)
        for s1 in range(R4):
            u0a, u0b, u1a, u1b = s1 // (p * p * p), (s1 // (p * p)) % p, (s1 // p) % p, s1 % p
            for s2 in range(R4):
                v0a, v0b, v1a, v1b = s2 // (p * p * p), (s2 // (p * p)) % p, (s2 // p) % p, s2 % p
                da = md(u0a * v1a + e * u0b * v1b - v0a * u1a - e * v0b * u1b, p)
                db = md(u0a * v1b + u0b * v1a - v0a * u1b - v0b * u1a, p)
                inv[s1, s2] = 0 if (da == 0 and db == 0) else 1
    # star(x) for the current x, and residue tables: mu and mz divide M
    xs_arr = np.zeros((m, 4), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] XS = xs_arr
    tmu_arr = np.arange(M, dtype=np.int64) % mu
    tmz_arr = np.arange(M, dtype=np.int64) % mz
    cdef cnp.int64_t[::1] tmu = tmu_arr
    cdef cnp.int64_t[::1] tmz = tmz_arr
    # |acc| < bias, a multiple of M; 32-bit remainders are much cheaper when it fits
    cdef i64 bias = M * (2 * m * (1 + e + p + p * e) * M + 1)
    cdef bint small = 2 * bias < 2**31
    cdef unsigned int uM = <unsigned int>M
    cdef i64 ua, ub, uc, ud
    with nogil:
        for iy in range(n2):
            for i in range(m):
                for k in range(m):
                    if Av[i, k, 0] == 0 and Av[i, k, 1] == 0 and Av[i, k, 2] == 0 and Av[i, k, 3] == 0:
                        continue
                    qmul4(Av[i, k, 0], Av[i, k, 1], Av[i, k, 2], Av[i, k, 3],
                          Yv[iy, k, 0], Yv[iy, k, 1], Yv[iy, k, 2], Yv[iy, k, 3], p, e, t)
                    for r in range(4):
                        AY[iy, i, r] = md(AY[iy, i, r] + t[r], M)
        for ix in range(n1):
            for i in range(m):
                XS[i, 0] = Xv[ix, i, 0]
                XS[i, 1] = -Xv[ix, i, 1]
                XS[i, 2] = -Xv[ix, i, 2]
                XS[i, 3] = -Xv[ix, i, 3]
            if check_inv:
                rx = ((md(Xv[ix, 0, 0], p) * p + md(Xv[ix, 0, 1], p)) * p
                      + md(Xv[ix, 1, 0], p)) * p + md(Xv[ix, 1, 1], p)
            for iy in range(n2):
                if check_inv and not inv[rx, ry[iy]]:
                    continue
                acc[0] = 0
                acc[1] = 0
                acc[2] = 0
                acc[3] = 0
                for i in range(m):
                    qmul4(XS[i, 0], XS[i, 1], XS[i, 2], XS[i, 3],
                          AY[iy, i, 0], AY[iy, i, 1], AY[iy, i, 2], AY[iy, i, 3], p, e, t)
                    for r in range(4):
                        acc[r] += t[r]
                if small:
                    ua = <unsigned int>(acc[0] + bias) % uM
                    ub = <unsigned int>(acc[1] + bias) % uM
                    uc = <unsigned int>(acc[2] + bias) % uM
                    ud = <unsigned int>(acc[3] + bias) % uM
                else:
                    ua = md(acc[0], M)
                    ub = md(acc[1], M)
                    uc = md(acc[2], M)
                    ud = md(acc[3], M)
                code = ((tmu[ua] * mu + tmu[ub]) * mz + tmz[uc]) * mz + tmz[ud]
                hist[gxv[ix], gyv[iy], code] += 1
    return hist_arr
