# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled scan kernels.

Same contract as _scan_py (query counts, hit order, dedup, stop rules are
bit-identical); only the per-query syndrome updates, completion lookups and
the bounded-distance completer run as C loops.  Python objects are touched
only when a query actually yields a candidate.
"""

import numpy as np

from libc.stdint cimport int32_t, uint64_t

from . import _scan_py

BACKEND = "compiled"


cdef inline int32_t c_bisect(uint64_t s, uint64_t[::1] svals, int32_t[::1] sidx) noexcept:
    cdef Py_ssize_t lo = 0, hi = svals.shape[0], mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if svals[mid] < s:
            lo = mid + 1
        else:
            hi = mid
    if lo < svals.shape[0] and svals[lo] == s:
        return sidx[lo]
    return -1


cdef inline int32_t c_lookup(uint64_t s, int mode, int32_t[::1] dense,
                             int32_t[::1] perm, uint64_t rmask,
                             uint64_t[::1] colv, uint64_t[::1] svals,
                             int32_t[::1] sidx) noexcept:
    cdef int32_t j
    if mode == 0:
        return dense[s]
    if mode == 1:
        j = perm[s & rmask]
        return j if colv[j] == s else -1
    return c_bisect(s, svals, sidx)


cdef inline int c_mul(int a, int b, int32_t[::1] log, int32_t[::1] exp,
                      int order) noexcept:
    cdef int e
    if a == 0 or b == 0:
        return 0
    e = log[a] + log[b]
    if e >= order:
        e -= order
    return exp[e]


cdef inline int c_inv(int a, int32_t[::1] log, int32_t[::1] exp, int order) noexcept:
    cdef int e = order - log[a]
    if e == order:
        e = 0
    return exp[e]


cdef int c_bdd_complete(uint64_t s, int x, uint64_t[::1] cols, int32_t[::1] log,
                        int32_t[::1] exp, int32_t[::1] qrt, int order, int r,
                        uint64_t rmask, int ext_pos, uint64_t ext_col,
                        int32_t* extra) noexcept:
    """Fill `extra` with the <= x completion positions; -1 when none exist."""
    cdef int s1, s3, s5, s1cub, sigma2, sigma3, sq, d, u, x1, x2, j1, j2
    cdef int den, i, z, zz, cnt, tmp
    cdef uint64_t pair_val
    if s == 0:
        return 0
    if x == 0:
        return -1
    s1 = <int> (s & rmask)
    if s1 and s == cols[log[s1]]:
        extra[0] = log[s1]
        return 1
    if s == ext_col:
        extra[0] = ext_pos
        return 1
    if x < 2:
        return -1
    if s1:
        j1 = log[s1]
        if (s ^ cols[j1]) == ext_col:
            extra[0] = j1  # Galois positions always precede the extension
            extra[1] = ext_pos
            return 2
        s3 = <int> ((s >> r) & rmask)
        s1cub = c_mul(s1, c_mul(s1, s1, log, exp, order), log, exp, order)
        sigma2 = c_mul(s3 ^ s1cub, c_inv(s1, log, exp, order), log, exp, order)
        if sigma2:
            sq = c_mul(s1, s1, log, exp, order)
            d = c_mul(sigma2, c_inv(sq, log, exp, order), log, exp, order)
            u = qrt[d]
            if u >= 0:
                x1 = c_mul(s1, u, log, exp, order)
                x2 = x1 ^ s1
                if x1 and x2:
                    j1 = log[x1]
                    j2 = log[x2]
                    if j2 < j1:
                        tmp = j1
                        j1 = j2
                        j2 = tmp
                    pair_val = cols[j1] ^ cols[j2]
                    if s == pair_val:
                        extra[0] = j1
                        extra[1] = j2
                        return 2
                    if x >= 3 and (s ^ pair_val) == ext_col:
                        extra[0] = j1
                        extra[1] = j2
                        extra[2] = ext_pos
                        return 3
    if x < 3:
        return -1
    s3 = <int> ((s >> r) & rmask)
    s5 = <int> ((s >> (2 * r)) & rmask)
    s1cub = c_mul(s1, c_mul(s1, s1, log, exp, order), log, exp, order)
    den = s3 ^ s1cub
    if den == 0:
        return -1
    sq = c_mul(s1, s1, log, exp, order)
    sigma2 = c_mul(s5 ^ c_mul(sq, s3, log, exp, order),
                   c_inv(den, log, exp, order), log, exp, order)
    sigma3 = den ^ c_mul(s1, sigma2, log, exp, order)
    if sigma3 == 0:
        return -1
    cnt = 0
    for i in range(order):
        z = exp[i]
        zz = c_mul(z, z, log, exp, order)
        if (c_mul(zz ^ sigma2, z, log, exp, order)
                ^ c_mul(s1, zz, log, exp, order) ^ sigma3) == 0:
            extra[cnt] = i  # i == log[z]; ascending, so already sorted
            cnt += 1
            if cnt == 3:
                break
    if cnt == 3 and s == (cols[extra[0]] ^ cols[extra[1]] ^ cols[extra[2]]):
        return 3
    return -1


def _prep(sublist, pi, ctx):
    ranks, weights = sublist.arrays
    col_at_rank = np.ascontiguousarray(ctx.col_vals[pi])
    return ranks, weights, col_at_rank, np.ascontiguousarray(pi, dtype=np.int32)


def _scan(uint64_t s0, sublist, pi, ctx, int use_bdd, int x, int q_max,
          int c_max, int threshold_t, int batched, int shot_size):
    ranks_np, weights_np, col_np, pos_np = _prep(sublist, pi, ctx)
    cdef int32_t[:, ::1] ranks = ranks_np
    cdef int32_t[::1] weights = weights_np
    cdef uint64_t[::1] col_at_rank = col_np
    cdef int32_t[::1] pos_at_rank = pos_np

    cdef uint64_t[::1] colv = ctx.col_vals
    cdef uint64_t[::1] svals = ctx.comp_svals
    cdef int32_t[::1] sidx = ctx.comp_sidx
    cdef int32_t[::1] dense = ctx.comp_dense
    cdef int32_t[::1] perm = ctx.comp_perm
    cdef int mode = 1 if perm.shape[0] else (0 if dense.shape[0] else 2)
    cdef uint64_t rmask = (<uint64_t> 1 << ctx.r_bits) - 1 if perm.shape[0] else 0

    cdef int32_t[::1] gf_log, gf_exp, gf_qrt
    cdef int order = 0, r = 0, ext_pos = 0
    cdef uint64_t ext_col = 0, bmask = 0
    if use_bdd:
        gf_exp = ctx.gf_exp_arr
        gf_log = ctx.gf_log_arr
        gf_qrt = ctx.gf_qrt_arr
        order = ctx.gf_order
        r = ctx.r
        bmask = (<uint64_t> 1 << r) - 1
        ext_pos = ctx.n - 1
        ext_col = colv[ext_pos]

    cdef Py_ssize_t limit = min(q_max, ranks.shape[0])
    cdef Py_ssize_t q = 0, last_acc = 0
    cdef int w, i, k, n_extra, overlap
    cdef int32_t extra[3]
    cdef int32_t j
    cdef uint64_t s
    hits = []
    seen = set()
    while q < limit:
        q += 1
        w = weights[q - 1]
        s = s0
        for i in range(w):
            s ^= col_at_rank[ranks[q - 1, i] - 1]
        if use_bdd:
            n_extra = c_bdd_complete(s, x, colv, gf_log, gf_exp, gf_qrt,
                                     order, r, bmask, ext_pos, ext_col, extra)
        else:
            j = c_lookup(s, mode, dense, perm, rmask, colv, svals, sidx)
            if j < 0:
                n_extra = -1
            else:
                n_extra = 1
                extra[0] = j
        if n_extra >= 0:
            overlap = 0
            for k in range(n_extra):
                for i in range(w):
                    if pos_at_rank[ranks[q - 1, i] - 1] == extra[k]:
                        overlap = 1
            if not overlap:
                positions = [pos_at_rank[ranks[q - 1, i] - 1] for i in range(w)]
                positions += [extra[k] for k in range(n_extra)]
                full = tuple(sorted(positions))
                if full not in seen:
                    seen.add(full)
                    hits.append((q, full))
                    last_acc = q
                    if not batched and len(hits) >= c_max:
                        break
        if not batched and hits and (q - last_acc) >= threshold_t:
            break
        if batched and q % shot_size == 0:
            if len(hits) >= c_max or (hits and (q - last_acc) >= threshold_t):
                break
    return q, hits


def ordept_scan(s0, sublist, pi, ctx, q_max, c_max, threshold_t, batched, shot_size):
    if ctx.col_vals is None:
        return _scan_py.ordept_scan(s0, sublist, pi, ctx, q_max, c_max,
                                    threshold_t, batched, shot_size)
    return _scan(s0, sublist, pi, ctx, 0, 0, q_max, c_max, threshold_t,
                 int(batched), shot_size)


def ordeptx_scan(s0, sublist, pi, ctx, x, q_max, c_max, threshold_t, batched, shot_size):
    if ctx.col_vals is None:
        return _scan_py.ordeptx_scan(s0, sublist, pi, ctx, x, q_max, c_max,
                                     threshold_t, batched, shot_size)
    return _scan(s0, sublist, pi, ctx, 1, x, q_max, c_max, threshold_t,
                 int(batched), shot_size)


def orbgrand_scan(s0, sublist, pi, ctx, q_max):
    if ctx.col_vals is None:
        return _scan_py.orbgrand_scan(s0, sublist, pi, ctx, q_max)
    ranks_np, weights_np, col_np, pos_np = _prep(sublist, pi, ctx)
    cdef int32_t[:, ::1] ranks = ranks_np
    cdef int32_t[::1] weights = weights_np
    cdef uint64_t[::1] col_at_rank = col_np
    cdef int32_t[::1] pos_at_rank = pos_np
    cdef Py_ssize_t limit = min(q_max, ranks.shape[0])
    cdef Py_ssize_t q = 0
    cdef int w, i
    cdef uint64_t s, s0_c = s0
    while q < limit:
        q += 1
        w = weights[q - 1]
        s = s0_c
        for i in range(w):
            s ^= col_at_rank[ranks[q - 1, i] - 1]
        if s == 0:
            full = tuple(sorted(pos_at_rank[ranks[q - 1, i] - 1] for i in range(w)))
            return q, [(q, full)]
    return limit, []
