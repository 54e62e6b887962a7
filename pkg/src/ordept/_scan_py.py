"""Pure-Python scan kernels (fallback backend).

Each scan walks a query list against one received word and returns
(queries_used, hits) where hits are (query_index, flipped-position tuple)
pairs in acceptance order.  The compiled backend (_scan_cy) implements the
same contract; `ordept.kernels` picks one at import time.

Stopping rules (shared semantics):
  sequential   - candidate cap and threshold checked after every query;
  batched      - whole shots of `shot_size` queries are evaluated, counters
                 reconciled only at shot boundaries, so a stopping shot may
                 contribute more than c_max candidates.
Only accepted candidates (new codeword, non-degenerate completion) refresh
the last-success index used by the threshold rule.
"""

BACKEND = "python"


def _scan_loop(s0, pats, col_at_rank, pos_at_rank, completer,
               q_max, c_max, threshold_t, batched, shot_size):
    limit = min(q_max, len(pats))
    hits = []
    seen = set()
    last_acc = 0
    q = 0
    while q < limit:
        q += 1
        ranks = pats[q - 1]
        s = s0
        for r in ranks:
            s ^= col_at_rank[r - 1]
        extra = completer(s)
        if extra is not None:
            positions = [pos_at_rank[r - 1] for r in ranks]
            if not any(j in positions for j in extra):
                full = tuple(sorted(positions + list(extra)))
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
    cols = ctx.cols
    pos_at_rank = pi.tolist()
    col_at_rank = [cols[p] for p in pos_at_rank]
    comp = ctx.comp_map

    def completer(s):
        j = comp.get(s, -1)
        return None if j < 0 else (j,)

    return _scan_loop(s0, sublist.rank_tuples, col_at_rank, pos_at_rank,
                      completer, q_max, c_max, threshold_t, batched, shot_size)


def orbgrand_scan(s0, sublist, pi, ctx, q_max):
    """Full-pattern membership scan: first zero syndrome wins."""
    pats = sublist.rank_tuples
    pos_at_rank = pi.tolist()
    col_at_rank = [ctx.cols[p] for p in pos_at_rank]
    limit = min(q_max, len(pats))
    for q in range(1, limit + 1):
        s = s0
        ranks = pats[q - 1]
        for r in ranks:
            s ^= col_at_rank[r - 1]
        if s == 0:
            return q, [(q, tuple(sorted(pos_at_rank[r - 1] for r in ranks)))]
    return limit, []


def _make_bdd_completer(ctx, x):
    """Completion by up to x extra error positions via the BCH sub-code.

    Candidate extras are tried smallest-first and verified against the full
    syndrome; bounded-distance uniqueness of the sub-code (2x < d_min) makes
    this equivalent to sub-code BDD followed by full-H verification.
    """
    exp, log = ctx.gf_exp, ctx.gf_log
    qrt = ctx.gf_qrt
    order = ctx.gf_order
    mask_r = (1 << ctx.r) - 1
    cols = ctx.cols
    ext_pos = ctx.n - 1
    ext_col = cols[ext_pos]

    def mul(a, b):
        if a == 0 or b == 0:
            return 0
        e = log[a] + log[b]
        return exp[e - order if e >= order else e]

    def completer(s):
        if s == 0:
            return ()
        if x == 0:
            return None
        s1 = s & mask_r
        if s1 and s == cols[log[s1]]:
            return (log[s1],)
        if s == ext_col:
            return (ext_pos,)
        if x < 2:
            return None
        if s1:
            if s ^ cols[log[s1]] == ext_col:
                return (log[s1], ext_pos)
            s1cub = mul(s1, mul(s1, s1))
            s3 = (s >> ctx.r) & mask_r
            sigma2 = mul(s3 ^ s1cub, exp[(order - log[s1]) % order])
            if sigma2:
                sq = mul(s1, s1)
                d = mul(sigma2, exp[(order - log[sq]) % order])
                u = qrt[d]
                if u >= 0:
                    x1 = mul(s1, u)
                    x2 = x1 ^ s1
                    if x1 and x2:
                        j1, j2 = log[x1], log[x2]
                        pair_val = cols[j1] ^ cols[j2]
                        if s == pair_val:
                            return (j1, j2) if j1 < j2 else (j2, j1)
                        if x >= 3 and s ^ pair_val == ext_col:
                            lo, hi = (j1, j2) if j1 < j2 else (j2, j1)
                            return (lo, hi, ext_pos)
        if x < 3:
            return None
        # three Galois errors: Peterson sigma coefficients + cubic root search
        s3 = (s >> ctx.r) & mask_r
        s5 = (s >> (2 * ctx.r)) & mask_r
        s1cub = mul(s1, mul(s1, s1))
        den = s3 ^ s1cub
        if den == 0:
            return None
        sq1 = mul(s1, s1)
        sigma2 = mul(s5 ^ mul(sq1, s3), exp[(order - log[den]) % order])
        sigma3 = den ^ mul(s1, sigma2)
        if sigma3 == 0:
            return None
        roots = []
        for i in range(order):
            z = exp[i]
            if mul(mul(z, z) ^ sigma2, z) ^ mul(s1, mul(z, z)) ^ sigma3 == 0:
                roots.append(log[z])
                if len(roots) == 3:
                    break
        if len(roots) == 3:
            triple = tuple(sorted(roots))
            if s == cols[triple[0]] ^ cols[triple[1]] ^ cols[triple[2]]:
                return triple
        return None

    return completer


def ordeptx_scan(s0, sublist, pi, ctx, x, q_max, c_max, threshold_t, batched, shot_size):
    pos_at_rank = pi.tolist()
    col_at_rank = [ctx.cols[p] for p in pos_at_rank]
    completer = _make_bdd_completer(ctx, x)
    return _scan_loop(s0, sublist.rank_tuples, col_at_rank, pos_at_rank,
                      completer, q_max, c_max, threshold_t, batched, shot_size)
