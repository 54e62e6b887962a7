"""Soft-decision decoders: ORDEPT, ORDEPTx, ORBGRAND and Chase II.

All variants walk a likelihood-ordered query list against the hard-decision
word and differ in how a query becomes a candidate codeword:

  ORDEPT    - partial error pattern + syndrome completion through the table;
  ORDEPTx   - partial pattern + up-to-x-position completion via sub-code BDD,
              verified against the full parity-check matrix;
  ORBGRAND  - full error pattern, plain membership test;
  Chase II  - 2^p flips of the least-reliable positions + hard BDD.

Results carry every accepted candidate so the turbo layer can form soft
output; `best` minimizes squared Euclidean distance to the received values
(equivalently analog weight for Chase — the identity is exercised in tests).
"""

from dataclasses import dataclass
from types import SimpleNamespace

import numpy as np

from . import kernels
from .codes import bdd_error_positions
from .errors import ConfigError, LengthMismatch
from .patterns import generate_query_list

DECODED = "decoded"
ABANDONED = "abandoned"

_VARIANTS = ("ordept", "ordeptx", "orbgrand", "chase2", "none")


@dataclass
class DecoderConfig:
    variant: str = "ordept"
    q_max: int = 1 << 10
    c_max: int = 3
    threshold_t: int = 256
    shot_size: int = 256
    use_parity_split: bool = True
    batched: bool = False  # shot-boundary stopping (hardware batch semantics)
    x: int = 1             # ORDEPTx completion capability
    chase_p: int = 4       # Chase II least-reliable flip count

    def __post_init__(self):
        self.variant = self.variant.lower()
        if self.variant not in _VARIANTS:
            raise ConfigError(f"unknown decoder variant {self.variant!r}")
        if min(self.q_max, self.c_max, self.shot_size) < 1 or self.threshold_t < 0:
            raise ConfigError("q_max, c_max, shot_size >= 1 and threshold_t >= 0 required")
        if self.variant == "ordeptx" and not 0 <= self.x <= 3:
            raise ConfigError(f"ORDEPTx requires 0 <= x <= 3, got {self.x}")
        if self.variant == "chase2" and not 0 <= self.chase_p <= 16:
            raise ConfigError(f"Chase II requires 0 <= p <= 16, got {self.chase_p}")


@dataclass
class Candidate:
    codeword: np.ndarray
    query_index: int       # 1-based query that produced it; 0 = clean syndrome
    error_pattern: tuple   # flipped positions relative to w (0-based, sorted)
    analog_weight: float
    sq_distance: float


@dataclass
class DecodeResult:
    best: Candidate            # None when abandoned
    candidates: list
    queries_used: int
    shots_used: int
    status: str


def analog_weight(positions, llr):
    """Sum of |llr| over flipped positions — the pattern's analog weight."""
    idx = list(positions)
    return float(np.abs(np.asarray(llr))[idx].sum()) if idx else 0.0


def _scan_ctx(code):
    """Per-code immutable bundle consumed by the scan kernels (cached)."""
    ctx = getattr(code, "_scan_ctx_cache", None)
    if ctx is None:
        table = code.completion
        ctx = SimpleNamespace(
            n=code.n,
            cols=code._col_ints,
            col_vals=code.col_vals,
            comp_map=dict(zip(table.sorted_vals.tolist(), table.sorted_idx.tolist())),
            comp_perm=table.bch_perm if table.bch_perm is not None
            else np.zeros(0, dtype=np.int32),
            comp_dense=table.dense if table.dense is not None
            else np.zeros(0, dtype=np.int32),
            r_bits=table.bch_r or 0,
            comp_svals=table.sorted_vals,
            comp_sidx=table.sorted_idx,
        )
        if code.gf is not None:
            ctx.r = code.gf.r
            ctx.t_rows = code.t
            ctx.gf_order = code.gf.order
            ctx.gf_exp = code.gf.exp_table.tolist()
            ctx.gf_log = code.gf.log_table.tolist()
            ctx.gf_qrt = code.gf.quad_table.tolist()
            ctx.gf_exp_arr = code.gf.exp_table
            ctx.gf_log_arr = code.gf.log_table
            ctx.gf_qrt_arr = code.gf.quad_table
        code._scan_ctx_cache = ctx
    return ctx


def _check_frame(frame, code):
    if frame.w.shape != (code.n,):
        raise LengthMismatch(f"frame length {frame.w.shape} != n {code.n}")


def _candidate(frame, ctx, s0, positions, query_index, d0, abs_y, abs_llr):
    idx = list(positions)
    cw = frame.w.copy()
    acc = s0
    for j in idx:
        cw[j] ^= 1
        acc ^= ctx.cols[j]
    assert acc == 0, "candidate without zero syndrome escaped a kernel"
    return Candidate(
        codeword=cw,
        query_index=query_index,
        error_pattern=tuple(idx),
        analog_weight=float(abs_llr[idx].sum()) if idx else 0.0,
        sq_distance=d0 + 4.0 * float(abs_y[idx].sum()) if idx else d0,
    )


def _soft_stats(frame):
    x_w = 2.0 * frame.w - 1.0
    d0 = float(((frame.y - x_w) ** 2).sum())
    return d0, np.abs(frame.y), np.abs(frame.llr)


def _pick_best(candidates, key):
    best = None
    for cand in candidates:  # strict < keeps the lowest query index on ties
        if best is None or key(cand) < key(best):
            best = cand
    return best


def _select_sublist(qlist, code, cfg, s0, completed_offset):
    if completed_offset is None or not (cfg.use_parity_split and code.extended):
        return qlist
    even, odd = qlist.split_by_parity(completed_offset)
    s_par = (s0 >> (code.m - 1)) & 1
    return odd if s_par else even


def _result_from_hits(frame, ctx, s0, queries, hits, cfg, select_key):
    d0, abs_y, abs_llr = _soft_stats(frame)
    cands = [_candidate(frame, ctx, s0, pos, q, d0, abs_y, abs_llr)
             for q, pos in hits]
    best = _pick_best(cands, select_key)
    shots = -(-queries // cfg.shot_size)
    status = DECODED if cands else ABANDONED
    return DecodeResult(best=best, candidates=cands, queries_used=queries,
                        shots_used=shots, status=status)


def _clean_result(frame, ctx, s0):
    d0, abs_y, abs_llr = _soft_stats(frame)
    cand = _candidate(frame, ctx, s0, (), 0, d0, abs_y, abs_llr)
    return DecodeResult(best=cand, candidates=[cand], queries_used=0,
                        shots_used=0, status=DECODED)


def ordept_decode(frame, code, qlist, cfg):
    """Partial-pattern search with syndrome completion (multi-candidate)."""
    _check_frame(frame, code)
    ctx = _scan_ctx(code)
    s0 = code.syndrome_int(frame.w)
    if s0 == 0:
        return _clean_result(frame, ctx, s0)
    sub = _select_sublist(qlist, code, cfg, s0, completed_offset=1)
    queries, hits = kernels.ordept_scan(
        s0, sub, frame.pi, ctx, cfg.q_max, cfg.c_max, cfg.threshold_t,
        cfg.batched, cfg.shot_size)
    return _result_from_hits(frame, ctx, s0, queries, hits, cfg,
                             select_key=lambda c: c.sq_distance)


def ordeptx_decode(frame, code, qlist, cfg):
    """ORDEPT generalized to completion by up to cfg.x positions (sub-code BDD)."""
    _check_frame(frame, code)
    if code.gf is None or not code.extended:
        raise ConfigError(f"ORDEPTx needs an extended BCH code, got {code.name}")
    if cfg.x >= max(code.t, 1) and cfg.x != 0:
        raise ConfigError(f"ORDEPTx requires x < t (x={cfg.x}, t={code.t})")
    ctx = _scan_ctx(code)
    s0 = code.syndrome_int(frame.w)
    if s0 == 0:
        return _clean_result(frame, ctx, s0)
    offset = cfg.x if cfg.x in (0, 1) else None  # no exclusive parity class for x >= 2
    sub = _select_sublist(qlist, code, cfg, s0, completed_offset=offset)
    queries, hits = kernels.ordeptx_scan(
        s0, sub, frame.pi, ctx, cfg.x, cfg.q_max, cfg.c_max, cfg.threshold_t,
        cfg.batched, cfg.shot_size)
    return _result_from_hits(frame, ctx, s0, queries, hits, cfg,
                             select_key=lambda c: c.sq_distance)


def orbgrand_decode(frame, code, qlist, cfg):
    """Plain ordered membership testing; first full pattern in C wins."""
    _check_frame(frame, code)
    ctx = _scan_ctx(code)
    s0 = code.syndrome_int(frame.w)
    queries, hits = kernels.orbgrand_scan(s0, qlist, frame.pi, ctx, cfg.q_max)
    return _result_from_hits(frame, ctx, s0, queries, hits, cfg,
                             select_key=lambda c: c.sq_distance)


def chase2_decode(frame, code, p, cfg):
    """Chase II: 2^p flips over the p least-reliable positions + hard BDD."""
    _check_frame(frame, code)
    if code.gf is None or code.t is None or code.t > 3:
        raise ConfigError(f"Chase II needs a BCH code with t <= 3, got {code.name}")
    ctx = _scan_ctx(code)
    s0 = code.syndrome_int(frame.w)
    d0, abs_y, abs_llr = _soft_stats(frame)
    flip_pos = [int(frame.pi[r]) for r in range(p)]
    flip_col = [ctx.cols[j] for j in flip_pos]
    cands = []
    seen = set()
    for b in range(1 << p):
        s = s0
        flips = []
        for r in range(p):
            if b >> r & 1:
                s ^= flip_col[r]
                flips.append(flip_pos[r])
        errors = bdd_error_positions(code, s, code.t)
        if errors is None:
            continue
        pattern = tuple(sorted(set(flips) ^ set(errors)))
        if pattern in seen:
            continue
        seen.add(pattern)
        cands.append(_candidate(frame, ctx, s0, pattern, b + 1, d0, abs_y, abs_llr))
    best = _pick_best(cands, key=lambda c: c.analog_weight)
    queries = 1 << p
    return DecodeResult(best=best, candidates=cands, queries_used=queries,
                        shots_used=-(-queries // cfg.shot_size),
                        status=DECODED if cands else ABANDONED)


def decode(frame, code, qlist, cfg):
    """Dispatch on cfg.variant."""
    if cfg.variant == "ordept":
        return ordept_decode(frame, code, qlist, cfg)
    if cfg.variant == "ordeptx":
        return ordeptx_decode(frame, code, qlist, cfg)
    if cfg.variant == "orbgrand":
        return orbgrand_decode(frame, code, qlist, cfg)
    if cfg.variant == "chase2":
        return chase2_decode(frame, code, cfg.chase_p, cfg)
    raise ConfigError(f"variant {cfg.variant!r} does not decode frames")


def query_list_for_decoder(code, cfg):
    """Query list sized so cfg.q_max queries survive any parity filtering."""
    if cfg.variant in ("chase2", "none"):
        return None
    split = (cfg.use_parity_split and code.extended
             and not (cfg.variant == "ordeptx" and cfg.x >= 2)
             and cfg.variant != "orbgrand")
    if not split:
        return generate_query_list(code.n, cfg.q_max)
    want = 2 * cfg.q_max + 64
    while True:
        ql = generate_query_list(code.n, want)
        offset = cfg.x if cfg.variant == "ordeptx" and cfg.x in (0, 1) else 1
        even, odd = ql.split_by_parity(offset)
        if min(len(even), len(odd)) >= cfg.q_max or len(ql) < want:
            return ql
        want *= 2
