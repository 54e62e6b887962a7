"""Chase-Pyndiah turbo decoding of product codes.

A product codeword is an n2 x n1 grid whose rows belong to one systematic
code and whose columns to another.  Decoding alternates row and column
half-iterations; each component word is list-decoded (any variant that
produces candidates works) and its soft values are updated from the
candidate distances: bits where the candidate list disagrees get a
distance-difference likelihood, unanimous bits get the reliability beta,
and the extrinsic part is folded back onto the channel values scaled by
alpha.  Factors follow either a fixed per-half-iteration schedule or the
adaptive rule based on the best candidate's analog weight and list rank.
"""

from dataclasses import dataclass, field

import numpy as np

from .channel import frame_from_soft
from .codes import encode
from .decoders import decode
from .errors import DimensionMismatch, EmptyCandidateList

#: classic fixed schedules, used when no explicit schedule is configured
DEFAULT_ALPHA = (0.2, 0.3, 0.5, 0.7, 0.9, 1.0)
DEFAULT_BETA = (0.2, 0.4, 0.6, 0.8, 1.0, 1.0)


def _at(seq, j):
    """seq[j], extending by repetition of the final value."""
    return seq[j] if j < len(seq) else seq[-1]


@dataclass
class FactorSchedule:
    alpha: tuple = DEFAULT_ALPHA
    beta: tuple = DEFAULT_BETA

    def __post_init__(self):
        self.alpha = tuple(float(a) for a in self.alpha)
        self.beta = tuple(float(b) for b in self.beta)
        if not self.alpha or not self.beta:
            raise ValueError("factor schedules must be non-empty")
        if not all(0.0 < a <= 1.0 for a in self.alpha):
            raise ValueError("alpha factors must lie in (0, 1]")
        if not all(b >= 0.0 for b in self.beta):
            raise ValueError("beta factors must be >= 0")

    def at(self, j):
        """(alpha, beta) for 0-based half-iteration j."""
        return _at(self.alpha, j), _at(self.beta, j)


@dataclass
class AdaptiveParams:
    """Factor-rule parameters for one half-iteration: upper limit a,
    lower limit b, decrease coefficient k, separately for alpha and beta."""

    a_alpha: float
    b_alpha: float
    k_alpha: float
    a_beta: float
    b_beta: float
    k_beta: float

    def __post_init__(self):
        if self.b_alpha > self.a_alpha or self.b_beta > self.a_beta:
            raise ValueError("lower limit b must not exceed upper limit a")
        if self.k_alpha < 0 or self.k_beta < 0:
            raise ValueError("decrease coefficients must be >= 0")


@dataclass
class AdaptiveSchedule:
    """Per-half-iteration AdaptiveParams, extended by the final entry."""

    params: tuple

    def __post_init__(self):
        self.params = tuple(self.params)
        if not self.params:
            raise ValueError("adaptive schedule must be non-empty")

    def at(self, j):
        return _at(self.params, j)


def adaptive_hybrid_factors(eps_best, i_best, params):
    """Scaling factors from decode quality: clean, early-list candidates
    push alpha/beta toward the upper limits a, noisy late ones toward b."""
    deduction = 0.5 * eps_best + 0.5 * (i_best - 1) / 2.0
    alpha = max(params.a_alpha - params.k_alpha * deduction, params.b_alpha)
    beta = max(params.a_beta - params.k_beta * deduction, params.b_beta)
    return alpha, beta


def pyndiah_update(y0, y_prev, candidates, alpha, beta):
    """Soft-output update from a candidate codeword list.

    Distances are measured against y_prev (the current soft input); the
    extrinsic is referenced to the original channel values y0 and applied
    as y_next = y0 + alpha * (initial_soft - y0).
    """
    if not candidates:
        raise EmptyCandidateList("soft update needs at least one candidate")
    y0 = np.asarray(y0, dtype=np.float64)
    y_prev = np.asarray(y_prev, dtype=np.float64)
    x = 2.0 * np.array([c.codeword for c in candidates], dtype=np.float64) - 1.0
    dists = ((y_prev[None, :] - x) ** 2).sum(axis=1)
    b = int(np.argmin(dists))  # first minimum keeps list order deterministic
    x_best = x[b]
    d_best = dists[b]
    disagree = x != x_best[None, :]
    d_comp = np.where(disagree, dists[:, None], np.inf).min(axis=0)
    has_comp = np.isfinite(d_comp)
    init = np.where(has_comp, x_best * (d_comp - d_best) / 4.0, beta * x_best)
    return y0 + alpha * (init - y0)


@dataclass
class ProductCodeword:
    grid: np.ndarray  # n2 x n1 bits; rows in row_code, columns in col_code
    row_code: object
    col_code: object


def product_encode(info, row_code, col_code):
    """Encode a k2 x k1 info block; rows first, then columns (the
    checks-on-checks corner is the same either way for linear codes)."""
    info = np.asarray(info, dtype=np.uint8) & 1
    k2, k1 = col_code.k, row_code.k
    if info.shape != (k2, k1):
        raise DimensionMismatch(
            f"info block {info.shape} does not match ({k2}, {k1})")
    grid = np.zeros((col_code.n, row_code.n), dtype=np.uint8)
    row_sys = np.asarray(col_code.systematic_positions)
    for i, r in enumerate(row_sys):
        grid[r, :] = encode(row_code, info[i])
    par = col_code._parity_map.astype(np.int64)
    checks = (par @ grid[row_sys, :].astype(np.int64)) & 1
    grid[np.asarray(col_code.parity_positions), :] = checks.astype(np.uint8)
    return ProductCodeword(grid=grid, row_code=row_code, col_code=col_code)


def product_info(grid, row_code, col_code):
    """Extract the k2 x k1 info block from a grid of bits."""
    return np.asarray(grid)[np.ix_(col_code.systematic_positions,
                                   row_code.systematic_positions)]


@dataclass
class ProductDecodeResult:
    info: np.ndarray
    grid: np.ndarray
    soft: np.ndarray
    ber_per_iteration: list = field(default_factory=list)
    component_decodes: int = 0
    component_queries: int = 0
    component_shots: int = 0
    component_abandoned: int = 0


def _half_iteration(soft, y0, code, qlist, cfg, factors, adaptive, j, axis, stats):
    """Decode every line along `axis` (0 = rows, 1 = columns) in place."""
    fixed = factors.at(j) if adaptive is None else None
    n_lines = soft.shape[0] if axis == 0 else soft.shape[1]
    for i in range(n_lines):
        line = soft[i, :] if axis == 0 else soft[:, i]
        base = y0[i, :] if axis == 0 else y0[:, i]
        frame = frame_from_soft(line)
        res = decode(frame, code, qlist, cfg)
        stats.component_decodes += 1
        stats.component_queries += res.queries_used
        stats.component_shots += res.shots_used
        if not res.candidates:
            stats.component_abandoned += 1
            continue  # abandoned: soft values pass through unchanged
        if adaptive is None:
            alpha, beta = fixed
        else:
            i_best = res.candidates.index(res.best) + 1
            alpha, beta = adaptive_hybrid_factors(
                res.best.analog_weight, i_best, adaptive.at(j))
        updated = pyndiah_update(base, line, res.candidates, alpha, beta)
        if axis == 0:
            soft[i, :] = updated
        else:
            soft[:, i] = updated


def product_decode_iterative(received, row_code, col_code, cfg, iterations=4,
                             schedule=None, adaptive=None, reference=None,
                             rows_first=True, row_qlist=None, col_qlist=None):
    """Iterative two-dimensional soft decoding.

    `received` is the n2 x n1 grid of channel outputs.  When `reference`
    (the transmitted grid) is given, the info-bit error rate after each
    full iteration is recorded in the result.
    """
    from .decoders import query_list_for_decoder

    y0 = np.asarray(received, dtype=np.float64)
    if y0.shape != (col_code.n, row_code.n):
        raise DimensionMismatch(
            f"grid {y0.shape} does not match ({col_code.n}, {row_code.n})")
    if schedule is None:
        schedule = FactorSchedule()
    if row_qlist is None:
        row_qlist = query_list_for_decoder(row_code, cfg)
    if col_qlist is None:
        col_qlist = query_list_for_decoder(col_code, cfg) \
            if col_code is not row_code else row_qlist
    soft = y0.copy()
    ref_info = None if reference is None else product_info(reference, row_code, col_code)
    bers = []
    result = ProductDecodeResult(info=None, grid=None, soft=soft,
                                 ber_per_iteration=bers)
    order = (0, 1) if rows_first else (1, 0)
    for it in range(iterations):
        for half, axis in enumerate(order):
            j = 2 * it + half
            code = row_code if axis == 0 else col_code
            qlist = row_qlist if axis == 0 else col_qlist
            _half_iteration(soft, y0, code, qlist, cfg, schedule, adaptive,
                            j, axis, result)
        if ref_info is not None:
            hard = (soft >= 0).astype(np.uint8)
            errs = product_info(hard, row_code, col_code) != ref_info
            bers.append(float(errs.mean()))
    result.grid = (soft >= 0).astype(np.uint8)
    result.info = product_info(result.grid, row_code, col_code)
    return result
