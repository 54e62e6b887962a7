"""Seeded Monte-Carlo harness: BLER/BER sweeps, query statistics, latency model.

Every frame draws its randomness from a counter-based stream keyed by
(master_seed, frame_index), so results are a pure function of the
configuration and seed — worker count and sharding cannot change them.
Stop rules are evaluated at fixed batch boundaries to keep the set of
simulated frames deterministic as well.
"""

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.stats import binomtest

from .channel import ChannelParams, frame_rng, gaussian, transmit
from .codes import bch_code, crc_code, encode, load_parity_check
from .decoders import ABANDONED, DecoderConfig, decode, query_list_for_decoder
from .errors import CodingError, ConfigError
from .turbo import (AdaptiveParams, AdaptiveSchedule, FactorSchedule,
                    product_decode_iterative, product_encode, product_info)

#: frames simulated between stop-rule checks (fixed => deterministic schedule)
BATCH_FRAMES = 256


@dataclass
class TurboSettings:
    iterations: int = 4
    schedule: FactorSchedule = field(default_factory=FactorSchedule)
    adaptive: AdaptiveSchedule = None

    def __post_init__(self):
        if self.iterations < 1:
            raise ConfigError("turbo.iterations must be >= 1")


@dataclass
class SimConfig:
    code: object                  # LinearCode, or None for an uncoded channel
    decoder: DecoderConfig
    sweep_db: tuple               # sweep points in dB
    metric: str = "ebn0"          # 'ebn0' or 'snr' (Es/N0)
    max_frames: int = 100_000
    min_block_errors: int = 100
    master_seed: int = 0
    workers: int = 1
    uncoded_n: int = 128          # frame length when code is None
    turbo: TurboSettings = None   # product-code runs only

    def __post_init__(self):
        self.sweep_db = tuple(float(p) for p in self.sweep_db)
        if not self.sweep_db:
            raise ConfigError("sweep must contain at least one point")
        if self.max_frames < 1 or self.min_block_errors < 1:
            raise ConfigError("stop rules must be positive")
        if self.metric not in ("ebn0", "snr"):
            raise ConfigError(f"channel metric must be ebn0 or snr, got {self.metric!r}")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        v = self.decoder.variant
        if self.code is None and v != "none":
            raise ConfigError("decoding requires a code")
        if v in ("ordeptx", "chase2") and self.code is not None and self.code.gf is None:
            raise ConfigError(f"{v} needs a BCH code, got {self.code.name!r}")


@dataclass
class SimRecord:
    snr_db: float
    frames: int
    bit_errors: int
    block_errors: int
    ber: float
    bler: float
    avg_queries: float
    avg_shots: float
    abandonment_rate: float
    wall_time: float
    # Wilson 95% intervals accompany the point estimates (not CSV columns)
    ber_ci: tuple = (0.0, 0.0)
    bler_ci: tuple = (0.0, 0.0)


@dataclass
class ProductSimRecord(SimRecord):
    iteration_ber: tuple = ()     # info-bit BER after each full iteration


def wilson_interval(errors, trials):
    if trials == 0:
        return (0.0, 0.0)
    ci = binomtest(min(errors, trials), trials).proportion_ci(
        confidence_level=0.95, method="wilson")
    return (float(ci.low), float(ci.high))


def _channel_params(point_db, metric, rate):
    if metric == "snr":
        return ChannelParams.from_esn0(point_db, rate)
    return ChannelParams.from_ebn0(point_db, rate)


def _zeros(n):
    return np.zeros(n, dtype=np.int64)


def _sim_block(code, qlist, cfg, params, master_seed, start, count, uncoded_n):
    """Simulate frames [start, start+count); returns raw counters."""
    bit_errors = block_errors = abandoned = 0
    queries = shots = 0
    if code is None:
        n = uncoded_n
        for f in range(start, start + count):
            rng = frame_rng(master_seed, f)
            bits = rng.integers(0, 2, size=n).astype(np.uint8)
            fr = transmit(bits, params, rng)
            errs = int((fr.w != bits).sum())
            bit_errors += errs
            block_errors += errs > 0
        return count, bit_errors, block_errors, 0, 0, 0
    sys_pos = np.asarray(code.systematic_positions)
    for f in range(start, start + count):
        rng = frame_rng(master_seed, f)
        info = rng.integers(0, 2, size=code.k).astype(np.uint8)
        c = encode(code, info)
        fr = transmit(c, params, rng)
        if cfg.variant == "none":
            decision = fr.w
            block_errors += int((decision != c).any())
        else:
            res = decode(fr, code, qlist, cfg)
            queries += res.queries_used
            shots += res.shots_used
            if res.status == ABANDONED:
                abandoned += 1
                block_errors += 1
                decision = fr.w  # score the hard decisions we are left with
            else:
                decision = res.best.codeword
                block_errors += int((decision != c).any())
        bit_errors += int((decision[sys_pos] != info).sum())
    return count, bit_errors, block_errors, abandoned, queries, shots


_POOL_STATE = {}


def _pool_init(code, qlist, cfg, master_seed, uncoded_n):
    _POOL_STATE.update(code=code, qlist=qlist, cfg=cfg,
                       master_seed=master_seed, uncoded_n=uncoded_n)


def _pool_sim(task):
    params, start, count = task
    s = _POOL_STATE
    return _sim_block(s["code"], s["qlist"], s["cfg"], params,
                      s["master_seed"], start, count, s["uncoded_n"])


def _chunks(start, count, pieces):
    base, rem = divmod(count, pieces)
    offs = start
    for i in range(pieces):
        size = base + (1 if i < rem else 0)
        if size:
            yield offs, size
        offs += size


def _sweep(cfg, rate, run_batch, make_record):
    records = []
    for point in cfg.sweep_db:
        params = _channel_params(point, cfg.metric, rate)
        t0 = time.perf_counter()
        totals = None
        frames = 0
        while frames < cfg.max_frames:
            count = min(BATCH_FRAMES, cfg.max_frames - frames)
            got = run_batch(params, frames, count)
            totals = got if totals is None else tuple(
                a + b for a, b in zip(totals, got))
            frames += count
            if totals[2] >= cfg.min_block_errors:
                break
        records.append(make_record(point, totals, time.perf_counter() - t0))
    return records


def run_monte_carlo(cfg):
    """One SimRecord per sweep point; deterministic up to wall_time."""
    code = cfg.code
    qlist = None
    if code is not None and cfg.decoder.variant != "none":
        qlist = query_list_for_decoder(code, cfg.decoder)
    rate = 1.0 if code is None else code.k / code.n
    k = cfg.uncoded_n if code is None else code.k

    pool = None
    if cfg.workers > 1:
        pool = ProcessPoolExecutor(
            max_workers=cfg.workers, initializer=_pool_init,
            initargs=(code, qlist, cfg.decoder, cfg.master_seed, cfg.uncoded_n))

    def run_batch(params, start, count):
        if pool is None:
            return _sim_block(code, qlist, cfg.decoder, params,
                              cfg.master_seed, start, count, cfg.uncoded_n)
        tasks = [(params, s, c) for s, c in _chunks(start, count, cfg.workers)]
        parts = list(pool.map(_pool_sim, tasks))
        return tuple(sum(col) for col in zip(*parts))

    def make_record(point, totals, wall):
        frames, bit_errors, block_errors, abandoned, queries, shots = totals
        return SimRecord(
            snr_db=point, frames=frames, bit_errors=bit_errors,
            block_errors=block_errors, ber=bit_errors / (frames * k),
            bler=block_errors / frames, avg_queries=queries / frames,
            avg_shots=shots / frames, abandonment_rate=abandoned / frames,
            wall_time=wall, ber_ci=wilson_interval(bit_errors, frames * k),
            bler_ci=wilson_interval(block_errors, frames))

    try:
        return _sweep(cfg, rate, run_batch, make_record)
    finally:
        if pool is not None:
            pool.shutdown()


def _product_block(row_code, col_code, cfg, turbo, params, master_seed,
                   start, count):
    k1, k2 = row_code.k, col_code.k
    bit_errors = block_errors = 0
    decodes = queries = shots = comp_abandoned = 0
    iter_bits = _zeros(turbo.iterations)
    for f in range(start, start + count):
        rng = frame_rng(master_seed, f)
        info = rng.integers(0, 2, size=(k2, k1)).astype(np.uint8)
        pc = product_encode(info, row_code, col_code)
        x = 2.0 * pc.grid - 1.0
        y = x + gaussian(rng, x.shape, params.sigma)
        res = product_decode_iterative(
            y, row_code, col_code, cfg, iterations=turbo.iterations,
            schedule=turbo.schedule, adaptive=turbo.adaptive,
            reference=pc.grid)
        errs = int((res.info != info).sum())
        bit_errors += errs
        block_errors += errs > 0
        decodes += res.component_decodes
        queries += res.component_queries
        shots += res.component_shots
        comp_abandoned += res.component_abandoned
        iter_bits += np.round(np.asarray(res.ber_per_iteration) * (k1 * k2)).astype(np.int64)
    return (count, bit_errors, block_errors, comp_abandoned, queries, shots,
            decodes, iter_bits)


def _pool_product(task):
    params, start, count = task
    s = _POOL_STATE
    return _product_block(s["row_code"], s["col_code"], s["cfg"], s["turbo"],
                          params, s["master_seed"], start, count)


def _pool_product_init(row_code, col_code, cfg, turbo, master_seed):
    _POOL_STATE.update(row_code=row_code, col_code=col_code, cfg=cfg,
                       turbo=turbo, master_seed=master_seed)


def run_product_monte_carlo(cfg, col_code=None):
    """Product-code sweep; cfg.code is the row code (col defaults to it)."""
    row_code = cfg.code
    if row_code is None:
        raise ConfigError("product simulation requires a code")
    col_code = col_code or row_code
    turbo = cfg.turbo or TurboSettings()
    k = row_code.k * col_code.k
    rate = k / (row_code.n * col_code.n)

    pool = None
    if cfg.workers > 1:
        pool = ProcessPoolExecutor(
            max_workers=cfg.workers, initializer=_pool_product_init,
            initargs=(row_code, col_code, cfg.decoder, turbo, cfg.master_seed))

    def run_batch(params, start, count):
        if pool is None:
            return _product_block(row_code, col_code, cfg.decoder, turbo,
                                  params, cfg.master_seed, start, count)
        tasks = [(params, s, c) for s, c in _chunks(start, count, cfg.workers)]
        parts = list(pool.map(_pool_product, tasks))
        merged = [sum(col) for col in zip(*parts)]
        merged[-1] = np.sum([p[-1] for p in parts], axis=0)
        return tuple(merged)

    def make_record(point, totals, wall):
        (frames, bit_errors, block_errors, comp_abandoned, queries, shots,
         decodes, iter_bits) = totals
        return ProductSimRecord(
            snr_db=point, frames=frames, bit_errors=bit_errors,
            block_errors=block_errors, ber=bit_errors / (frames * k),
            bler=block_errors / frames, avg_queries=queries / frames,
            avg_shots=shots / frames,
            abandonment_rate=comp_abandoned / max(decodes, 1),
            wall_time=wall, ber_ci=wilson_interval(bit_errors, frames * k),
            bler_ci=wilson_interval(block_errors, frames),
            iteration_ber=tuple(float(b) / (frames * k) for b in iter_bits))

    try:
        return _sweep(cfg, rate, run_batch, make_record)
    finally:
        if pool is not None:
            pool.shutdown()


def estimate_latency_cycles(q_max, shot_size, n, c_max=None):
    """Projected decoder latency in clock cycles for a batched design."""
    cycles = -(-q_max // shot_size) + 2 + math.ceil(math.log2(n))
    if c_max is not None:
        cycles += math.ceil(math.log2(c_max))
    return cycles


CSV_COLUMNS = ("snr_db", "frames", "bit_errors", "block_errors", "ber",
               "bler", "avg_queries", "avg_shots", "abandonment_rate",
               "wall_time_s")


def emit_csv(records):
    if not records:
        raise ValueError("no records to emit")
    lines = [",".join(CSV_COLUMNS)]
    for r in records:
        lines.append(",".join([
            f"{r.snr_db:g}", str(r.frames), str(r.bit_errors),
            str(r.block_errors), f"{r.ber:.6e}", f"{r.bler:.6e}",
            f"{r.avg_queries:.6e}", f"{r.avg_shots:.6e}",
            f"{r.abandonment_rate:.6e}", f"{r.wall_time:.6e}"]))
    return "\n".join(lines) + "\n"


# --- configuration files -------------------------------------------------
#
# Flat "key = value" text; '#' starts a comment.

_CODE_KEYS = {"code.name", "code.h_file", "code.r", "code.t", "code.extended",
              "code.crc_poly", "code.n"}
_DECODER_KEYS = {"decoder.variant", "decoder.qmax", "decoder.cmax",
                 "decoder.threshold_t", "decoder.shot_size",
                 "decoder.parity_split", "decoder.chase_p", "decoder.x",
                 "decoder.batched"}
_TURBO_KEYS = {"turbo.iterations", "turbo.alpha", "turbo.beta",
               "turbo.adaptive", "turbo.a_alpha", "turbo.b_alpha",
               "turbo.k_alpha", "turbo.a_beta", "turbo.b_beta", "turbo.k_beta"}
_CHANNEL_KEYS = {"channel.metric"}
_ALL_KEYS = _CODE_KEYS | _DECODER_KEYS | _TURBO_KEYS | _CHANNEL_KEYS


def parse_config_text(text):
    out = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {ln}: expected key = value, got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _ALL_KEYS:
            raise ConfigError(f"line {ln}: unknown key {key!r}")
        out[key] = value
    return out


def _to_bool(value, key):
    v = value.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {value!r}")


def _to_int(value, key):
    try:
        return int(value, 0)  # accepts 0x.. for polynomials
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {value!r}") from None


def _to_floats(value, key):
    try:
        return tuple(float(p) for p in value.split(","))
    except ValueError:
        raise ConfigError(f"{key}: expected comma-separated numbers, got {value!r}") from None


def build_code(conf):
    """Construct the code named by the code.* keys; None for 'uncoded'."""
    if "code.h_file" in conf:
        try:
            with open(conf["code.h_file"]) as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read code.h_file: {exc}") from exc
        return load_parity_check(text)
    name = conf.get("code.name", "").lower()
    if not name:
        raise ConfigError("config needs code.name or code.h_file")
    try:
        if name == "uncoded":
            return None
        if name == "bch":
            return bch_code(r=_to_int(conf.get("code.r", "8"), "code.r"),
                            t=_to_int(conf.get("code.t", "2"), "code.t"),
                            extended=_to_bool(conf.get("code.extended", "true"),
                                              "code.extended"))
        if name == "crc":
            return crc_code(gen_poly=_to_int(conf["code.crc_poly"], "code.crc_poly"),
                            n=_to_int(conf["code.n"], "code.n"))
    except KeyError as exc:
        raise ConfigError(f"missing config key {exc.args[0]!r} for code {name!r}") from exc
    except CodingError as exc:
        raise ConfigError(f"cannot build code {name!r}: {exc}") from exc
    raise ConfigError(f"unknown code.name {name!r} (bch, crc or uncoded)")


def build_decoder_config(conf):
    kw = {}
    if "decoder.variant" in conf:
        kw["variant"] = conf["decoder.variant"].lower()
    for key, attr in (("decoder.qmax", "q_max"), ("decoder.cmax", "c_max"),
                      ("decoder.threshold_t", "threshold_t"),
                      ("decoder.shot_size", "shot_size"),
                      ("decoder.chase_p", "chase_p"), ("decoder.x", "x")):
        if key in conf:
            kw[attr] = _to_int(conf[key], key)
    if "decoder.parity_split" in conf:
        kw["use_parity_split"] = _to_bool(conf["decoder.parity_split"],
                                          "decoder.parity_split")
    if "decoder.batched" in conf:
        kw["batched"] = _to_bool(conf["decoder.batched"], "decoder.batched")
    return DecoderConfig(**kw)


def build_turbo_settings(conf):
    iterations = _to_int(conf.get("turbo.iterations", "4"), "turbo.iterations")
    schedule = FactorSchedule()
    if "turbo.alpha" in conf or "turbo.beta" in conf:
        try:
            schedule = FactorSchedule(
                alpha=_to_floats(conf["turbo.alpha"], "turbo.alpha")
                if "turbo.alpha" in conf else FactorSchedule().alpha,
                beta=_to_floats(conf["turbo.beta"], "turbo.beta")
                if "turbo.beta" in conf else FactorSchedule().beta)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    adaptive = None
    if _to_bool(conf.get("turbo.adaptive", "false"), "turbo.adaptive"):
        names = ("a_alpha", "b_alpha", "k_alpha", "a_beta", "b_beta", "k_beta")
        lists = {}
        for short in names:
            key = f"turbo.{short}"
            if key not in conf:
                raise ConfigError(f"turbo.adaptive requires {key}")
            lists[short] = _to_floats(conf[key], key)
        depth = max(len(v) for v in lists.values())
        try:
            params = tuple(
                AdaptiveParams(**{s: lists[s][min(j, len(lists[s]) - 1)]
                                  for s in names})
                for j in range(depth))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        adaptive = AdaptiveSchedule(params)
    return TurboSettings(iterations=iterations, schedule=schedule,
                         adaptive=adaptive)


def build_sim_config(conf, sweep_db, *, seed=0, max_frames=100_000,
                     min_block_errors=100, workers=1, uncoded_n=128):
    """SimConfig from parsed config keys plus harness-level arguments."""
    code = build_code(conf)
    return SimConfig(
        code=code,
        decoder=build_decoder_config(conf),
        sweep_db=sweep_db,
        metric=conf.get("channel.metric", "ebn0").lower(),
        max_frames=max_frames,
        min_block_errors=min_block_errors,
        master_seed=seed,
        workers=workers,
        uncoded_n=_to_int(conf["code.n"], "code.n")
        if code is None and "code.n" in conf else uncoded_n,
        turbo=build_turbo_settings(conf))
