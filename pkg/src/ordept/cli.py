"""Command-line front end.

One binary, five subcommands:

  sim-bler      Monte-Carlo BLER/BER sweep for a single code
  sim-product   product-code turbo sweep
  gen-patterns  emit a query list as text
  decode        decode LLR frames read from stdin
  latency       clock-cycle latency model

Exit codes: 0 success, 2 configuration/usage error, 3 I/O error.
"""

import argparse
import sys

import numpy as np

from . import sim
from .channel import frame_from_soft
from .decoders import decode as decode_frame
from .decoders import query_list_for_decoder
from .errors import CodingError, ConfigError
from .patterns import generate_query_list


def _load_config(path):
    if path is None:
        return {}
    with open(path) as fh:
        return sim.parse_config_text(fh.read())


def _write_out(path, content):
    if path is None:
        sys.stdout.write(content)
    else:
        with open(path, "w") as fh:
            fh.write(content)


def _parse_sweep(text):
    try:
        return tuple(float(p) for p in text.split(","))
    except ValueError:
        raise ConfigError(f"--snr expects comma-separated dB values, got {text!r}") from None


def _sim_config(args):
    conf = _load_config(args.config)
    if args.config is None:
        raise ConfigError("--config is required for simulation commands")
    return sim.build_sim_config(
        conf, _parse_sweep(args.snr), seed=args.seed, max_frames=args.frames,
        min_block_errors=args.min_block_errors, workers=args.workers)


def _cmd_sim_bler(args):
    records = sim.run_monte_carlo(_sim_config(args))
    _write_out(args.out, sim.emit_csv(records))
    return 0


def _cmd_sim_product(args):
    records = sim.run_product_monte_carlo(_sim_config(args))
    _write_out(args.out, sim.emit_csv(records))
    return 0


def _cmd_gen_patterns(args):
    qlist = generate_query_list(args.n, args.qmax)
    lines = [f"# n={args.n} qmax={args.qmax}"]
    lines += [",".join(str(r) for r in p.ranks) for p in qlist]
    _write_out(args.out, "\n".join(lines) + "\n")
    return 0


def _cmd_decode(args):
    conf = _load_config(args.config)
    if args.config is None:
        raise ConfigError("--config is required for decode")
    code = sim.build_code(conf)
    if code is None:
        raise ConfigError("decode requires a code, not 'uncoded'")
    cfg = sim.build_decoder_config(conf)
    qlist = query_list_for_decoder(code, cfg)
    out = []
    for ln, raw in enumerate(sys.stdin, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        values = np.array([float(v) for v in line.split()], dtype=np.float64)
        if values.size != code.n:
            raise ConfigError(f"stdin line {ln}: expected {code.n} values, got {values.size}")
        frame = frame_from_soft(values)
        res = decode_frame(frame, code, qlist, cfg)
        bits = res.best.codeword if res.best is not None else frame.w
        out.append(f"{res.status} {res.queries_used} {res.shots_used} "
                   f"{np.packbits(bits).tobytes().hex()}")
    _write_out(args.out, "\n".join(out) + "\n" if out else "")
    return 0


def _cmd_latency(args):
    cycles = sim.estimate_latency_cycles(args.qmax, args.shot_size, args.n,
                                         args.cmax)
    _write_out(args.out, f"{cycles}\n")
    return 0


def _add_sim_flags(p):
    p.add_argument("--config", metavar="FILE", help="key = value config file")
    p.add_argument("--seed", type=int, default=0, metavar="U64")
    p.add_argument("--snr", required=True, metavar="DB,DB,...",
                   help="sweep points in dB (interpreted per channel.metric)")
    p.add_argument("--frames", type=int, default=100_000, metavar="MAX")
    p.add_argument("--min-block-errors", type=int, default=100, metavar="COUNT")
    p.add_argument("--out", metavar="CSV", help="output path (default stdout)")
    p.add_argument("--workers", type=int, default=1, metavar="COUNT")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ordept", description="soft-decision decoding toolkit")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("sim-bler", help="Monte-Carlo error-rate sweep")
    _add_sim_flags(p)
    p.set_defaults(func=_cmd_sim_bler)

    p = subs.add_parser("sim-product", help="product-code turbo sweep")
    _add_sim_flags(p)
    p.set_defaults(func=_cmd_sim_product)

    p = subs.add_parser("gen-patterns", help="emit a query list as text")
    p.add_argument("--n", type=int, required=True, help="code length")
    p.add_argument("--qmax", type=int, required=True, help="number of patterns")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=_cmd_gen_patterns)

    p = subs.add_parser("decode", help="decode LLR frames from stdin")
    p.add_argument("--config", metavar="FILE", required=True)
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=_cmd_decode)

    p = subs.add_parser("latency", help="clock-cycle latency model")
    p.add_argument("--qmax", type=int, required=True)
    p.add_argument("--shot-size", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--cmax", type=int, default=None,
                   help="candidate count (multi-candidate decoders)")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=_cmd_latency)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"ordept: config error: {exc}", file=sys.stderr)
        return 2
    except CodingError as exc:
        print(f"ordept: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"ordept: invalid input: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"ordept: i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
