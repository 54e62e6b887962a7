"""Timing comparison of the scan-kernel backends on a fixed workload.

Usage: python3 benchmarks/bench_kernels.py [--frames N] [--ebn0 DB]

Decodes the same seeded frames with the pure-Python and (if built) compiled
kernels and prints per-frame times.  Also asserts the outputs agree, so a
mismatch shows up here long before a BLER curve looks wrong.
"""

import argparse
import time

import numpy as np

from ordept import kernels
from ordept.channel import ChannelParams, frame_rng, transmit
from ordept.codes import bch_code, encode
from ordept.decoders import DecoderConfig, decode, query_list_for_decoder

CASES = (
    ("ordept (256,239)", bch_code(r=8, t=2),
     DecoderConfig(variant="ordept", q_max=1 << 11, c_max=3, threshold_t=256)),
    ("ordeptx x=2 (256,231)", bch_code(r=8, t=3),
     DecoderConfig(variant="ordeptx", x=2, q_max=1 << 10, c_max=3,
                   threshold_t=256)),
    ("orbgrand (128,113)", bch_code(r=7, t=2),
     DecoderConfig(variant="orbgrand", q_max=1 << 12)),
)


def run_case(code, cfg, frames, ebn0, backend):
    qlist = query_list_for_decoder(code, cfg)
    params = ChannelParams.from_ebn0(ebn0, rate=code.k / code.n)
    prev = kernels.use(backend)
    fingerprint = 0
    try:
        t0 = time.perf_counter()
        for f in range(frames):
            rng = frame_rng(1234, f)
            info = rng.integers(0, 2, size=code.k).astype(np.uint8)
            fr = transmit(encode(code, info), params, rng)
            res = decode(fr, code, qlist, cfg)
            fingerprint += res.queries_used * 31 + len(res.candidates)
        elapsed = time.perf_counter() - t0
    finally:
        kernels.use(prev)
    return elapsed, fingerprint


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--frames", type=int, default=400)
    ap.add_argument("--ebn0", type=float, default=4.0)
    args = ap.parse_args()

    backends = kernels.available()
    print(f"backends: {', '.join(backends)}   frames per case: {args.frames}")
    header = f"{'case':<24}" + "".join(f"{b:>14}" for b in backends)
    if "compiled" in backends:
        header += f"{'speedup':>10}"
    print(header)
    for label, code, cfg in CASES:
        times = {}
        prints = {}
        for b in backends:
            elapsed, fp = run_case(code, cfg, args.frames, args.ebn0, b)
            times[b], prints[b] = elapsed, fp
        assert len(set(prints.values())) == 1, f"backend mismatch on {label}"
        row = f"{label:<24}"
        for b in backends:
            row += f"{1e3 * times[b] / args.frames:>11.3f} ms"
        if "compiled" in backends:
            row += f"{times['python'] / times['compiled']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
