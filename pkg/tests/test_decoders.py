import numpy as np
import pytest

from ordept import kernels
from ordept.channel import (ChannelParams, Frame, compute_llr,
                            frame_from_soft, frame_rng)
from ordept.codes import bch_code, crc_code, encode
from ordept.decoders import (ABANDONED, DECODED, DecoderConfig, analog_weight,
                             chase2_decode, decode, orbgrand_decode,
                             ordept_decode, ordeptx_decode,
                             query_list_for_decoder)
from ordept.errors import ConfigError, LengthMismatch
from ordept.patterns import generate_query_list, map_to_positions


def _all_codewords(code):
    words = []
    for v in range(1 << code.k):
        info = np.array([(v >> i) & 1 for i in range(code.k)], dtype=np.uint8)
        words.append(encode(code, info))
    return np.array(words)


def _exhaustive_cfg(code, **over):
    kw = dict(variant="ordept", q_max=1 << code.n, c_max=1 << code.n,
              threshold_t=1 << 20)
    kw.update(over)
    return DecoderConfig(**kw)


def _injected_frame(code, rng, low_rel=(), flipped=(), params=None):
    """Noise-free transmission with hand-placed errors for targeted cases."""
    params = params or ChannelParams.from_ebn0(20.0, rate=code.k / code.n)
    info = rng.integers(0, 2, size=code.k).astype(np.uint8)
    c = encode(code, info)
    y = (2.0 * c - 1.0) * (1.0 + 0.04 * rng.uniform(-1, 1, size=code.n))
    for j in flipped:
        y[j] = -1.5 * y[j]   # confident and wrong
    for j in low_rel:
        y[j] = -0.05 * y[j]  # barely wrong
    llr = compute_llr(y, params.sigma)
    return c, Frame(c=c, x=2.0 * c - 1.0, y=y, llr=llr,
                    w=(y >= 0).astype(np.uint8),
                    pi=np.argsort(np.abs(llr), kind="stable").astype(np.int32))


def test_clean_syndrome_shortcut(ebch64):
    c = encode(ebch64, np.zeros(ebch64.k, dtype=np.uint8))
    fr = frame_from_soft(2.0 * c - 1.0)
    cfg = DecoderConfig(variant="ordept")
    res = ordept_decode(fr, ebch64, query_list_for_decoder(ebch64, cfg), cfg)
    assert res.status == DECODED
    assert res.queries_used == 0 and res.shots_used == 0
    assert res.best.query_index == 0 and res.best.error_pattern == ()
    np.testing.assert_array_equal(res.best.codeword, c)


def test_exhaustive_search_agrees_with_ml(ebch8, make_frames):
    """With the full pattern space the winner must be the true ML codeword."""
    books = _all_codewords(ebch8)
    x_all = 2.0 * books - 1.0
    cfg = _exhaustive_cfg(ebch8)
    qlist = query_list_for_decoder(ebch8, cfg)
    for _, fr in make_frames(ebch8, 1.0, seed=101, count=500):
        res = ordept_decode(fr, ebch8, qlist, cfg)
        assert res.status == DECODED
        ml = books[np.argmin(((fr.y - x_all) ** 2).sum(axis=1))]
        np.testing.assert_array_equal(res.best.codeword, ml)


def test_exhaustive_search_enumerates_every_codeword(ebch8, make_frames):
    cfg = _exhaustive_cfg(ebch8)
    qlist = query_list_for_decoder(ebch8, cfg)
    books = {tuple(cw) for cw in _all_codewords(ebch8)}
    for _, fr in make_frames(ebch8, 2.0, seed=102, count=40):
        res = ordept_decode(fr, ebch8, qlist, cfg)
        if res.queries_used == 0:
            continue
        found = {tuple(c.codeword) for c in res.candidates}
        # every codeword of the tiny code shows up exactly once
        assert found == books
        assert len(res.candidates) == len(found)


def test_full_pattern_search_matches_naive_scan(make_frames):
    """Reference implementation: walk the canonical list, test membership."""
    code = bch_code(r=3, t=1, extended=False)  # Hamming (7,4)
    cfg = DecoderConfig(variant="orbgrand", q_max=128)
    qlist = generate_query_list(code.n, cfg.q_max)
    for _, fr in make_frames(code, 2.0, seed=103, count=300):
        res = orbgrand_decode(fr, code, qlist, cfg)
        expect = None
        for q, pat in enumerate(qlist.patterns, start=1):
            flips = sorted(map_to_positions(pat, fr.pi))
            word = fr.w.copy()
            word[flips] ^= 1
            if code.syndrome_int(word) == 0:
                expect = (q, tuple(flips))
                break
        assert expect is not None
        assert (res.queries_used, res.best.error_pattern) == expect
        assert len(res.candidates) == 1


def test_threshold_and_candidate_limit_stopping(bch256_t2, make_frames):
    cfg = DecoderConfig(variant="ordept", q_max=1024, c_max=2,
                        threshold_t=256)
    qlist = query_list_for_decoder(bch256_t2, cfg)
    seen_threshold = seen_limit = 0
    for _, fr in make_frames(bch256_t2, 3.0, seed=104, count=200):
        res = ordept_decode(fr, bch256_t2, qlist, cfg)
        if res.status != DECODED or res.queries_used == 0:
            continue
        last_hit = max(c.query_index for c in res.candidates)
        if len(res.candidates) == cfg.c_max:
            assert res.queries_used == last_hit
            seen_limit += 1
        elif res.queries_used < cfg.q_max:
            assert res.queries_used - last_hit == cfg.threshold_t
            seen_threshold += 1
    assert seen_threshold > 10 and seen_limit > 10


def test_zero_threshold_stops_at_first_hit(ebch64, make_frames):
    cfg = DecoderConfig(variant="ordept", q_max=256, c_max=4, threshold_t=0)
    qlist = query_list_for_decoder(ebch64, cfg)
    for _, fr in make_frames(ebch64, 3.0, seed=105, count=100):
        res = ordept_decode(fr, ebch64, qlist, cfg)
        if res.status == DECODED and res.queries_used:
            assert len(res.candidates) == 1
            assert res.queries_used == res.best.query_index


def test_single_candidate_limit(ebch64, make_frames):
    cfg = DecoderConfig(variant="ordept", q_max=256, c_max=1, threshold_t=64)
    qlist = query_list_for_decoder(ebch64, cfg)
    for _, fr in make_frames(ebch64, 3.0, seed=106, count=100):
        res = ordept_decode(fr, ebch64, qlist, cfg)
        if res.status == DECODED and res.queries_used:
            assert len(res.candidates) == 1
            assert res.queries_used == res.best.query_index


def test_batched_stops_on_shot_boundaries(bch256_t2, make_frames):
    base = dict(variant="ordept", q_max=512, c_max=3, threshold_t=16,
                shot_size=32)
    seq_cfg = DecoderConfig(**base)
    bat_cfg = DecoderConfig(batched=True, **base)
    qlist = query_list_for_decoder(bch256_t2, seq_cfg)
    for _, fr in make_frames(bch256_t2, 4.0, seed=107, count=150):
        seq = ordept_decode(fr, bch256_t2, qlist, seq_cfg)
        bat = ordept_decode(fr, bch256_t2, qlist, bat_cfg)
        if bat.queries_used and bat.queries_used < bat_cfg.q_max:
            assert bat.queries_used % bat_cfg.shot_size == 0
        assert bat.shots_used * bat_cfg.shot_size >= bat.queries_used
        assert bat.queries_used >= seq.queries_used
        # the batched run scans at least as far, so it keeps every hit
        seq_hits = {(c.query_index, c.error_pattern) for c in seq.candidates}
        bat_hits = {(c.query_index, c.error_pattern) for c in bat.candidates}
        assert seq_hits <= bat_hits


def test_duplicate_completions_collapse(ebch64):
    # both errors sit at ranks 1 and 2, so the same two-bit pattern arrives
    # twice: once per choice of which bit the table completes
    rng = frame_rng(108, 0)
    c, fr = _injected_frame(ebch64, rng, low_rel=(5, 20))
    cfg = DecoderConfig(variant="ordept", q_max=512, c_max=64,
                        threshold_t=512)
    res = ordept_decode(fr, ebch64, query_list_for_decoder(ebch64, cfg), cfg)
    pats = [cand.error_pattern for cand in res.candidates]
    assert len(pats) == len(set(pats))
    assert pats.count((5, 20)) == 1
    np.testing.assert_array_equal(res.best.codeword, c)


def test_candidates_are_codewords_with_consistent_metrics(bch256_t2,
                                                          make_frames):
    cfg = DecoderConfig(variant="ordept", q_max=512, c_max=4, threshold_t=64)
    qlist = query_list_for_decoder(bch256_t2, cfg)
    checked = 0
    for _, fr in make_frames(bch256_t2, 4.5, seed=109, count=60):
        res = ordept_decode(fr, bch256_t2, qlist, cfg)
        for cand in res.candidates:
            assert bch256_t2.syndrome_int(cand.codeword) == 0
            flipped = fr.w.copy()
            flipped[list(cand.error_pattern)] ^= 1
            np.testing.assert_array_equal(cand.codeword, flipped)
            ref_d = float(((fr.y - (2.0 * cand.codeword - 1.0)) ** 2).sum())
            assert cand.sq_distance == pytest.approx(ref_d, rel=1e-9)
            assert cand.analog_weight == pytest.approx(
                analog_weight(cand.error_pattern, fr.llr))
            checked += 1
        if res.status == DECODED:
            assert res.best.sq_distance == min(c.sq_distance
                                               for c in res.candidates)
    assert checked > 50


def test_abandonment_reports_no_candidates(bch256_t3, make_frames):
    cfg = DecoderConfig(variant="ordept", q_max=4, c_max=2, threshold_t=4)
    qlist = query_list_for_decoder(bch256_t3, cfg)
    hit = 0
    for _, fr in make_frames(bch256_t3, 0.0, seed=110, count=50):
        res = ordept_decode(fr, bch256_t3, qlist, cfg)
        if res.status == ABANDONED:
            assert res.best is None and res.candidates == []
            assert res.queries_used == cfg.q_max
            hit += 1
    assert hit > 5


def test_extended_completion_matches_unit_capability(bch256_t2, bch256_t3,
                                                     make_frames):
    """Completion capability one must reproduce the base decoder exactly."""
    for code, seed in ((bch256_t2, 111), (bch256_t3, 112)):
        base_cfg = DecoderConfig(variant="ordept", q_max=512, c_max=3,
                                 threshold_t=64)
        x1_cfg = DecoderConfig(variant="ordeptx", x=1, q_max=512, c_max=3,
                               threshold_t=64)
        qlist = query_list_for_decoder(code, base_cfg)
        for _, fr in make_frames(code, 4.0, seed=seed, count=300):
            a = ordept_decode(fr, code, qlist, base_cfg)
            b = ordeptx_decode(fr, code, qlist, x1_cfg)
            assert (a.status, a.queries_used, a.shots_used) == \
                (b.status, b.queries_used, b.shots_used)
            assert [(c.query_index, c.error_pattern) for c in a.candidates] \
                == [(c.query_index, c.error_pattern) for c in b.candidates]
            if a.status == DECODED:
                np.testing.assert_array_equal(a.best.codeword, b.best.codeword)


def test_zero_capability_matches_full_pattern_search(ebch64, make_frames):
    """x = 0 degenerates to a pure membership scan."""
    x0_cfg = DecoderConfig(variant="ordeptx", x=0, q_max=2048, c_max=1,
                           threshold_t=0, use_parity_split=False)
    og_cfg = DecoderConfig(variant="orbgrand", q_max=2048)
    qlist = generate_query_list(ebch64.n, 2048)
    for _, fr in make_frames(ebch64, 4.0, seed=113, count=300):
        a = ordeptx_decode(fr, ebch64, qlist, x0_cfg)
        b = orbgrand_decode(fr, ebch64, qlist, og_cfg)
        assert a.status == b.status
        if a.status == DECODED:
            np.testing.assert_array_equal(a.best.codeword, b.best.codeword)
        if ebch64.syndrome_int(fr.w) != 0:
            assert a.queries_used == b.queries_used
            if a.status == DECODED:
                assert a.best.query_index == b.best.query_index


def test_wider_completion_rescues_reliable_errors(bch256_t3):
    """Two confident errors are unreachable for x=1 inside a small budget but
    a single low-reliability query away for x=2."""
    x1 = DecoderConfig(variant="ordeptx", x=1, q_max=128, c_max=1,
                       threshold_t=0)
    x2 = DecoderConfig(variant="ordeptx", x=2, q_max=128, c_max=1,
                       threshold_t=0)
    q1 = query_list_for_decoder(bch256_t3, x1)
    q2 = query_list_for_decoder(bch256_t3, x2)
    for trial in range(25):
        rng = frame_rng(114, trial)
        pos = rng.choice(254, size=3, replace=False)
        c, fr = _injected_frame(bch256_t3, rng, low_rel=pos[:1],
                                flipped=pos[1:])
        res1 = ordeptx_decode(fr, bch256_t3, q1, x1)
        res2 = ordeptx_decode(fr, bch256_t3, q2, x2)
        assert res1.status == ABANDONED
        assert res2.status == DECODED and res2.queries_used == 2
        np.testing.assert_array_equal(res2.best.codeword, c)
        assert res2.best.error_pattern == tuple(sorted(int(j) for j in pos))


def test_variant_restrictions():
    crc = crc_code(0x107, 40)
    plain = bch_code(r=6, t=1, extended=False)
    fr = frame_from_soft(np.ones(crc.n))
    with pytest.raises(ConfigError):
        ordeptx_decode(fr, crc, None, DecoderConfig(variant="ordeptx", x=1))
    fr7 = frame_from_soft(np.ones(plain.n))
    with pytest.raises(ConfigError):
        ordeptx_decode(fr7, plain, None, DecoderConfig(variant="ordeptx", x=1))
    with pytest.raises(ConfigError):  # capability must stay below t
        ordeptx_decode(frame_from_soft(np.ones(256)), bch_code(r=8, t=2),
                       None, DecoderConfig(variant="ordeptx", x=2))
    with pytest.raises(ConfigError):
        chase2_decode(fr, crc, 4, DecoderConfig(variant="chase2"))
    with pytest.raises(ConfigError):
        DecoderConfig(variant="grand")
    with pytest.raises(ConfigError):
        DecoderConfig(q_max=0)
    with pytest.raises(ConfigError):
        DecoderConfig(variant="ordeptx", x=4)
    with pytest.raises(ConfigError):
        DecoderConfig(variant="chase2", chase_p=17)
    with pytest.raises(ConfigError):
        decode(fr, crc, None, DecoderConfig(variant="none"))


def test_chase_zero_flips_is_plain_bounded_distance(ebch64):
    rng = frame_rng(115, 0)
    c, fr = _injected_frame(ebch64, rng, flipped=(11,))
    cfg = DecoderConfig(variant="chase2", chase_p=0)
    res = chase2_decode(fr, ebch64, 0, cfg)
    assert res.status == DECODED and res.queries_used == 1
    assert res.best.error_pattern == (11,)
    np.testing.assert_array_equal(res.best.codeword, c)


def test_chase_flips_unreliable_positions(ebch64):
    """One barely-wrong bit plus one confident error: the confident error is
    beyond lone bounded-distance reach until the weak bit gets flipped."""
    for trial in range(20):
        rng = frame_rng(116, trial)
        pos = rng.choice(ebch64.n, size=2, replace=False)
        c, fr = _injected_frame(ebch64, rng, low_rel=pos[:1], flipped=pos[1:])
        cfg = DecoderConfig(variant="chase2", chase_p=4)
        res = chase2_decode(fr, ebch64, 4, cfg)
        assert res.queries_used == 16
        assert res.status == DECODED
        np.testing.assert_array_equal(res.best.codeword, c)
        pats = [cand.error_pattern for cand in res.candidates]
        assert len(pats) == len(set(pats))
        assert res.best.analog_weight == min(c_.analog_weight
                                             for c_ in res.candidates)


def test_chase_query_count_is_fixed(bch256_t2, make_frames):
    cfg = DecoderConfig(variant="chase2", chase_p=5)
    for _, fr in make_frames(bch256_t2, 5.0, seed=117, count=20):
        res = decode(fr, bch256_t2, None, cfg)
        assert res.queries_used == 32


@pytest.mark.skipif("compiled" not in kernels.available(),
                    reason="extension not built")
def test_backends_agree(bch256_t2, bch256_t3, ebch64, make_frames):
    cases = [
        (bch256_t2, DecoderConfig(variant="ordept", q_max=512, c_max=3,
                                  threshold_t=32)),
        (bch256_t2, DecoderConfig(variant="ordept", q_max=512, c_max=3,
                                  threshold_t=32, batched=True,
                                  shot_size=64)),
        (bch256_t2, DecoderConfig(variant="ordeptx", x=1, q_max=512,
                                  c_max=2, threshold_t=16)),
        (bch256_t3, DecoderConfig(variant="ordeptx", x=2, q_max=256,
                                  c_max=2, threshold_t=16)),
        (ebch64, DecoderConfig(variant="orbgrand", q_max=1024)),
    ]
    prev = kernels.active_name()
    try:
        for i, (code, cfg) in enumerate(cases):
            qlist = query_list_for_decoder(code, cfg)
            for _, fr in make_frames(code, 4.0, seed=118 + i, count=40):
                kernels.use("python")
                a = decode(fr, code, qlist, cfg)
                kernels.use("compiled")
                b = decode(fr, code, qlist, cfg)
                assert (a.status, a.queries_used, a.shots_used) == \
                    (b.status, b.queries_used, b.shots_used)
                assert [(c.query_index, c.error_pattern)
                        for c in a.candidates] == \
                    [(c.query_index, c.error_pattern) for c in b.candidates]
    finally:
        kernels.use(prev)


def test_backend_switch_rejects_unknown():
    with pytest.raises(ValueError):
        kernels.use("fortran")
    assert kernels.active_name() in kernels.available()


def test_query_list_sizing(ebch64):
    cfg = DecoderConfig(variant="ordept", q_max=500)
    ql = query_list_for_decoder(ebch64, cfg)
    for offset in (0, 1):
        even, odd = ql.split_by_parity(offset)
        assert min(len(even), len(odd)) >= 500
    og = DecoderConfig(variant="orbgrand", q_max=500)
    assert len(query_list_for_decoder(ebch64, og)) == 500
    assert query_list_for_decoder(ebch64,
                                  DecoderConfig(variant="chase2")) is None
    x2 = DecoderConfig(variant="ordeptx", x=2, q_max=500)
    assert len(query_list_for_decoder(ebch64, x2)) == 500


def test_frame_length_checked(ebch64):
    fr = frame_from_soft(np.ones(10))
    cfg = DecoderConfig(variant="ordept", q_max=16)
    with pytest.raises(LengthMismatch):
        ordept_decode(fr, ebch64, generate_query_list(10, 16), cfg)


def test_analog_weight_helper():
    llr = [1.5, -2.0, 0.5]
    assert analog_weight((0, 2), llr) == pytest.approx(2.0)
    assert analog_weight((), llr) == 0.0
