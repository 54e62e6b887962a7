"""Soft-decision decoding toolkit: ORDEPT-family decoders, ORBGRAND and
Chase II baselines, Chase-Pyndiah turbo product decoding, and a seeded
Monte-Carlo simulation harness."""

from .channel import ChannelParams, Frame, frame_from_soft, frame_rng, transmit
from .codes import (LinearCode, bch_code, bch_hard_decode, crc_code, encode,
                    load_parity_check, save_parity_check, syndrome)
from .decoders import (ABANDONED, DECODED, Candidate, DecodeResult,
                       DecoderConfig, analog_weight, chase2_decode, decode,
                       orbgrand_decode, ordept_decode, ordeptx_decode,
                       query_list_for_decoder)
from .errors import (CapacityExceeded, CodingError, ConfigError,
                     DegenerateDims, DimensionMismatch, EmptyCandidateList,
                     LengthMismatch, MalformedHeader, NonPrimitivePolynomial,
                     RankDeficient, RankOutOfRange, RowLengthMismatch)
from .gf import GaloisField, gf_build, gf_mul
from .patterns import Pattern, QueryList, generate_query_list, logistic_weight, map_to_positions
from .sim import (SimConfig, SimRecord, TurboSettings, emit_csv,
                  estimate_latency_cycles, run_monte_carlo,
                  run_product_monte_carlo)
from .turbo import (AdaptiveParams, AdaptiveSchedule, FactorSchedule,
                    ProductCodeword, adaptive_hybrid_factors, product_encode,
                    product_decode_iterative, pyndiah_update)

__version__ = "0.1.0"
