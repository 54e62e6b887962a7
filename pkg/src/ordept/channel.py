"""BPSK over AWGN: modulation, LLRs, hard decisions, reliability ordering.

Noise is drawn by inverse-CDF transform (scipy.special.ndtri) of open-interval
uniforms so that a given counter-based stream reproduces bit-identically across
platforms.  Per-frame streams come from a Philox generator keyed by
(master_seed, frame_index).
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.special import ndtri

_U53 = 1 << 53


@dataclass(frozen=True)
class ChannelParams:
    """AWGN operating point; sigma = sqrt(1 / (2 * rate * 10^(ebn0_db/10)))."""

    sigma: float
    ebn0_db: float
    rate: float

    @classmethod
    def from_ebn0(cls, ebn0_db, rate):
        sigma = math.sqrt(1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0)))
        return cls(sigma=sigma, ebn0_db=ebn0_db, rate=rate)

    @classmethod
    def from_esn0(cls, esn0_db, rate):
        """Symbol-energy convention: Es/N0 = rate * Eb/N0 for BPSK."""
        return cls.from_ebn0(esn0_db - 10.0 * math.log10(rate), rate)

    @property
    def esn0_db(self):
        return self.ebn0_db + 10.0 * math.log10(self.rate)


@dataclass
class Frame:
    """One transmitted word plus everything the decoders consume."""

    c: np.ndarray    # transmitted bits
    x: np.ndarray    # BPSK symbols 2c - 1
    y: np.ndarray    # channel outputs
    llr: np.ndarray  # 2y / sigma^2
    w: np.ndarray    # hard decisions
    pi: np.ndarray   # positions ordered by |llr| ascending (0-based)


def frame_rng(master_seed, frame_index):
    """Independent per-frame stream: Philox keyed by (seed, frame index)."""
    key = np.array([master_seed, frame_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def gaussian(rng, size, sigma):
    """Inverse-CDF Gaussian sampling from uniforms strictly inside (0, 1)."""
    u = (rng.integers(0, _U53, size=size).astype(np.float64) + 0.5) / _U53
    return ndtri(u) * sigma


def compute_llr(y, sigma):
    return 2.0 * np.asarray(y, dtype=np.float64) / (sigma * sigma)


def hard_decision(y):
    """sign(0) = +1: exactly-zero outputs decide bit 1."""
    return (np.asarray(y) >= 0).astype(np.uint8)


def reliability_permutation(llr):
    """Positions sorted by |llr| ascending; ties keep the lower index first."""
    return np.argsort(np.abs(llr), kind="stable").astype(np.int32)


def transmit(c, params, rng):
    c = np.asarray(c, dtype=np.uint8)
    x = 2.0 * c - 1.0
    y = x + gaussian(rng, c.size, params.sigma)
    llr = compute_llr(y, params.sigma)
    w = hard_decision(y)
    return Frame(c=c, x=x, y=y, llr=llr, w=w, pi=reliability_permutation(llr))


def frame_from_soft(y_soft, reference=None):
    """Frame over existing soft values (turbo half-iterations, CLI decode).

    The soft values serve directly as LLRs; orderings and candidate selection
    are invariant to the positive scale factor this drops.
    """
    y = np.asarray(y_soft, dtype=np.float64)
    w = hard_decision(y)
    return Frame(c=reference, x=None, y=y, llr=y, w=w,
                 pi=reliability_permutation(y))
