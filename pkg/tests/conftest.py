import numpy as np
import pytest

from ordept.channel import ChannelParams, frame_rng, transmit
from ordept.codes import bch_code, encode


@pytest.fixture(scope="session")
def ebch8():
    return bch_code(r=3, t=1)  # extended Hamming (8,4)


@pytest.fixture(scope="session")
def ebch16():
    return bch_code(r=4, t=1)


@pytest.fixture(scope="session")
def ebch64():
    return bch_code(r=6, t=1)


@pytest.fixture(scope="session")
def bch256_t2():
    return bch_code(r=8, t=2)  # eBCH(256,239)


@pytest.fixture(scope="session")
def bch256_t3():
    return bch_code(r=8, t=3)  # eBCH(256,231)


@pytest.fixture
def make_frames():
    """Factory: yields (codeword, frame) pairs from seeded noisy transmissions."""

    def factory(code, ebn0_db, seed, count):
        params = ChannelParams.from_ebn0(ebn0_db, rate=code.k / code.n)
        for f in range(count):
            rng = frame_rng(seed, f)
            info = rng.integers(0, 2, size=code.k).astype(np.uint8)
            c = encode(code, info)
            yield c, transmit(c, params, rng)

    return factory
