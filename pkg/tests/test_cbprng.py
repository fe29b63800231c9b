import io

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from utccs.cbprng import (
    DEMO_PARAMS,
    LCG_A,
    LCG_B,
    LCG_M,
    Cbprng,
    chaotic_to_int,
    generator_spec,
    lcg_next,
    widen_lcg,
)
from utccs.maps import Utf, iterate_orbit


@pytest.mark.parametrize("y,want", [(0, 12345), (1, 1103527590), (1 << 30, 1073754169)])
def test_lcg_vectors(y, want):
    assert lcg_next(y) == want
    assert (LCG_A * y + LCG_B) % LCG_M == want


@given(st.integers(0, LCG_M - 1))
def test_lcg_stays_31_bit(y):
    assert 0 <= lcg_next(y) < LCG_M


@given(st.integers(0, LCG_M - 1))
def test_widen_32_takes_leading_bits(y):
    y1 = lcg_next(y)
    y2 = lcg_next(y1)
    new_y, q = widen_lcg(y, 32)
    assert new_y == y2
    assert q == (y1 << 1) | (y2 >> 30)
    assert q < 1 << 32


@given(st.integers(0, LCG_M - 1))
def test_widen_64_concatenates_three_words(y):
    y1 = lcg_next(y)
    y2 = lcg_next(y1)
    y3 = lcg_next(y2)
    new_y, q = widen_lcg(y, 64)
    assert new_y == y3
    assert q == ((y1 << 62) | (y2 << 31) | y3) >> 29
    assert q < 1 << 64


def test_chaotic_to_int():
    assert chaotic_to_int(0.0) == 0
    assert chaotic_to_int(0.5) == 1 << 31
    assert chaotic_to_int(np.nextafter(1.0, 0.0)) == (1 << 32) - 1
    assert chaotic_to_int(0.25, 64) == 1 << 62
    with pytest.raises(ValueError):
        chaotic_to_int(1.0)


def test_first_word_by_hand():
    x0, r = DEMO_PARAMS["lscm"]
    g = Cbprng("lscm", x0, r)
    x1 = iterate_orbit(generator_spec("lscm", r), x0, 1).states[0]
    y = int(x0 * LCG_M)
    y1 = lcg_next(y)
    y2 = lcg_next(y1)
    q = (y1 << 1) | (y2 >> 30)
    assert g.next_word() == int(x1 * 2**32) ^ q


def test_generator_uses_slope8():
    assert generator_spec("tlcm", 0.3).utf is Utf.TENT_SLOPE8


@pytest.mark.parametrize("k", [32, 64])
@pytest.mark.parametrize("name", sorted(DEMO_PARAMS))
def test_words_match_next_word(name, k):
    x0, r = DEMO_PARAMS[name]
    a = Cbprng(name, x0, r, k)
    b = Cbprng(name, x0, r, k)
    fast = a.words(500)
    slow = [b.next_word() for _ in range(500)]
    assert fast.tolist() == slow
    assert a.words(3).tolist() == [b.next_word() for _ in range(3)]
    assert all(v < 1 << k for v in slow)


def test_copy_forks_independent_state():
    g = Cbprng("stcm", 0.3, 0.6)
    g.next_word()
    h = g.copy()
    assert h.next_word() == g.next_word()
    h.next_word()
    assert h.next_word() != g.next_word()


def test_reproducible_and_seed_sensitive():
    a = Cbprng("lscm", 0.4584, 0.6541).words(100)
    b = Cbprng("lscm", 0.4584, 0.6541).words(100)
    c = Cbprng("lscm", 0.4584 + 2**-40, 0.6541).words(100)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


@pytest.mark.parametrize("x0,r,k", [(0.0, 0.5, 32), (1.0, 0.5, 32), (0.5, 1.5, 32), (0.5, 0.5, 48)])
def test_invalid_parameters(x0, r, k):
    with pytest.raises(ValueError):
        Cbprng("lscm", x0, r, k)


def test_fill_matrix_row_major():
    m = Cbprng("tlcm", 0.2, 0.4).fill_matrix(3, 5, 7)
    w = Cbprng("tlcm", 0.2, 0.4).words(15) % 7
    assert m.shape == (3, 5)
    assert m.ravel().tolist() == w.tolist()


@pytest.mark.parametrize("k,fmt", [(32, ">u4"), (64, ">u8")])
def test_bitstream_is_msb_first(k, fmt):
    buf = io.BytesIO()
    n = Cbprng("lscm", 0.4584, 0.6541, k).emit_bitstream(8 * 1000, buf)
    assert n == 1000 == len(buf.getvalue())
    words = Cbprng("lscm", 0.4584, 0.6541, k).words(1000 // (k // 8) + 1)
    assert buf.getvalue() == words.astype(fmt).tobytes()[:1000]


def test_bitstream_size_and_partial_word():
    buf = io.BytesIO()
    assert Cbprng("stcm", 0.4584, 0.9335).emit_bitstream(1 << 20, buf) == 131072
    buf = io.BytesIO()
    assert Cbprng("stcm", 0.4584, 0.9335).emit_bitstream(24, buf) == 3
    with pytest.raises(ValueError):
        Cbprng("stcm", 0.4584, 0.9335).emit_bitstream(12, io.BytesIO())
