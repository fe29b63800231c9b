import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from utccs.cipher import (
    DEFAULT_KEYS,
    KEY_NAMES,
    KeySet,
    PermutationPlan,
    bit_reverse,
    bit_reverse8,
    bitplane_flip,
    confuse,
    decrypt,
    decrypt_image,
    derive_permutation,
    diffuse,
    diffusion_keystream,
    encrypt,
    encrypt_image,
    flatten_color,
    split_color,
    undiffuse,
    unconfuse,
)

key_value = st.floats(0.001, 0.999)
keysets = st.builds(KeySet, *(key_value for _ in KEY_NAMES))
shapes = st.tuples(st.integers(1, 9), st.integers(1, 9))


def images(shape):
    return arrays(np.uint8, shape)


@st.composite
def image_and_plan(draw):
    m, n = draw(shapes)
    img = draw(images((m, n)))
    h1 = draw(arrays(np.int64, (m, n), elements=st.integers(1, m)))
    h2 = draw(arrays(np.int64, (m, n), elements=st.integers(1, n)))
    return img, PermutationPlan(h1, h2)


@given(image_and_plan())
def test_confusion_preserves_multiset(case):
    img, plan = case
    out = confuse(img, plan)
    assert sorted(out.ravel().tolist()) == sorted(img.ravel().tolist())


@given(image_and_plan())
def test_unconfuse_inverts_confuse(case):
    img, plan = case
    assert np.array_equal(unconfuse(confuse(img, plan), plan), img)


def test_confuse_swap_order():
    img = np.array([[1, 2], [3, 4]], dtype=np.uint8)
    # swaps in row-major order: (0,0)<->(1,1), (0,1)<->(0,0), (1,0)<->(1,0), (1,1)<->(0,1)
    plan = PermutationPlan(np.array([[2, 1], [2, 1]]), np.array([[2, 1], [1, 2]]))
    t = [1, 2, 3, 4]
    for p, q in enumerate([3, 0, 2, 1]):
        t[p], t[q] = t[q], t[p]
    assert confuse(img, plan).ravel().tolist() == t


@given(st.tuples(st.integers(1, 12), st.integers(1, 12)).flatmap(images))
def test_bitplane_flip_is_involution(img):
    assert np.array_equal(bitplane_flip(bitplane_flip(img)), img)


def test_bitplane_flip_planes():
    img = np.zeros((2, 3), dtype=np.uint8)
    img[0, 0] = 0b11  # plane 0 and plane 1 set at the corner
    out = bitplane_flip(img)
    assert out[1, 0] == 0b01  # even plane mirrored top-bottom
    assert out[0, 2] == 0b10  # odd plane mirrored left-right


def test_bit_reverse8():
    assert bit_reverse8(0) == 0
    assert bit_reverse8(255) == 255
    assert bit_reverse8(1) == 128
    assert bit_reverse8(6) == 96
    assert bit_reverse8(0b11010010) == 0b01001011
    assert all(bit_reverse8(bit_reverse8(v)) == v for v in range(256))


def test_bit_reverse_minimal_width():
    assert bit_reverse(0) == 0
    assert bit_reverse(1) == 1
    assert bit_reverse(6) == 3
    assert bit_reverse(0b11010010) == 0b01001011
    assert bit_reverse(0b10000) == 1
    for v in range(256):
        digits = bin(v)[2:]
        assert bit_reverse(v) == int(digits[::-1], 2)
        # odd values keep their width, so reversal is undone
        if v & 1:
            assert bit_reverse(bit_reverse(v)) == v


def test_one_bit_change_avalanches_through_diffusion():
    rng = np.random.default_rng(3)
    n = 64 * 64
    rates = []
    for _ in range(40):
        s = rng.integers(0, 256, (64, 64), dtype=np.uint8)
        u = rng.integers(0, 256, 2 * n)
        t = s.copy().ravel()
        t[rng.integers(n)] ^= np.uint8(1 << int(rng.integers(8)))
        a = diffuse(s, 0.5, 0.5, u)
        b = diffuse(t.reshape(64, 64), 0.5, 0.5, u)
        rates.append(np.mean(a != b))
    assert np.mean(rates) > 0.995


@given(st.integers(1, 40).flatmap(lambda n: st.tuples(images((1, n)), arrays(np.int64, 2 * n, elements=st.integers(0, 255)))))
def test_undiffuse_inverts_diffuse_any_keystream(case):
    img, u = case
    assert np.array_equal(undiffuse(diffuse(img, 0.5, 0.5, u), 0.5, 0.5, u), img)


def test_diffuse_by_hand():
    s = [10, 200, 33]
    u = [5, 6, 7, 8, 9, 250]
    g = [s[0] ^ u[0]]
    for i in (1, 2):
        g.append(s[i] ^ u[i] ^ int(bin(g[-1])[2:][::-1], 2))
    q = [0, 0, 0]
    q[2] = ((g[2] + g[0]) % 256) ^ u[5]
    for i in (1, 0):
        q[i] = ((g[i] + q[i + 1]) % 256) ^ u[i + 3]
    got = diffuse(np.array([s], dtype=np.uint8), 0.5, 0.5, np.array(u))
    assert got.ravel().tolist() == q


def test_single_pixel_seed_is_zero():
    u = np.array([17, 99])
    got = diffuse(np.array([[42]], dtype=np.uint8), 0.5, 0.5, u)
    assert got[0, 0] == ((42 ^ 17) + 0) % 256 ^ 99
    for v in range(256):
        img = np.array([[v]], dtype=np.uint8)
        assert undiffuse(diffuse(img, 0.5, 0.5, u), 0.5, 0.5, u)[0, 0] == v


def test_diffusion_keystream_length_and_range():
    u = diffusion_keystream(0.3, 0.7, 50)
    assert len(u) == 100
    assert u.min() >= 0 and u.max() < 256


def test_permutation_ranges():
    plan = derive_permutation(0.1, 0.2, 0.3, 0.4, 5, 7)
    assert plan.shape == (5, 7)
    assert plan.h1.min() >= 1 and plan.h1.max() <= 5
    assert plan.h2.min() >= 1 and plan.h2.max() <= 7


@given(shapes.flatmap(images), keysets)
def test_roundtrip_random(img, keys):
    assert np.array_equal(decrypt(encrypt(img, keys), keys), img)


@pytest.mark.parametrize("shape", [(1, 1), (1, 7), (7, 1), (3, 5)])
def test_roundtrip_degenerate(shape):
    img = np.random.default_rng(0).integers(0, 256, shape, dtype=np.uint8)
    assert np.array_equal(decrypt(encrypt(img, DEFAULT_KEYS), DEFAULT_KEYS), img)


def test_color_roundtrip_and_stacking():
    rng = np.random.default_rng(1)
    img = rng.integers(0, 256, (6, 5, 3), dtype=np.uint8)
    flat = flatten_color(img)
    assert flat.shape == (18, 5)
    assert np.array_equal(flat[6:12], img[:, :, 1])
    assert np.array_equal(split_color(flat), img)
    assert np.array_equal(flatten_color([img[:, :, c] for c in range(3)]), flat)
    c = encrypt_image(img, DEFAULT_KEYS)
    assert c.shape == img.shape
    assert np.array_equal(decrypt_image(c, DEFAULT_KEYS), img)


def test_wrong_key_fails_to_decrypt():
    img = np.random.default_rng(2).integers(0, 256, (16, 16), dtype=np.uint8)
    c = encrypt(img, DEFAULT_KEYS)
    for name in KEY_NAMES:
        wrong = DEFAULT_KEYS.perturbed(name, 1e-6)
        assert not np.array_equal(decrypt(c, wrong), img)


def test_cipher_changes_constant_image():
    img = np.zeros((32, 32), dtype=np.uint8)
    c = encrypt(img, DEFAULT_KEYS)
    assert len(np.unique(c)) > 200


def test_keyset_validation_and_io(tmp_path):
    with pytest.raises(ValueError):
        KeySet(0.0, 0.5, 0.5, 0.5, 0.5, 0.5)
    with pytest.raises(ValueError):
        KeySet(0.5, 0.5, 0.5, 0.5, 0.5, 1.0)
    with pytest.raises(ValueError):
        KeySet(0.5, 0.5, 0.5, 0.5, 0.5, float("nan"))
    with pytest.raises(ValueError):
        DEFAULT_KEYS.perturbed("r3", 0.5)
    p = tmp_path / "k.txt"
    p.write_text("# keys\n" + DEFAULT_KEYS.to_text())
    assert KeySet.from_file(p) == DEFAULT_KEYS
    # full float precision survives the text form
    k = KeySet(0.1 + 2**-55, 0.2, 0.3, 0.4, 0.5, 0.6)
    assert KeySet.parse(k.to_text()) == k
    with pytest.raises(ValueError):
        KeySet.parse("0.1 0.2")


def test_encrypt_rejects_bad_input():
    with pytest.raises(ValueError):
        encrypt(np.zeros((0, 3), dtype=np.uint8), DEFAULT_KEYS)
    with pytest.raises(ValueError):
        encrypt(np.full((2, 2), 300), DEFAULT_KEYS)
