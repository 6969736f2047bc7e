import numpy as np
import pytest

from ispkit import ImageFormatError, load_image, save_image
from ispkit.imgio import decode_image, encode_png, encode_ppm, from_bytes, to_bytes


def rand_img(seed, shape=(7, 5, 3)):
    return np.random.default_rng(seed).random(shape)


class TestPpm:
    def test_single_pixel(self, tmp_path):
        path = tmp_path / "p.ppm"
        path.write_bytes(b"P6\n1 1\n255\n" + bytes([255, 0, 128]))
        img = load_image(path)
        np.testing.assert_allclose(img[0, 0], [1.0, 0.0, 128 / 255], atol=1e-12)

    def test_header_format(self):
        data = encode_ppm(rand_img(0, (3, 4, 3)))
        assert data.startswith(b"P6\n4 3\n255\n")

    def test_round_trip_quantization_bound(self, tmp_path):
        img = rand_img(1)
        path = tmp_path / "rt.ppm"
        save_image(img, path)
        back = load_image(path)
        assert np.max(np.abs(back - img)) <= 1 / 510 + 1e-12

    def test_truncated_payload(self, tmp_path):
        path = tmp_path / "bad.ppm"
        path.write_bytes(b"P6\n2 2\n255\n" + bytes(5))
        with pytest.raises(ImageFormatError, match="truncated"):
            load_image(path)

    def test_unsupported_maxval(self, tmp_path):
        path = tmp_path / "deep.ppm"
        path.write_bytes(b"P6\n1 1\n65535\n" + bytes(6))
        with pytest.raises(ImageFormatError, match="maxval"):
            load_image(path)

    def test_comment_in_header(self):
        img = decode_image(b"P6\n# a comment\n1 1\n255\n" + bytes([0, 255, 0]))
        np.testing.assert_allclose(img[0, 0], [0, 1, 0], atol=1e-12)


class TestPng:
    def test_round_trip(self, tmp_path):
        img = rand_img(2, (9, 6, 3))
        path = tmp_path / "rt.png"
        save_image(img, path)
        back = load_image(path)
        assert back.shape == img.shape
        assert np.max(np.abs(back - img)) <= 1 / 510 + 1e-12

    def test_png_ppm_agree(self, tmp_path):
        img = rand_img(3)
        p1 = tmp_path / "a.png"
        p2 = tmp_path / "a.ppm"
        save_image(img, p1)
        save_image(img, p2)
        np.testing.assert_array_equal(load_image(p1), load_image(p2))

    def test_garbage_rejected(self):
        with pytest.raises(ImageFormatError):
            decode_image(b"\xff\xd8\xff\xe0 not a png")

    def test_missing_file(self):
        with pytest.raises(FileNotFoundError):
            load_image("/nonexistent/image.png")

    def test_unsupported_save_format(self, tmp_path):
        with pytest.raises(ImageFormatError):
            save_image(rand_img(4), tmp_path / "x.bmp", fmt="bmp")


class TestQuantization:
    def test_one_maps_to_255(self):
        assert to_bytes(np.ones((1, 1, 3)))[0, 0, 0] == 255

    def test_half_rounds_to_even(self):
        # 0.5 * 255 = 127.5 -> 128 under round-half-to-even
        assert to_bytes(np.full((1, 1, 3), 0.5))[0, 0, 0] == 128

    def test_idempotent_on_representable(self):
        raw = np.arange(256, dtype=np.uint8).reshape(16, 16)
        raw = np.stack([raw] * 3, axis=-1)
        np.testing.assert_array_equal(to_bytes(from_bytes(raw)), raw)

    def test_out_of_range_clamped(self):
        assert to_bytes(np.full((1, 1, 3), 1.7))[0, 0, 0] == 255
        assert to_bytes(np.full((1, 1, 3), -0.3))[0, 0, 0] == 0
