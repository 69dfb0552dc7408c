import hashlib
import io

import numpy as np
import pytest
from PIL import Image

from csidqa.jpeg import encode_grayscale_jpeg, scaled_quant_table


def fixed_test_image(size=64):
    rng = np.random.default_rng(123456789)
    smooth = np.add.outer(np.linspace(0, 200, size), np.linspace(0, 55, size))
    noise = rng.integers(0, 40, size=(size, size))
    return np.clip(smooth + noise, 0, 255).astype(np.uint8)


class TestEncoder:
    def test_deterministic_bytes(self):
        img = fixed_test_image()
        assert encode_grayscale_jpeg(img, 75) == encode_grayscale_jpeg(img, 75)

    def test_structure_markers(self):
        data = encode_grayscale_jpeg(fixed_test_image(), 75)
        assert data[:2] == b"\xFF\xD8" and data[-2:] == b"\xFF\xD9"
        for marker in (b"\xFF\xDB", b"\xFF\xC0", b"\xFF\xC4", b"\xFF\xDA"):
            assert marker in data

    @pytest.mark.parametrize("shape", [(8, 8), (64, 64), (1, 52), (13, 21), (52, 1)])
    @pytest.mark.parametrize("quality", [10, 50, 75, 95])
    def test_pillow_decodes_every_shape(self, shape, quality):
        rng = np.random.default_rng(hash(shape) % 2 ** 32)
        img = rng.integers(0, 256, size=shape, dtype=np.uint8)
        decoded = Image.open(io.BytesIO(encode_grayscale_jpeg(img, quality)))
        assert decoded.mode == "L"
        assert np.asarray(decoded).shape == shape

    def test_pillow_pixel_agreement_on_smooth_image(self):
        size = 64
        img = np.clip(np.add.outer(np.linspace(10, 240, size),
                                   np.linspace(0, 10, size)), 0, 255).astype(np.uint8)
        decoded = np.asarray(Image.open(io.BytesIO(encode_grayscale_jpeg(img, 95))))
        assert np.max(np.abs(decoded.astype(int) - img.astype(int))) <= 3

    def test_file_size_grows_with_quality(self):
        img = fixed_test_image()
        sizes = [len(encode_grayscale_jpeg(img, q)) for q in (10, 50, 90)]
        assert sizes[0] < sizes[1] < sizes[2]

    def test_pixel_range_validated(self):
        with pytest.raises(ValueError, match="0..255"):
            encode_grayscale_jpeg(np.array([[300.0]]))

    def test_quality_validated(self):
        with pytest.raises(ValueError, match="quality"):
            encode_grayscale_jpeg(fixed_test_image(), 0)

    def test_quant_table_scaling_rule(self):
        base = scaled_quant_table(50)
        assert base[0, 0] == 16  # quality 50 reproduces the base table
        assert np.all(scaled_quant_table(100) == 1)
        assert np.all(scaled_quant_table(1) >= base)

    def test_reference_hash_frozen(self):
        # guards the exact bitstream: any encoder change shows up here
        digest = hashlib.sha256(encode_grayscale_jpeg(fixed_test_image(), 75)).hexdigest()
        assert digest == REFERENCE_DIGEST


REFERENCE_DIGEST = "be9a029a6ce9e86e9ffd8f4b2ba71532b196f194e2c36c8ba7088eb0daf13a92"
