"""Minimal baseline JPEG encoder for 8-bit grayscale images.

Self-contained so encoded byte counts are reproducible across platforms:
8x8 block DCT, the standard luminance quantization table scaled by the
usual quality rule, the standard DC/AC luminance Huffman tables, no chroma
and no subsampling. Images whose sides are not multiples of 8 are padded
by edge replication. Only encoding is provided; tests decode with an
external library to cross-check the bitstream.
"""

from __future__ import annotations

import numpy as np

_QUANT_LUMA = np.array([
    [16, 11, 10, 16, 24, 40, 51, 61],
    [12, 12, 14, 19, 26, 58, 60, 55],
    [14, 13, 16, 24, 40, 57, 69, 56],
    [14, 17, 22, 29, 51, 87, 80, 62],
    [18, 22, 37, 56, 68, 109, 103, 77],
    [24, 35, 55, 64, 81, 104, 113, 92],
    [49, 64, 78, 87, 103, 121, 120, 101],
    [72, 92, 95, 98, 112, 100, 103, 99],
], dtype=np.int64)

_DC_BITS = (0, 1, 5, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0)
_DC_VALUES = tuple(range(12))

_AC_BITS = (0, 2, 1, 3, 3, 2, 4, 3, 5, 5, 4, 4, 0, 0, 1, 125)
_AC_VALUES = (
    0x01, 0x02, 0x03, 0x00, 0x04, 0x11, 0x05, 0x12,
    0x21, 0x31, 0x41, 0x06, 0x13, 0x51, 0x61, 0x07,
    0x22, 0x71, 0x14, 0x32, 0x81, 0x91, 0xA1, 0x08,
    0x23, 0x42, 0xB1, 0xC1, 0x15, 0x52, 0xD1, 0xF0,
    0x24, 0x33, 0x62, 0x72, 0x82, 0x09, 0x0A, 0x16,
    0x17, 0x18, 0x19, 0x1A, 0x25, 0x26, 0x27, 0x28,
    0x29, 0x2A, 0x34, 0x35, 0x36, 0x37, 0x38, 0x39,
    0x3A, 0x43, 0x44, 0x45, 0x46, 0x47, 0x48, 0x49,
    0x4A, 0x53, 0x54, 0x55, 0x56, 0x57, 0x58, 0x59,
    0x5A, 0x63, 0x64, 0x65, 0x66, 0x67, 0x68, 0x69,
    0x6A, 0x73, 0x74, 0x75, 0x76, 0x77, 0x78, 0x79,
    0x7A, 0x83, 0x84, 0x85, 0x86, 0x87, 0x88, 0x89,
    0x8A, 0x92, 0x93, 0x94, 0x95, 0x96, 0x97, 0x98,
    0x99, 0x9A, 0xA2, 0xA3, 0xA4, 0xA5, 0xA6, 0xA7,
    0xA8, 0xA9, 0xAA, 0xB2, 0xB3, 0xB4, 0xB5, 0xB6,
    0xB7, 0xB8, 0xB9, 0xBA, 0xC2, 0xC3, 0xC4, 0xC5,
    0xC6, 0xC7, 0xC8, 0xC9, 0xCA, 0xD2, 0xD3, 0xD4,
    0xD5, 0xD6, 0xD7, 0xD8, 0xD9, 0xDA, 0xE1, 0xE2,
    0xE3, 0xE4, 0xE5, 0xE6, 0xE7, 0xE8, 0xE9, 0xEA,
    0xF1, 0xF2, 0xF3, 0xF4, 0xF5, 0xF6, 0xF7, 0xF8,
    0xF9, 0xFA,
)


def _zigzag_order() -> list[tuple[int, int]]:
    out = []
    for d in range(15):
        rows = list(range(max(0, d - 7), min(d, 7) + 1))
        if d % 2 == 0:
            rows.reverse()
        out.extend((r, d - r) for r in rows)
    return out


_ZIGZAG = _zigzag_order()


def _dct_basis() -> np.ndarray:
    k = np.arange(8)
    basis = 0.5 * np.cos((2 * k[None, :] + 1) * k[:, None] * np.pi / 16)
    basis[0, :] /= np.sqrt(2.0)
    return basis


_DCT = _dct_basis()


def _build_codes(bits, values) -> dict[int, tuple[int, int]]:
    codes = {}
    code = 0
    idx = 0
    for length in range(1, 17):
        for _ in range(bits[length - 1]):
            codes[values[idx]] = (code, length)
            code += 1
            idx += 1
        code <<= 1
    return codes


_DC_CODES = _build_codes(_DC_BITS, _DC_VALUES)
_AC_CODES = _build_codes(_AC_BITS, _AC_VALUES)


class _BitWriter:
    """Accumulates big-endian bits; stuffs 0x00 after any emitted 0xFF."""

    def __init__(self):
        self.buf = bytearray()
        self.acc = 0
        self.nbits = 0

    def write(self, value: int, length: int) -> None:
        if length == 0:
            return
        self.acc = (self.acc << length) | (value & ((1 << length) - 1))
        self.nbits += length
        while self.nbits >= 8:
            byte = (self.acc >> (self.nbits - 8)) & 0xFF
            self.buf.append(byte)
            if byte == 0xFF:
                self.buf.append(0x00)
            self.nbits -= 8
        self.acc &= (1 << self.nbits) - 1

    def flush(self) -> None:
        if self.nbits:
            pad = 8 - self.nbits
            self.write((1 << pad) - 1, pad)


def scaled_quant_table(quality: int) -> np.ndarray:
    """Standard luminance table scaled by the common quality rule, clamped to [1, 255]."""
    if not 1 <= int(quality) <= 100:
        raise ValueError(f"quality must be in 1..100, got {quality}")
    quality = int(quality)
    scale = 5000 // quality if quality < 50 else 200 - 2 * quality
    table = (_QUANT_LUMA * scale + 50) // 100
    return np.clip(table, 1, 255)


def _magnitude_bits(value: int) -> tuple[int, int]:
    """JPEG magnitude category and value bits (one's complement for negatives)."""
    if value == 0:
        return 0, 0
    size = int(abs(value)).bit_length()
    bits = value if value > 0 else value + (1 << size) - 1
    return size, bits


def _marker(tag: int, payload: bytes) -> bytes:
    return bytes([0xFF, tag]) + (len(payload) + 2).to_bytes(2, "big") + payload


def encode_grayscale_jpeg(image: np.ndarray, quality: int = 75) -> bytes:
    """Encode an 8-bit grayscale image as a baseline JFIF/JPEG byte string."""
    img = np.asarray(image)
    if img.ndim != 2 or img.size == 0:
        raise ValueError(f"expected a non-empty 2-D image, got shape {img.shape}")
    if img.dtype != np.uint8:
        if np.any(img < 0) or np.any(img > 255):
            raise ValueError("pixel values must lie in 0..255")
        img = img.astype(np.uint8)
    height, width = img.shape
    if max(height, width) > 0xFFFF:
        raise ValueError("image too large for JPEG headers")

    pad_r = (-height) % 8
    pad_c = (-width) % 8
    if pad_r or pad_c:
        img = np.pad(img, ((0, pad_r), (0, pad_c)), mode="edge")

    qtable = scaled_quant_table(quality)
    qfloat = qtable.astype(np.float64)

    writer = _BitWriter()
    prev_dc = 0
    for br in range(0, img.shape[0], 8):
        for bc in range(0, img.shape[1], 8):
            block = img[br:br + 8, bc:bc + 8].astype(np.float64) - 128.0
            coef = _DCT @ block @ _DCT.T
            quant = np.rint(coef / qfloat).astype(np.int64)

            diff = int(quant[0, 0]) - prev_dc
            prev_dc = int(quant[0, 0])
            size, bits = _magnitude_bits(diff)
            code, length = _DC_CODES[size]
            writer.write(code, length)
            writer.write(bits, size)

            run = 0
            for r, c in _ZIGZAG[1:]:
                val = int(quant[r, c])
                if val == 0:
                    run += 1
                    continue
                while run > 15:
                    code, length = _AC_CODES[0xF0]  # sixteen zeros
                    writer.write(code, length)
                    run -= 16
                size, bits = _magnitude_bits(val)
                code, length = _AC_CODES[(run << 4) | size]
                writer.write(code, length)
                writer.write(bits, size)
                run = 0
            if run:
                code, length = _AC_CODES[0x00]  # end of block
                writer.write(code, length)
    writer.flush()

    zig_q = bytes(int(qtable[r, c]) for r, c in _ZIGZAG)
    out = bytearray()
    out += b"\xFF\xD8"  # SOI
    out += _marker(0xE0, b"JFIF\x00" + bytes([1, 1, 0, 0, 1, 0, 1, 0, 0]))
    out += _marker(0xDB, b"\x00" + zig_q)
    out += _marker(0xC0, bytes([8]) + height.to_bytes(2, "big") + width.to_bytes(2, "big")
                   + bytes([1, 1, 0x11, 0]))
    out += _marker(0xC4, b"\x00" + bytes(_DC_BITS) + bytes(_DC_VALUES))
    out += _marker(0xC4, b"\x10" + bytes(_AC_BITS) + bytes(_AC_VALUES))
    out += _marker(0xDA, bytes([1, 1, 0x00, 0, 63, 0]))
    out += writer.buf
    out += b"\xFF\xD9"  # EOI
    return bytes(out)
