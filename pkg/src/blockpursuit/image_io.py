"""Grayscale image loading and saving.

Accepted inputs are binary PGM (P5) and 8-bit grayscale non-interlaced PNG.
Anything else (color, palette, 16-bit, ASCII PGM) is rejected rather than
converted, so that experiments are unambiguous about their input data.
Pixels are held as float64 from the moment of loading.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass

import numpy as np

from .errors import CorruptHeaderError, DimensionError, UnsupportedFormatError

_PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"


@dataclass
class IntensityImage:
    """A 2D grid of real pixel intensities with a peak representable value."""

    pixels: np.ndarray
    peak: float = 255.0

    def __post_init__(self) -> None:
        self.pixels = np.asarray(self.pixels, dtype=np.float64)
        if self.pixels.ndim != 2 or self.pixels.size == 0:
            raise DimensionError("pixels must be a non-empty 2D array")

    @property
    def rows(self) -> int:
        return self.pixels.shape[0]

    @property
    def cols(self) -> int:
        return self.pixels.shape[1]


def load_image(path) -> IntensityImage:
    """Load a grayscale image file into an IntensityImage with peak 255.

    Raises FileNotFoundError, UnsupportedFormatError or CorruptHeaderError.
    """
    with open(path, "rb") as fh:
        data = fh.read()
    if data.startswith(b"P5"):
        return _load_pgm(data)
    if data.startswith(_PNG_SIGNATURE):
        return _load_png(data)
    if data[:2] in (b"P1", b"P2", b"P3", b"P4", b"P6", b"P7"):
        raise UnsupportedFormatError(
            f"only binary grayscale P5 PGM is supported, got {data[:2].decode('ascii', 'replace')}"
        )
    raise UnsupportedFormatError("not a P5 PGM or PNG file")


def save_image(img: IntensityImage, path) -> None:
    """Write a binary P5 PGM, clamping pixels to [0, peak] and rounding."""
    clamped = np.clip(img.pixels, 0.0, img.peak)
    raster = np.rint(clamped).astype(np.uint8)
    header = f"P5\n{img.cols} {img.rows}\n255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(raster.tobytes())


def _load_pgm(data: bytes) -> IntensityImage:
    pos = 2  # past the b"P5" magic
    fields = []
    while len(fields) < 3:
        # skip whitespace and '#' comment lines between header tokens
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise CorruptHeaderError("truncated PGM header")
        fields.append(data[start:pos])
    try:
        width, height, maxval = (int(f) for f in fields)
    except ValueError as exc:
        raise CorruptHeaderError(f"non-numeric PGM header field: {exc}") from exc
    if width < 1 or height < 1:
        raise CorruptHeaderError(f"bad PGM dimensions {width}x{height}")
    if not 1 <= maxval <= 255:
        raise UnsupportedFormatError(f"PGM maxval {maxval} is not 8-bit")
    pos += 1  # exactly one whitespace byte separates header and raster
    raster = data[pos : pos + width * height]
    if len(raster) < width * height:
        raise CorruptHeaderError("PGM pixel data shorter than header promises")
    pixels = np.frombuffer(raster, dtype=np.uint8).reshape(height, width)
    return IntensityImage(pixels.astype(np.float64), peak=255.0)


def _png_chunks(data: bytes):
    pos = len(_PNG_SIGNATURE)
    while pos + 8 <= len(data):
        length = int.from_bytes(data[pos : pos + 4], "big")
        ctype = data[pos + 4 : pos + 8]
        body = data[pos + 8 : pos + 8 + length]
        if len(body) < length:
            raise CorruptHeaderError("truncated PNG chunk")
        yield ctype, body
        pos += 12 + length  # length + type + body + CRC
        if ctype == b"IEND":
            return
    raise CorruptHeaderError("PNG stream ended without IEND")


def _load_png(data: bytes) -> IntensityImage:
    width = height = None
    idat = bytearray()
    for ctype, body in _png_chunks(data):
        if ctype == b"IHDR":
            if len(body) != 13:
                raise CorruptHeaderError("bad IHDR length")
            width = int.from_bytes(body[0:4], "big")
            height = int.from_bytes(body[4:8], "big")
            bit_depth, color_type, compression, filter_method, interlace = body[8:13]
            if color_type != 0:
                raise UnsupportedFormatError(
                    f"PNG color type {color_type} is not grayscale"
                )
            if bit_depth != 8:
                raise UnsupportedFormatError(f"PNG bit depth {bit_depth} is not 8")
            if compression != 0 or filter_method != 0:
                raise UnsupportedFormatError("nonstandard PNG compression/filter")
            if interlace != 0:
                raise UnsupportedFormatError("interlaced PNG is not supported")
        elif ctype == b"IDAT":
            idat.extend(body)
    if width is None:
        raise CorruptHeaderError("PNG has no IHDR")
    if width < 1 or height < 1:
        raise CorruptHeaderError(f"bad PNG dimensions {width}x{height}")
    try:
        raw = zlib.decompress(bytes(idat))
    except zlib.error as exc:
        raise CorruptHeaderError(f"PNG IDAT decompression failed: {exc}") from exc
    stride = width + 1  # one filter byte per scanline, 1 byte per pixel
    if len(raw) < stride * height:
        raise CorruptHeaderError("PNG pixel data shorter than header promises")
    pixels = np.empty((height, width), dtype=np.float64)
    prev = np.zeros(width, dtype=np.int64)
    for y in range(height):
        line = raw[y * stride : (y + 1) * stride]
        cur = _unfilter_scanline(line[0], np.frombuffer(line[1:], dtype=np.uint8), prev)
        pixels[y] = cur
        prev = cur
    return IntensityImage(pixels, peak=255.0)


def _unfilter_scanline(ftype: int, line: np.ndarray, prev: np.ndarray) -> np.ndarray:
    """Undo one PNG scanline filter (bpp = 1 byte)."""
    out = line.astype(np.int64)
    if ftype == 0:
        pass
    elif ftype == 1:  # Sub
        for x in range(1, len(out)):
            out[x] = (out[x] + out[x - 1]) & 0xFF
    elif ftype == 2:  # Up
        out = (out + prev) & 0xFF
    elif ftype == 3:  # Average
        for x in range(len(out)):
            left = out[x - 1] if x > 0 else 0
            out[x] = (out[x] + (left + prev[x]) // 2) & 0xFF
    elif ftype == 4:  # Paeth
        for x in range(len(out)):
            a = out[x - 1] if x > 0 else 0
            b = prev[x]
            c = prev[x - 1] if x > 0 else 0
            pa, pb, pc = abs(b - c), abs(a - c), abs(a + b - 2 * c)
            if pa <= pb and pa <= pc:
                pred = a
            elif pb <= pc:
                pred = b
            else:
                pred = c
            out[x] = (out[x] + pred) & 0xFF
    else:
        raise CorruptHeaderError(f"unknown PNG filter type {ftype}")
    return out
