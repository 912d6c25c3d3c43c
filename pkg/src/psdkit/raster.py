"""RGBA raster values and PNG round-tripping.

Rasters are immutable: 8-bit straight (non-premultiplied) alpha, row-major
RGBA bytes. PNG bytes produced by :func:`encode_png` are deterministic for a
given raster, which the rest of the toolkit relies on for byte-exact
comparisons and content hashing.
"""

from __future__ import annotations

import hashlib
import io
from dataclasses import dataclass

import numpy as np
from PIL import Image


@dataclass(frozen=True)
class Raster:
    """Fixed-size RGBA image, straight alpha, 8 bits per channel."""

    width: int
    height: int
    pixels: bytes  # len == width * height * 4, row-major RGBA

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("raster dimensions must be >= 1x1")
        if len(self.pixels) != self.width * self.height * 4:
            raise ValueError(
                "pixel buffer length %d does not match %dx%dx4"
                % (len(self.pixels), self.width, self.height)
            )

    def to_array(self) -> np.ndarray:
        """View as a (height, width, 4) uint8 array (copy; rasters stay immutable)."""
        return (
            np.frombuffer(self.pixels, dtype=np.uint8)
            .reshape(self.height, self.width, 4)
            .copy()
        )

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "Raster":
        if arr.ndim != 3 or arr.shape[2] != 4 or arr.dtype != np.uint8:
            raise ValueError("expected (h, w, 4) uint8 array")
        h, w = arr.shape[:2]
        return cls(width=w, height=h, pixels=arr.tobytes())


def transparent(width: int, height: int) -> Raster:
    return Raster(width, height, bytes(width * height * 4))


def solid(width: int, height: int, rgba: tuple[int, int, int, int]) -> Raster:
    return Raster(width, height, bytes(rgba) * (width * height))


def to_float(raster: Raster):
    """Split into float64 unit-range (rgb (h,w,3), alpha (h,w)) planes."""
    arr = raster.to_array().astype(np.float64) / 255.0
    return arr[:, :, :3], arr[:, :, 3]


def from_float(rgb: np.ndarray, alpha: np.ndarray) -> Raster:
    """Quantize unit floats to 8-bit, round half up.

    This is the single quantization point of the render pipeline; color at
    fully transparent pixels is normalized to 0 so byte comparisons never
    depend on hidden color values.
    """
    rgb = np.where(alpha[:, :, None] > 0.0, rgb, 0.0)
    stacked = np.concatenate([rgb, alpha[:, :, None]], axis=2)
    q = np.floor(np.clip(stacked, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)
    return Raster.from_array(q)


def encode_png(raster: Raster) -> bytes:
    """RGBA PNG, 8-bit, no interlacing. Deterministic for a given raster."""
    img = Image.frombytes("RGBA", (raster.width, raster.height), raster.pixels)
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


def decode_png(data: bytes) -> Raster:
    img = Image.open(io.BytesIO(data))
    img = img.convert("RGBA")
    return Raster(width=img.width, height=img.height, pixels=img.tobytes())


def png_digest(raster: Raster) -> str:
    """Hex SHA-256 of the raster's PNG encoding."""
    return hashlib.sha256(encode_png(raster)).hexdigest()
