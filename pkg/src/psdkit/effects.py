"""Layer effect and adjustment pixel algorithms.

Everything here operates on canvas-sized float planes (rgb (h,w,3), alpha
(h,w), unit range, straight alpha); thin public wrappers accept and return
8-bit rasters. Effects are computed from the layer content's own alpha:

* drop shadow: content alpha translated by the rounded polar offset, Gaussian
  blurred (sigma = blur/2, kernel truncated at 3 sigma and renormalized),
  tinted, stacked under the content
* stroke: the outside-the-shape band within ``width`` (Euclidean) of the
  shape, in solid color, under the content
* inner glow: blur of the inverted alpha, scaled back by the content alpha,
  tinted, over the content
* color overlay: color mixed into the content color at the effect opacity
  wherever alpha > 0; alpha untouched

Stacking: under-effects in stored order (first stored deepest), then content,
then over-effects in stored order.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import ndimage

from .blend import composite_pixels
from .document import (
    AdjustmentParams,
    BlendMode,
    BrightnessContrast,
    ColorOverlay,
    DropShadow,
    Effect,
    InnerGlow,
    Invert,
    Stroke,
)
from .raster import Raster, from_float, to_float


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def gaussian_blur(plane: np.ndarray, sigma: float) -> np.ndarray:
    """Separable Gaussian with zero padding; sigma <= 0 is the identity."""
    if sigma <= 0.0:
        return plane.copy()
    radius = int(math.ceil(3.0 * sigma))
    offsets = np.arange(-radius, radius + 1, dtype=np.float64)
    kernel = np.exp(-(offsets ** 2) / (2.0 * sigma * sigma))
    kernel /= kernel.sum()
    out = ndimage.convolve1d(plane, kernel, axis=0, mode="constant", cval=0.0)
    return ndimage.convolve1d(out, kernel, axis=1, mode="constant", cval=0.0)


def _translate(plane: np.ndarray, dx: int, dy: int) -> np.ndarray:
    h, w = plane.shape
    out = np.zeros_like(plane)
    src_x0, src_x1 = max(0, -dx), min(w, w - dx)
    src_y0, src_y1 = max(0, -dy), min(h, h - dy)
    if src_x0 >= src_x1 or src_y0 >= src_y1:
        return out
    out[src_y0 + dy : src_y1 + dy, src_x0 + dx : src_x1 + dx] = plane[
        src_y0:src_y1, src_x0:src_x1
    ]
    return out


def _tint(shape: tuple, color) -> np.ndarray:
    rgb = np.empty(shape + (3,), dtype=np.float64)
    rgb[:, :] = np.asarray(color, dtype=np.float64) / 255.0
    return rgb


def _drop_shadow_plane(alpha: np.ndarray, eff: DropShadow):
    theta = math.radians(eff.angle)  # clockwise from +x with y pointing down
    dx = _round_half_up(eff.distance * math.cos(theta))
    dy = _round_half_up(eff.distance * math.sin(theta))
    shadow = gaussian_blur(_translate(alpha, dx, dy), eff.blur / 2.0)
    return _tint(alpha.shape, eff.color), shadow * (eff.opacity / 255.0)


def _stroke_plane(alpha: np.ndarray, eff: Stroke):
    inside = alpha > 0.0
    band_alpha = np.zeros_like(alpha)
    if inside.any():
        dist = ndimage.distance_transform_edt(~inside)
        band_alpha[(~inside) & (dist <= eff.width)] = 1.0
    return _tint(alpha.shape, eff.color), band_alpha


def _inner_glow_plane(alpha: np.ndarray, eff: InnerGlow):
    glow = gaussian_blur(1.0 - alpha, eff.blur / 2.0) * alpha * (eff.opacity / 255.0)
    return _tint(alpha.shape, eff.color), glow


def stack_effects(rgb: np.ndarray, alpha: np.ndarray, effects) -> tuple:
    """Apply a layer's effect list around its content planes."""
    if not effects:
        return rgb, alpha
    content_alpha = alpha
    under_rgb = np.zeros_like(rgb)
    under_a = np.zeros_like(alpha)
    any_under = False
    for eff in effects:
        if isinstance(eff, DropShadow):
            e_rgb, e_a = _drop_shadow_plane(content_alpha, eff)
        elif isinstance(eff, Stroke):
            e_rgb, e_a = _stroke_plane(content_alpha, eff)
        else:
            continue
        under_rgb, under_a = composite_pixels(BlendMode.NORMAL, under_rgb, under_a, e_rgb, e_a)
        any_under = True
    if any_under:
        rgb, alpha = composite_pixels(BlendMode.NORMAL, under_rgb, under_a, rgb, alpha)
    for eff in effects:
        if isinstance(eff, InnerGlow):
            e_rgb, e_a = _inner_glow_plane(content_alpha, eff)
            rgb, alpha = composite_pixels(BlendMode.NORMAL, rgb, alpha, e_rgb, e_a)
        elif isinstance(eff, ColorOverlay):
            frac = eff.opacity / 255.0
            color = np.asarray(eff.color, dtype=np.float64) / 255.0
            covered = (content_alpha > 0.0)[:, :, None]
            rgb = np.where(covered, rgb + (color - rgb) * frac, rgb)
    return rgb, alpha


def adjust_colors(rgb: np.ndarray, params: AdjustmentParams) -> np.ndarray:
    if isinstance(params, Invert):
        return 1.0 - rgb
    if isinstance(params, BrightnessContrast):
        out = (rgb - 0.5) * (1.0 + params.contrast / 100.0) + 0.5 + params.brightness / 200.0
        return np.clip(out, 0.0, 1.0)
    raise TypeError("unknown adjustment %r" % (params,))


def apply_adjustment_planes(
    rgb: np.ndarray, params: AdjustmentParams, region: np.ndarray | None
) -> np.ndarray:
    """Adjusted colors, mixed in proportionally to ``region`` when present."""
    adjusted = adjust_colors(rgb, params)
    if region is None:
        return adjusted
    return rgb + (adjusted - rgb) * region[:, :, None]


# --- raster-level wrappers ----------------------------------------------------

def apply_effect(content: Raster, effect: Effect) -> Raster:
    """Render one effect around canvas-sized content (quantizes on return)."""
    rgb, alpha = to_float(content)
    rgb, alpha = stack_effects(rgb, alpha, (effect,))
    return from_float(rgb, alpha)


def apply_adjustment(
    backdrop: Raster, params: AdjustmentParams, region_alpha: Raster | None = None
) -> Raster:
    """Adjust a backdrop raster; the region raster's alpha channel gates it."""
    rgb, alpha = to_float(backdrop)
    region = None
    if region_alpha is not None:
        region = to_float(region_alpha)[1]
    return from_float(apply_adjustment_planes(rgb, params, region), alpha)
