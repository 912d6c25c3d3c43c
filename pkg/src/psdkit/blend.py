"""Separable per-channel blend functions over unit floats.

Each mode maps (backdrop, source) -> blended source color; alpha handling
lives in the compositor. Inputs may be scalars or numpy arrays. pass_through
is not a channel function and is rejected here.
"""

from __future__ import annotations

import numpy as np

from .document import BlendMode
from .errors import PsdKitError


class PassThroughNotAChannelMode(PsdKitError):
    pass


def _overlay(b, s):
    b = np.asarray(b, dtype=np.float64)
    s = np.asarray(s, dtype=np.float64)
    return np.where(b <= 0.5, 2.0 * b * s, 1.0 - 2.0 * (1.0 - b) * (1.0 - s))


_FUNCS = {
    BlendMode.NORMAL: lambda b, s: np.asarray(s, dtype=np.float64),
    BlendMode.MULTIPLY: lambda b, s: np.multiply(b, s, dtype=np.float64),
    BlendMode.SCREEN: lambda b, s: 1.0 - (1.0 - np.asarray(b, dtype=np.float64)) * (1.0 - s),
    BlendMode.OVERLAY: _overlay,
    BlendMode.DARKEN: lambda b, s: np.minimum(b, s).astype(np.float64),
    BlendMode.LIGHTEN: lambda b, s: np.maximum(b, s).astype(np.float64),
    BlendMode.LINEAR_DODGE: lambda b, s: np.minimum(1.0, np.add(b, s, dtype=np.float64)),
    BlendMode.DIFFERENCE: lambda b, s: np.abs(np.subtract(b, s, dtype=np.float64)),
}


def blend_channel(mode: BlendMode, backdrop, source):
    """Blend unit-float channel values; scalar in, scalar out (arrays pass through)."""
    if mode is BlendMode.PASS_THROUGH:
        raise PassThroughNotAChannelMode("pass_through has no channel formula")
    result = _FUNCS[mode](backdrop, source)
    if np.isscalar(backdrop) and np.isscalar(source):
        return float(result)
    return result


def composite_pixels(mode: BlendMode, rgb_b, a_b, rgb_s, a_s):
    """Source-over a source plane onto a backdrop plane, blending color with ``mode``.

    Straight-alpha float planes in and out::

        a_o = a_s + a_b * (1 - a_s)
        C_o = [(1-a_b)*a_s*C_s + a_b*a_s*B(C_b, C_s) + (1-a_s)*a_b*C_b] / a_o

    The output alpha is the plain source-over accumulation regardless of mode;
    where a_o is zero the color is defined as 0.
    """
    if mode is BlendMode.PASS_THROUGH:
        raise PassThroughNotAChannelMode("pass_through has no channel formula")
    if not a_s.any():
        # a fully transparent source must be a bitwise no-op, not a divide
        # round-trip, so hidden layers and empty groups cannot perturb bytes
        return rgb_b, a_b
    mixed = _FUNCS[mode](rgb_b, rgb_s)
    a_o = a_s + a_b * (1.0 - a_s)
    ab3 = a_b[:, :, None]
    as3 = a_s[:, :, None]
    numer = (1.0 - ab3) * as3 * rgb_s + ab3 * as3 * mixed + (1.0 - as3) * ab3 * rgb_b
    rgb_o = np.divide(
        numer,
        a_o[:, :, None],
        out=np.zeros_like(numer),
        where=a_o[:, :, None] > 0.0,
    )
    return rgb_o, a_o
