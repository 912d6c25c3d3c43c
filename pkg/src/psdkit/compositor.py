"""Deterministic pixel-exact document rendering.

All math runs in float64 on straight-alpha planes; quantization to 8-bit
(round half up) happens once, at the end. Per-leaf pipeline: place content,
stack effects, apply the layer mask (255 outside its bounds), apply clipping
(multiply by the clip base's shape alpha), then source-over into the backdrop
with the layer's blend mode and opacity. Non-pass-through groups render into
an isolated transparent buffer and blend as one unit; pass-through groups
render straight onto the backdrop.

Rendering is single-threaded and a pure function of the document, so output
bytes are identical across runs.
"""

from __future__ import annotations

import numpy as np

from .blend import composite_pixels
from .document import (
    BlendMode,
    Document,
    GroupNode,
    LeafLayer,
    Mask,
    resolve,
    traversal_order,
    validate,
)
from .effects import apply_adjustment_planes, stack_effects
from .errors import InvalidDocument, NotAGroup, StepOutOfRange
from .raster import Raster, from_float


def _mask_coverage(width: int, height: int, mask: Mask) -> np.ndarray:
    cov = np.ones((height, width), dtype=np.float64)
    ox, oy = mask.offset
    x0, y0 = max(0, ox), max(0, oy)
    x1, y1 = min(width, ox + mask.width), min(height, oy + mask.height)
    if x0 < x1 and y0 < y1:
        data = np.frombuffer(mask.data, dtype=np.uint8).reshape(mask.height, mask.width)
        cov[y0:y1, x0:x1] = data[y0 - oy : y1 - oy, x0 - ox : x1 - ox] / 255.0
    return cov


def _place_asset(doc: Document, leaf: LeafLayer) -> tuple:
    """Leaf content as canvas-sized float planes, clipped to the canvas."""
    w, h = doc.canvas_width, doc.canvas_height
    rgb = np.zeros((h, w, 3), dtype=np.float64)
    alpha = np.zeros((h, w), dtype=np.float64)
    asset = doc.asset_table[leaf.asset_ref]
    art = asset.raster.to_array().astype(np.float64) / 255.0
    x, y = leaf.position
    x0, y0 = max(0, x), max(0, y)
    x1, y1 = min(w, x + asset.raster.width), min(h, y + asset.raster.height)
    if x0 < x1 and y0 < y1:
        tile = art[y0 - y : y1 - y, x0 - x : x1 - x]
        rgb[y0:y1, x0:x1] = tile[:, :, :3]
        alpha[y0:y1, x0:x1] = tile[:, :, 3]
    return rgb, alpha


def _render_children(doc, group, path, rgb, alpha, enabled):
    h, w = alpha.shape
    clip_alpha = None  # shape alpha of the active clip base
    for i, child in enumerate(group.children):
        cpath = path + (i,)
        if isinstance(child, GroupNode):
            clip_alpha = None  # a group interrupts any clip stack
            if not child.visible:
                continue
            if child.blend is BlendMode.PASS_THROUGH:
                rgb, alpha = _render_children(doc, child, cpath, rgb, alpha, enabled)
            else:
                buf_rgb = np.zeros_like(rgb)
                buf_a = np.zeros_like(alpha)
                buf_rgb, buf_a = _render_children(doc, child, cpath, buf_rgb, buf_a, enabled)
                if child.mask is not None and child.mask.enabled:
                    buf_a = buf_a * _mask_coverage(w, h, child.mask)
                rgb, alpha = composite_pixels(
                    child.blend, rgb, alpha, buf_rgb, buf_a * (child.opacity / 255.0)
                )
            continue

        shown = child.visible and (enabled is None or cpath in enabled)
        if not shown:
            if not child.clipped:
                # still the structural clip base; contributes an empty shape
                clip_alpha = np.zeros((h, w), dtype=np.float64)
            continue

        if child.kind == "adjustment":
            region = np.ones((h, w), dtype=np.float64)
            if child.mask is not None and child.mask.enabled:
                region = region * _mask_coverage(w, h, child.mask)
            if child.clipped:
                base = clip_alpha if clip_alpha is not None else np.zeros((h, w))
                region = region * base
            else:
                clip_alpha = region
            rgb = apply_adjustment_planes(
                rgb, child.adjustment, region * (child.opacity / 255.0)
            )
            continue

        c_rgb, c_a = _place_asset(doc, child)
        c_rgb, c_a = stack_effects(c_rgb, c_a, child.effects)
        if child.mask is not None and child.mask.enabled:
            c_a = c_a * _mask_coverage(w, h, child.mask)
        if child.clipped:
            base = clip_alpha if clip_alpha is not None else np.zeros((h, w))
            c_a = c_a * base
        else:
            clip_alpha = c_a
        rgb, alpha = composite_pixels(
            child.blend, rgb, alpha, c_rgb, c_a * (child.opacity / 255.0)
        )
    return rgb, alpha


def _render(doc: Document, enabled) -> Raster:
    violations = validate(doc)
    if violations:
        raise InvalidDocument(violations)
    h, w = doc.canvas_height, doc.canvas_width
    rgb = np.zeros((h, w, 3), dtype=np.float64)
    alpha = np.zeros((h, w), dtype=np.float64)
    rgb, alpha = _render_children(doc, doc.root, (), rgb, alpha, enabled)
    return from_float(rgb, alpha)


def composite(doc: Document) -> Raster:
    """Render the whole document to a canvas-sized raster."""
    return _render(doc, None)


def composite_prefix(doc: Document, step: int) -> Raster:
    """Render only the first ``step`` leaves in traversal order.

    Later leaves are treated as invisible; step == leaf count equals
    composite(doc) byte-exactly.
    """
    order = traversal_order(doc)
    if not 0 <= step <= len(order):
        raise StepOutOfRange("step %d outside 0..%d" % (step, len(order)))
    return _render(doc, frozenset(order[:step]))


def group_first_leaf_step(doc: Document, group_path) -> int:
    """Traversal step at which the group's first leaf would render."""
    group_path = tuple(group_path)
    return sum(1 for p in traversal_order(doc) if tuple(p) < group_path)


def group_backdrop(doc: Document, group: tuple) -> Raster:
    """Composite of everything strictly below the group ("before it is applied")."""
    node = resolve(doc, group)
    if not isinstance(node, GroupNode):
        raise NotAGroup("backdrop target %s is not a group" % (list(group),))
    return composite_prefix(doc, group_first_leaf_step(doc, group))
