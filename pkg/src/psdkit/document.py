"""In-memory layered-document model.

A document is a nested hierarchy of groups and leaf layers over a fixed-size
RGB canvas, 8 bits per channel. Child index 0 is the *bottom-most* layer:
children are listed in compositing order. All values are immutable; editing
operations return new documents that share unchanged subtrees.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Mapping, Optional, Union

from .errors import (
    CannotRemoveRoot,
    InvariantViolation,
    NotAGroup,
    PathOutOfBounds,
)
from .raster import Raster

LayerPath = tuple  # tuple[int, ...]: child indices from the root group
Color = tuple  # tuple[int, int, int], 0..255 each

LEAF_KINDS = ("pixel", "text", "shape", "adjustment", "smart_object")


class BlendMode(enum.Enum):
    NORMAL = "normal"
    MULTIPLY = "multiply"
    SCREEN = "screen"
    OVERLAY = "overlay"
    DARKEN = "darken"
    LIGHTEN = "lighten"
    LINEAR_DODGE = "linear_dodge"
    DIFFERENCE = "difference"
    PASS_THROUGH = "pass_through"  # legal on groups only


# --- effects -----------------------------------------------------------------

@dataclass(frozen=True)
class DropShadow:
    color: Color
    opacity: int  # 0..255
    angle: int  # degrees 0..360, clockwise from +x in raster coordinates
    distance: int  # pixels >= 0
    blur: int  # pixels >= 0


@dataclass(frozen=True)
class InnerGlow:
    color: Color
    opacity: int
    blur: int


@dataclass(frozen=True)
class ColorOverlay:
    color: Color
    opacity: int


@dataclass(frozen=True)
class Stroke:
    color: Color
    width: int  # pixels >= 1


Effect = Union[DropShadow, InnerGlow, ColorOverlay, Stroke]

EFFECT_NAMES = {
    DropShadow: "drop_shadow",
    InnerGlow: "inner_glow",
    ColorOverlay: "color_overlay",
    Stroke: "stroke",
}


# --- adjustments -------------------------------------------------------------

@dataclass(frozen=True)
class BrightnessContrast:
    brightness: int  # -100..100
    contrast: int  # -100..100


@dataclass(frozen=True)
class Invert:
    pass


AdjustmentParams = Union[BrightnessContrast, Invert]


# --- masks and assets --------------------------------------------------------

@dataclass(frozen=True)
class Mask:
    """Single-channel 8-bit mask positioned in canvas coordinates.

    Pixels outside the bitmap's bounds count as 255 (fully revealing).
    """

    offset: tuple  # (x, y) in canvas coordinates
    width: int
    height: int
    data: bytes  # one byte per pixel, row-major
    enabled: bool = True


@dataclass(frozen=True)
class AssetRef:
    """A raw asset: either an RGBA raster or a text string."""

    asset_id: str
    kind: str  # "raster" | "text"
    raster: Optional[Raster] = None
    text: Optional[str] = None
    source_uri: Optional[str] = None


# --- nodes -------------------------------------------------------------------

@dataclass(frozen=True)
class LeafLayer:
    name: str
    kind: str  # one of LEAF_KINDS
    position: tuple = (0, 0)  # (x, y), top-left of content on canvas
    asset_ref: Optional[str] = None  # asset_id into Document.asset_table
    text_content: Optional[str] = None  # kind == "text" only
    adjustment: Optional[AdjustmentParams] = None  # kind == "adjustment" only
    opacity: int = 255
    blend: BlendMode = BlendMode.NORMAL
    visible: bool = True
    clipped: bool = False
    mask: Optional[Mask] = None
    effects: tuple = ()  # tuple[Effect, ...] in stored (application) order


@dataclass(frozen=True)
class GroupNode:
    name: str
    children: tuple = ()  # tuple[Node, ...], index 0 = bottom-most
    blend: BlendMode = BlendMode.PASS_THROUGH
    opacity: int = 255
    visible: bool = True
    mask: Optional[Mask] = None


Node = Union[GroupNode, LeafLayer]


@dataclass(frozen=True)
class Document:
    canvas_width: int
    canvas_height: int
    root: GroupNode
    asset_table: Mapping[str, AssetRef] = field(default_factory=dict)
    depth: int = 8  # bits per channel, fixed
    color_space: str = "rgb"  # fixed


def empty_document(width: int, height: int) -> Document:
    return Document(
        canvas_width=width,
        canvas_height=height,
        root=GroupNode(name="root", blend=BlendMode.PASS_THROUGH),
    )


# --- violations --------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    path: tuple
    rule: str
    message: str

    def __str__(self):
        return "%s at %s: %s" % (self.rule, list(self.path), self.message)


# --- traversal ---------------------------------------------------------------

def resolve(doc: Document, path: Iterable[int]) -> Node:
    """Return the node addressed by ``path`` ([] addresses the root)."""
    node: Node = doc.root
    for depth, idx in enumerate(path):
        if not isinstance(node, GroupNode):
            raise PathOutOfBounds("path descends into a leaf at depth %d" % depth)
        if not 0 <= idx < len(node.children):
            raise PathOutOfBounds(
                "index %d out of range (%d children) at depth %d"
                % (idx, len(node.children), depth)
            )
        node = node.children[idx]
    return node


def iter_nodes(doc: Document) -> Iterator[tuple]:
    """Yield (path, node) pairs, depth-first, children bottom to top."""

    def walk(path: tuple, node: Node):
        yield path, node
        if isinstance(node, GroupNode):
            for i, child in enumerate(node.children):
                yield from walk(path + (i,), child)

    yield from walk((), doc.root)


def traversal_order(doc: Document) -> list:
    """Paths of every leaf in compositing order.

    Depth-first over children from index 0 upward, descending into groups
    before moving to the next sibling; only leaf paths are emitted.
    """
    return [path for path, node in iter_nodes(doc) if isinstance(node, LeafLayer)]


def leaf_count(doc: Document) -> int:
    return len(traversal_order(doc))


def clip_base_index(parent: GroupNode, index: int) -> Optional[int]:
    """Index of the clip base for a clipped child at ``index``, or None.

    Walking down from the clipped layer, consecutive clipped leaves belong to
    the same clip stack; the stack's base is the first non-clipped *leaf*
    below. A group (or nothing) in that spot means there is no base.
    """
    j = index - 1
    while j >= 0:
        sib = parent.children[j]
        if isinstance(sib, LeafLayer) and sib.clipped:
            j -= 1
            continue
        if isinstance(sib, LeafLayer):
            return j
        return None
    return None


# --- validation --------------------------------------------------------------

def _check_color(out, path, rule, name, color):
    ok = (
        isinstance(color, tuple)
        and len(color) == 3
        and all(isinstance(c, int) and 0 <= c <= 255 for c in color)
    )
    if not ok:
        out.append(Violation(path, rule, "%s must be an (r, g, b) triple of 0..255" % name))


def _validate_effect(out, path, i, eff):
    rule = "EffectRange"
    where = "effects[%d]" % i
    if isinstance(eff, DropShadow):
        _check_color(out, path, rule, where + ".color", eff.color)
        if not 0 <= eff.opacity <= 255:
            out.append(Violation(path, rule, where + ".opacity outside 0..255"))
        if not 0 <= eff.angle <= 360:
            out.append(Violation(path, rule, where + ".angle outside 0..360"))
        if eff.distance < 0:
            out.append(Violation(path, rule, where + ".distance negative"))
        if eff.blur < 0:
            out.append(Violation(path, rule, where + ".blur negative"))
    elif isinstance(eff, InnerGlow):
        _check_color(out, path, rule, where + ".color", eff.color)
        if not 0 <= eff.opacity <= 255:
            out.append(Violation(path, rule, where + ".opacity outside 0..255"))
        if eff.blur < 0:
            out.append(Violation(path, rule, where + ".blur negative"))
    elif isinstance(eff, ColorOverlay):
        _check_color(out, path, rule, where + ".color", eff.color)
        if not 0 <= eff.opacity <= 255:
            out.append(Violation(path, rule, where + ".opacity outside 0..255"))
    elif isinstance(eff, Stroke):
        _check_color(out, path, rule, where + ".color", eff.color)
        if eff.width < 1:
            out.append(Violation(path, rule, where + ".width must be >= 1"))
    else:
        out.append(Violation(path, "EffectKind", "unknown effect %r" % (eff,)))


def _validate_mask(out, path, mask: Mask):
    if mask.width < 1 or mask.height < 1 or len(mask.data) != mask.width * mask.height:
        out.append(Violation(path, "MaskBitmap", "mask bitmap empty or size mismatch"))


def _validate_leaf(out, doc: Document, path, leaf: LeafLayer):
    if leaf.kind not in LEAF_KINDS:
        out.append(Violation(path, "KindUnknown", "unknown layer kind %r" % leaf.kind))
        return
    if leaf.kind == "adjustment":
        if leaf.adjustment is None:
            out.append(Violation(path, "KindFieldMismatch", "adjustment layer missing parameters"))
        if leaf.asset_ref is not None:
            out.append(Violation(path, "KindFieldMismatch", "adjustment layer must not carry an asset"))
    else:
        if leaf.asset_ref is None:
            out.append(Violation(path, "KindFieldMismatch", "%s layer requires an asset" % leaf.kind))
        if leaf.adjustment is not None:
            out.append(Violation(path, "KindFieldMismatch", "adjustment params on non-adjustment layer"))
    if leaf.text_content is not None and leaf.kind != "text":
        out.append(Violation(path, "KindFieldMismatch", "text_content on non-text layer"))
    if leaf.asset_ref is not None and leaf.asset_ref not in doc.asset_table:
        out.append(Violation(path, "DanglingAsset", "asset %r not in asset table" % leaf.asset_ref))
    if not 0 <= leaf.opacity <= 255:
        out.append(Violation(path, "OpacityRange", "opacity %r outside 0..255" % leaf.opacity))
    if leaf.blend is BlendMode.PASS_THROUGH:
        out.append(Violation(path, "PassThroughOnLeaf", "pass_through is a group-only blend mode"))
    if leaf.adjustment is not None and isinstance(leaf.adjustment, BrightnessContrast):
        bc = leaf.adjustment
        if not (-100 <= bc.brightness <= 100 and -100 <= bc.contrast <= 100):
            out.append(Violation(path, "AdjustmentRange", "brightness/contrast outside -100..100"))
    if leaf.mask is not None:
        _validate_mask(out, path, leaf.mask)
    for i, eff in enumerate(leaf.effects):
        _validate_effect(out, path, i, eff)


def _validate_group(out, path, group: GroupNode, is_root: bool):
    if not 0 <= group.opacity <= 255:
        out.append(Violation(path, "OpacityRange", "opacity %r outside 0..255" % group.opacity))
    if group.blend is BlendMode.PASS_THROUGH and (group.opacity != 255 or group.mask is not None):
        # Pass-through groups have no isolated buffer to apply opacity or a
        # mask to, so those attributes are rejected rather than ignored.
        rule = "RootShape" if is_root else "PassThroughGroupAttrs"
        out.append(Violation(path, rule, "pass_through group must have opacity 255 and no mask"))
    if group.mask is not None:
        _validate_mask(out, path, group.mask)
    for i, child in enumerate(group.children):
        if isinstance(child, LeafLayer) and child.clipped:
            if clip_base_index(group, i) is None:
                out.append(Violation(path + (i,), "NoClipBase", "clipped layer has no clip base"))


def _validate_asset(out, asset_id: str, asset: AssetRef):
    path = ("asset", asset_id)
    if asset.kind == "raster":
        if asset.raster is None:
            out.append(Violation(path, "AssetPayload", "raster asset without raster payload"))
    elif asset.kind == "text":
        if asset.text is None:
            out.append(Violation(path, "AssetPayload", "text asset without text payload"))
    else:
        out.append(Violation(path, "AssetPayload", "unknown asset kind %r" % asset.kind))


def validate(doc: Document) -> list:
    """All rule violations in the document; empty list means valid."""
    out: list = []
    if doc.canvas_width < 1 or doc.canvas_height < 1:
        out.append(Violation((), "CanvasSize", "canvas must be at least 1x1"))
    if doc.depth != 8:
        out.append(Violation((), "Depth", "depth is fixed at 8 bits per channel"))
    if doc.color_space != "rgb":
        out.append(Violation((), "ColorSpace", "color space is fixed at rgb"))
    if not isinstance(doc.root, GroupNode):
        out.append(Violation((), "RootShape", "root must be a group"))
        return out
    if doc.root.blend is not BlendMode.PASS_THROUGH:
        out.append(Violation((), "RootShape", "root group must be pass_through"))
    for asset_id, asset in doc.asset_table.items():
        if asset.asset_id != asset_id:
            out.append(Violation(("asset", asset_id), "AssetPayload", "asset id mismatch with table key"))
        _validate_asset(out, asset_id, asset)
    for path, node in iter_nodes(doc):
        if isinstance(node, GroupNode):
            _validate_group(out, path, node, is_root=(path == ()))
        else:
            _validate_leaf(out, doc, path, node)
    return out


# --- editing -----------------------------------------------------------------

def _rebuild(root: GroupNode, path: tuple, make) -> GroupNode:
    """Replace the group at ``path`` with make(group), resharing the spine."""
    if not path:
        return make(root)
    idx = path[0]
    child = root.children[idx]
    if not isinstance(child, GroupNode):
        raise NotAGroup("path passes through a leaf")
    new_child = _rebuild(child, path[1:], make)
    children = root.children[:idx] + (new_child,) + root.children[idx + 1 :]
    return replace(root, children=children)


def _resolved_group(doc: Document, path: Iterable[int]) -> GroupNode:
    node = resolve(doc, path)
    if not isinstance(node, GroupNode):
        raise NotAGroup("node at %s is not a group" % (list(path),))
    return node


def add_assets(doc: Document, assets: Iterable[AssetRef]) -> Document:
    """Register assets in the table (replacing same-id entries)."""
    table = dict(doc.asset_table)
    for a in assets:
        table[a.asset_id] = a
    return replace(doc, asset_table=table)


def insert_node(
    doc: Document,
    parent: Iterable[int],
    index: int,
    node: Node,
    assets: Iterable[AssetRef] = (),
) -> Document:
    """New document with ``node`` inserted at parent.children[index].

    ``assets`` carries payloads for asset ids the node references that are not
    yet in the table. The result is revalidated; a document that would break
    any model invariant raises InvariantViolation.
    """
    parent = tuple(parent)
    group = _resolved_group(doc, parent)
    if not 0 <= index <= len(group.children):
        raise PathOutOfBounds(
            "insert index %d out of range (%d children)" % (index, len(group.children))
        )

    def ins(g: GroupNode) -> GroupNode:
        return replace(g, children=g.children[:index] + (node,) + g.children[index:])

    new_doc = add_assets(doc, assets) if assets else doc
    new_doc = replace(new_doc, root=_rebuild(new_doc.root, parent, ins))
    violations = validate(new_doc)
    if violations:
        raise InvariantViolation(violations)
    return new_doc


def remove_node(doc: Document, path: Iterable[int]) -> Document:
    """New document with the node at ``path`` removed.

    Sibling indices above it shift down; the result is revalidated so e.g.
    removing a clip base surfaces as InvariantViolation. Asset-table entries
    are never dropped implicitly (an unreferenced asset is not a violation).
    """
    path = tuple(path)
    if not path:
        raise CannotRemoveRoot("the root group cannot be removed")
    resolve(doc, path)  # bounds check
    parent, index = path[:-1], path[-1]

    def rm(g: GroupNode) -> GroupNode:
        return replace(g, children=g.children[:index] + g.children[index + 1 :])

    new_doc = replace(doc, root=_rebuild(doc.root, parent, rm))
    violations = validate(new_doc)
    if violations:
        raise InvariantViolation(violations)
    return new_doc


def replace_node(doc: Document, path: Iterable[int], node: Node) -> Document:
    """New document with the node at ``path`` swapped for ``node``."""
    path = tuple(path)
    if not path:
        if not isinstance(node, GroupNode):
            raise NotAGroup("root must be a group")
        new_doc = replace(doc, root=node)
    else:
        parent, index = path[:-1], path[-1]
        resolve(doc, path)

        def swap(g: GroupNode) -> GroupNode:
            return replace(g, children=g.children[:index] + (node,) + g.children[index + 1 :])

        new_doc = replace(doc, root=_rebuild(doc.root, parent, swap))
    violations = validate(new_doc)
    if violations:
        raise InvariantViolation(violations)
    return new_doc


def normalize_asset_ids(doc: Document) -> Document:
    """Re-key assets canonically by first reference in traversal order.

    Used to compare documents across representations (like the binary PSD
    subset) that cannot carry asset ids.
    """
    mapping: dict = {}
    for path in traversal_order(doc):
        leaf = resolve(doc, path)
        if leaf.asset_ref is not None and leaf.asset_ref not in mapping:
            mapping[leaf.asset_ref] = "a%03d" % len(mapping)

    def rename(node: Node) -> Node:
        if isinstance(node, GroupNode):
            return replace(node, children=tuple(rename(c) for c in node.children))
        if node.asset_ref is None:
            return node
        return replace(node, asset_ref=mapping[node.asset_ref])

    table = {}
    for old_id, new_id in mapping.items():
        table[new_id] = replace(doc.asset_table[old_id], asset_id=new_id)
    return replace(doc, root=rename(doc.root), asset_table=table)
